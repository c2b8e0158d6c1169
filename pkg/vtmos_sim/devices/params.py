"""Parameter sets for the compact device models."""

from enum import Enum
from typing import NamedTuple

from pydantic import BaseModel, ConfigDict, Field
from scipy.constants import e as ELEMENTARY_CHARGE
from scipy.constants import k as BOLTZMANN


class DeviceKind(str, Enum):
    NMOS = "nmos"
    PMOS = "pmos"


class DiodeParams(BaseModel):
    """Ideal-diode junction: ``i = i_sat * (exp(v / (emission * U_T)) - 1)``."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    i_sat: float = Field(1e-18, gt=0, description="saturation current (A)")
    emission: float = Field(1.0, ge=1, description="emission coefficient")
    temp_kelvin: float = Field(300.0, gt=0)

    @property
    def thermal_voltage(self) -> float:
        return thermal_voltage(self.temp_kelvin)


class MosfetParams(BaseModel):
    """
    Sub-threshold MOSFET parameters.

    ``vth0`` is the threshold magnitude at zero body bias; PMOS devices are
    evaluated by reflecting terminal voltages, so every field is given as a
    positive NMOS-style number for both kinds.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: DeviceKind = DeviceKind.NMOS
    vth0: float = Field(0.22, gt=0, description="threshold magnitude at v_bs = 0 (V)")
    gamma: float = Field(0.3, ge=0, description="body-effect coefficient (V^0.5)")
    phi2f: float = Field(0.8, gt=0, description="surface potential 2*phi_F (V)")
    n_slope: float = Field(1.4, ge=1, description="sub-threshold slope factor")
    i_spec: float = Field(56.5e-9, gt=0, description="specific current at W/L = 1 (A)")
    theta_sat: float = Field(
        0.05, ge=0, description="drain-saturation broadening toward moderate inversion"
    )
    width: float = Field(200e-9, gt=0, description="channel width (m)")
    length: float = Field(65e-9, gt=0, description="channel length (m)")
    temp_kelvin: float = Field(300.0, gt=0)
    cgs: float = Field(0.05e-15, ge=0)
    cgd: float = Field(0.05e-15, ge=0)
    cgb: float = Field(0.02e-15, ge=0)
    cbd: float = Field(0.1e-15, ge=0, description="body-drain junction capacitance (F)")
    cbs: float = Field(0.1e-15, ge=0, description="body-source junction capacitance (F)")
    junction: DiodeParams = DiodeParams()

    @property
    def thermal_voltage(self) -> float:
        return thermal_voltage(self.temp_kelvin)

    @property
    def aspect(self) -> float:
        return self.width / self.length


class OperatingPoint(NamedTuple):
    """Terminal voltage differences in NMOS sign convention."""

    v_gs: float
    v_ds: float
    v_bs: float


def thermal_voltage(temp_kelvin: float) -> float:
    """U_T = kT/q in volts."""
    return BOLTZMANN * temp_kelvin / ELEMENTARY_CHARGE
