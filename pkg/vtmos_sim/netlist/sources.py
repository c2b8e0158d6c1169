"""Independent voltage source waveforms."""

import math
from collections.abc import Iterator
from functools import lru_cache
from itertools import islice
from typing import Annotated, Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

PRBS_DEGREE = 16
PRBS_TAPS = (16, 15, 13, 4)


def lfsr_bits(seed: int, taps: tuple[int, ...] = PRBS_TAPS, degree: int = PRBS_DEGREE) -> Iterator[int]:
    """
    Endless bit stream from a Fibonacci LFSR.

    Each step XORs the tap bits (numbered from 1), shifts the register left
    and feeds the result in at bit 0; that feedback bit is the output.
    """
    mask = (1 << degree) - 1
    value = seed & mask
    if value == 0:
        raise ValueError("LFSR seed must be non-zero")
    while True:
        feedback = 0
        for tap in taps:
            feedback ^= (value >> (tap - 1)) & 1
        value = ((value << 1) & mask) | feedback
        yield feedback


class DcSpec(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["dc"] = "dc"
    value: float

    @property
    def period(self) -> float | None:
        return None

    def value_at(self, t: float) -> float:
        return self.value

    def breakpoints(self, t_stop: float) -> list[float]:
        return []


class PulseSpec(BaseModel):
    """SPICE-style trapezoidal pulse train."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["pulse"] = "pulse"
    v0: float
    v1: float
    delay: float = Field(ge=0)
    rise: float = Field(ge=0)
    fall: float = Field(ge=0)
    width: float = Field(ge=0)
    period: float = Field(gt=0)

    @model_validator(mode="after")
    def _fits_in_period(self) -> "PulseSpec":
        if self.rise + self.width + self.fall > self.period * (1 + 1e-12):
            raise ValueError("rise + width + fall must not exceed the period")
        return self

    def value_at(self, t: float) -> float:
        if t < self.delay:
            return self.v0
        tau = math.fmod(t - self.delay, self.period)
        if tau < self.rise:
            return self.v0 + (self.v1 - self.v0) * tau / self.rise
        tau -= self.rise
        if tau < self.width:
            return self.v1
        tau -= self.width
        if tau < self.fall:
            return self.v1 + (self.v0 - self.v1) * tau / self.fall
        return self.v0

    def breakpoints(self, t_stop: float) -> list[float]:
        corners = (0.0, self.rise, self.rise + self.width, self.rise + self.width + self.fall)
        points: list[float] = []
        cycle = 0
        while True:
            start = self.delay + cycle * self.period
            if start > t_stop:
                break
            points.extend(start + c for c in corners if start + c <= t_stop)
            cycle += 1
        return points


class PrbsSpec(BaseModel):
    """Pseudo-random bit stream from the 16-bit LFSR, one bit per ``bit_period``."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["prbs"] = "prbs"
    v0: float
    v1: float
    bit_period: float = Field(gt=0)
    seed: int
    edge: float = Field(0.0, ge=0)

    @model_validator(mode="after")
    def _check(self) -> "PrbsSpec":
        if self.seed & ((1 << PRBS_DEGREE) - 1) == 0:
            raise ValueError("PRBS seed must be non-zero in its low 16 bits")
        if self.edge > self.bit_period:
            raise ValueError("PRBS edge time must not exceed the bit period")
        return self

    @property
    def period(self) -> float:
        return self.bit_period

    def bit(self, index: int) -> int:
        """Bit ``index`` of the stream (negative indices repeat bit 0)."""
        index = max(index, 0)
        return _prbs_block(self.seed, max(256, 1 << (index + 1).bit_length()))[index]

    def level(self, index: int) -> float:
        return self.v1 if self.bit(index) else self.v0

    def value_at(self, t: float) -> float:
        index = math.floor(t / self.bit_period)
        tau = t - index * self.bit_period
        current = self.level(index)
        if tau < self.edge:
            previous = self.level(index - 1)
            return previous + (current - previous) * tau / self.edge
        return current

    def breakpoints(self, t_stop: float) -> list[float]:
        points: list[float] = []
        index = 0
        while index * self.bit_period <= t_stop:
            start = index * self.bit_period
            points.append(start)
            if self.edge > 0 and start + self.edge <= t_stop:
                points.append(start + self.edge)
            index += 1
        return points


SourceSpec = Annotated[DcSpec | PulseSpec | PrbsSpec, Field(discriminator="kind")]


@lru_cache(maxsize=64)
def _prbs_block(seed: int, count: int) -> tuple[int, ...]:
    return tuple(islice(lfsr_bits(seed), count))
