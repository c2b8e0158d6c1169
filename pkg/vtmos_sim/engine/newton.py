"""Damped Newton-Raphson on the MNA residual."""

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgError, LinAlgWarning, lu_factor, lu_solve

from vtmos_sim.engine.mna import CompanionState, MnaSystem
from vtmos_sim.engine.options import SolverOptions
from vtmos_sim.logging.handlers import get_logger

logger = get_logger(__name__)


class NewtonFailure(Exception):
    """Internal signal: one Newton run did not converge."""

    def __init__(self, iteration: int, worst_index: int | None) -> None:
        super().__init__(f"no convergence after {iteration} iterations")
        self.iteration = iteration
        self.worst_index = worst_index


@dataclass
class NewtonResult:
    x: np.ndarray
    iterations: int


def _solve_linear(J: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Dense LU with partial pivoting."""
    with warnings.catch_warnings():
        warnings.simplefilter("error", LinAlgWarning)
        warnings.simplefilter("error", RuntimeWarning)
        factors = lu_factor(J, check_finite=False)
        return lu_solve(factors, rhs, check_finite=False)


def newton_solve(
    system: MnaSystem,
    x0: np.ndarray,
    source_values: np.ndarray,
    options: SolverOptions,
    gmin: float | None = None,
    companion: CompanionState | None = None,
) -> NewtonResult:
    """
    Iterate until every update and every KCL residual is within tolerance.

    Node updates are clamped per component to ``options.voltage_limit``.
    Convergence needs ``|dv| < reltol*|v| + vntol`` on every node and
    ``|f| < reltol*(largest current at that node) + abstol`` on every KCL row.

    Raises:
        NewtonFailure: After ``max_newton_iters`` iterations or a singular Jacobian.
    """
    gmin = options.gmin if gmin is None else gmin
    n_nodes = system.n_nodes
    x = x0.copy()
    dx: np.ndarray | None = None
    worst: int | None = None
    if system.size == 0:
        return NewtonResult(x, 0)

    for iteration in range(1, options.max_newton_iters + 1):
        asm = system.assemble(x, source_values, gmin, companion)

        kcl_tol = options.reltol * asm.magnitude[:n_nodes] + options.abstol
        kcl_ok = np.abs(asm.residual[:n_nodes]) < kcl_tol
        branch_ok = np.abs(asm.residual[n_nodes:]) < (
            options.reltol * np.abs(asm.source_values) + options.vntol
        )
        if dx is not None:
            update_tol = options.reltol * np.abs(x) + np.where(
                np.arange(system.size) < n_nodes, options.vntol, options.abstol
            )
            update_ok = np.abs(dx) < update_tol
            if update_ok.all() and kcl_ok.all() and branch_ok.all():
                return NewtonResult(x, iteration - 1)
            worst = int(np.argmax(np.abs(dx) / update_tol))

        try:
            dx = _solve_linear(asm.jacobian, -asm.residual)
        except (LinAlgError, LinAlgWarning, RuntimeWarning, ValueError):
            logger.debug("Singular Jacobian", extra={"iterations": iteration})
            raise NewtonFailure(iteration, worst) from None
        if not np.all(np.isfinite(dx)):
            raise NewtonFailure(iteration, worst)

        limit = options.voltage_limit
        dx[:n_nodes] = np.clip(dx[:n_nodes], -limit, limit)
        x = x + dx

    raise NewtonFailure(options.max_newton_iters, worst)
