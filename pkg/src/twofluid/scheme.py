"""Semi-discrete right-hand side of the two-fluid system.

The transport operator is the upwind bracket

    [V, v](x) = -(1/eps) * ( V(x-eps) v+(x-eps) - V(x)|v|(x) + V(x+eps) v-(x+eps) )

with ``v+ = max(v, 0)`` and ``v- = max(-v, 0)``.  It is evaluated in flux
difference form, so its discrete sum telescopes to zero on the torus.

The ``p * d(alpha_i)/dt`` term of the energy equations is resolved per cell:
``alpha1`` is a function of the six conserved variables, so its time
derivative is linear in the energy tendencies, and the 2x2 coupling reduces to
one scalar division.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .closure import CellConserved, ClosureError, ClosureResult, close_cell, closure_sensitivity
from .core import FluidEos, Grid, MixtureState, SchemeParams, shift
from .mollifier import MollifierKernel, make_kernel, mollified_gradient, mollify

SINGULAR_COUPLING = 1e-12


class SchemeError(ArithmeticError):
    pass


class SingularCouplingError(SchemeError):
    def __init__(self, cells):
        self.cells = tuple(int(c) for c in cells)
        super().__init__(f"singular coupling |1 + p(F1 - F2)| < {SINGULAR_COUPLING} "
                         f"at cell(s) {', '.join(map(str, self.cells[:10]))}")


def upwind_bracket(V: np.ndarray, v: np.ndarray, eps: float, grid: Grid | None = None,
                   m: int | None = None) -> np.ndarray:
    """Evaluate ``[V, v]`` on the periodic grid with a stencil offset of ``eps``.

    Either ``grid`` or the integer offset ``m = eps / h`` must be given.
    """
    if m is None:
        if grid is None:
            raise ValueError("upwind_bracket needs the grid or the cell offset m")
        m = grid.offset(eps)
    V = np.asarray(V, dtype=float)
    v = np.asarray(v, dtype=float)
    a = V * np.maximum(v, 0.0)
    b = V * np.maximum(-v, 0.0)
    return -((shift(a, -m) - a) + (shift(b, m) - b)) / eps


@dataclass(frozen=True, eq=False)
class StateTendency:
    dr1: np.ndarray
    dr2: np.ndarray
    dq1: np.ndarray
    dq2: np.ndarray
    den1: np.ndarray
    den2: np.ndarray
    dalpha1: np.ndarray

    @property
    def dalpha2(self) -> np.ndarray:
        return -self.dalpha1

    def as_array(self) -> np.ndarray:
        return np.stack([self.dr1, self.dr2, self.dq1, self.dq2, self.den1, self.den2])


@dataclass(frozen=True, eq=False)
class RhsDiagnostics:
    """Intermediate fields of one right-hand-side evaluation.

    ``nc_mom*`` and ``nc_en*`` are the non-conservative terms of the momentum
    and energy equations exactly as the scheme evaluates them (moved to the
    left-hand side).
    """

    closure: ClosureResult
    dpbar: np.ndarray
    nc_mom1: np.ndarray
    nc_mom2: np.ndarray
    nc_en1: np.ndarray
    nc_en2: np.ndarray


class Discretization:
    """Grid-bound pieces of the scheme: stencil offset and mollifier kernel."""

    def __init__(self, grid: Grid, params: SchemeParams):
        self.grid = grid
        self.params = params
        self.m = grid.offset(params.eps)
        self.kernel: MollifierKernel = make_kernel(params.eps, params.lam, grid, params.kernel)

    def bracket(self, V, v):
        return upwind_bracket(V, v, self.params.eps, m=self.m)


_DISC_CACHE: dict = {}


def discretization(grid: Grid, params: SchemeParams) -> Discretization:
    key = (grid, params)
    disc = _DISC_CACHE.get(key)
    if disc is None:
        if len(_DISC_CACHE) > 32:
            _DISC_CACHE.clear()
        disc = _DISC_CACHE[key] = Discretization(grid, params)
    return disc


def rhs(state: MixtureState, eos: FluidEos, params: SchemeParams,
        dalpha1_lagged: np.ndarray | None = None, *, diagnostics: bool = False):
    """Time derivatives of the six conserved fields.

    With ``params.alpha_coupling == "lagged"`` the caller supplies
    ``dalpha1_lagged`` (e.g. a backward difference from the previous step) and
    it replaces the exact per-cell elimination.

    Returns a :class:`StateTendency`, or ``(tendency, RhsDiagnostics)`` when
    ``diagnostics`` is set.
    """
    disc = discretization(state.grid, params)
    cell = CellConserved.from_state(state)
    cl = close_cell(cell, eos, params.r_min)
    p = cl.p
    al1, al2 = cl.alpha1, cl.alpha2
    v1, v2 = cl.v1, cl.v2
    k1, k2 = params.kappa1, params.kappa2

    dpbar = mollified_gradient(p, disc.kernel)
    dflux1 = mollified_gradient(al1 * v1, disc.kernel)
    dflux2 = mollified_gradient(al2 * v2, disc.kernel)

    dr1 = -disc.bracket(state.r1, v1) + k1
    dr2 = -disc.bracket(state.r2, v2) + k1
    nc_mom1 = al1 * dpbar
    nc_mom2 = al2 * dpbar
    dq1 = -disc.bracket(state.q1, v1) - nc_mom1
    dq2 = -disc.bracket(state.q2, v2) - nc_mom2

    # energy tendencies before the p * dalpha/dt term
    b1 = -disc.bracket(state.en1, v1) - dpbar * al1 * v1 - p * dflux1 + k2
    b2 = -disc.bracket(state.en2, v2) - dpbar * al2 * v2 - p * dflux2 + k2

    if params.alpha_coupling == "lagged":
        if dalpha1_lagged is None:
            dalpha1 = np.zeros_like(p)
        else:
            dalpha1 = np.asarray(dalpha1_lagged, dtype=float)
    else:
        sens = closure_sensitivity(cell, eos, cl)
        c0 = sens.r1 * dr1 + sens.r2 * dr2 + sens.q1 * dq1 + sens.q2 * dq2
        coupling = 1.0 + p * (sens.en1 - sens.en2)
        bad = np.abs(coupling) < SINGULAR_COUPLING
        if np.any(bad):
            raise SingularCouplingError(np.flatnonzero(bad))
        dalpha1 = (c0 + sens.en1 * b1 + sens.en2 * b2) / coupling

    den1 = b1 - p * dalpha1
    den2 = b2 + p * dalpha1
    tend = StateTendency(dr1, dr2, dq1, dq2, den1, den2, dalpha1)
    if not diagnostics:
        return tend
    nc_en1 = p * dalpha1 + dpbar * al1 * v1 + p * dflux1
    nc_en2 = -p * dalpha1 + dpbar * al2 * v2 + p * dflux2
    return tend, RhsDiagnostics(cl, dpbar, nc_mom1, nc_mom2, nc_en1, nc_en2)


def mollified_pressure(state: MixtureState, eos: FluidEos, params: SchemeParams) -> np.ndarray:
    disc = discretization(state.grid, params)
    cl = close_cell(CellConserved.from_state(state), eos, params.r_min)
    return mollify(cl.p, disc.kernel)


__all__ = [
    "ClosureError", "SchemeError", "SingularCouplingError", "StateTendency", "RhsDiagnostics",
    "upwind_bracket", "rhs", "discretization", "mollified_pressure",
]
