"""Pressure/volume-fraction closure for two stiffened gases sharing one pressure.

Writing ``A_i = (K_i - 1)(en_i - q_i^2 / (2 r_i))`` and ``B_i = K_i p_inf_i``,
the two state laws read ``p = A_i / alpha_i - B_i``.  Together with
``alpha_1 + alpha_2 = 1`` this is a scalar quadratic in ``p`` whose admissible
root (``p + B_i > 0``) is unique.

All functions broadcast over numpy arrays, so one call closes a whole grid.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import FluidEos, MixtureState

TOL_CLOSURE = 1e-10
TOL_BISECTION = 1e-12


class ClosureError(ArithmeticError):
    """Non-physical cell data: non-positive internal energy or no admissible root.

    ``cells`` holds the offending cell indices when the call was vectorized.
    """

    def __init__(self, message, cells=()):
        self.cells = tuple(int(c) for c in cells)
        if self.cells:
            shown = ", ".join(map(str, self.cells[:10]))
            more = "" if len(self.cells) <= 10 else f" (+{len(self.cells) - 10} more)"
            message = f"{message} at cell(s) {shown}{more}"
        super().__init__(message)


@dataclass(frozen=True)
class CellConserved:
    r1: np.ndarray | float
    r2: np.ndarray | float
    q1: np.ndarray | float
    q2: np.ndarray | float
    en1: np.ndarray | float
    en2: np.ndarray | float

    @classmethod
    def from_state(cls, state: MixtureState) -> "CellConserved":
        return cls(state.r1, state.r2, state.q1, state.q2, state.en1, state.en2)

    def replace(self, **kw) -> "CellConserved":
        d = dict(self.__dict__)
        d.update(kw)
        return CellConserved(**d)


@dataclass(frozen=True)
class ClosureResult:
    p: np.ndarray | float
    alpha1: np.ndarray | float
    alpha2: np.ndarray | float
    rho1: np.ndarray | float
    rho2: np.ndarray | float
    v1: np.ndarray | float
    v2: np.ndarray | float
    e1: np.ndarray | float
    e2: np.ndarray | float


@dataclass(frozen=True)
class ClosureSensitivity:
    """Partial derivatives of ``alpha1`` with respect to the conserved variables."""

    r1: np.ndarray | float
    r2: np.ndarray | float
    q1: np.ndarray | float
    q2: np.ndarray | float
    en1: np.ndarray | float
    en2: np.ndarray | float


def _bad_cells(mask):
    mask = np.atleast_1d(mask)
    return np.flatnonzero(mask)


def kinetic_deficit(cell: CellConserved, eos: FluidEos, check: bool = True):
    """Return ``(A1, A2)``, the internal-energy densities scaled by ``K_i - 1``.

    With ``check`` set, non-positive values raise :class:`ClosureError`.
    """
    a1 = (eos.k1 - 1.0) * (cell.en1 - 0.5 * cell.q1 * cell.q1 / cell.r1)
    a2 = (eos.k2 - 1.0) * (cell.en2 - 0.5 * cell.q2 * cell.q2 / cell.r2)
    if check:
        bad = np.logical_not((a1 > 0) & (a2 > 0))
        if np.any(bad):
            raise ClosureError("non-physical internal energy", _bad_cells(bad))
    return a1, a2


def _stable_shifted_root(a1, a2, d, sq):
    """Positive root ``s`` of ``s^2 + (d - a1 - a2) s - a1 d = 0``.

    ``s`` is ``p + B1`` when ``d = B2 - B1``.  The two algebraically equal
    forms are selected to avoid cancellation.
    """
    b = d - a1 - a2
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = 0.5 * (sq - b)
        reflected = 2.0 * a1 * d / (b + sq)
    return np.where(b <= 0, direct, reflected)


def solve_pressure_alpha(a1, a2, eos: FluidEos):
    """Solve ``A1/(p+B1) + A2/(p+B2) = 1`` for the admissible ``(p, alpha1)``.

    The discriminant is written as ``(A1 - A2 + B2 - B1)^2 + 4 A1 A2`` so it is
    a sum of non-negative terms.  The smaller volume fraction is computed
    directly and the larger one as its complement, which keeps both state-law
    branches accurate to a few ulps.
    """
    a1 = np.asarray(a1, dtype=float)
    a2 = np.asarray(a2, dtype=float)
    bad = ~((a1 > 0) & (a2 > 0) & np.isfinite(a1) & np.isfinite(a2))
    if np.any(bad):
        raise ClosureError("no admissible root", _bad_cells(bad))
    b1, b2 = eos.b1, eos.b2
    d = b2 - b1
    sq = np.sqrt((a1 - a2 + d) ** 2 + 4.0 * a1 * a2)
    s1 = _stable_shifted_root(a1, a2, d, sq)     # p + B1
    s2 = _stable_shifted_root(a2, a1, -d, sq)    # p + B2
    frac1 = a1 / s1
    frac2 = a2 / s2
    alpha1 = np.where(frac1 <= frac2, frac1, 1.0 - frac2)
    p = (s1 - b1) if b1 <= b2 else (s2 - b2)
    bad = ~((alpha1 > 0) & (alpha1 < 1) & np.isfinite(p))
    if np.any(bad):
        raise ClosureError("no admissible root", _bad_cells(bad))
    if p.ndim == 0:
        return float(p), float(alpha1)
    return p, alpha1


def bisection_oracle(a1, a2, eos: FluidEos, tol: float = TOL_BISECTION):
    """Bisect the monotone compatibility function on ``alpha1 in (0, 1)``.

    ``g(alpha) = A1/alpha - B1 - A2/(1-alpha) + B2`` decreases strictly from
    +inf to -inf.  Independent of :func:`solve_pressure_alpha`; used as its
    oracle.  Vectorized: all entries are bisected in lockstep.
    """
    a1 = np.asarray(a1, dtype=float)
    a2 = np.asarray(a2, dtype=float)
    b1, b2 = eos.b1, eos.b2
    lo = np.zeros(np.broadcast(a1, a2).shape)
    hi = np.ones_like(lo)
    n_iter = int(np.ceil(np.log2(1.0 / tol))) + 2
    for _ in range(n_iter):
        mid = 0.5 * (lo + hi)
        g = a1 / mid - b1 - a2 / (1.0 - mid) + b2
        pos = g > 0
        lo = np.where(pos, mid, lo)
        hi = np.where(pos, hi, mid)
    alpha1 = 0.5 * (lo + hi)
    p = a1 / alpha1 - b1
    if alpha1.ndim == 0:
        return float(p), float(alpha1)
    return p, alpha1


def close_cell(cell: CellConserved, eos: FluidEos, r_min: float = 0.0) -> ClosureResult:
    """Recover ``p, alpha_i, rho_i, v_i, e_i`` from conserved cell values."""
    if r_min > 0:
        low = np.logical_not((np.asarray(cell.r1) >= r_min) & (np.asarray(cell.r2) >= r_min))
        if np.any(low):
            raise ClosureError("partial density below r_min", _bad_cells(low))
    a1, a2 = kinetic_deficit(cell, eos)
    p, alpha1 = solve_pressure_alpha(a1, a2, eos)
    alpha2 = 1.0 - alpha1
    return ClosureResult(
        p=p,
        alpha1=alpha1,
        alpha2=alpha2,
        rho1=cell.r1 / alpha1,
        rho2=cell.r2 / alpha2,
        v1=cell.q1 / cell.r1,
        v2=cell.q2 / cell.r2,
        e1=cell.en1 / cell.r1,
        e2=cell.en2 / cell.r2,
    )


def close_state(state: MixtureState, eos: FluidEos, r_min: float = 0.0) -> ClosureResult:
    return close_cell(CellConserved.from_state(state), eos, r_min)


def closure_sensitivity(cell: CellConserved, eos: FluidEos, closed: ClosureResult | None = None
                        ) -> ClosureSensitivity:
    """Implicit derivative of ``alpha1`` through ``G(alpha1; u) = 0``.

    ``G = A1/alpha1 - B1 - A2/(1 - alpha1) + B2`` and
    ``dG/dalpha1 = -(A1/alpha1^2 + A2/alpha2^2)``, so
    ``dalpha1/du = (dG/du) / (A1/alpha1^2 + A2/alpha2^2)``.
    """
    if closed is None:
        closed = close_cell(cell, eos)
    a1, a2 = kinetic_deficit(cell, eos)
    al1, al2 = closed.alpha1, closed.alpha2
    denom = a1 / (al1 * al1) + a2 / (al2 * al2)
    g1 = 1.0 / (al1 * denom)     # dalpha1/dA1
    g2 = -1.0 / (al2 * denom)    # dalpha1/dA2
    km1, km2 = eos.k1 - 1.0, eos.k2 - 1.0
    v1, v2 = closed.v1, closed.v2
    return ClosureSensitivity(
        r1=g1 * km1 * 0.5 * v1 * v1,
        r2=g2 * km2 * 0.5 * v2 * v2,
        q1=-g1 * km1 * v1,
        q2=-g2 * km2 * v2,
        en1=g1 * km1,
        en2=g2 * km2,
    )


def conserved_from_primitive(p, alpha1, rho1, rho2, v1, v2, eos: FluidEos) -> CellConserved:
    """Inverse of :func:`close_cell` via the state laws.

    ``e_i = (p + K_i p_inf_i) / ((K_i - 1) rho_i) + v_i^2 / 2``.
    """
    alpha2 = 1.0 - np.asarray(alpha1, dtype=float)
    r1 = rho1 * alpha1
    r2 = rho2 * alpha2
    e1 = (p + eos.b1) / ((eos.k1 - 1.0) * rho1) + 0.5 * v1 * v1
    e2 = (p + eos.b2) / ((eos.k2 - 1.0) * rho2) + 0.5 * v2 * v2
    return CellConserved(r1, r2, r1 * v1, r2 * v2, r1 * e1, r2 * e2)
