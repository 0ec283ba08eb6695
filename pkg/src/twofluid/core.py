"""Periodic grid, field containers and parameter types shared by the solver.

Functions on the torus are represented by point samples: ``values[j]`` is the
function at ``x = j * h``.  All containers are frozen after construction.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

MIN_CELLS = 8
FIELD_NAMES = ("r1", "r2", "q1", "q2", "en1", "en2")


class GridError(ValueError):
    """Invalid grid or stencil/grid mismatch."""


@dataclass(frozen=True)
class Grid:
    n_cells: int
    length: float = 1.0

    def __post_init__(self):
        if int(self.n_cells) != self.n_cells or self.n_cells < MIN_CELLS:
            raise GridError(f"too few cells: n_cells={self.n_cells} < {MIN_CELLS}")
        if not self.length > 0:
            raise GridError(f"length must be positive, got {self.length}")

    @property
    def h(self) -> float:
        return self.length / self.n_cells

    @property
    def x(self) -> np.ndarray:
        return np.arange(self.n_cells) * self.h

    def offset(self, eps: float) -> int:
        """Number of cells ``m`` with ``eps == m * h``; raises if not integral."""
        m = eps / self.h
        mi = int(round(m))
        if mi < 1 or abs(m - mi) > 1e-9 * max(1.0, m):
            raise GridError(
                f"eps={eps!r} is not a positive integer multiple of h={self.h!r}")
        return mi


def make_grid(n_cells: int, length: float = 1.0) -> Grid:
    return Grid(n_cells, length)


def shift(values: np.ndarray, offset: int) -> np.ndarray:
    """Cyclic shift: ``result[j] = values[(j + offset) % n]``."""
    return np.roll(values, -offset)


@dataclass(frozen=True)
class FluidEos:
    """Stiffened-gas constants ``p = (K - 1) rho e_int - K p_inf`` per fluid."""

    k1: float
    k2: float
    pinf1: float = 0.0
    pinf2: float = 0.0

    def __post_init__(self):
        if not (self.k1 > 1 and self.k2 > 1):
            raise ValueError(f"stiffened-gas exponents must exceed 1, got {self.k1}, {self.k2}")
        if self.pinf1 < 0 or self.pinf2 < 0:
            raise ValueError("reference pressures must be non-negative")

    @property
    def b1(self) -> float:
        return self.k1 * self.pinf1

    @property
    def b2(self) -> float:
        return self.k2 * self.pinf2

    def swapped(self) -> "FluidEos":
        return FluidEos(self.k2, self.k1, self.pinf2, self.pinf1)


@dataclass(frozen=True)
class KernelSpec:
    """Mollifier shape descriptor.

    ``"bump"`` is exp(-1/(1-x^2)) on (-1, 1); ``"bump2"`` is that bump
    convolved with itself and rescaled to (-1, 1), whose Fourier transform is
    non-negative.
    """

    shape: str = "bump2"


@dataclass(frozen=True)
class SchemeParams:
    eps: float
    lam: float = 0.5
    kappa1: float | None = None
    kappa2: float | None = None
    cfl: float = 0.5
    r_min: float = 1e-8
    kernel: KernelSpec = field(default_factory=KernelSpec)
    alpha_coupling: str = "exact"

    def __post_init__(self):
        # kappa defaults to eps**2
        if self.kappa1 is None:
            object.__setattr__(self, "kappa1", self.eps ** 2)
        if self.kappa2 is None:
            object.__setattr__(self, "kappa2", self.eps ** 2)
        if not self.eps > 0:
            raise ValueError(f"eps must be positive, got {self.eps}")
        if not 0 < self.lam < 1:
            raise ValueError(f"lambda must lie in (0,1), got {self.lam}")
        if self.kappa1 < 0 or self.kappa2 < 0:
            raise ValueError("kappa1, kappa2 must be non-negative")
        if not 0 < self.cfl <= 1:
            raise ValueError(f"cfl must lie in (0,1], got {self.cfl}")
        if not self.r_min > 0:
            raise ValueError("r_min must be positive")
        if self.alpha_coupling not in ("exact", "lagged"):
            raise ValueError(f"alpha_coupling must be 'exact' or 'lagged', got {self.alpha_coupling!r}")

    @property
    def mollifier_width(self) -> float:
        return self.eps ** self.lam

    def with_(self, **changes) -> "SchemeParams":
        return replace(self, **changes)


@dataclass(frozen=True, eq=False)
class MixtureState:
    """Partial densities, momenta and total energies of both fluids."""

    grid: Grid
    r1: np.ndarray
    r2: np.ndarray
    q1: np.ndarray
    q2: np.ndarray
    en1: np.ndarray
    en2: np.ndarray

    def __post_init__(self):
        for name in FIELD_NAMES:
            arr = np.array(getattr(self, name), dtype=float)
            if arr.shape != (self.grid.n_cells,):
                raise ValueError(
                    f"field {name} has shape {arr.shape}, expected ({self.grid.n_cells},)")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @classmethod
    def uniform(cls, grid: Grid, r1, r2, q1, q2, en1, en2) -> "MixtureState":
        n = grid.n_cells
        return cls(grid, *(np.full(n, float(v)) for v in (r1, r2, q1, q2, en1, en2)))

    def as_array(self) -> np.ndarray:
        return np.stack([getattr(self, n) for n in FIELD_NAMES])

    @classmethod
    def from_array(cls, grid: Grid, arr: np.ndarray) -> "MixtureState":
        return cls(grid, *arr)

    def fields(self) -> dict[str, np.ndarray]:
        return {n: getattr(self, n) for n in FIELD_NAMES}


@dataclass(frozen=True)
class Violation:
    kind: str
    field: str
    cell: int

    def __str__(self):
        return f"{self.kind} in {self.field} at cell {self.cell}"


def validate_state(state: MixtureState, params: SchemeParams) -> list[Violation]:
    """Report non-finite entries and partial densities below ``r_min``."""
    out = []
    for name in FIELD_NAMES:
        arr = getattr(state, name)
        for j in np.flatnonzero(~np.isfinite(arr)):
            out.append(Violation("non-finite", name, int(j)))
    for name in ("r1", "r2"):
        arr = getattr(state, name)
        for j in np.flatnonzero(np.isfinite(arr) & (arr < params.r_min)):
            out.append(Violation("below r_min", name, int(j)))
    return out

