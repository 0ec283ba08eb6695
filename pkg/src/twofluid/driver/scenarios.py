"""Riemann data on the torus and the preset table."""
from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

import numpy as np

from ..closure import ClosureError, conserved_from_primitive, close_cell
from ..core import FluidEos, Grid, KernelSpec, MixtureState, SchemeParams
from ..integrate import Trajectory, run

LEFT_INTERVAL = (0.25, 0.75)


@dataclass(frozen=True)
class PrimitiveSide:
    p: float
    alpha1: float
    rho1: float
    rho2: float
    v1: float = 0.0
    v2: float = 0.0

    def __post_init__(self):
        if not 0 < self.alpha1 < 1:
            raise ValueError(f"alpha1 must lie in (0,1), got {self.alpha1}")
        if not (self.rho1 > 0 and self.rho2 > 0):
            raise ValueError("phase densities must be positive")

    def conserved(self, eos: FluidEos):
        return conserved_from_primitive(self.p, self.alpha1, self.rho1, self.rho2,
                                        self.v1, self.v2, eos)


@dataclass(frozen=True)
class Preset:
    name: str
    left: PrimitiveSide
    right: PrimitiveSide
    eos: FluidEos
    description: str
    source: str
    t_end: float | None = None


def _load_table() -> dict:
    text = resources.files(__package__).joinpath("presets.json").read_text()
    return {k: v for k, v in json.loads(text).items() if not k.startswith("_")}


def preset_names() -> list[str]:
    return sorted(_load_table())


def _scaled_preset(name: str, entry: dict) -> Preset:
    sc = entry["scaling"]
    p_ref, rho_ref, l_ref = sc["pressure"], sc["density"], sc["length"]
    e = entry["eos"]
    eos = FluidEos(e["k1"], e["k2"], e["pinf1"] / p_ref, e["pinf2"] / p_ref)
    v_ref = (p_ref / rho_ref) ** 0.5
    t_ref = l_ref / v_ref

    def side(d):
        if "rho1" in d:
            rho1, rho2 = d["rho1"], d["rho2"]
        else:
            th = entry["thermal"]
            rho1 = (d["p"] + e["pinf1"]) / ((e["k1"] - 1.0) * th["cv1"] * th["T"])
            rho2 = (d["p"] + e["pinf2"]) / ((e["k2"] - 1.0) * th["cv2"] * th["T"])
        return PrimitiveSide(d["p"] / p_ref, d["alpha1"], rho1 / rho_ref, rho2 / rho_ref,
                             d["v1"] / v_ref, d["v2"] / v_ref)

    t_end = entry.get("t_end")
    return Preset(name, side(entry["left"]), side(entry["right"]), eos,
                  entry["description"], entry["source"],
                  None if t_end is None else t_end / t_ref)


def preset(name: str) -> Preset:
    """Look up a named Riemann problem, scaled onto the unit torus."""
    table = _load_table()
    if name not in table:
        raise KeyError(f"unknown preset {name!r}; available presets: {sorted(table)}")
    return _scaled_preset(name, table[name])


def smoothing_weights(smoothing_cells: int) -> np.ndarray:
    """Bump samples on ``2 * smoothing_cells + 1`` points, summing to one."""
    n = int(smoothing_cells)
    k = np.arange(-n, n + 1) / (n + 1.0)
    w = np.exp(-1.0 / (1.0 - k * k))
    return w / w.sum()


def blend_profile(grid: Grid, smoothing_cells: int) -> np.ndarray:
    """Smoothed indicator of the left-state interval on the torus."""
    x = grid.x
    lo, hi = LEFT_INTERVAL
    chi = ((x >= lo * grid.length) & (x < hi * grid.length)).astype(float)
    w = smoothing_weights(smoothing_cells)
    n = len(w) // 2
    out = np.zeros_like(chi)
    for k, wk in zip(range(-n, n + 1), w):
        out += wk * np.roll(chi, k)
    return out


def riemann_on_torus(left: PrimitiveSide, right: PrimitiveSide, grid: Grid, eos: FluidEos,
                     smoothing_cells: int = 2) -> MixtureState:
    """Mirrored double Riemann problem: ``left`` on [0.25, 0.75), ``right`` elsewhere.

    Primitive variables are blended through a smoothed indicator and the
    conserved fields are then built exactly from them.
    """
    if smoothing_cells < 1:
        raise ValueError("smoothing_cells must be at least 1")
    for tag, s in (("left", left), ("right", right)):
        c = s.conserved(eos)
        try:
            back = close_cell(c, eos)
        except ClosureError as exc:
            raise ValueError(f"{tag} side is inconsistent with the EOS: {exc}") from exc
        scale = abs(s.p) + eos.b1 + eos.b2
        if abs(back.p - s.p) > 1e-10 * scale or abs(back.alpha1 - s.alpha1) > 1e-10:
            raise ValueError(f"{tag} side does not close back onto its own pressure")

    chi = blend_profile(grid, smoothing_cells)

    def mix(name):
        a, b = getattr(left, name), getattr(right, name)
        return chi * a + (1.0 - chi) * b

    c = conserved_from_primitive(mix("p"), mix("alpha1"), mix("rho1"), mix("rho2"),
                                 mix("v1"), mix("v2"), eos)
    return MixtureState(grid, c.r1, c.r2, c.q1, c.q2, c.en1, c.en2)


@dataclass(frozen=True)
class RiemannScenario:
    """Factory ``eps -> Trajectory`` for refinement studies.

    The grid keeps ``cells_per_eps`` cells per stencil width.  ``kappa`` of
    ``None`` means the default ``eps**2`` for every ``eps``.
    """

    preset: Preset
    t_end: float
    cells_per_eps: int = 4
    lam: float = 0.5
    kappa1: float | None = None
    kappa2: float | None = None
    cfl: float = 0.5
    smoothing_cells: int = 2
    kernel: str = "bump2"
    snapshot_every: float | None = None
    eos: FluidEos | None = None

    def params(self, eps: float) -> SchemeParams:
        return SchemeParams(eps=eps, lam=self.lam, kappa1=self.kappa1, kappa2=self.kappa2,
                            cfl=self.cfl, kernel=KernelSpec(self.kernel))

    def initial(self, eps: float) -> MixtureState:
        grid = Grid(int(round(self.cells_per_eps / eps)))
        eos = self.eos or self.preset.eos
        return riemann_on_torus(self.preset.left, self.preset.right, grid, eos,
                                self.smoothing_cells)

    def __call__(self, eps: float) -> Trajectory:
        eos = self.eos or self.preset.eos
        return run(self.initial(eps), self.t_end, eos, self.params(eps), self.snapshot_every)
