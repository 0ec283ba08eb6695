"""Run configuration: a flat ``key = value`` text format.

Blank lines and ``#`` comments are ignored; string values may be quoted.
Unknown keys are rejected.  Recognized keys and defaults::

    scenario         preset name (required)
    eps              0.01          stencil width
    lambda           0.5           mollifier exponent, width eps**lambda
    kappa1, kappa2   eps**2        source magnitudes
    cfl              0.5
    r_min            1e-8
    n_cells          round(4 / eps)
    t_end            preset value
    snapshot_every   t_end / 10    (0 records every step)
    smoothing_cells  2
    kernel           bump2         (or bump)
    alpha_coupling   exact         (or lagged)
    output_dir       out
    eos.k1, eos.k2, eos.pinf1, eos.pinf2   preset values (scaled units)
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from ..core import FluidEos, Grid, KernelSpec, SchemeParams
from ..mollifier import SHAPES, make_kernel
from .scenarios import Preset, preset

FLOAT_KEYS = {"eps", "lambda", "kappa1", "kappa2", "cfl", "r_min", "t_end", "snapshot_every",
              "eos.k1", "eos.k2", "eos.pinf1", "eos.pinf2"}
INT_KEYS = {"n_cells", "smoothing_cells"}
STR_KEYS = {"scenario", "kernel", "output_dir", "alpha_coupling"}
KNOWN_KEYS = FLOAT_KEYS | INT_KEYS | STR_KEYS

DEFAULT_CELLS_PER_EPS = 4


class ConfigError(ValueError):
    """Malformed or invalid configuration; ``line`` is set for parse errors."""

    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class RunConfig:
    eos: FluidEos
    params: SchemeParams
    scenario: Preset
    n_cells: int
    t_end: float
    snapshot_every: float
    smoothing_cells: int = 2
    output_dir: Path = Path("out")
    raw: dict = field(default_factory=dict, compare=False)

    @property
    def cells_per_eps(self) -> float:
        return self.n_cells * self.params.eps

    def grid(self) -> Grid:
        return Grid(self.n_cells)

    def resolved(self) -> dict:
        """Every key with its effective value, in a stable order."""
        p = self.params
        out = {
            "scenario": self.scenario.name,
            "eps": p.eps,
            "lambda": p.lam,
            "kappa1": p.kappa1,
            "kappa2": p.kappa2,
            "cfl": p.cfl,
            "r_min": p.r_min,
            "n_cells": self.n_cells,
            "t_end": self.t_end,
            "snapshot_every": self.snapshot_every,
            "smoothing_cells": self.smoothing_cells,
            "kernel": p.kernel.shape,
            "alpha_coupling": p.alpha_coupling,
            "output_dir": str(self.output_dir),
            "eos.k1": self.eos.k1,
            "eos.k2": self.eos.k2,
            "eos.pinf1": self.eos.pinf1,
            "eos.pinf2": self.eos.pinf2,
        }
        return out


def parse_text(text: str) -> dict:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", lineno)
        key, _, val = (s.strip() for s in line.partition("="))
        if not key or not val:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", lineno)
        if key not in KNOWN_KEYS:
            raise ConfigError(f"unknown key {key!r}", lineno)
        if key in values:
            raise ConfigError(f"duplicate key {key!r}", lineno)
        if len(val) >= 2 and val[0] == val[-1] and val[0] in "'\"":
            val = val[1:-1]
        try:
            if key in FLOAT_KEYS:
                values[key] = float(val)
            elif key in INT_KEYS:
                values[key] = int(val)
            else:
                values[key] = val
        except ValueError:
            kind = "a number" if key in FLOAT_KEYS else "an integer"
            raise ConfigError(f"{key} must be {kind}, got {val!r}", lineno) from None
    return values


def build_config(values: dict) -> RunConfig:
    """Validate parsed values and fill in defaults."""
    if "scenario" not in values:
        raise ConfigError("missing required key 'scenario'")
    try:
        sc = preset(values["scenario"])
    except KeyError as exc:
        raise ConfigError(str(exc.args[0])) from None

    e = sc.eos
    try:
        eos = FluidEos(values.get("eos.k1", e.k1), values.get("eos.k2", e.k2),
                       values.get("eos.pinf1", e.pinf1), values.get("eos.pinf2", e.pinf2))
    except ValueError as exc:
        raise ConfigError(f"eos: {exc}") from None

    kernel = values.get("kernel", "bump2")
    if kernel not in SHAPES:
        raise ConfigError(f"kernel must be one of {sorted(SHAPES)}, got {kernel!r}")
    eps = values.get("eps", 0.01)
    lam = values.get("lambda", 0.5)
    if not 0 < lam < 1:
        raise ConfigError(f"lambda must lie in (0,1), got {lam}")
    try:
        params = SchemeParams(
            eps=eps, lam=lam,
            kappa1=values.get("kappa1"), kappa2=values.get("kappa2"),
            cfl=values.get("cfl", 0.5), r_min=values.get("r_min", 1e-8),
            kernel=KernelSpec(kernel),
            alpha_coupling=values.get("alpha_coupling", "exact"),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    n_cells = values.get("n_cells", int(round(DEFAULT_CELLS_PER_EPS / eps)))
    try:
        grid = Grid(n_cells)
        grid.offset(eps)
    except ValueError as exc:
        raise ConfigError(f"n_cells: {exc}") from None
    try:
        make_kernel(eps, lam, grid, kernel)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    t_end = values.get("t_end", sc.t_end)
    if t_end is None:
        raise ConfigError(f"t_end is required for scenario {sc.name!r}")
    if not t_end > 0:
        raise ConfigError(f"t_end must be positive, got {t_end}")
    every = values.get("snapshot_every", t_end / 10)
    if every < 0:
        raise ConfigError("snapshot_every must be non-negative")
    smoothing = values.get("smoothing_cells", 2)
    if smoothing < 1:
        raise ConfigError("smoothing_cells must be at least 1")
    return RunConfig(eos, params, sc, n_cells, t_end, every, smoothing,
                     Path(values.get("output_dir", "out")), dict(values))


def load_config(path) -> RunConfig:
    """Read and validate a config file.  A missing file raises ``OSError``."""
    text = Path(path).read_text()
    return build_config(parse_text(text))
