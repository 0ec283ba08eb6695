"""Weak-form residuals and discrete conservation audits of computed trajectories.

Residuals are reported as the value obtained by plugging the approximate
solution into the weak form of the balance laws, e.g. for the mass of fluid i

    R = - int int (r_i dpsi/dt + r_i v_i dpsi/dx) dx dt - int r_i(x, 0) psi(x, 0) dx,

which equals ``int int psi (d_t r_i + d_x(r_i v_i))`` for smooth fields.  The
non-conservative products (``alpha_i d_x p``, ``p d_t alpha_i``,
``p d_x(alpha_i v_i)``) are evaluated exactly as the scheme evaluates them.
Space integrals use the periodic trapezoidal rule, time integrals the
trapezoidal rule over the recorded snapshots.
"""
from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .integrate import Trajectory
from .scheme import rhs

log = logging.getLogger(__name__)

EQUATIONS = ("mass1", "mass2", "mom1", "mom2", "en1", "en2")
CADENCE_FACTOR = 20.0


class CadenceError(ValueError):
    pass


# -- test functions ---------------------------------------------------------

def _half_window(t, t_end):
    """``exp(1 - 1/(1 - s^2))`` with ``s = t/t_end``: one at t=0, flat to all orders at t_end."""
    s = np.asarray(t, dtype=float) / t_end
    w = np.zeros_like(s)
    dw = np.zeros_like(s)
    inside = s < 1.0
    si = s[inside]
    den = 1.0 - si * si
    w[inside] = np.exp(1.0 - 1.0 / den)
    dw[inside] = w[inside] * (-2.0 * si / (den * den)) / t_end
    return w, dw


def _centered_window(t, t_end):
    """Bump supported on (0, t_end), peak one at t_end/2."""
    half = 0.5 * t_end
    s = (np.asarray(t, dtype=float) - half) / half
    w = np.zeros_like(s)
    dw = np.zeros_like(s)
    inside = np.abs(s) < 1.0
    si = s[inside]
    den = 1.0 - si * si
    w[inside] = np.exp(1.0 - 1.0 / den)
    dw[inside] = w[inside] * (-2.0 * si / (den * den)) / half
    return w, dw


WINDOWS = {"half": _half_window, "centered": _centered_window}


@dataclass(frozen=True)
class TestFunction:
    """``psi(x, t) = X(x) W(t)`` with ``X`` a Fourier mode on the unit torus.

    ``kind`` is ``"cos"`` or ``"sin"``; ``wavenumber`` 0 with ``"cos"`` is the
    constant mode.  ``window`` names the time factor, which vanishes at
    ``t_end`` together with all its derivatives.
    """

    kind: str
    wavenumber: int
    window: str = "half"
    amplitude: float = 1.0

    __test__ = False  # not a pytest class

    @property
    def description(self) -> str:
        return f"{self.amplitude:g}*{self.kind}(2pi*{self.wavenumber}x)*{self.window}(t)"

    def space(self, x, length=1.0):
        k = 2.0 * math.pi * self.wavenumber / length
        if self.kind == "cos":
            return self.amplitude * np.cos(k * x), -self.amplitude * k * np.sin(k * x)
        if self.kind == "sin":
            return self.amplitude * np.sin(k * x), self.amplitude * k * np.cos(k * x)
        raise ValueError(f"unknown test-function kind {self.kind!r}")

    def time(self, t, t_end):
        return WINDOWS[self.window](t, t_end)

    def evaluate(self, x, t, t_end, length=1.0):
        """Return ``psi, dpsi/dt, dpsi/dx`` on the product grid (times x cells)."""
        X, dX = self.space(x, length)
        W, dW = self.time(t, t_end)
        return np.outer(W, X), np.outer(dW, X), np.outer(W, dX)


def default_test_functions() -> list[TestFunction]:
    modes = [("cos", 0), ("cos", 1), ("sin", 1), ("cos", 2), ("sin", 2), ("cos", 3)]
    return [TestFunction(kind, k, window) for window in ("half", "centered") for kind, k in modes]


# -- residuals --------------------------------------------------------------

@dataclass
class ResidualReport:
    values: dict[str, float]
    eps: float
    n_cells: int
    kernel_width: float
    psi: str = ""

    def __getitem__(self, key):
        return self.values[key]

    def as_array(self) -> np.ndarray:
        return np.array([self.values[k] for k in EQUATIONS])


@dataclass
class _Sampled:
    """Per-snapshot fields needed by the residual (times x cells)."""

    t: np.ndarray
    dens: dict
    flux: dict
    nc: dict


def _trapz_weights(t):
    t = np.asarray(t, dtype=float)
    w = np.zeros_like(t)
    if len(t) > 1:
        d = np.diff(t)
        w[:-1] += 0.5 * d
        w[1:] += 0.5 * d
    return w


def _check_cadence(traj: Trajectory):
    if len(traj.times) < 2 or not traj.dts:
        return
    gap = float(np.max(np.diff(traj.times)))
    limit = CADENCE_FACTOR * max(traj.dts)
    if gap > limit * (1 + 1e-12):
        raise CadenceError(
            f"snapshot cadence too coarse: gap {gap:.3g} > {CADENCE_FACTOR:g} x step {max(traj.dts):.3g}")


def sample_trajectory(traj: Trajectory) -> _Sampled:
    """Evaluate densities, fluxes and the scheme's non-conservative terms at every snapshot."""
    keys = EQUATIONS
    dens = {k: [] for k in keys}
    flux = {k: [] for k in keys}
    nc = {k: [] for k in keys}
    for s in traj.states:
        tend, diag = rhs(s, traj.eos, traj.params, diagnostics=True)
        cl = diag.closure
        v1, v2 = cl.v1, cl.v2
        for k, d, v in (("mass1", s.r1, v1), ("mass2", s.r2, v2), ("mom1", s.q1, v1),
                        ("mom2", s.q2, v2), ("en1", s.en1, v1), ("en2", s.en2, v2)):
            dens[k].append(d)
            flux[k].append(d * v)
        zero = np.zeros_like(v1)
        nc["mass1"].append(zero)
        nc["mass2"].append(zero)
        nc["mom1"].append(diag.nc_mom1)
        nc["mom2"].append(diag.nc_mom2)
        nc["en1"].append(diag.nc_en1)
        nc["en2"].append(diag.nc_en2)
    as_arr = lambda d: {k: np.array(v) for k, v in d.items()}  # noqa: E731
    return _Sampled(np.asarray(traj.times), as_arr(dens), as_arr(flux), as_arr(nc))


def weak_residual(traj: Trajectory, psi: TestFunction, sampled: _Sampled | None = None
                  ) -> ResidualReport:
    """Plug the trajectory into the weak form of the six balance laws against ``psi``."""
    _check_cadence(traj)
    if sampled is None:
        sampled = sample_trajectory(traj)
    grid = traj.grid
    t = sampled.t
    t_end = t[-1]
    if not t_end > 0:
        values = {k: 0.0 for k in EQUATIONS}
    else:
        ps, _, ps_x = psi.evaluate(grid.x, t, t_end, grid.length)
        wt = _trapz_weights(t) * grid.h
        dpsi = np.diff(ps, axis=0)
        values = {}
        for k in EQUATIONS:
            dens, fl, nc = sampled.dens[k], sampled.flux[k], sampled.nc[k]
            # u * dpsi/dt: trapezoid mean of u times the exact increment of psi
            # per interval, so the time term telescopes for stationary u
            time_term = grid.h * np.sum(0.5 * (dens[1:] + dens[:-1]) * dpsi)
            rest = np.dot(wt, (fl * ps_x - nc * ps).sum(axis=1))
            initial = grid.h * np.dot(dens[0], ps[0])
            values[k] = float(-time_term - rest - initial)
    return ResidualReport(values, traj.params.eps, grid.n_cells,
                          traj.params.mollifier_width, psi.description)


def residual_table(traj: Trajectory, psi_set: Sequence[TestFunction]) -> list[ResidualReport]:
    _check_cadence(traj)
    sampled = sample_trajectory(traj)
    return [weak_residual(traj, psi, sampled) for psi in psi_set]


@dataclass
class ConvergenceRow:
    eps: float
    n_cells: int
    residuals: dict[str, float]
    error: str | None = None


@dataclass
class ConvergenceTable:
    rows: list[ConvergenceRow] = field(default_factory=list)

    def ratios(self) -> list[dict[str, float]]:
        """``residual(eps_{k+1}) / residual(eps_k)`` for consecutive rows."""
        out = []
        for a, b in zip(self.rows, self.rows[1:]):
            out.append({k: (b.residuals[k] / a.residuals[k]) if a.residuals[k] else math.nan
                        for k in EQUATIONS})
        return out

    def strictly_decreasing(self) -> dict[str, bool]:
        return {k: all(b.residuals[k] < a.residuals[k] for a, b in zip(self.rows, self.rows[1:]))
                for k in EQUATIONS}

    def write_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["eps", "n_cells"] + [f"res_{k}" for k in EQUATIONS])
            for r in self.rows:
                w.writerow([repr(r.eps), r.n_cells] + [f"{r.residuals[k]:.17g}" for k in EQUATIONS])


def convergence_study(scenario: Callable[[float], Trajectory], eps_list: Sequence[float],
                      psi_set: Sequence[TestFunction] | None = None) -> ConvergenceTable:
    """Max-over-psi absolute residual per equation for each ``eps``.

    ``scenario(eps)`` must return a trajectory whose grid resolves the kernel
    of that ``eps``.  A failing run yields a row of NaNs carrying the error.
    """
    psi_set = list(psi_set) if psi_set is not None else default_test_functions()
    table = ConvergenceTable()
    for eps in eps_list:
        try:
            traj = scenario(eps)
            reports = residual_table(traj, psi_set)
        except Exception as exc:  # recorded per row; other eps still run
            log.error("eps=%g failed: %s", eps, exc)
            table.rows.append(ConvergenceRow(eps, -1, {k: math.nan for k in EQUATIONS}, str(exc)))
            continue
        res = {k: max(abs(r.values[k]) for r in reports) for k in EQUATIONS}
        table.rows.append(ConvergenceRow(eps, traj.grid.n_cells, res))
    return table


# -- conservation audit -----------------------------------------------------

MASS_TOL_SOURCE_FREE = 1e-12
MASS_TOL_WITH_SOURCE = 1e-10
MOMENTUM_TOL = 1e-11
ENERGY_TOL = 1e-11


@dataclass
class AuditReport:
    times: np.ndarray
    mass1: np.ndarray            # mean(r1) - kappa1 t
    mass2: np.ndarray
    momentum: np.ndarray         # h * sum(q1 + q2)
    energy: np.ndarray           # h * sum(en1 + en2) - 2 kappa2 t
    mass_drift: tuple[float, float]
    momentum_drift: float
    energy_drift: float
    min_density: float
    clamp_events: int
    breaches: list[str]

    @property
    def passed(self) -> bool:
        return not self.breaches

    def rows(self):
        for i, t in enumerate(self.times):
            yield (t, self.mass1[i], self.mass2[i], self.momentum[i], self.energy[i])

    def write_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["t", "mass1_corrected", "mass2_corrected", "momentum", "energy_corrected"])
            for row in self.rows():
                w.writerow([f"{v:.17g}" for v in row])

    def summary(self) -> str:
        lines = [
            f"mass drift (relative): fluid1 {self.mass_drift[0]:.3e}, fluid2 {self.mass_drift[1]:.3e}",
            f"mixture momentum drift (relative): {self.momentum_drift:.3e}",
            f"mixture energy drift (relative): {self.energy_drift:.3e}",
            f"min partial density: {self.min_density:.6g}; clamp events: {self.clamp_events}",
        ]
        lines += [f"BREACH: {b}" for b in self.breaches] or ["all conservation checks passed"]
        return "\n".join(lines)


def momentum_scale(states) -> float:
    """Size of the momentum field: max over snapshots of ``h * sum(|q1| + |q2|)``."""
    scale = max(s.grid.h * float(np.sum(np.abs(s.q1) + np.abs(s.q2))) for s in states)
    if scale == 0.0:
        scale = max(s.grid.h * float(np.sum(s.r1 + s.r2)) for s in states)
    return scale


def conservation_audit(traj: Trajectory) -> AuditReport:
    """Time series of the discrete invariants and any breach of their tolerances."""
    kap1, kap2 = traj.params.kappa1, traj.params.kappa2
    r_min = traj.params.r_min
    t = np.asarray(traj.times)
    h = traj.grid.h
    m1 = np.array([np.mean(s.r1) for s in traj.states]) - kap1 * t
    m2 = np.array([np.mean(s.r2) for s in traj.states]) - kap1 * t
    mom = np.array([h * np.sum(s.q1 + s.q2) for s in traj.states])
    en = np.array([h * np.sum(s.en1 + s.en2) for s in traj.states]) - 2.0 * kap2 * t * traj.grid.length
    mass_drift = (float(np.max(np.abs(m1 - m1[0])) / abs(m1[0])),
                  float(np.max(np.abs(m2 - m2[0])) / abs(m2[0])))
    mom_drift = float(np.max(np.abs(mom - mom[0]))) / momentum_scale(traj.states)
    en_drift = float(np.max(np.abs(en - en[0])) / abs(en[0]))
    min_r = float(min(min(s.r1.min(), s.r2.min()) for s in traj.states))

    mass_tol = MASS_TOL_SOURCE_FREE if kap1 == 0 else MASS_TOL_WITH_SOURCE
    breaches = []
    for i, d in enumerate(mass_drift, start=1):
        if d > mass_tol:
            breaches.append(f"mass of fluid {i} drifted by {d:.3e} > {mass_tol:g}")
    if mom_drift > MOMENTUM_TOL:
        breaches.append(f"mixture momentum drifted by {mom_drift:.3e} > {MOMENTUM_TOL:g}")
    if en_drift > ENERGY_TOL:
        breaches.append(f"mixture energy drifted by {en_drift:.3e} > {ENERGY_TOL:g}")
    if min_r < r_min:
        breaches.append(f"partial density {min_r:.3e} below r_min={r_min:g}")
    if traj.clamp_events:
        breaches.append(f"{traj.clamp_events} positivity clamp events")
    return AuditReport(t, m1, m2, mom, en, mass_drift, mom_drift, en_drift, min_r,
                       traj.clamp_events, breaches)
