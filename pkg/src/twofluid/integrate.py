"""Explicit time integration of the semi-discrete system."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .closure import ClosureError, close_state
from .core import FluidEos, Grid, MixtureState, SchemeParams
from .scheme import SchemeError, rhs

log = logging.getLogger(__name__)

DT_MAX = 1.0


class StepFailure(ArithmeticError):
    """A Runge-Kutta stage could not be evaluated."""

    def __init__(self, stage: int, cause: Exception):
        self.stage = stage
        self.cause = cause
        super().__init__(f"stage {stage}: {cause}")


class RunFailure(RuntimeError):
    """Time stepping aborted; ``trajectory`` ends at the last good state."""

    def __init__(self, message: str, trajectory: "Trajectory"):
        self.trajectory = trajectory
        super().__init__(message)


@dataclass(eq=False)
class Trajectory:
    grid: Grid
    eos: FluidEos
    params: SchemeParams
    times: list[float] = field(default_factory=list)
    states: list[MixtureState] = field(default_factory=list)
    dts: list[float] = field(default_factory=list)
    clamp_events: int = 0
    metadata: dict = field(default_factory=dict)

    def append(self, t: float, state: MixtureState):
        if self.times and not t > self.times[-1]:
            raise ValueError(f"snapshot times must increase: {t} after {self.times[-1]}")
        self.times.append(float(t))
        self.states.append(state)

    @property
    def final(self) -> MixtureState:
        return self.states[-1]

    def nearest(self, t: float) -> tuple[float, MixtureState]:
        if not self.times:
            raise ValueError("empty trajectory")
        lo, hi = self.times[0], self.times[-1]
        tol = 1e-12 * max(1.0, abs(hi))
        if t < lo - tol or t > hi + tol:
            raise ValueError(f"time {t} outside trajectory range [{lo}, {hi}]")
        i = int(np.argmin(np.abs(np.asarray(self.times) - t)))
        return self.times[i], self.states[i]


def wave_speed(state: MixtureState, eos: FluidEos, r_min: float = 0.0) -> float:
    """Largest ``|v_i| + c`` with ``c = max_i sqrt(K_i (p + p_inf_i) / rho_i)``."""
    cl = close_state(state, eos, r_min)
    c1 = np.sqrt(eos.k1 * (cl.p + eos.pinf1) / cl.rho1)
    c2 = np.sqrt(eos.k2 * (cl.p + eos.pinf2) / cl.rho2)
    c_mix = float(max(np.max(c1), np.max(c2)))
    vmax = float(max(np.max(np.abs(cl.v1)), np.max(np.abs(cl.v2))))
    return vmax + c_mix


def stable_dt(state: MixtureState, eos: FluidEos, params: SchemeParams,
              dt_max: float = DT_MAX) -> float:
    speed = wave_speed(state, eos, params.r_min)
    if not speed > 0:
        log.warning("zero wave speed; falling back to dt_max=%g", dt_max)
        return dt_max
    return min(params.cfl * params.eps / speed, dt_max)


def _rk4(f, y: np.ndarray, dt: float) -> np.ndarray:
    k1 = f(y, 1)
    k2 = f(y + 0.5 * dt * k1, 2)
    k3 = f(y + 0.5 * dt * k2, 3)
    k4 = f(y + dt * k3, 4)
    return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def step_rk4(state: MixtureState, dt: float, eos: FluidEos, params: SchemeParams,
             dalpha1_lagged: np.ndarray | None = None) -> MixtureState:
    """One classical four-stage step; stage failures raise :class:`StepFailure`."""
    grid = state.grid

    def f(y, stage):
        try:
            s = MixtureState.from_array(grid, y)
            return rhs(s, eos, params, dalpha1_lagged).as_array()
        except (ClosureError, SchemeError, FloatingPointError) as exc:
            raise StepFailure(stage, exc) from exc

    y1 = _rk4(f, state.as_array(), dt)
    return MixtureState.from_array(grid, y1)


def _clamp(state: MixtureState, r_min: float) -> tuple[MixtureState, int]:
    low1 = state.r1 < r_min
    low2 = state.r2 < r_min
    n = int(low1.sum() + low2.sum())
    if n == 0:
        return state, 0
    arr = state.as_array().copy()
    arr[0][low1] = r_min
    arr[1][low2] = r_min
    return MixtureState.from_array(state.grid, arr), n


def run(initial: MixtureState, t_end: float, eos: FluidEos, params: SchemeParams,
        snapshot_every: float | None = None, max_steps: int = 10_000_000) -> Trajectory:
    """Integrate from ``t = 0`` to ``t_end``.

    ``snapshot_every`` of ``None`` or ``0`` records every step.  Steps are
    shortened to land exactly on snapshot times and on ``t_end``.  Partial
    densities that fall below ``r_min`` are clamped and counted in
    ``Trajectory.clamp_events``.
    """
    if t_end < 0:
        raise ValueError("t_end must be non-negative")
    traj = Trajectory(initial.grid, eos, params)
    traj.append(0.0, initial)
    if t_end == 0:
        return traj

    every = snapshot_every if snapshot_every else None
    n_snap = 1
    next_snap = every if every else math.inf
    t = 0.0
    state = initial
    prev_alpha = None
    prev_dt = None
    for n in range(max_steps):
        if t >= t_end:
            break
        try:
            dt = stable_dt(state, eos, params)
        except ClosureError as exc:
            raise RunFailure(f"step {n} at t={t:.6g}: {exc}", traj) from exc
        target = min(t_end, next_snap)
        hit = t + dt >= target * (1 - 1e-12)
        if hit:
            dt = target - t
        lagged = None
        if params.alpha_coupling == "lagged":
            alpha = close_state(state, eos).alpha1
            if prev_alpha is not None:
                lagged = (alpha - prev_alpha) / prev_dt
            prev_alpha = alpha
        try:
            new = step_rk4(state, dt, eos, params, lagged)
        except StepFailure as exc:
            if traj.times[-1] < t:
                traj.append(t, state)
            raise RunFailure(f"step {n} at t={t:.6g}, dt={dt:.3g}: {exc}", traj) from exc
        if not np.all(np.isfinite(new.as_array())):
            if traj.times[-1] < t:
                traj.append(t, state)
            raise RunFailure(f"step {n} at t={t:.6g}: non-finite state", traj)
        new, clamped = _clamp(new, params.r_min)
        if clamped:
            log.warning("t=%.6g: clamped %d partial densities to r_min=%g", t + dt, clamped,
                        params.r_min)
            traj.clamp_events += clamped
        state = new
        t = target if hit else t + dt
        prev_dt = dt
        traj.dts.append(dt)
        if every is None or (hit and t == next_snap) or t == t_end:
            traj.append(t, state)
        if hit and t == next_snap:
            n_snap += 1
            next_snap = n_snap * every
    else:
        raise RunFailure(f"max_steps={max_steps} reached before t_end", traj)
    return traj
