import numpy as np
import pytest

import twofluid.integrate as integrate
from twofluid.closure import ClosureError
from twofluid.core import FluidEos, Grid, SchemeParams
from twofluid.integrate import RunFailure, Trajectory, run, stable_dt

from conftest import random_primitive_state


def test_zero_end_time_gives_single_snapshot(rest_state):
    state, eos = rest_state
    traj = run(state, 0.0, eos, SchemeParams(eps=2 * state.grid.h))
    assert traj.times == [0.0]
    assert traj.final is state


def test_negative_end_time_rejected(rest_state):
    state, eos = rest_state
    with pytest.raises(ValueError):
        run(state, -1.0, eos, SchemeParams(eps=2 * state.grid.h))


def test_rest_state_is_unchanged(rest_state):
    state, eos = rest_state
    params = SchemeParams(eps=2 * state.grid.h, kappa1=0.0, kappa2=0.0)
    traj = run(state, 1.0, eos, params, snapshot_every=0.25)
    assert traj.times == [0.0, 0.25, 0.5, 0.75, 1.0]
    np.testing.assert_array_equal(traj.final.as_array(), state.as_array())


def test_snapshots_land_on_cadence(rng):
    eos = FluidEos(1.4, 2.8, 0.0, 0.5)
    g = Grid(64)
    state = random_primitive_state(rng, g, eos)
    params = SchemeParams(eps=2 * g.h)
    dt = stable_dt(state, eos, params)
    every = 2.5 * dt
    t_end = 10.3 * dt
    traj = run(state, t_end, eos, params, snapshot_every=every)
    expected = [0.0] + [k * every for k in range(1, 5)] + [t_end]
    np.testing.assert_allclose(traj.times, expected, rtol=1e-13)
    assert traj.times[-1] == t_end
    assert all(b > a for a, b in zip(traj.times, traj.times[1:]))
    # every step recorded when no cadence is given
    full = run(state, t_end, eos, params)
    assert len(full.times) == len(full.dts) + 1


def test_mass_momentum_energy_over_ten_steps(rng):
    eos = FluidEos(1.4, 2.8, 0.0, 0.5)
    g = Grid(64)
    state = random_primitive_state(rng, g, eos)
    params = SchemeParams(eps=2 * g.h, kappa1=0.0, kappa2=0.0)
    dt = stable_dt(state, eos, params)
    traj = run(state, 10 * dt * 0.999, eos, params)
    s0, s1 = traj.states[0], traj.final
    mom_scale = np.sum(np.abs(s0.q1) + np.abs(s0.q2))
    assert abs(np.sum(s1.q1 + s1.q2) - np.sum(s0.q1 + s0.q2)) <= 1e-13 * mom_scale
    assert abs(np.mean(s1.r1) - np.mean(s0.r1)) <= 1e-14 * np.mean(s0.r1)
    assert abs(np.sum(s1.en1 + s1.en2) - np.sum(s0.en1 + s0.en2)) <= 1e-13 * np.sum(s0.en1 + s0.en2)


def test_constant_mass_source_is_integrated_exactly(rng):
    eos = FluidEos(1.4, 2.8, 0.0, 0.5)
    g = Grid(64)
    state = random_primitive_state(rng, g, eos)
    params = SchemeParams(eps=2 * g.h, kappa1=1e-2, kappa2=0.0)
    traj = run(state, 0.05, eos, params)
    for t, s in zip(traj.times, traj.states):
        assert np.mean(s.r2) - 1e-2 * t == pytest.approx(np.mean(state.r2), rel=1e-13)


def test_lagged_mode_runs_and_stays_close(rng):
    eos = FluidEos(1.4, 2.8, 0.0, 0.5)
    g = Grid(64)
    state = random_primitive_state(rng, g, eos, v_scale=0.1)
    exact = run(state, 0.02, eos, SchemeParams(eps=2 * g.h))
    lagged = run(state, 0.02, eos, SchemeParams(eps=2 * g.h, alpha_coupling="lagged"))
    diff = np.max(np.abs(exact.final.as_array() - lagged.final.as_array()))
    assert 0 < diff < 1e-2 * np.max(np.abs(state.as_array()))


def test_failure_returns_last_good_state(rng, monkeypatch):
    eos = FluidEos(1.4, 2.8, 0.0, 0.5)
    g = Grid(64)
    state = random_primitive_state(rng, g, eos)
    params = SchemeParams(eps=2 * g.h)
    real_rhs = integrate.rhs
    calls = {"n": 0}

    def flaky(*a, **k):
        calls["n"] += 1
        if calls["n"] > 9:  # fails inside the third step
            raise ClosureError("non-physical internal energy", [5])
        return real_rhs(*a, **k)

    monkeypatch.setattr(integrate, "rhs", flaky)
    with pytest.raises(RunFailure, match="stage 2") as info:
        run(state, 1.0, eos, params, snapshot_every=1.0)
    traj = info.value.trajectory
    assert len(traj.dts) == 2
    assert traj.times[-1] == pytest.approx(sum(traj.dts))
    assert "cell(s) 5" in str(info.value)


def test_max_steps_exhausted(rest_state):
    state, eos = rest_state
    with pytest.raises(RunFailure, match="max_steps"):
        run(state, 1.0, eos, SchemeParams(eps=2 * state.grid.h), max_steps=3)


def test_clamp_events_are_counted(rng, monkeypatch):
    eos = FluidEos(1.4, 2.8, 0.0, 0.5)
    g = Grid(64)
    state = random_primitive_state(rng, g, eos)
    params = SchemeParams(eps=2 * g.h, r_min=1e-8)
    assert run(state, 1e-3, eos, params).clamp_events == 0

    real_step = integrate.step_rk4

    def leaky(*a, **k):
        new = real_step(*a, **k)
        arr = new.as_array().copy()
        arr[0, 3] = 1e-12
        return type(new).from_array(g, arr)

    monkeypatch.setattr(integrate, "step_rk4", leaky)
    dt = stable_dt(state, eos, params)
    traj = run(state, 0.5 * dt, eos, params)
    assert traj.clamp_events == 1
    assert traj.final.r1[3] == 1e-8


def test_trajectory_nearest_and_ordering(rest_state):
    state, eos = rest_state
    traj = Trajectory(state.grid, eos, SchemeParams(eps=2 * state.grid.h))
    traj.append(0.0, state)
    traj.append(0.5, state)
    assert traj.nearest(0.3)[0] == 0.5
    assert traj.nearest(0.2)[0] == 0.0
    with pytest.raises(ValueError, match="outside"):
        traj.nearest(0.6)
    with pytest.raises(ValueError, match="increase"):
        traj.append(0.5, state)


def test_long_shock_tube_run_stays_bounded():
    # the default kernel has a non-negative Fourier transform; with the plain bump this run
    # develops mollifier-scale growth (pressure overshoots several-fold)
    from twofluid.closure import close_state
    from twofluid.driver.scenarios import RiemannScenario, preset

    pr = preset("toumi")
    traj = RiemannScenario(pr, 0.04, snapshot_every=0.04)(1 / 100)
    cl = close_state(traj.final, traj.eos)
    assert traj.clamp_events == 0
    assert 0.9 * pr.right.p < cl.p.min() and cl.p.max() < 1.1 * pr.left.p
