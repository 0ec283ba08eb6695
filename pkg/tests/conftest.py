import numpy as np
import pytest

from twofluid.closure import conserved_from_primitive
from twofluid.core import FluidEos, Grid, MixtureState


def random_primitive_state(rng, grid, eos, v_scale=0.3, v_shift=0.0):
    """Smooth random admissible state built from primitive variables."""
    x = grid.x
    n = grid.n_cells

    def smooth(lo, hi):
        c = rng.uniform(-1, 1, 3)
        ph = rng.uniform(0, 2 * np.pi, 3)
        f = sum(ci * np.sin(2 * np.pi * (k + 1) * x + p) for k, (ci, p) in enumerate(zip(c, ph)))
        f = (f - f.min()) / (np.ptp(f) + 1e-300)
        return lo + (hi - lo) * f

    p = smooth(0.8, 1.5)
    alpha1 = smooth(0.3, 0.7)
    rho1 = smooth(0.8, 1.2)
    rho2 = smooth(1.5, 2.5)
    v1 = v_shift + v_scale * smooth(-1, 1)
    v2 = v_shift + v_scale * smooth(-1, 1)
    c = conserved_from_primitive(p, alpha1, rho1, rho2, v1, v2, eos)
    assert len(c.r1) == n
    return MixtureState(grid, c.r1, c.r2, c.q1, c.q2, c.en1, c.en2)


@pytest.fixture
def rng():
    return np.random.default_rng(20240531)


@pytest.fixture
def gas_liquid():
    return FluidEos(1.4, 2.8, 0.0, 0.5)


@pytest.fixture
def rest_state():
    eos = FluidEos(1.4, 2.8)
    grid = Grid(32)
    c = conserved_from_primitive(1.0, 0.5, 1.0, 2.0, 0.0, 0.0, eos)
    return MixtureState.uniform(grid, c.r1, c.r2, c.q1, c.q2, c.en1, c.en2), eos


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
