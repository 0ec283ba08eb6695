import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from twofluid.core import Grid
from twofluid.mollifier import (KernelError, SHAPES, kernel_profile, make_kernel,
                                mollified_gradient, mollify)

SHAPE_NAMES = sorted(SHAPES)


@pytest.mark.parametrize("shape", SHAPE_NAMES)
@pytest.mark.parametrize("n, eps, lam", [(400, 0.01, 0.5), (200, 0.02, 0.5), (1000, 0.004, 0.3),
                                         (64, 1 / 16, 0.5), (800, 0.005, 0.7)])
def test_weights_normalization_and_symmetry(shape, n, eps, lam):
    k = make_kernel(eps, lam, Grid(n), shape)
    assert math.fsum(k.weights) == 1.0
    assert math.fsum(k.dweights) == 0.0
    np.testing.assert_array_equal(k.weights, k.weights[::-1])
    np.testing.assert_array_equal(k.dweights, -k.dweights[::-1])
    assert np.all(k.weights >= 0)
    assert len(k.weights) == 2 * k.half_width_cells + 1


def test_half_width_example():
    k = make_kernel(0.01, 0.5, Grid(400))
    assert k.half_width_cells == 40
    assert k.width == pytest.approx(0.1)


def test_under_resolved_kernel():
    with pytest.raises(KernelError, match="kernel under-resolved"):
        make_kernel(0.01, 0.5, Grid(10))


def test_unknown_shape():
    with pytest.raises(KernelError, match="unknown kernel shape"):
        make_kernel(0.01, 0.5, Grid(400), "gaussian")


@pytest.mark.parametrize("shape", SHAPE_NAMES)
def test_profile_is_even_positive_unit_mass(shape):
    phi, dphi = kernel_profile(shape)
    mass = integrate.quad(lambda t: phi([t])[0], -1, 1, epsabs=1e-13)[0]
    assert mass == pytest.approx(1.0, abs=1e-10)
    y = np.linspace(-0.999, 0.999, 501)
    np.testing.assert_allclose(phi(y), phi(-y), rtol=1e-12, atol=1e-300)
    assert np.all(phi(y) >= 0) and np.all(phi(y[np.abs(y) < 0.9]) > 0)
    assert phi(np.array([-1.0, 1.0, 1.5])).tolist() == [0.0, 0.0, 0.0]
    # derivative consistent with a central difference of the profile
    yy = np.linspace(-0.9, 0.9, 37)
    fd = (phi(yy + 1e-6) - phi(yy - 1e-6)) / 2e-6
    np.testing.assert_allclose(dphi(yy), fd, rtol=1e-5, atol=1e-8)


def test_bump2_has_non_negative_fourier_transform():
    phi, _ = kernel_profile("bump2")
    for w in np.linspace(0, 60, 121):
        c = integrate.quad(lambda t: phi([t])[0] * math.cos(w * t), -1, 1, limit=200)[0]
        assert c >= -1e-12
    phi1, _ = kernel_profile("bump")
    # the plain bump's transform changes sign
    vals = [integrate.quad(lambda t: phi1([t])[0] * math.cos(w * t), -1, 1, limit=200)[0]
            for w in np.linspace(0, 60, 121)]
    assert min(vals) < 0


@pytest.mark.parametrize("shape", SHAPE_NAMES)
def test_constant_field(shape):
    k = make_kernel(0.01, 0.5, Grid(400), shape)
    f = np.full(400, 3.25)
    np.testing.assert_allclose(mollify(f, k), 3.25, rtol=2e-16 * 90)
    assert np.max(np.abs(mollified_gradient(f, k))) <= 1e-12


@pytest.mark.parametrize("shape", SHAPE_NAMES)
def test_impulse_response(shape):
    g = Grid(200)
    k = make_kernel(0.02, 0.5, g, shape)
    j = 57
    f = np.zeros(200)
    f[j] = 1.0
    out = mollify(f, k)
    idx = (j + k.offsets) % 200
    np.testing.assert_array_equal(out[idx], k.weights)
    mask = np.ones(200, bool)
    mask[idx] = False
    assert np.all(out[mask] == 0)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_mean_preserved(seed):
    rng = np.random.default_rng(seed)
    k = make_kernel(0.01, 0.5, Grid(400))
    f = rng.normal(size=400)
    assert np.mean(mollify(f, k)) == pytest.approx(np.mean(f), abs=1e-15)
    assert abs(np.sum(mollified_gradient(f, k))) <= 1e-12 * np.sum(np.abs(f)) * 400


@pytest.mark.parametrize("shape", SHAPE_NAMES)
def test_ramp_gradient_is_one(shape):
    g = Grid(400)
    k = make_kernel(0.01, 0.5, g, shape)
    ramp = g.x.copy()
    d = mollified_gradient(ramp, k)
    interior = slice(k.half_width_cells, 400 - k.half_width_cells)
    np.testing.assert_allclose(d[interior], 1.0, rtol=1e-12)


@pytest.mark.parametrize("shape", SHAPE_NAMES)
def test_gradient_of_sine_matches_quadrature(shape):
    n, eps, lam = 4000, 0.0025, 0.5
    g = Grid(n)
    k = make_kernel(eps, lam, g, shape)
    mu = k.width
    phi, _ = kernel_profile(shape)
    # d/dx (sin(2 pi .) * phi_mu)(x) = beta * 2 pi cos(2 pi x), beta = int phi(s) cos(2 pi mu s) ds
    beta = integrate.quad(lambda s: phi([s])[0] * math.cos(2 * math.pi * mu * s), -1, 1,
                          epsabs=1e-14)[0]
    assert 0 < beta <= 1
    got = mollified_gradient(np.sin(2 * np.pi * g.x), k)
    np.testing.assert_allclose(got, beta * 2 * np.pi * np.cos(2 * np.pi * g.x), atol=1e-4 * 2 * np.pi)


@given(st.integers(0, 2**32 - 1))
def test_reflection_antisymmetry(seed):
    rng = np.random.default_rng(seed)
    k = make_kernel(0.02, 0.5, Grid(100))
    f = rng.normal(size=100)
    # reflection x -> -x on the torus maps cell j to cell -j
    refl = lambda a: np.roll(a[::-1], 1)  # noqa: E731
    np.testing.assert_allclose(mollified_gradient(refl(f), k), -refl(mollified_gradient(f, k)),
                               atol=1e-12)
