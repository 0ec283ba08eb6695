"""Discrete mollifiers on the periodic grid.

A kernel of width ``mu = eps**lam`` is sampled at the grid offsets
``k * h`` for ``|k| <= ceil(mu / h)``.  Smoothing weights are renormalized to
sum to one; derivative weights are antisymmetrized and scaled so that the
discrete gradient of a linear ramp is exactly one.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, ndimage

from .core import Grid, KernelSpec


class KernelError(ValueError):
    pass


def _bump(x):
    out = np.zeros_like(x, dtype=float)
    inside = np.abs(x) < 1.0
    xi = x[inside]
    out[inside] = np.exp(-1.0 / (1.0 - xi * xi))
    return out


def _dbump(x):
    out = np.zeros_like(x, dtype=float)
    inside = np.abs(x) < 1.0
    xi = x[inside]
    s = 1.0 - xi * xi
    out[inside] = np.exp(-1.0 / s) * (-2.0 * xi / (s * s))
    return out


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(200)


def _self_convolved(f, g):
    """``y -> 2 (f * g)(2 y)``: support (-1, 1), mass = mass(f) * mass(g)."""
    def conv(y):
        y = np.atleast_1d(np.asarray(y, dtype=float))
        z = 2.0 * y
        lo = np.maximum(-1.0, z - 1.0)
        hi = np.minimum(1.0, z + 1.0)
        half = 0.5 * np.clip(hi - lo, 0.0, None)
        mid = 0.5 * (hi + lo)
        s = mid[:, None] + half[:, None] * _GL_NODES[None, :]
        vals = f(s.ravel()).reshape(s.shape) * g((z[:, None] - s).ravel()).reshape(s.shape)
        return 2.0 * half * (vals @ _GL_WEIGHTS)
    return conv


def _bump2(y):
    return _self_convolved(_bump, _bump)(y)


def _dbump2(y):
    # d/dy [2 (f*f)(2y)] = 4 (f*f')(2y)
    return 2.0 * _self_convolved(_bump, _dbump)(y)


SHAPES = {
    # name: (phi, phi'), both unnormalized on (-1, 1)
    "bump": (_bump, _dbump),
    # bump convolved with itself: non-negative Fourier transform
    "bump2": (_bump2, _dbump2),
}


def kernel_profile(shape: str = "bump"):
    """Return normalized ``(phi, dphi)`` on the reference support (-1, 1)."""
    try:
        phi, dphi = SHAPES[shape]
    except KeyError:
        raise KernelError(f"unknown kernel shape {shape!r}; known: {sorted(SHAPES)}") from None
    mass = integrate.quad(lambda t: phi(np.array([t]))[0], -1.0, 1.0, epsabs=1e-13)[0]
    return (lambda x: phi(np.asarray(x, float)) / mass,
            lambda x: dphi(np.asarray(x, float)) / mass)


@dataclass(frozen=True, eq=False)
class MollifierKernel:
    half_width_cells: int
    width: float
    h: float
    weights: np.ndarray
    dweights: np.ndarray

    @property
    def offsets(self) -> np.ndarray:
        return np.arange(-self.half_width_cells, self.half_width_cells + 1)


def make_kernel(eps: float, lam: float, grid: Grid, shape: KernelSpec | str = "bump2"
                ) -> MollifierKernel:
    """Sample ``(phi)_mu`` and ``(phi')_mu`` with ``mu = eps**lam`` on ``grid``."""
    if isinstance(shape, KernelSpec):
        shape = shape.shape
    mu = eps ** lam
    h = grid.h
    if mu < 2 * h * (1 - 1e-12):
        raise KernelError(
            f"kernel under-resolved: eps**lambda={mu:.6g} < 2h={2 * h:.6g}")
    hw = int(math.ceil(mu / h - 1e-9))
    if 2 * hw + 1 > grid.n_cells:
        raise KernelError(
            f"kernel support {2 * hw + 1} cells exceeds the grid ({grid.n_cells} cells)")
    try:
        phi, dphi = SHAPES[shape]
    except KeyError:
        raise KernelError(f"unknown kernel shape {shape!r}; known: {sorted(SHAPES)}") from None
    k = np.arange(-hw, hw + 1)
    y = k * h / mu

    w = phi(y)
    w = 0.5 * (w + w[::-1])
    w /= w.sum()
    w[hw] += 1.0 - math.fsum(w)   # exact-sum correction on the (largest) centre weight

    # normalization constants cancel in the two rescalings below
    d = dphi(y) / (mu * mu) * h
    d = 0.5 * (d - d[::-1])
    # gradient of the ramp f(x) = x: sum_k d_k (x_j - k h) = -h sum_k k d_k
    first_moment = -h * np.dot(k, d)
    d /= first_moment

    w.setflags(write=False)
    d.setflags(write=False)
    return MollifierKernel(hw, mu, h, w, d)


def _periodic_convolve(f: np.ndarray, weights: np.ndarray) -> np.ndarray:
    # result[j] = sum_k weights[k] * f[j - k], k centered on the middle entry
    return ndimage.convolve1d(np.asarray(f, dtype=float), weights, mode="wrap")


def mollify(f: np.ndarray, kernel: MollifierKernel) -> np.ndarray:
    return _periodic_convolve(f, kernel.weights)


def mollified_gradient(f: np.ndarray, kernel: MollifierKernel) -> np.ndarray:
    """x-derivative of ``f * phi_mu``, computed as ``f * (phi_mu)'``."""
    return _periodic_convolve(f, kernel.dweights)
