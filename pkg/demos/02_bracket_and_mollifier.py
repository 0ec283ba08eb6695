# %% [markdown]
# # The upwind bracket and the mollified gradient
#
# Transport uses a stencil of width ``eps`` that looks upstream according to
# the sign of the velocity.  Pressure gradients are taken from the pressure
# smoothed at the wider scale ``eps**lam``.

# %%
import numpy as np

from twofluid.core import Grid
from twofluid.mollifier import kernel_profile, make_kernel, mollified_gradient, mollify
from twofluid.scheme import upwind_bracket

# %% [markdown]
# ## Upwinding on four cells

# %%
V = np.array([0.0, 1.0, 2.0, 1.0])
print("v = +1:", upwind_bracket(V, np.ones(4), 0.25, m=1))
print("v = -1:", upwind_bracket(V, -np.ones(4), 0.25, m=1))

# %% [markdown]
# The bracket is a difference of fluxes, so it sums to zero on the torus for
# any pair of fields: this is why mass is conserved to roundoff.

# %%
rng = np.random.default_rng(0)
g = Grid(256)
V, v = rng.normal(size=256), rng.normal(size=256)
print("sum of bracket:", np.sum(upwind_bracket(V, v, 4 * g.h, g)))

# %% [markdown]
# ## Kernel shapes
#
# Both shapes are even, positive, smooth and of unit mass.  The default is the
# bump convolved with itself, whose Fourier transform is non-negative; the plain
# bump's transform has negative lobes, which the scheme turns into growing
# modes at the smoothing scale.

# %%
from scipy import integrate

for shape in ("bump", "bump2"):
    phi, _ = kernel_profile(shape)
    lobes = [integrate.quad(lambda s: phi([s])[0] * np.cos(w * s), -1, 1, limit=200)[0]
             for w in np.linspace(0, 40, 81)]
    print(f"{shape:6s}: smallest Fourier coefficient {min(lobes): .3e}")

# %% [markdown]
# ## Smoothing and differentiating a step

# %%
g = Grid(400)
k = make_kernel(eps=0.01, lam=0.5, grid=g)
step = np.where((g.x >= 0.25) & (g.x < 0.75), 2.0, 1.0)
print("half width in cells:", k.half_width_cells)
print("mean preserved:", np.mean(mollify(step, k)) - np.mean(step))
d = mollified_gradient(step, k)
print("integral of gradient over the left edge:", g.h * d[g.x < 0.5].sum())

try:
    import matplotlib.pyplot as plt
except ImportError:
    plt = None
if plt is not None:
    fig, ax = plt.subplots(2, 1, sharex=True, figsize=(6, 5))
    ax[0].plot(g.x, step, label="step")
    ax[0].plot(g.x, mollify(step, k), label="mollified")
    ax[0].legend()
    ax[1].plot(g.x, d, label="mollified gradient")
    ax[1].legend()
    fig.savefig("mollifier.png", dpi=120)
    print("wrote mollifier.png")
