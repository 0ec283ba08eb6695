# %% [markdown]
# # Water-gas shock tube
#
# A 100 m tube with 20 MPa on one side of the diaphragm and 10 MPa on the
# other, both phases at rest.  The tube is mirrored onto the unit torus: the
# high-pressure state sits on [0.25, 0.75), so x in [0.5, 1) shows one copy of
# the tube with the diaphragm at x = 0.75.

# %%
import numpy as np

from twofluid.closure import close_state
from twofluid.driver.scenarios import RiemannScenario, preset
from twofluid.scheme import mollified_pressure
from twofluid.verify import conservation_audit

toumi = preset("toumi")
print(toumi.description)
print("left :", toumi.left)
print("right:", toumi.right)

# %% [markdown]
# ## Three stencil widths
#
# The grid keeps four cells per stencil width and the pressure is smoothed
# over ``sqrt(eps)``.

# %%
runs = {}
for eps in (1 / 50, 1 / 100, 1 / 200):
    traj = RiemannScenario(toumi, toumi.t_end, snapshot_every=toumi.t_end / 4)(eps)
    runs[eps] = traj
    audit = conservation_audit(traj)
    print(f"eps = 1/{round(1 / eps)}: {len(traj.dts)} steps, audit passed: {audit.passed}")

# %% [markdown]
# ## Peaks in the phase velocities
#
# Both phases accelerate away from the high-pressure side and develop a sharp
# peak near the contact.  The peaks sharpen as ``eps`` decreases.

# %%
for eps, traj in runs.items():
    s = traj.final
    cl = close_state(s, traj.eos)
    half = s.grid.x >= 0.5
    i1 = np.argmax(np.abs(cl.v1[half]))
    i2 = np.argmax(np.abs(cl.v2[half]))
    x = s.grid.x[half]
    print(f"eps = 1/{round(1 / eps)}: gas peak {cl.v1[half][i1]:.3f} at x = {x[i1]:.4f}, "
          f"liquid peak {cl.v2[half][i2]:.3f} at x = {x[i2]:.4f}")

# %% [markdown]
# Velocities are in units of 100 m/s and pressures in units of 10 MPa.

# %%
try:
    import matplotlib.pyplot as plt
except ImportError:
    plt = None
if plt is not None:
    fig, ax = plt.subplots(3, 1, sharex=True, figsize=(7, 8))
    for eps, traj in runs.items():
        s = traj.final
        cl = close_state(s, traj.eos)
        x = s.grid.x
        half = x >= 0.5
        lab = f"eps = 1/{round(1 / eps)}"
        ax[0].plot(x[half], mollified_pressure(s, traj.eos, traj.params)[half], label=lab)
        ax[1].plot(x[half], cl.v1[half], label=lab)
        ax[2].plot(x[half], cl.v2[half], label=lab)
    ax[0].set_ylabel("mollified p")
    ax[1].set_ylabel("gas velocity")
    ax[2].set_ylabel("liquid velocity")
    ax[2].set_xlabel("x")
    ax[0].legend()
    fig.tight_layout()
    fig.savefig("toumi.png", dpi=120)
    print("wrote toumi.png")
