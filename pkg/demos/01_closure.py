# %% [markdown]
# # Pressure equilibrium of two stiffened gases
#
# Each cell stores partial densities, momenta and total energies of the two
# phases.  The shared pressure and the volume fractions are not stored; they
# come from requiring both stiffened-gas laws to give the same pressure while
# the volume fractions add up to one.

# %%
import numpy as np

from twofluid.closure import (CellConserved, bisection_oracle, close_cell, closure_sensitivity,
                              conserved_from_primitive, kinetic_deficit, solve_pressure_alpha)
from twofluid.core import FluidEos

# %% [markdown]
# ## Closed form against bisection
#
# With ``A_i = (K_i - 1)(E_i - q_i^2 / 2 r_i)`` and ``B_i = K_i p_inf_i`` the
# compatibility condition is ``A1/(p+B1) + A2/(p+B2) = 1``, a quadratic in
# ``p``.  A bisection on the volume fraction is an independent check.

# %%
eos = FluidEos(k1=1.5, k2=1.5, pinf1=2.0, pinf2=0.0)   # B1 = 3, B2 = 0
p, alpha1 = solve_pressure_alpha(2.0, 1.0, eos)
p_b, alpha1_b = bisection_oracle(2.0, 1.0, eos)
print(f"closed form: p = {p:.12f}  alpha1 = {alpha1:.12f}")
print(f"bisection  : p = {p_b:.12f}  alpha1 = {alpha1_b:.12f}")
print(f"sqrt(3)    :     {np.sqrt(3):.12f}")

# %% [markdown]
# ## Water and air at 20 MPa
#
# Build a cell from primitive variables and recover them.

# %%
water_air = FluidEos(k1=1.4, k2=2.8, pinf1=0.0, pinf2=85.0)   # scaled: 1 = 10 MPa
cell = conserved_from_primitive(p=2.0, alpha1=0.25, rho1=0.226, rho2=1.047,
                                v1=0.3, v2=-0.1, eos=water_air)
cl = close_cell(cell, water_air)
print(f"p = {cl.p:.12g}, alpha_gas = {cl.alpha1:.12g}, v = ({cl.v1:.3g}, {cl.v2:.3g})")

# %% [markdown]
# ## How the volume fraction responds
#
# The implicit derivatives of ``alpha1`` are what the scheme uses to turn the
# ``p dalpha/dt`` work term into an explicit right-hand side.  Compare them
# with central differences.

# %%
sens = closure_sensitivity(cell, water_air)
for name in ("r1", "r2", "q1", "q2", "en1", "en2"):
    u = getattr(cell, name)
    h = 1e-6 * max(abs(u), 1.0)
    up = close_cell(cell.replace(**{name: u + h}), water_air).alpha1
    dn = close_cell(cell.replace(**{name: u - h}), water_air).alpha1
    print(f"d alpha1 / d {name:3s}: analytic {getattr(sens, name): .6e}   "
          f"central difference {(up - dn) / (2 * h): .6e}")

# %% [markdown]
# Energy at rest drives the gas fraction up; a negative internal energy is
# refused rather than clamped.

# %%
bad = CellConserved(1.0, 1.0, 2.0, 0.0, 1.9, 100.0)
print(kinetic_deficit(bad, water_air, check=False))
try:
    close_cell(bad, water_air)
except ArithmeticError as exc:
    print("refused:", exc)
