# %% [markdown]
# # Do the approximate solutions satisfy the equations weakly?
#
# Plug each computed trajectory into the weak form of the six balance laws,
# paired with smooth test functions, and watch the residual as the stencil
# width goes to zero.

# %%
from twofluid.driver.scenarios import RiemannScenario, preset
from twofluid.verify import EQUATIONS, convergence_study, default_test_functions

toumi = preset("toumi")
psi = default_test_functions()
print("test functions:", ", ".join(p.description for p in psi))

# %%
scenario = RiemannScenario(toumi, toumi.t_end)
table = convergence_study(scenario, [1 / 50, 1 / 100, 1 / 200, 1 / 400], psi)

print("eps      " + "  ".join(f"{k:>9s}" for k in EQUATIONS))
for row in table.rows:
    print(f"1/{round(1 / row.eps):<6d} " + "  ".join(f"{row.residuals[k]:9.2e}" for k in EQUATIONS))

# %% [markdown]
# Ratios between consecutive rows: close to one half means first-order decay.

# %%
for r in table.ratios():
    print("  ".join(f"{r[k]:9.3f}" for k in EQUATIONS))
print("strictly decreasing:", table.strictly_decreasing())

# %% [markdown]
# The same study is available from the command line:
#
#     twofluid converge toumi.cfg --eps-list 0.02,0.01,0.005
