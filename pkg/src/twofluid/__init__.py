"""Semi-discrete two-fluid (six-equation) solver on the periodic interval.

The partial densities, momenta and total energies of two phases sharing
one pressure are advanced by an upwind bracket of width ``eps``, with
pressure gradients and volumetric fluxes mollified at width ``eps**lam``.
The stiffened-gas pressure equilibrium closes the system cell by cell.
"""
from .closure import (CellConserved, ClosureError, ClosureResult, ClosureSensitivity,
                      bisection_oracle, close_cell, close_state, closure_sensitivity,
                      conserved_from_primitive)
from .core import (FluidEos, Grid, GridError, KernelSpec, MixtureState, SchemeParams,
                   make_grid, validate_state)
from .integrate import RunFailure, StepFailure, Trajectory, stable_dt, step_rk4, run
from .mollifier import KernelError, MollifierKernel, make_kernel, mollified_gradient, mollify
from .scheme import SchemeError, SingularCouplingError, rhs, upwind_bracket
from .verify import (CadenceError, TestFunction, conservation_audit, convergence_study,
                     default_test_functions, weak_residual)

__version__ = "0.1.0"

__all__ = [
    "CadenceError", "CellConserved", "ClosureError", "ClosureResult", "ClosureSensitivity",
    "FluidEos", "Grid", "GridError", "KernelError", "KernelSpec", "MixtureState",
    "MollifierKernel", "RunFailure", "SchemeError", "SchemeParams", "SingularCouplingError",
    "StepFailure", "TestFunction", "Trajectory", "bisection_oracle", "close_cell",
    "close_state", "closure_sensitivity", "conservation_audit", "conserved_from_primitive",
    "convergence_study", "default_test_functions", "make_grid", "make_kernel",
    "mollified_gradient", "mollify", "rhs", "run", "stable_dt", "step_rk4", "upwind_bracket",
    "validate_state", "weak_residual",
]
