"""A nonlinear Fredholm problem whose exact solution is ``u(t) = t``.

    D^alpha u = 1 - t/4 + int_0^1 t s u(s)^2 ds,   u(0) = 0.

At alpha = 1 the iterates are ``t + c_n t^2`` and the error shrinks by
roughly a factor of five per step.
"""

from __future__ import annotations

from fidepia import PiaConfig, builtin_problem, solve
from fidepia.reporting import TableSpec, build_table

problem = builtin_problem("example1").with_orders(["1"])
state = solve(problem, PiaConfig(max_iter=5))
for record in state.history:
    print(f"n={record.n}: residual sup-norm {record.residual_sup_norm:.3e}")
print("u5 =", state.iterates[0])
print()
print(build_table(problem, TableSpec(iterate_columns=(2, 3, 4, 5)), PiaConfig(residual_points=0)).render())

# Fractional orders produce exponents such as 2 - alpha and 3 - 2 alpha.
for alpha in ("1/2", "3/4"):
    u2 = solve(problem.with_orders([alpha]), PiaConfig(max_iter=2, residual_points=0)).iterates[0]
    print(f"\nalpha = {alpha}: u2 = {u2}")
