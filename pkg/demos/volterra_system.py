"""A coupled Volterra system with exact solution ``(sinh t, cosh t)``.

    D^a1 u = 1 - k'^2 / 2 + int_0^t ((t - s) k(s) + u(s) k(s)) ds,   u(0) = 0
    D^a2 k = 2t + int_0^t ((t - s) u(s) + u(s)^2 - k(s)^2) ds,      k(0) = 1
"""

from __future__ import annotations

import tempfile

from fidepia import PiaConfig, builtin_problem, solve
from fidepia.cli import reproduce

problem = builtin_problem("example2")
for n in (1, 2):
    u, k = solve(problem, PiaConfig(max_iter=n, residual_points=0)).iterates
    print(f"u{n} = {u}\nk{n} = {k}\n")

u3, k3 = solve(problem, PiaConfig(max_iter=3, residual_points=0)).iterates
for t in (0.25, 0.5, 1.0):
    u_err = abs(u3(t) - problem.reference[0](t))
    k_err = abs(k3(t) - problem.reference[1](t))
    print(f"t={t}: |u3 - sinh| = {u_err:.3e}, |k3 - cosh| = {k_err:.3e}")

print()
with tempfile.TemporaryDirectory() as outdir:
    for path in reproduce("example2", outdir):
        print("wrote", path.name)
