"""Closed-form Caputo derivatives checked against brute-force quadrature.

The quadrature side never touches the symbolic operators; it evaluates the
integral definition after the substitution ``w = (t - s)^(1 - alpha)``,
which removes the weak singularity at ``s = t``.
"""

from __future__ import annotations

import numpy as np

from fidepia import FracSeries, caputo
from fidepia.oracle import caputo_numeric

u = FracSeries([(1.0, 1), (1 / 6, 3), (-0.3, "5/4")])
print("u =", u)
print(f"{'alpha':>6} {'t':>5} {'closed form':>20} {'quadrature':>20} {'difference':>11}")
for alpha in ("1/4", "1/2", "3/4"):
    exact = caputo(u, alpha)
    for t in np.linspace(0.2, 1.0, 3):
        a, b = exact(t), caputo_numeric(u, alpha, t)
        print(f"{alpha:>6} {t:5.2f} {a:20.15f} {b:20.15f} {abs(a - b):11.2e}")
