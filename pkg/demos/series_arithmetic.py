"""Fractional power series: exact exponents, floating-point coefficients.

Run with ``python3 demos/series_arithmetic.py``.
"""

from __future__ import annotations

from fidepia import FracSeries, caputo, rl_integral
from fidepia.fracseries import antiderivative, derivative

t = FracSeries.monomial(1.0, 1)

# Exponents are rationals, so 2/4 and 1/2 merge into a single term.
s = FracSeries([(1.0, "2/4"), (2.0, "1/2"), (-0.5, 3)])
print("merged:           ", s)

u1 = t - t * t / 8
print("u1:               ", u1)
print("u1 squared:       ", u1 * u1)
print("d/dt u1:          ", derivative(u1))
print("integral of u1':  ", antiderivative(derivative(u1)))

# Fractional operators keep the series closed; exponents shift by alpha.
for alpha in ("1/4", "1/2", "3/4", "1"):
    d = caputo(t * t, alpha)
    print(f"D^{alpha:<4} t^2 = {d}")

# The Riemann-Liouville integral undoes the Caputo derivative up to the initial value.
k1 = 1 + t * t / 2
back = rl_integral(caputo(k1, "1/2"), "1/2")
print("J D (1 + t^2/2):  ", back, " (constant term dropped)")

try:
    derivative(FracSeries.monomial(1.0, "1/2"))
except ValueError as exc:
    print("singular derivative rejected:", exc)
