"""Gamma/Beta functions and closed-form fractional operators on series.

All operators act termwise on :class:`~fidepia.fracseries.FracSeries`
through the power rules

.. math::

    J^\\alpha t^\\beta = \\frac{\\Gamma(\\beta + 1)}{\\Gamma(\\beta + 1 + \\alpha)} t^{\\beta + \\alpha},
    \\qquad
    D_*^\\alpha t^\\beta = \\frac{\\Gamma(\\beta + 1)}{\\Gamma(\\beta + 1 - \\alpha)} t^{\\beta - \\alpha},

with orders restricted to ``0 < alpha <= 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from fidepia.errors import DomainError, PoleError, ValidationError
from fidepia.fracseries import FracSeries, Term, as_exponent, derivative, normalize

# {{{ special functions

# Lanczos approximation, g = 7, n = 9
_LANCZOS_G = 7.0
_LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

# above this, Gamma overflows a double
_GAMMA_MAX_ARG = 171.0


def _lanczos_sum(z: float) -> float:
    # z is the shifted argument x - 1
    acc = _LANCZOS_COEFFS[0]
    for k, c in enumerate(_LANCZOS_COEFFS[1:], start=1):
        acc += c / (z + k)
    return acc


def _check_pole(x: float) -> None:
    if x <= 0 and float(x).is_integer():
        raise PoleError(f"Gamma has a pole at {x}")


def gamma(x: float) -> float:
    """Euler Gamma function.

    Lanczos approximation for ``x >= 1/2``, reflection formula below.
    Positive integers up to 23 are returned exactly as factorials.
    """
    x = float(x)
    _check_pole(x)
    if x.is_integer() and 0 < x <= 23:
        return float(math.factorial(int(x) - 1))
    if x < 0.5:
        return math.pi / (math.sin(math.pi * x) * gamma(1.0 - x))
    if x > _GAMMA_MAX_ARG:
        return math.inf
    z = x - 1.0
    t = z + _LANCZOS_G + 0.5
    # split the power to delay overflow for large x
    half = t ** (0.5 * (z + 0.5))
    return math.sqrt(2.0 * math.pi) * half * math.exp(-t) * half * _lanczos_sum(z)


def lgamma(x: float) -> float:
    """``log|Gamma(x)|``."""
    x = float(x)
    _check_pole(x)
    if x < 0.5:
        return math.log(math.pi / abs(math.sin(math.pi * x))) - lgamma(1.0 - x)
    z = x - 1.0
    t = z + _LANCZOS_G + 0.5
    return 0.5 * math.log(2.0 * math.pi) + (z + 0.5) * math.log(t) - t + math.log(_lanczos_sum(z))


def rgamma(x: float) -> float:
    """``1 / Gamma(x)``, zero at the poles."""
    x = float(x)
    if x <= 0 and x.is_integer():
        return 0.0
    return 1.0 / gamma(x)


def gamma_ratio(x: float, y: float) -> float:
    """``Gamma(x) / Gamma(y)`` for ``x, y > 0`` without intermediate overflow."""
    if max(x, y) < _GAMMA_MAX_ARG:
        return gamma(x) / gamma(y)
    return math.exp(lgamma(x) - lgamma(y))


def beta(a: float, b: float) -> float:
    """Euler Beta function ``B(a, b) = Gamma(a) Gamma(b) / Gamma(a + b)``."""
    a, b = float(a), float(b)
    if a <= 0 or b <= 0:
        raise DomainError(f"beta requires positive arguments, got ({a}, {b})")
    if a + b < _GAMMA_MAX_ARG:
        return gamma(a) * gamma(b) / gamma(a + b)
    return math.exp(lgamma(a) + lgamma(b) - lgamma(a + b))


# }}}

# {{{ orders


@dataclass(frozen=True)
class FracOrder:
    """Fractional order ``0 < alpha <= 1`` (so the integer ceiling ``m`` is 1)."""

    alpha: Fraction

    m = 1

    def __post_init__(self) -> None:
        try:
            alpha = as_exponent(self.alpha)
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"invalid order {self.alpha!r}: {exc}") from None
        if not 0 < alpha <= 1:
            raise ValidationError(f"order must satisfy 0 < alpha <= 1, got {alpha}")
        object.__setattr__(self, "alpha", alpha)

    @classmethod
    def parse(cls, text: str | int | Fraction) -> FracOrder:
        return cls(text)

    @property
    def is_integer(self) -> bool:
        return self.alpha == 1

    def __float__(self) -> float:
        return float(self.alpha)

    def __str__(self) -> str:
        return str(self.alpha)


def _as_order(order: FracOrder | Fraction | str | int) -> FracOrder:
    return order if isinstance(order, FracOrder) else FracOrder(order)


# }}}

# {{{ operators


def power_kernel_convolve(a: FracSeries, g: Fraction | str | int) -> FracSeries:
    """``integral_0^t (t - s)**g * a(s) ds`` in closed form.

    Each term ``c s**b`` maps to ``c B(g + 1, b + 1) t**(g + b + 1)``.
    """
    g = as_exponent(g)
    if g <= -1:
        raise DomainError(f"kernel (t - s)^({g}) is not integrable")
    out = []
    for c, e in a.terms:
        if e <= -1:
            raise DomainError(f"s^({e}) is not integrable at s = 0")
        out.append(Term(c * beta(float(g + 1), float(e + 1)), g + e + 1))
    return normalize(out)


def caputo(a: FracSeries, order: FracOrder | Fraction | str | int) -> FracSeries:
    """Caputo derivative by the power rule; constants are annihilated.

    At ``alpha = 1`` this is exactly :func:`~fidepia.fracseries.derivative`.
    """
    alpha = _as_order(order).alpha
    if alpha == 1:
        return derivative(a)
    out = []
    for c, e in a.terms:
        if e == 0:
            continue
        if e < 0:
            raise DomainError(f"Caputo derivative of t^({e}) is undefined")
        out.append(Term(c * gamma_ratio(float(e + 1), float(e + 1 - alpha)), e - alpha))
    return normalize(out)


def caputo_via_convolution(a: FracSeries, order: FracOrder | Fraction | str | int) -> FracSeries:
    """Caputo derivative as ``J^(1 - alpha) u'``, i.e. via the weakly singular kernel.

    Needs the classical derivative of ``a``, so every exponent must be 0
    or at least 1.
    """
    alpha = _as_order(order).alpha
    du = derivative(a)
    if alpha == 1:
        return du
    return power_kernel_convolve(du, -alpha) * (1.0 / gamma(float(1 - alpha)))


def rl_integral(a: FracSeries, order: FracOrder | Fraction | str | int) -> FracSeries:
    """Riemann-Liouville integral of order ``alpha``."""
    alpha = _as_order(order).alpha
    out = []
    for c, e in a.terms:
        if e <= -1:
            raise DomainError(f"t^({e}) is not integrable at t = 0")
        out.append(Term(c * gamma_ratio(float(e + 1), float(e + 1 + alpha)), e + alpha))
    return normalize(out)


def rl_derivative(a: FracSeries, order: FracOrder | Fraction | str | int) -> FracSeries:
    """Riemann-Liouville derivative ``d/dt J^(1 - alpha)``.

    Unlike :func:`caputo`, a constant ``c`` maps to ``c t**(-alpha) / Gamma(1 - alpha)``.
    """
    alpha = _as_order(order).alpha
    out = []
    for c, e in a.terms:
        if e < 0:
            raise DomainError(f"Riemann-Liouville derivative of t^({e}) not supported")
        coeff = c * gamma(float(e + 1)) * rgamma(float(e + 1 - alpha))
        if coeff != 0.0:
            out.append(Term(coeff, e - alpha))
    return normalize(out)


# }}}
