"""Brute-force numerical counterparts of the closed-form operators.

Everything here works pointwise: series are only *evaluated*, never
transformed by the symbolic fractional operators, and Gamma values come
from :func:`math.gamma` rather than :mod:`fidepia.fraccalc`.  That keeps
these routines an independent check on the exact machinery.

Weakly singular kernels ``(t - s)^g`` are removed by the change of
variables ``w = (t - s)^(g + 1)``, under which
``(t - s)^g ds = dw / (g + 1)``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np
from scipy import integrate
from scipy.integrate import IntegrationWarning

from fidepia.errors import NoConvergence
from fidepia.expr import (
    Const,
    Expr,
    Fredholm,
    IntPow,
    KernelMonomial,
    Product,
    Sum,
    TPow,
    Unknown,
    UnknownDeriv,
    Volterra,
)
from fidepia.fracseries import FracSeries


@dataclass(frozen=True)
class QuadSpec:
    """Tolerance and subdivision budget for :func:`quad`."""

    abs_tol: float = 1e-10
    max_depth: int = 50

    def __post_init__(self) -> None:
        if not self.abs_tol > 0:
            raise ValueError("abs_tol must be positive")
        if self.max_depth < 1:
            raise ValueError("max_depth must be at least 1")


DEFAULT_SPEC = QuadSpec()


def quad(
    f: Callable[[float], float],
    a: float,
    b: float,
    spec: QuadSpec = DEFAULT_SPEC,
) -> float:
    """Adaptive quadrature of ``f`` over ``[a, b]`` to absolute tolerance.

    Backed by QUADPACK's QAGS (Gauss-Kronrod 21 with bisection and
    epsilon-algorithm extrapolation), so integrable algebraic endpoint
    singularities such as ``s**(-1/2)`` converge without special care.
    ``spec.max_depth`` bounds the number of subintervals.
    """
    if a == b:
        return 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        value, abserr, info, *_ = integrate.quad(
            lambda x: float(f(x)),
            a,
            b,
            epsabs=spec.abs_tol,
            epsrel=0.0,
            limit=spec.max_depth,
            full_output=1,
        )
    if not math.isfinite(value) or abserr > spec.abs_tol:
        raise NoConvergence(
            f"quadrature on [{a}, {b}] stopped at error {abserr:.3e} "
            f"after {info['last']} subintervals"
        )
    return float(value)


# {{{ pointwise series helpers


def series_values(u: FracSeries, t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    for c, e in u.terms:
        out = out + (c if e == 0 else c * np.power(t, float(e)))
    return out


def series_derivative_values(u: FracSeries, t) -> np.ndarray:
    """``u'(t)`` computed pointwise; singular terms are allowed for ``t > 0``."""
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    with np.errstate(divide="ignore"):
        for c, e in u.terms:
            if e != 0:
                out = out + c * float(e) * np.power(t, float(e - 1))
    return out


# }}}

# {{{ fractional operators


def _order_value(alpha) -> float:
    alpha = getattr(alpha, "alpha", alpha)
    return float(Fraction(alpha) if isinstance(alpha, str) else alpha)


def caputo_numeric(u: FracSeries, alpha, t: float, spec: QuadSpec = DEFAULT_SPEC) -> float:
    """Caputo derivative of ``u`` at ``t`` from its integral definition.

    With ``w = (t - s)^(1 - alpha)`` the definition becomes
    ``1 / Gamma(2 - alpha) * int_0^{t^(1 - alpha)} u'(t - w^(1 / (1 - alpha))) dw``.
    """
    a = _order_value(alpha)
    if a == 1.0:
        return float(series_derivative_values(u, t))
    if t == 0:
        return 0.0
    p = 1.0 / (1.0 - a)

    def integrand(w: np.ndarray) -> np.ndarray:
        s = np.maximum(t - np.power(w, p), 0.0)
        return series_derivative_values(u, s)

    return quad(integrand, 0.0, t ** (1.0 - a), spec) / math.gamma(2.0 - a)


def rl_integral_numeric(u: FracSeries, alpha, t: float, spec: QuadSpec = DEFAULT_SPEC) -> float:
    """Riemann-Liouville integral ``1 / Gamma(alpha) int_0^t (t - s)^(alpha - 1) u(s) ds``."""
    a = _order_value(alpha)
    if t == 0:
        return 0.0
    p = 1.0 / a

    def integrand(w: np.ndarray) -> np.ndarray:
        return series_values(u, np.maximum(t - np.power(w, p), 0.0))

    return quad(integrand, 0.0, t**a, spec) / math.gamma(a + 1.0)


# }}}

# {{{ expressions


def volterra_numeric(
    kernel: Sequence[KernelMonomial],
    g: Callable[[np.ndarray], np.ndarray],
    t: float,
    spec: QuadSpec = DEFAULT_SPEC,
) -> float:
    """``int_0^t K(t, s) g(s) ds`` by quadrature, one kernel term at a time."""
    total = 0.0
    for m in kernel:
        if t == 0:
            continue
        q = float(m.tms_pow) + 1.0
        b = float(m.s_pow)

        def integrand(w: np.ndarray, q=q, b=b) -> np.ndarray:
            s = np.maximum(t - np.power(w, 1.0 / q), 0.0)
            return np.power(s, b) * g(s)

        total += m.coeff * t ** float(m.t_pow) * quad(integrand, 0.0, t**q, spec) / q
    return total


def fredholm_numeric(
    kernel: Sequence[KernelMonomial],
    g: Callable[[np.ndarray], np.ndarray],
    t: float,
    spec: QuadSpec = DEFAULT_SPEC,
) -> float:
    """``int_0^1 K(t, s) g(s) ds`` by quadrature."""
    total = 0.0
    for m in kernel:
        b = float(m.s_pow)
        val = quad(lambda s, b=b: np.power(s, b) * g(s), 0.0, 1.0, spec)
        total += m.coeff * t ** float(m.t_pow) * val
    return total


def expr_values(e: Expr, state: Sequence[FracSeries], t, spec: QuadSpec = DEFAULT_SPEC):
    """Numerically evaluate ``e`` at ``t`` (scalar, or array when ``e`` has no integrals)."""
    if isinstance(e, Const):
        return e.value + 0.0 * np.asarray(t, dtype=float)
    if isinstance(e, TPow):
        return np.power(np.asarray(t, dtype=float), float(e.exp))
    if isinstance(e, Unknown):
        return series_values(state[e.index], t)
    if isinstance(e, UnknownDeriv):
        return series_derivative_values(state[e.index], t)
    if isinstance(e, Sum):
        return sum(expr_values(x, state, t, spec) for x in e.terms)
    if isinstance(e, Product):
        out = 1.0
        for x in e.factors:
            out = out * expr_values(x, state, t, spec)
        return out
    if isinstance(e, IntPow):
        return expr_values(e.base, state, t, spec) ** e.power
    if isinstance(e, (Volterra, Fredholm)):
        def g(s: np.ndarray) -> np.ndarray:
            return expr_values(e.integrand, state, s, spec)

        apply = volterra_numeric if isinstance(e, Volterra) else fredholm_numeric
        return np.vectorize(lambda x: apply(e.kernel, g, float(x), spec))(t).astype(float)
    raise TypeError(f"not an expression node: {e!r}")


def residual_numeric(problem, iterates: Sequence[FracSeries], ts, spec: QuadSpec = DEFAULT_SPEC):
    """``D^{alpha_j} u_j(t) - rhs_j(t)`` at every ``t`` in ``ts`` by quadrature only.

    ``iterates`` may also be a state object carrying an ``iterates``
    attribute.  Returns one list of values per unknown.
    """
    iterates = getattr(iterates, "iterates", iterates)
    out = []
    for j, rhs in enumerate(problem.rhs):
        row = []
        for t in ts:
            t = float(t)
            lhs = caputo_numeric(iterates[j], problem.orders[j], t, spec)
            row.append(lhs - float(expr_values(rhs, iterates, t, spec)))
        out.append(row)
    return out


def residual_sup_norm(problem, iterates, ts, spec: QuadSpec = DEFAULT_SPEC) -> float:
    return max(abs(v) for row in residual_numeric(problem, iterates, ts, spec) for v in row)


# }}}
