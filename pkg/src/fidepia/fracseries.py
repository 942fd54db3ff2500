"""Finite fractional power series ``sum_i c_i * t**b_i``.

Coefficients are floats, exponents are exact :class:`fractions.Fraction`
values so that terms such as ``t**(3 - 2*alpha)`` produced by different
paths merge exactly.  Every series is immutable and kept in normal form:
terms sorted by strictly increasing exponent, no duplicate exponents and
no coefficients below the pruning threshold.

>>> u = FracSeries([(1.0, 1), (-0.125, 2)])
>>> str(u)
't - 0.125*t^2'
>>> str(u.derivative())
'1 - 0.25*t'
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator
from fractions import Fraction
from numbers import Rational, Real
from typing import NamedTuple

import numpy as np

from fidepia.errors import DomainError

PRUNE_TOL = 1e-15

RationalExp = Fraction


def as_exponent(value: int | str | Fraction | Rational) -> Fraction:
    """Coerce ``value`` to an exact rational exponent.

    Floats are rejected on purpose: an exponent such as ``0.1`` has no
    exact binary representation and would break exact merging.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("exponent must be rational, not bool")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"exponent must be rational, got {type(value).__name__}")


class Term(NamedTuple):
    coeff: float
    exp: Fraction


def normalize(
    terms: Iterable[Term | tuple[float, int | str | Fraction]],
    prune_tol: float = PRUNE_TOL,
) -> FracSeries:
    """Sort ``terms`` by exponent, merge equal exponents and prune small ones."""
    merged: dict[Fraction, float] = {}
    for coeff, exp in terms:
        exp = as_exponent(exp)
        merged[exp] = merged.get(exp, 0.0) + float(coeff)
    kept = tuple(
        Term(c, e) for e, c in sorted(merged.items()) if c != 0.0 and abs(c) >= prune_tol
    )
    return FracSeries._from_normal(kept)


class FracSeries:
    """Immutable finite sum of ``coeff * t**exp`` terms.

    Supports ``+``, ``-``, ``*`` (by series or scalar) and calling the
    series to evaluate it.  Equality is exact on both exponents and
    coefficients; use :meth:`allclose` for tolerant comparisons.
    """

    __slots__ = ("_terms",)

    _terms: tuple[Term, ...]

    def __init__(
        self,
        terms: Iterable[Term | tuple[float, int | str | Fraction]] = (),
        prune_tol: float = PRUNE_TOL,
    ) -> None:
        self._terms = normalize(terms, prune_tol)._terms

    @classmethod
    def _from_normal(cls, terms: tuple[Term, ...]) -> FracSeries:
        obj = object.__new__(cls)
        obj._terms = terms
        return obj

    @classmethod
    def zero(cls) -> FracSeries:
        return cls._from_normal(())

    @classmethod
    def constant(cls, c: float) -> FracSeries:
        return cls([(c, 0)])

    @classmethod
    def monomial(cls, c: float, exp: int | str | Fraction) -> FracSeries:
        return cls([(c, exp)])

    # {{{ container protocol

    @property
    def terms(self) -> tuple[Term, ...]:
        return self._terms

    def __iter__(self) -> Iterator[Term]:
        return iter(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, FracSeries):
            return self._terms == other._terms
        if isinstance(other, Real):
            return self._terms == FracSeries.constant(float(other))._terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._terms)

    def __repr__(self) -> str:
        inner = ", ".join(f"({c!r}, {str(e)!r})" for c, e in self._terms)
        return f"FracSeries([{inner}])"

    def __str__(self) -> str:
        return render(self)

    # }}}

    # {{{ arithmetic

    def __add__(self, other: FracSeries | float) -> FracSeries:
        if isinstance(other, Real):
            other = FracSeries.constant(float(other))
        if not isinstance(other, FracSeries):
            return NotImplemented
        return add(self, other)

    __radd__ = __add__

    def __neg__(self) -> FracSeries:
        return FracSeries._from_normal(tuple(Term(-c, e) for c, e in self._terms))

    def __sub__(self, other: FracSeries | float) -> FracSeries:
        if isinstance(other, Real):
            other = FracSeries.constant(float(other))
        if not isinstance(other, FracSeries):
            return NotImplemented
        return add(self, -other)

    def __rsub__(self, other: float) -> FracSeries:
        return (-self) + other

    def __mul__(self, other: FracSeries | float) -> FracSeries:
        if isinstance(other, FracSeries):
            return mul(self, other)
        if isinstance(other, Real):
            return scale(self, float(other))
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other: float) -> FracSeries:
        if isinstance(other, Real):
            return scale(self, 1.0 / float(other))
        return NotImplemented

    def __pow__(self, k: int) -> FracSeries:
        if not isinstance(k, int) or isinstance(k, bool) or k < 0:
            return NotImplemented
        result = FracSeries.constant(1.0)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __call__(self, t):
        return evaluate(self, t)

    # }}}

    def derivative(self) -> FracSeries:
        return derivative(self)

    def antiderivative(self) -> FracSeries:
        return antiderivative(self)

    def constant_term(self) -> float:
        """Coefficient of ``t**0`` (the value at ``t = 0`` if all exps >= 0)."""
        for c, e in self._terms:
            if e == 0:
                return c
        return 0.0

    def min_exponent(self) -> Fraction | None:
        return self._terms[0].exp if self._terms else None

    def max_exponent(self) -> Fraction | None:
        return self._terms[-1].exp if self._terms else None

    def exponents(self) -> tuple[Fraction, ...]:
        return tuple(e for _, e in self._terms)

    def coefficients(self) -> np.ndarray:
        return np.array([c for c, _ in self._terms], dtype=float)

    def truncate(self, max_exp: Fraction) -> FracSeries:
        """Drop every term with exponent above ``max_exp``."""
        return FracSeries._from_normal(tuple(t for t in self._terms if t.exp <= max_exp))

    def prune(self, prune_tol: float) -> FracSeries:
        return normalize(self._terms, prune_tol)

    def map_terms(self, fn) -> FracSeries:
        """Apply ``fn(coeff, exp) -> (coeff, exp)`` termwise and renormalize."""
        return normalize(fn(c, e) for c, e in self._terms)

    def allclose(self, other: FracSeries, rtol: float = 1e-12, atol: float = 0.0) -> bool:
        """Same exponents exactly and coefficients within tolerance."""
        if self.exponents() != other.exponents():
            return False
        return all(
            abs(a - b) <= atol + rtol * max(abs(a), abs(b))
            for (a, _), (b, _) in zip(self._terms, other._terms)
        )


def add(a: FracSeries, b: FracSeries) -> FracSeries:
    return normalize(a.terms + b.terms)


def scale(a: FracSeries, c: float) -> FracSeries:
    return normalize(Term(c * ci, e) for ci, e in a.terms)


def mul(a: FracSeries, b: FracSeries) -> FracSeries:
    return normalize(Term(ca * cb, ea + eb) for ca, ea in a.terms for cb, eb in b.terms)


def derivative(a: FracSeries) -> FracSeries:
    """Classical derivative.

    Raises :class:`DomainError` when a term has ``0 < exp < 1``; its
    derivative is unbounded at ``t = 0`` and leaves the iterate class.
    """
    out = []
    for c, e in a.terms:
        if e == 0:
            continue
        if 0 < e < 1 or e < 0:
            raise DomainError(f"derivative of t^({e}) is singular at t = 0")
        out.append(Term(c * float(e), e - 1))
    return normalize(out)


def antiderivative(a: FracSeries) -> FracSeries:
    """``integral_0^t a(s) ds``, vanishing at ``t = 0``."""
    out = []
    for c, e in a.terms:
        if e <= -1:
            raise DomainError(f"t^({e}) is not integrable at t = 0")
        out.append(Term(c / float(e + 1), e + 1))
    return normalize(out)


def evaluate(a: FracSeries, t):
    """Evaluate ``a`` at scalar or array ``t >= 0``.

    ``t**0`` is 1 everywhere, including ``t = 0``.
    """
    arr = np.asarray(t, dtype=float)
    if np.any(arr < 0):
        raise DomainError("series are only defined for t >= 0")
    out = np.zeros_like(arr)
    with np.errstate(divide="ignore"):
        for c, e in a.terms:
            if e == 0:
                out = out + c
            else:
                out = out + c * np.power(arr, float(e))
    if np.ndim(t) == 0:
        return float(out)
    return out


def evaluate_mp(a: FracSeries, t, dps: int = 40):
    """Evaluate ``a`` in extended precision with :mod:`mpmath`.

    Coefficients are taken at their exact binary values; only the
    summation is done at ``dps`` digits.  Used where tiny differences of
    nearly equal values have to be reported to many significant figures.
    """
    import mpmath

    with mpmath.workdps(dps):
        tm = mpmath.mpf(t)
        if tm < 0:
            raise DomainError("series are only defined for t >= 0")
        total = mpmath.mpf(0)
        for c, e in a.terms:
            if e == 0:
                total += mpmath.mpf(c)
            else:
                total += mpmath.mpf(c) * tm ** (mpmath.mpf(e.numerator) / e.denominator)
        return +total


def _format_coeff(c: float) -> str:
    if c.is_integer() and abs(c) < 1e16:
        return str(int(c))
    return repr(c)


def _format_power(e: Fraction, var: str) -> str:
    if e == 1:
        return var
    if e.denominator == 1:
        return f"{var}^{e.numerator}" if e > 0 else f"{var}^({e.numerator})"
    return f"{var}^({e.numerator}/{e.denominator})"


def render(a: FracSeries, var: str = "t") -> str:
    """Human-readable text such as ``1 + 0.5*t^2 - 2*t^(5/2)``.

    The output is accepted by :func:`fidepia.expr.parse_expr`.
    """
    if not a.terms:
        return "0"
    parts: list[str] = []
    for i, (c, e) in enumerate(a.terms):
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if e == 0:
            body = _format_coeff(mag)
        elif mag == 1.0:
            body = _format_power(e, var)
        else:
            body = f"{_format_coeff(mag)}*{_format_power(e, var)}"
        if i == 0:
            parts.append(body if sign == "+" else f"-{body}")
        else:
            parts.append(f"{sign} {body}")
    return " ".join(parts)


def to_records(a: FracSeries) -> list[list]:
    """JSON-friendly ``[[coeff, "p/q"], ...]`` list."""
    return [[c, str(e)] for c, e in a.terms]


def from_records(records: Iterable[tuple[float, str]]) -> FracSeries:
    return FracSeries((float(c), as_exponent(e)) for c, e in records)
