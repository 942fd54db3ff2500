"""Right-hand-side expressions: AST, parser, renderer and exact evaluation.

Expressions are polynomials in the unknowns, their first derivatives and
powers of ``t``, plus Volterra (``int_0^t``) and Fredholm (``int_0^1``)
integral nodes with finite kernels ``sum c t^a s^b (t - s)^g``.  The text
grammar covers everything except the integral nodes, which are declared
structurally in problem files::

    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "/" NUMBER) unary)*
    unary   := "-" unary | power
    power   := atom ("^" exponent)?
    atom    := NUMBER | "t" | NAME | "d(" NAME ")" | "(" expr ")"

``t^(p/q)`` accepts any rational ``p/q >= 0``; other bases only accept
positive integer powers.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from fidepia.errors import DomainError, ParseError, ValidationError
from fidepia.fraccalc import beta
from fidepia.fracseries import FracSeries, Term, as_exponent, derivative, normalize

# {{{ nodes


@dataclass(frozen=True)
class KernelMonomial:
    """One kernel term ``coeff * t**t_pow * s**s_pow * (t - s)**tms_pow``."""

    coeff: float
    t_pow: Fraction = Fraction(0)
    s_pow: Fraction = Fraction(0)
    tms_pow: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeff", float(self.coeff))
        for name in ("t_pow", "s_pow", "tms_pow"):
            try:
                object.__setattr__(self, name, as_exponent(getattr(self, name)))
            except (TypeError, ValueError, ZeroDivisionError) as exc:
                raise ValidationError(f"kernel {name}: {exc}") from None
        if self.coeff == 0.0:
            raise ValidationError("kernel coefficient must be nonzero")
        if self.t_pow < 0 or self.s_pow < 0:
            raise ValidationError("kernel powers of t and s must be >= 0")
        if self.tms_pow <= -1:
            raise ValidationError("kernel power of (t - s) must be > -1")


@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class TPow:
    exp: Fraction


@dataclass(frozen=True)
class Unknown:
    index: int


@dataclass(frozen=True)
class UnknownDeriv:
    index: int


@dataclass(frozen=True)
class Sum:
    terms: tuple


@dataclass(frozen=True)
class Product:
    factors: tuple


@dataclass(frozen=True)
class IntPow:
    base: "Expr"
    power: int


@dataclass(frozen=True)
class Volterra:
    kernel: tuple[KernelMonomial, ...]
    integrand: "Expr"


@dataclass(frozen=True)
class Fredholm:
    kernel: tuple[KernelMonomial, ...]
    integrand: "Expr"


Expr = Union[Const, TPow, Unknown, UnknownDeriv, Sum, Product, IntPow, Volterra, Fredholm]

_ATOMS = (Const, TPow, Unknown, UnknownDeriv)


def children(e: Expr) -> tuple:
    if isinstance(e, Sum):
        return e.terms
    if isinstance(e, Product):
        return e.factors
    if isinstance(e, IntPow):
        return (e.base,)
    if isinstance(e, (Volterra, Fredholm)):
        return (e.integrand,)
    return ()


def walk(e: Expr):
    yield e
    for c in children(e):
        yield from walk(c)


def depends_on_unknowns(e: Expr) -> bool:
    return any(isinstance(n, (Unknown, UnknownDeriv)) for n in walk(e))


def validate(e: Expr, n_unknowns: int) -> None:
    """Check index bounds and the integrand restrictions."""
    for node in walk(e):
        if isinstance(node, (Unknown, UnknownDeriv)) and not 0 <= node.index < n_unknowns:
            raise ValidationError(f"unknown index {node.index} out of range")
        if isinstance(node, (Volterra, Fredholm)):
            if not node.kernel:
                raise ValidationError("integral kernel must have at least one term")
            for inner in walk(node.integrand):
                if isinstance(inner, (Volterra, Fredholm)):
                    raise ValidationError("nested integrals are not supported")
                if isinstance(inner, UnknownDeriv):
                    raise ValidationError("integrands may not contain derivatives")
        if isinstance(node, Fredholm):
            if any(m.tms_pow != 0 for m in node.kernel):
                raise ValidationError("Fredholm kernels may not contain (t - s) factors")


# }}}

# {{{ constructors used by the parser


def _mul(a: Expr, b: Expr) -> Expr:
    fa = a.factors if isinstance(a, Product) else (a,)
    fb = b.factors if isinstance(b, Product) else (b,)
    return Product(fa + fb)


def _add(a: Expr, b: Expr) -> Expr:
    ta = a.terms if isinstance(a, Sum) else (a,)
    tb = b.terms if isinstance(b, Sum) else (b,)
    return Sum(ta + tb)


def _neg(a: Expr) -> Expr:
    if isinstance(a, Const):
        return Const(-a.value)
    if isinstance(a, Product) and isinstance(a.factors[0], Const):
        return Product((Const(-a.factors[0].value),) + a.factors[1:])
    return _mul(Const(-1.0), a)


def _pow(base: Expr, exp: Fraction, offset: int) -> Expr:
    if isinstance(base, TPow):
        if exp < 0:
            raise ParseError("powers of t must be >= 0", offset)
        return TPow(base.exp * exp)
    if exp.denominator != 1 or exp < 1:
        raise ParseError("only positive integer powers are allowed here", offset)
    if isinstance(base, Const):
        return Const(base.value ** int(exp))
    return IntPow(base, int(exp))


# }}}

# {{{ parser

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


def _tokenize(src: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(src):
        m = _TOKEN_RE.match(src, pos)
        if m is None:
            raise ParseError(f"unexpected character {src[pos]!r}", pos, src)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append((kind, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", len(src)))
    return tokens


class _Parser:
    def __init__(self, src: str, names: Sequence[str]) -> None:
        self.src = src
        self.names = list(names)
        self.tokens = _tokenize(src)
        self.i = 0

    @property
    def tok(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def error(self, message: str) -> ParseError:
        return ParseError(message, self.tok[2], self.src)

    def accept(self, text: str) -> bool:
        if self.tok[0] == "op" and self.tok[1] == text:
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> None:
        if not self.accept(text):
            found = self.tok[1] or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")

    def parse(self) -> Expr:
        e = self.expr()
        if self.tok[0] != "end":
            raise self.error(f"unexpected {self.tok[1]!r}")
        return e

    def expr(self) -> Expr:
        e = self.term()
        while True:
            if self.accept("+"):
                e = _add(e, self.term())
            elif self.accept("-"):
                e = _add(e, _neg(self.term()))
            else:
                return e

    def term(self) -> Expr:
        e = self.unary()
        while True:
            if self.accept("*"):
                e = _mul(e, self.unary())
            elif self.accept("/"):
                offset = self.tok[2]
                d = self.unary()
                if not isinstance(d, Const):
                    raise ParseError("can only divide by a number", offset, self.src)
                if d.value == 0.0:
                    raise ParseError("division by zero", offset, self.src)
                e = _mul(e, Const(1.0 / d.value))
            else:
                return e

    def unary(self) -> Expr:
        if self.accept("-"):
            return _neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.accept("^"):
            offset = self.tok[2]
            return _pow(base, self.exponent(), offset)
        return base

    def exponent(self) -> Fraction:
        if self.tok[0] == "num":
            text = self.tok[1]
            self.i += 1
            if not text.isdigit():
                raise self.error("exponent must be an integer or (p/q)")
            return Fraction(int(text))
        self.expect("(")
        sign = -1 if self.accept("-") else 1
        num = self.integer()
        den = 1
        if self.accept("/"):
            den = self.integer()
            if den == 0:
                raise self.error("zero denominator in exponent")
        self.expect(")")
        return Fraction(sign * num, den)

    def integer(self) -> int:
        kind, text, _ = self.tok
        if kind != "num" or not text.isdigit():
            raise self.error("expected an integer")
        self.i += 1
        return int(text)

    def atom(self) -> Expr:
        kind, text, offset = self.tok
        if kind == "num":
            self.i += 1
            return Const(float(text))
        if kind == "name":
            self.i += 1
            if text == "t":
                return TPow(Fraction(1))
            if text == "d" and self.tok[1] == "(":
                self.expect("(")
                kind2, name, off2 = self.tok
                if kind2 != "name":
                    raise self.error("expected an unknown name inside d(...)")
                self.i += 1
                self.expect(")")
                return UnknownDeriv(self._index(name, off2))
            return Unknown(self._index(text, offset))
        if self.accept("("):
            e = self.expr()
            self.expect(")")
            return e
        raise self.error("unexpected end of input" if kind == "end" else f"unexpected {text!r}")

    def _index(self, name: str, offset: int) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise ValidationError(f"unknown name {name!r} at offset {offset}") from None


def parse_expr(src: str, unknowns: Sequence[str]) -> Expr:
    """Parse ``src`` into an :data:`Expr` over the given unknown names.

    >>> parse_expr("1 - 0.5*d(k)^2", ["u", "k"])
    Sum(terms=(Const(value=1.0), Product(factors=(Const(value=-0.5), IntPow(base=UnknownDeriv(index=1), power=2)))))
    """
    for name in unknowns:
        if name in ("t", "d"):
            raise ValidationError(f"{name!r} is reserved and cannot name an unknown")
    return _Parser(src, unknowns).parse()


# }}}

# {{{ rendering


def _render_const(v: float) -> str:
    if v.is_integer() and abs(v) < 1e16:
        return str(int(v))
    return repr(v)


def _render_exp(e: Fraction) -> str:
    if e.denominator == 1 and e >= 0:
        return str(e.numerator)
    return f"({e.numerator}/{e.denominator})" if e.denominator != 1 else f"({e.numerator})"


def _render_kernel(kernel: Sequence[KernelMonomial]) -> str:
    parts = []
    for m in kernel:
        factors = [_render_const(m.coeff)]
        if m.t_pow:
            factors.append(f"t^{_render_exp(m.t_pow)}")
        if m.s_pow:
            factors.append(f"s^{_render_exp(m.s_pow)}")
        if m.tms_pow:
            factors.append(f"(t-s)^{_render_exp(m.tms_pow)}")
        parts.append("*".join(factors))
    return " + ".join(parts)


def render(e: Expr, unknowns: Sequence[str]) -> str:
    """Text form of ``e``; integral-free expressions re-parse to the same AST."""
    if isinstance(e, Const):
        return _render_const(e.value)
    if isinstance(e, TPow):
        return "t" if e.exp == 1 else f"t^{_render_exp(e.exp)}"
    if isinstance(e, Unknown):
        return unknowns[e.index]
    if isinstance(e, UnknownDeriv):
        return f"d({unknowns[e.index]})"
    if isinstance(e, Sum):
        return " + ".join(render(x, unknowns) for x in e.terms)
    if isinstance(e, Product):
        return "*".join(
            f"({render(x, unknowns)})" if isinstance(x, Sum) else render(x, unknowns)
            for x in e.factors
        )
    if isinstance(e, IntPow):
        base = render(e.base, unknowns)
        if not isinstance(e.base, _ATOMS) or isinstance(e.base, TPow) or (
            isinstance(e.base, Const) and e.base.value < 0
        ):
            base = f"({base})"
        return f"{base}^{e.power}"
    if isinstance(e, Volterra):
        return f"int_0^t[{_render_kernel(e.kernel)}]({render(e.integrand, unknowns)}) ds"
    if isinstance(e, Fredholm):
        return f"int_0^1[{_render_kernel(e.kernel)}]({render(e.integrand, unknowns)}) ds"
    raise TypeError(f"not an expression node: {e!r}")


# }}}

# {{{ evaluation


def volterra_apply(kernel: Sequence[KernelMonomial], p: FracSeries) -> FracSeries:
    """``int_0^t K(t, s) p(s) ds`` with each term in closed form via Beta."""
    out = []
    for m in kernel:
        for d, b in p.terms:
            sb = m.s_pow + b
            if sb <= -1:
                raise DomainError(f"s^({sb}) is not integrable at s = 0")
            coeff = m.coeff * d * beta(float(m.tms_pow + 1), float(sb + 1))
            out.append(Term(coeff, m.t_pow + m.tms_pow + sb + 1))
    return normalize(out)


def fredholm_apply(kernel: Sequence[KernelMonomial], p: FracSeries) -> FracSeries:
    """``int_0^1 K(t, s) p(s) ds`` for kernels without ``(t - s)`` factors."""
    out = []
    for m in kernel:
        if m.tms_pow != 0:
            raise DomainError("Fredholm kernels may not contain (t - s) factors")
        for d, b in p.terms:
            sb = m.s_pow + b
            if sb <= -1:
                raise DomainError(f"s^({sb}) is not integrable at s = 0")
            out.append(Term(m.coeff * d / float(sb + 1), m.t_pow))
    return normalize(out)


def eval_expr(e: Expr, state: Sequence[FracSeries]) -> FracSeries:
    """Evaluate ``e`` exactly with ``state[j]`` substituted for unknown ``j``."""
    if isinstance(e, Const):
        return FracSeries.constant(e.value)
    if isinstance(e, TPow):
        return FracSeries.monomial(1.0, e.exp)
    if isinstance(e, Unknown):
        return state[e.index]
    if isinstance(e, UnknownDeriv):
        return derivative(state[e.index])
    if isinstance(e, Sum):
        return normalize(t for x in e.terms for t in eval_expr(x, state).terms)
    if isinstance(e, Product):
        acc = FracSeries.constant(1.0)
        for x in e.factors:
            acc = acc * eval_expr(x, state)
            if not acc:
                break
        return acc
    if isinstance(e, IntPow):
        return eval_expr(e.base, state) ** e.power
    if isinstance(e, Volterra):
        return volterra_apply(e.kernel, eval_expr(e.integrand, state))
    if isinstance(e, Fredholm):
        return fredholm_apply(e.kernel, eval_expr(e.integrand, state))
    raise TypeError(f"not an expression node: {e!r}")


# }}}
