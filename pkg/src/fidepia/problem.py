"""Problem definitions: systems ``D^{alpha_j} u_j = rhs_j`` and their file format.

A problem document is JSON with the fields::

    name, unknowns, orders, initial, equations, reference (optional)

where each equation is ``{unknown, rhs, integrals}`` and each integral is
``{type: "volterra" | "fredholm", kernel: [...], integrand, sign}``.
"""

from __future__ import annotations

import ast
import json
import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, replace
from fractions import Fraction
from importlib import resources
from typing import Any

import numpy as np

from fidepia.errors import ParseError, SchemaError, ValidationError
from fidepia.expr import (
    Expr,
    Fredholm,
    KernelMonomial,
    Sum,
    Volterra,
    parse_expr,
    validate,
)
from fidepia.fraccalc import FracOrder

BUILTIN_PROBLEMS = ("example1", "example2")

# {{{ reference solutions

_REF_FUNCS = ("sinh", "cosh", "sin", "cos", "exp")


class RefExpr:
    """Closed-form reference solution in ``t``.

    Accepts numeric literals, ``t``, ``+ - * /``, ``^`` (or ``**``) and the
    functions ``sinh cosh sin cos exp``.  Evaluates with numpy or, through
    :meth:`eval_mp`, with mpmath.
    """

    def __init__(self, source: str) -> None:
        self.source = source
        try:
            tree = ast.parse(source.replace("^", "**"), mode="eval")
        except SyntaxError as exc:
            raise ValidationError(f"bad reference expression {source!r}: {exc.msg}") from None
        self._check(tree.body)
        self._code = compile(tree, "<reference>", "eval")

    def _check(self, node: ast.AST) -> None:
        if isinstance(node, ast.BinOp):
            if not isinstance(node.op, (ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow)):
                raise ValidationError(f"operator not allowed in {self.source!r}")
            self._check(node.left)
            self._check(node.right)
        elif isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            self._check(node.operand)
        elif isinstance(node, ast.Call):
            if not (isinstance(node.func, ast.Name) and node.func.id in _REF_FUNCS) or len(
                node.args
            ) != 1 or node.keywords:
                raise ValidationError(f"only {', '.join(_REF_FUNCS)} of one argument are allowed")
            self._check(node.args[0])
        elif isinstance(node, ast.Name):
            if node.id != "t":
                raise ValidationError(f"unknown symbol {node.id!r} in {self.source!r}")
        elif isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            pass
        else:
            raise ValidationError(f"unsupported syntax in {self.source!r}")

    def __call__(self, t):
        ns = {name: getattr(np, name) for name in _REF_FUNCS}
        ns["t"] = np.asarray(t, dtype=float)
        out = eval(self._code, {"__builtins__": {}}, ns)  # noqa: S307 - AST whitelisted above
        out = np.broadcast_to(np.asarray(out, dtype=float), np.shape(ns["t"])).copy()
        return float(out) if np.ndim(t) == 0 else out

    def eval_mp(self, t, dps: int = 40):
        import mpmath

        with mpmath.workdps(dps):
            ns = {name: getattr(mpmath, name) for name in _REF_FUNCS}
            ns["t"] = mpmath.mpf(t)
            return +mpmath.mpf(eval(self._code, {"__builtins__": {}}, ns))  # noqa: S307

    def __repr__(self) -> str:
        return f"RefExpr({self.source!r})"


# }}}

# {{{ problem


@dataclass(frozen=True)
class FideProblem:
    """A system of fractional integro-differential equations.

    Equation ``j`` reads ``D^{orders[j]} u_j = rhs[j]`` with ``u_j(0) = initial[j]``.
    """

    name: str
    unknowns: tuple[str, ...]
    orders: tuple[FracOrder, ...]
    initial: tuple[float, ...]
    rhs: tuple[Expr, ...]
    reference: tuple[RefExpr, ...] | None = None

    def __post_init__(self) -> None:
        n = len(self.unknowns)
        if n < 1:
            raise ValidationError("a problem needs at least one unknown")
        if len(set(self.unknowns)) != n:
            raise ValidationError("unknown names must be distinct")
        lengths = {len(self.orders), len(self.initial), len(self.rhs)}
        if self.reference is not None:
            lengths.add(len(self.reference))
        if lengths != {n}:
            raise ValidationError("unknowns, orders, initial, rhs and reference must have equal length")
        for e in self.rhs:
            validate(e, n)

    @property
    def size(self) -> int:
        return len(self.unknowns)

    def with_orders(self, orders: Sequence[FracOrder | Fraction | str]) -> FideProblem:
        """Copy with new orders; a single order is broadcast to every unknown."""
        if len(orders) == 1:
            orders = list(orders) * self.size
        return replace(self, orders=tuple(o if isinstance(o, FracOrder) else FracOrder(o) for o in orders))


# }}}

# {{{ loading

_TOP_FIELDS = {"name", "unknowns", "orders", "initial", "equations"}
_TOP_OPTIONAL = {"reference"}
_EQ_FIELDS = {"unknown", "rhs", "integrals"}
_INT_FIELDS = {"type", "kernel", "integrand", "sign"}
_KERNEL_FIELDS = {"coeff", "t_pow", "s_pow", "tms_pow"}


def _check_fields(obj: Any, required: set[str], optional: set[str], where: str) -> None:
    if not isinstance(obj, Mapping):
        raise SchemaError(f"{where}: expected an object")
    keys = set(obj)
    missing = required - keys
    extra = keys - required - optional
    if missing:
        raise SchemaError(f"{where}: missing field(s) {sorted(missing)}")
    if extra:
        raise SchemaError(f"{where}: unexpected field(s) {sorted(extra)}")


def _list_of(obj: Any, kind: type | tuple, where: str) -> list:
    if not isinstance(obj, list) or not all(
        isinstance(x, kind) and not isinstance(x, bool) for x in obj
    ):
        raise SchemaError(f"{where}: expected a list of {getattr(kind, '__name__', kind)}")
    return obj


def _exponent(text: Any, where: str) -> Fraction:
    if not isinstance(text, str):
        raise SchemaError(f"{where}: expected a string 'p/q'")
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ValidationError(f"{where}: bad rational {text!r}") from None


def _parse(src: Any, names: Sequence[str], where: str) -> Expr:
    if not isinstance(src, str):
        raise SchemaError(f"{where}: expected an expression string")
    try:
        return parse_expr(src, names)
    except ParseError as exc:
        raise ValidationError(f"{where}: {exc}") from exc


def _load_integral(obj: Any, names: Sequence[str], where: str) -> Expr:
    _check_fields(obj, _INT_FIELDS, set(), where)
    kind = obj["type"]
    if kind not in ("volterra", "fredholm"):
        raise ValidationError(f"{where}: type must be 'volterra' or 'fredholm'")
    sign = obj["sign"]
    if isinstance(sign, bool) or sign not in (1, -1):
        raise ValidationError(f"{where}: sign must be 1 or -1")
    kernel_docs = obj["kernel"]
    if not isinstance(kernel_docs, list) or not kernel_docs:
        raise SchemaError(f"{where}.kernel: expected a non-empty list")
    kernel = []
    for i, k in enumerate(kernel_docs):
        kw = f"{where}.kernel[{i}]"
        _check_fields(k, _KERNEL_FIELDS, set(), kw)
        coeff = k["coeff"]
        if isinstance(coeff, bool) or not isinstance(coeff, (int, float)):
            raise SchemaError(f"{kw}.coeff: expected a number")
        kernel.append(
            KernelMonomial(
                float(sign * coeff),
                _exponent(k["t_pow"], f"{kw}.t_pow"),
                _exponent(k["s_pow"], f"{kw}.s_pow"),
                _exponent(k["tms_pow"], f"{kw}.tms_pow"),
            )
        )
    integrand = _parse(obj["integrand"], names, f"{where}.integrand")
    node_type = Volterra if kind == "volterra" else Fredholm
    return node_type(tuple(kernel), integrand)


def load_problem(document: str | bytes | Mapping) -> FideProblem:
    """Build a validated :class:`FideProblem` from a JSON document or mapping."""
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"not valid JSON: {exc}") from None
    _check_fields(document, _TOP_FIELDS, _TOP_OPTIONAL, "problem")

    name = document["name"]
    if not isinstance(name, str):
        raise SchemaError("name: expected a string")
    names = _list_of(document["unknowns"], str, "unknowns")
    orders_doc = _list_of(document["orders"], str, "orders")
    initial = _list_of(document["initial"], (int, float), "initial")
    equations = document["equations"]
    if not isinstance(equations, list):
        raise SchemaError("equations: expected a list")
    n = len(names)
    if not n:
        raise ValidationError("unknowns: at least one unknown is required")
    if len(orders_doc) != n or len(initial) != n or len(equations) != n:
        raise ValidationError("orders, initial and equations must match the number of unknowns")
    if any(not math.isfinite(x) for x in initial):
        raise ValidationError("initial: values must be finite")

    orders = tuple(FracOrder(_exponent(o, f"orders[{i}]")) for i, o in enumerate(orders_doc))

    rhs: list[Expr | None] = [None] * n
    for i, eq in enumerate(equations):
        where = f"equations[{i}]"
        _check_fields(eq, _EQ_FIELDS, set(), where)
        if eq["unknown"] not in names:
            raise ValidationError(f"{where}.unknown: {eq['unknown']!r} is not declared")
        j = names.index(eq["unknown"])
        if rhs[j] is not None:
            raise ValidationError(f"{where}: second equation for {eq['unknown']!r}")
        terms: list[Expr] = [_parse(eq["rhs"], names, f"{where}.rhs")]
        integrals = eq["integrals"]
        if not isinstance(integrals, list):
            raise SchemaError(f"{where}.integrals: expected a list")
        for k, integ in enumerate(integrals):
            terms.append(_load_integral(integ, names, f"{where}.integrals[{k}]"))
        flat: list[Expr] = []
        for term in terms:
            flat.extend(term.terms if isinstance(term, Sum) else (term,))
        rhs[j] = flat[0] if len(flat) == 1 else Sum(tuple(flat))

    reference = None
    if "reference" in document:
        refs = _list_of(document["reference"], str, "reference")
        if len(refs) != n:
            raise ValidationError("reference must match the number of unknowns")
        reference = tuple(RefExpr(r) for r in refs)

    return FideProblem(
        name=name,
        unknowns=tuple(names),
        orders=orders,
        initial=tuple(float(x) for x in initial),
        rhs=tuple(rhs),
        reference=reference,
    )


def builtin_document(name: str) -> dict:
    """Raw document of a built-in problem (``example1`` or ``example2``)."""
    if name not in BUILTIN_PROBLEMS:
        raise ValidationError(f"no built-in problem named {name!r}")
    text = resources.files("fidepia.problems").joinpath(f"{name}.json").read_text()
    return json.loads(text)


def builtin_problem(name: str) -> FideProblem:
    return load_problem(builtin_document(name))


def open_problem(ref: str) -> FideProblem:
    """Load a built-in problem by name or a problem file by path."""
    if ref in BUILTIN_PROBLEMS:
        return builtin_problem(ref)
    try:
        with open(ref, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ValidationError(f"cannot read problem file {ref!r}: {exc.strerror}") from None
    return load_problem(text)


# }}}

__all__ = [
    "BUILTIN_PROBLEMS",
    "FideProblem",
    "RefExpr",
    "builtin_document",
    "builtin_problem",
    "load_problem",
    "open_problem",
]
