"""Exact perturbation-iteration solver for fractional integro-differential equations.

Iterates are fractional power series ``sum c_i t^(p_i/q_i)`` with exact
rational exponents, so Caputo derivatives and the supported Volterra and
Fredholm integrals are applied in closed form.  :mod:`fidepia.oracle`
provides independent quadrature-based checks.
"""

from __future__ import annotations

__version__ = "0.1.0"

from fidepia.errors import (
    DomainError,
    FidePiaError,
    IterationError,
    NoConvergence,
    ParseError,
    PoleError,
    SchemaError,
    ValidationError,
)
from fidepia.fraccalc import FracOrder, beta, caputo, gamma, rl_derivative, rl_integral
from fidepia.fracseries import FracSeries, Term, evaluate, render
from fidepia.pia import PiaConfig, PiaState, correction, iterate, iterates, residual, solve
from fidepia.problem import FideProblem, builtin_problem, load_problem, open_problem

__all__ = [
    "DomainError",
    "FidePiaError",
    "FideProblem",
    "FracOrder",
    "FracSeries",
    "IterationError",
    "NoConvergence",
    "ParseError",
    "PiaConfig",
    "PiaState",
    "PoleError",
    "SchemaError",
    "Term",
    "ValidationError",
    "beta",
    "builtin_problem",
    "caputo",
    "correction",
    "evaluate",
    "gamma",
    "iterate",
    "iterates",
    "load_problem",
    "open_problem",
    "render",
    "residual",
    "rl_derivative",
    "rl_integral",
    "solve",
]
