"""Perturbation-iteration with one correction term and first-order Taylor terms.

Every equation ``D^alpha u = rhs(u)`` is embedded as

    F = eps * D^alpha u + u' - eps * u' - eps * N(u) - f = 0,

where ``f`` collects the right-hand side terms that do not involve any
unknown and ``N = rhs - f``.  Expanding ``u_{n+1} = u_n + eps * u_c`` to
first order, with every derivative of ``F`` taken at ``eps = 0``, gives
``F_u = 0``, ``F_{u'} = 1`` and the directly integrable correction equation

    u_c' = -R_n + (1 - 1/eps) * (u_n' - f),   R_n = D^alpha u_n - rhs(u_n),

whose solution is fixed by ``u_{n+1}(0) = u(0)``.  At ``eps = 1`` the step
is simply ``u_{n+1} = u_n - int_0^t R_n``.
"""

from __future__ import annotations

import logging
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from fidepia import oracle
from fidepia.errors import FidePiaError, IterationError
from fidepia.expr import eval_expr
from fidepia.fraccalc import caputo
from fidepia.fracseries import PRUNE_TOL, FracSeries, antiderivative, derivative
from fidepia.problem import FideProblem

log = logging.getLogger(__name__)

IC_TOL = 1e-12


@dataclass(frozen=True)
class PiaConfig:
    """Iteration settings.

    ``residual_points`` is the size of the uniform grid on ``[0, 1]`` used
    to record the numerical residual norm after every step; 0 turns the
    (quadrature based, comparatively slow) diagnostic off.
    """

    epsilon: float = 1.0
    max_iter: int = 5
    prune_tol: float = PRUNE_TOL
    max_exponent: Fraction | None = None
    initial_guess: tuple[FracSeries, ...] | None = None
    residual_points: int = 21

    def __post_init__(self) -> None:
        if self.epsilon == 0:
            raise ValueError("epsilon must be nonzero")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        if self.prune_tol < 0:
            raise ValueError("prune_tol must be >= 0")
        if self.residual_points < 0:
            raise ValueError("residual_points must be >= 0")
        if self.max_exponent is not None:
            object.__setattr__(self, "max_exponent", Fraction(self.max_exponent))
        if self.initial_guess is not None:
            object.__setattr__(self, "initial_guess", tuple(self.initial_guess))


@dataclass(frozen=True)
class IterationRecord:
    n: int
    term_count: tuple[int, ...]
    residual_sup_norm: float | None
    correction_constant: tuple[float, ...]


@dataclass(frozen=True)
class PiaState:
    n: int
    iterates: tuple[FracSeries, ...]
    history: tuple[IterationRecord, ...] = field(default=())


def initial_state(problem: FideProblem, cfg: PiaConfig = PiaConfig()) -> PiaState:
    """State ``n = 0`` holding the initial guess (constants at the initial values by default)."""
    if cfg.initial_guess is None:
        guess = tuple(FracSeries.constant(v) for v in problem.initial)
    else:
        guess = cfg.initial_guess
        if len(guess) != problem.size:
            raise ValueError("initial_guess must have one series per unknown")
    return PiaState(0, tuple(guess))


def forcing(problem: FideProblem) -> list[FracSeries]:
    """The part of each right-hand side that does not depend on any unknown.

    Right-hand sides are polynomial in the unknowns, so this is the value
    at the all-zero state.
    """
    zeros = [FracSeries.zero()] * problem.size
    return [eval_expr(rhs, zeros) for rhs in problem.rhs]


def residual(problem: FideProblem, state: PiaState | Sequence[FracSeries]) -> list[FracSeries]:
    """``R_j = D^{alpha_j} u_j - rhs_j(u)`` as exact series."""
    iterates = getattr(state, "iterates", state)
    return [
        caputo(iterates[j], problem.orders[j]) - eval_expr(problem.rhs[j], iterates)
        for j in range(problem.size)
    ]


def _corrections(
    problem: FideProblem, state: PiaState, cfg: PiaConfig
) -> tuple[list[FracSeries], list[float]]:
    eps = cfg.epsilon
    iterates = state.iterates
    f = forcing(problem) if eps != 1 else None
    out, constants = [], []
    for j in range(problem.size):
        try:
            r = caputo(iterates[j], problem.orders[j]) - eval_expr(problem.rhs[j], iterates)
            rate = -r
            if f is not None:
                rate = rate + (1.0 - 1.0 / eps) * (derivative(iterates[j]) - f[j])
            uc = antiderivative(rate)
        except FidePiaError as exc:
            raise IterationError(str(exc), state.n, j) from exc
        c = (problem.initial[j] - iterates[j].constant_term()) / eps
        constants.append(c)
        out.append(uc + c if c else uc)
    return out, constants


def correction(problem: FideProblem, state: PiaState, cfg: PiaConfig = PiaConfig()) -> list[FracSeries]:
    """Correction terms ``(u_c)_j`` for the current state."""
    return _corrections(problem, state, cfg)[0]


def iterate(problem: FideProblem, state: PiaState, cfg: PiaConfig = PiaConfig()) -> PiaState:
    """One step ``u_{n+1} = u_n + eps * u_c``."""
    corrections, constants = _corrections(problem, state, cfg)
    new = []
    for j, (u, uc) in enumerate(zip(state.iterates, corrections)):
        nxt = (u + cfg.epsilon * uc).prune(cfg.prune_tol)
        if cfg.max_exponent is not None:
            nxt = nxt.truncate(cfg.max_exponent)
        lo = nxt.min_exponent()
        if lo is not None and lo < 0:
            raise IterationError(f"iterate has negative exponent {lo}", state.n, j)
        if abs(nxt.constant_term() - problem.initial[j]) > IC_TOL:
            raise IterationError("initial condition lost", state.n, j)
        new.append(nxt)

    norm = None
    if cfg.residual_points:
        grid = np.linspace(0.0, 1.0, cfg.residual_points)
        try:
            norm = oracle.residual_sup_norm(problem, new, grid)
        except FidePiaError as exc:
            raise IterationError(f"residual diagnostic failed: {exc}", state.n + 1) from exc

    record = IterationRecord(
        n=state.n + 1,
        term_count=tuple(len(u) for u in new),
        residual_sup_norm=norm,
        correction_constant=tuple(constants),
    )
    log.debug("iteration %d: terms %s, residual %s", record.n, record.term_count, norm)
    return PiaState(state.n + 1, tuple(new), state.history + (record,))


def iterates(problem: FideProblem, cfg: PiaConfig = PiaConfig()) -> Iterator[PiaState]:
    """Yield the states ``n = 0, 1, ..., cfg.max_iter``."""
    state = initial_state(problem, cfg)
    yield state
    for _ in range(cfg.max_iter):
        state = iterate(problem, state, cfg)
        yield state


def solve(problem: FideProblem, cfg: PiaConfig = PiaConfig()) -> PiaState:
    """Run exactly ``cfg.max_iter`` steps; there is no convergence test."""
    for state in iterates(problem, cfg):
        pass
    return state
