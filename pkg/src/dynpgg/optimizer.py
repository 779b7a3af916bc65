"""Socially optimal play.

Under symmetric play where nothing is kept back, the only decision is when to
stop investing. ``payoff_of_switch`` simulates a switch stage through the
game engine, ``grid_search`` scans switch stages with the fast kernels, and
``closed_form_payoff`` / ``closed_form_optimum`` give the exact quadratic and
its vertex. ``exhaustive_plan_search`` drops the invest-then-contribute
restriction and enumerates every per-period share on a grid, which checks
that restriction on small games.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import kernels
from .game import TOL, GameError, GameParams, run_game
from .strategies import symmetric_switch_profile

MAX_PLAN_EVALUATIONS = 10**8


@dataclass(frozen=True)
class InvestmentPlan:
    """Per-period share of the endowment invested; the rest is contributed."""

    fractions: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "fractions", tuple(float(p) for p in self.fractions))
        for p in self.fractions:
            if not 0.0 <= p <= 1.0:
                raise GameError(f"investment share {p} outside [0, 1]")

    def is_switch_shaped(self) -> bool:
        """True when shares never increase over time."""
        return all(a >= b for a, b in zip(self.fractions, self.fractions[1:]))

    def switch_stage(self) -> float | None:
        """The equivalent switch stage, if the plan is ones, one share, zeros."""
        fr = self.fractions
        a = 0
        while a < len(fr) and fr[a] == 1.0:
            a += 1
        f = fr[a] if a < len(fr) else 0.0
        if any(p != 0.0 for p in fr[a + 1:]):
            return None
        return a + f


class GridResult(NamedTuple):
    x_best: float
    payoff_best: float
    samples: list[tuple[float, float]]


class Optimum(NamedTuple):
    x_max: float
    f_max: float
    clamped: bool


def _check_stage(params: GameParams, x: float) -> None:
    if not (0.0 <= x <= params.n_periods) or math.isnan(x):
        raise GameError(f"switch stage {x} outside [0, {params.n_periods}]")


def payoff_of_switch(params: GameParams, x: float) -> float:
    """Per-player total when everyone switches at stage ``x`` (full simulation)."""
    _check_stage(params, x)
    params = params.relaxed()
    traj = run_game(params, symmetric_switch_profile(x, params))
    return traj.total_payoffs[0]


def switch_grid(n_periods: int, step: float) -> np.ndarray:
    """Points 0, step, 2*step, ... up to ``n_periods`` (always included)."""
    if not step > 0:
        raise GameError(f"grid step must be positive, got {step}")
    if step > n_periods:
        raise GameError(f"grid step {step} exceeds the number of periods {n_periods}")
    k = int(math.floor(n_periods / step + 1e-9))
    xs = np.round(np.arange(k + 1) * step, 12)
    if n_periods - xs[-1] > 1e-9:
        xs = np.append(xs, float(n_periods))
    else:
        xs[-1] = min(xs[-1], float(n_periods))
    return xs


def first_argmax(values: np.ndarray, tol: float = TOL) -> int:
    """Index of the first value within ``tol`` of the maximum."""
    return int(np.flatnonzero(values >= values.max() - tol)[0])


def grid_search(
    params: GameParams, step: float = 0.01, *, use_engine: bool = False
) -> GridResult:
    """Evaluate every switch stage on the grid and keep the best one.

    Ties (within 1e-9) go to the smaller stage. ``use_engine`` routes every
    point through ``payoff_of_switch`` instead of the kernels.
    """
    xs = switch_grid(params.n_periods, step)
    if use_engine:
        pay = np.array([payoff_of_switch(params, float(x)) for x in xs])
    else:
        pay = kernels.switch_payoffs(
            xs,
            params.n_players,
            params.n_periods,
            params.endowment,
            params.base_productivity,
            params.productivity_rate,
        )
    i = first_argmax(pay)
    samples = [(float(x), float(y)) for x, y in zip(xs, pay)]
    return GridResult(float(xs[i]), float(pay[i]), samples)


def closed_form_payoff(params: GameParams, x: float) -> float:
    """N*w*(M0 + m*w*x)*(T - x): total group contribution after the switch,
    multiplied by the productivity reached at the switch."""
    _check_stage(params, x)
    n, w = params.n_players, params.endowment
    m0, m, t = params.base_productivity, params.productivity_rate, params.n_periods
    return n * w * (m0 + m * w * x) * (t - x)


def quadratic_coefficients(params: GameParams) -> tuple[float, float, float]:
    """(a, b, c) of the closed form expanded in powers of x."""
    n, w = params.n_players, params.endowment
    m0, m, t = params.base_productivity, params.productivity_rate, params.n_periods
    k = n * w
    return (-k * m * w, k * (m * w * t - m0), k * m0 * t)


def closed_form_optimum(params: GameParams) -> Optimum:
    """Vertex T/2 - M0/(2*m*w), clamped into [0, T].

    With no productivity growth (or no endowment to invest) the vertex is
    undefined; switching immediately is optimal and the result is flagged as
    clamped.
    """
    m, w, t = params.productivity_rate, params.endowment, params.n_periods
    if m * w <= 0:
        return Optimum(0.0, closed_form_payoff(params, 0.0), True)
    x = t / 2 - params.base_productivity / (2 * m * w)
    clamped = not 0.0 <= x <= t
    x = min(max(x, 0.0), float(t))
    return Optimum(x, closed_form_payoff(params, x), clamped)


def exhaustive_plan_search(
    params: GameParams, grid_levels: int
) -> tuple[InvestmentPlan, float]:
    """Best symmetric plan with each period's share on a ``grid_levels`` grid.

    Ties within 1e-9 go to the lexicographically smallest share vector.
    """
    if grid_levels < 2:
        raise GameError(f"grid_levels must be >= 2, got {grid_levels}")
    count = grid_levels ** params.n_periods
    if count > MAX_PLAN_EVALUATIONS:
        raise GameError(
            f"{grid_levels}^{params.n_periods} = {count} plans exceeds the cap "
            f"of {MAX_PLAN_EVALUATIONS}"
        )
    digits, payoff = kernels.exhaustive_best(
        grid_levels,
        params.n_periods,
        params.n_players,
        params.endowment,
        params.base_productivity,
        params.productivity_rate,
        TOL,
    )
    plan = InvestmentPlan(tuple(int(d) / (grid_levels - 1) for d in digits))
    return plan, float(payoff)


def plan_payoff(params: GameParams, plan: InvestmentPlan) -> float:
    if len(plan.fractions) != params.n_periods:
        raise GameError("plan length does not match the number of periods")
    return float(
        kernels.plan_payoffs(
            np.array([plan.fractions]),
            params.n_players,
            params.endowment,
            params.base_productivity,
            params.productivity_rate,
        )[0]
    )


def best_switch_on_grid(params: GameParams, grid_levels: int) -> tuple[float, float]:
    """Best switch stage among those whose shares lie on the plan grid."""
    xs = switch_grid(params.n_periods, 1.0 / (grid_levels - 1))
    pay = kernels.switch_payoffs(
        xs,
        params.n_players,
        params.n_periods,
        params.endowment,
        params.base_productivity,
        params.productivity_rate,
    )
    i = first_argmax(pay)
    return float(xs[i]), float(pay[i])
