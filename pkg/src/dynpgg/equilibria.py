"""Named outcome scenarios and Nash equilibrium checking.

``best_deviation_gain`` searches every per-period (vote, contribution)
choice of one player on a grid while the other players keep their
policies, and reports how much the best such deviation beats the profile.
Only the productivity level carries over between periods, and policies see
nothing else, so the search is a dynamic program over (period,
productivity). That gives the same maximum as enumerating every deviation
table, at a fraction of the cost.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from typing import Literal

from .game import (
    TOL,
    GameError,
    GameParams,
    ProductivityState,
    Trajectory,
    median_investment,
    period_payoff,
    run_game,
    update_productivity,
)
from .optimizer import closed_form_optimum
from .strategies import (
    ConstantPolicy,
    StrategyProfile,
    SwitchPolicy,
    decide,
    threshold_profile,
)

ScenarioName = Literal[
    "lowest", "nash_highest", "nash_no_invest", "nash_lowest", "social_optimal"
]
SCENARIOS: tuple[str, ...] = (
    "lowest",
    "nash_highest",
    "nash_no_invest",
    "nash_lowest",
    "social_optimal",
)


def unit_productivity_schedule(params: GameParams) -> list[float]:
    """Votes that raise productivity to exactly 1 as fast as possible, then 0."""
    omega, m, m0 = params.endowment, params.productivity_rate, params.base_productivity
    schedule = [0.0] * params.n_periods
    if m0 >= 1.0 - TOL:
        return schedule
    if m * omega <= 0:
        raise GameError("productivity can never reach 1 with these parameters")
    needed = (1.0 - m0) / m
    k = math.ceil(needed / omega - 1e-9)
    if k > params.n_periods:
        raise GameError(
            f"reaching productivity 1 takes {k} periods, game has {params.n_periods}"
        )
    schedule[: k - 1] = [omega] * (k - 1)
    last = needed - (k - 1) * omega
    if abs(last - round(last)) <= 1e-9:
        last = float(round(last))
    elif params.strict_integer_votes:
        raise GameError(
            f"productivity 1 needs a fractional vote ({last:.6g}) but votes are "
            "restricted to whole numbers"
        )
    schedule[k - 1] = last
    return schedule


def scenario_profile(
    params: GameParams, name: ScenarioName
) -> tuple[GameParams, StrategyProfile]:
    """Profile (and the rule set it is played under) for a named scenario."""
    n, omega = params.n_players, params.endowment
    if name == "lowest":
        return params, StrategyProfile.symmetric(ConstantPolicy(omega, 0.0), n)
    if name == "nash_no_invest":
        return params, threshold_profile([0.0] * params.n_periods, params, 0.0)
    if name == "nash_highest":
        return params, threshold_profile(unit_productivity_schedule(params), params, omega)
    if name == "nash_lowest":
        return params, threshold_profile(unit_productivity_schedule(params), params, 0.0)
    if name == "social_optimal":
        relaxed = params.relaxed()
        x = closed_form_optimum(relaxed).x_max
        return relaxed, StrategyProfile.symmetric(SwitchPolicy(x), n)
    raise GameError(f"unknown scenario {name!r}; choose from {', '.join(SCENARIOS)}")


def scenario(params: GameParams, name: ScenarioName) -> Trajectory:
    rules, profile = scenario_profile(params, name)
    return run_game(rules, profile)


# -- deviation search ---------------------------------------------------------

def _grid(upper: float, step: float) -> list[float]:
    k = int(math.floor(upper / step + 1e-9))
    pts = [min(i * step, upper) for i in range(k + 1)]
    if upper - pts[-1] > TOL:
        pts.append(upper)
    return pts


def best_response_value(
    params: GameParams,
    profile: StrategyProfile,
    player: int,
    contribution_grid_step: float = 1.0,
) -> float:
    """Highest total ``player`` can reach against the others' fixed policies."""
    if not 0 <= player < params.n_players:
        raise GameError(f"player index {player} out of range")
    if not contribution_grid_step > 0:
        raise GameError("contribution grid step must be positive")
    if len(profile.policies) != params.n_players:
        raise GameError("profile size does not match the number of players")

    own = profile.policies[player]
    others = [p for i, p in enumerate(profile.policies) if i != player]
    omega = params.endowment
    vote_grid = _grid(omega, 1.0)
    memo: dict[tuple[int, float], float] = {}

    def value(state: ProductivityState) -> float:
        if state.period >= params.n_periods:
            return 0.0
        key = (state.period, round(state.productivity, 12))
        if key in memo:
            return memo[key]
        other_votes = [decide(p, state, params, "investment") for p in others]
        votes = set(vote_grid)
        votes.add(decide(own, state, params, "investment"))
        by_investment: dict[float, float] = {}
        for v in sorted(votes):
            ballot = other_votes[:player] + [v] + other_votes[player:]
            inv = median_investment(ballot, params)
            if inv in by_investment:
                continue
            after = update_productivity(state, inv, params)
            remaining = omega - inv
            others_c = math.fsum(
                decide(p, after, params, "contribution", remaining) for p in others
            )
            choices = set(_grid(remaining, contribution_grid_step))
            choices.add(decide(own, after, params, "contribution", remaining))
            stage = max(
                period_payoff(params, after.productivity, inv, c, others_c + c)
                for c in choices
            )
            by_investment[inv] = stage + value(after)
        memo[key] = best = max(by_investment.values())
        return best

    return value(ProductivityState.initial(params))


def best_deviation_gain(
    params: GameParams,
    profile: StrategyProfile,
    player: int,
    contribution_grid_step: float = 1.0,
) -> float:
    """Largest payoff improvement ``player`` gets from a unilateral deviation.

    Contributions are searched on a grid of the given step (plus the full
    remaining balance), votes on whole numbers; the player's own policy
    choice is always among the candidates, so the result is never negative.
    """
    best = best_response_value(params, profile, player, contribution_grid_step)
    baseline = run_game(params, profile).total_payoffs[player]
    return max(0.0, best - baseline)


def deviation_gains(
    params: GameParams,
    profile: StrategyProfile,
    grid_step: float = 1.0,
    max_workers: int | None = None,
) -> list[float]:
    """``best_deviation_gain`` for every player, optionally in worker processes."""
    players = range(params.n_players)
    if max_workers and max_workers > 1:
        with ProcessPoolExecutor(max_workers=max_workers) as pool:
            futures = [
                pool.submit(best_deviation_gain, params, profile, i, grid_step)
                for i in players
            ]
            return [f.result() for f in futures]
    return [best_deviation_gain(params, profile, i, grid_step) for i in players]


def is_nash(
    params: GameParams,
    profile: StrategyProfile,
    grid_step: float = 1.0,
    epsilon: float = 1e-9,
    max_workers: int | None = None,
) -> bool:
    if epsilon < 0:
        raise GameError("epsilon must be non-negative")
    gains = deviation_gains(params, profile, grid_step, max_workers)
    return all(g <= epsilon for g in gains)
