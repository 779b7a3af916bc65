import itertools
import random

import pytest

from dynpgg.equilibria import (
    SCENARIOS,
    best_deviation_gain,
    best_response_value,
    deviation_gains,
    is_nash,
    scenario,
    scenario_profile,
    unit_productivity_schedule,
)
from dynpgg.game import (
    GameError,
    GameParams,
    ProductivityState,
    median_investment,
    run_game,
    run_period,
)
from dynpgg.strategies import (
    ConstantPolicy,
    StrategyProfile,
    SwitchPolicy,
    ThresholdPolicy,
    decide,
    threshold_profile,
)

P = GameParams()


def brute_force_best(params, profile, player):
    """Best total over every open-loop table of whole-number (vote, contribution)
    choices, simulated period by period with ``run_period``."""
    omega = int(params.endowment)
    others = [p for i, p in enumerate(profile.policies) if i != player]
    per_period = list(itertools.product(range(omega + 1), range(omega + 1)))
    best = float("-inf")
    for table in itertools.product(per_period, repeat=params.n_periods):
        state = ProductivityState.initial(params)
        total = 0.0
        for vote, want in table:
            votes = [decide(p, state, params, "investment") for p in others]
            votes.insert(player, vote)
            inv = median_investment(votes, params)
            after = ProductivityState(state.period + 1,
                                      state.productivity + params.productivity_rate * inv)
            contribs = [decide(p, after, params, "contribution", omega - inv) for p in others]
            contribs.insert(player, min(want, omega - inv))
            state, rec = run_period(state, votes, contribs, params)
            total += rec.payoffs[player]
        best = max(best, total)
    return best


@pytest.mark.parametrize("name, total", [
    ("lowest", 0), ("nash_highest", 120), ("nash_no_invest", 100),
    ("nash_lowest", 30), ("social_optimal", 169),
])
def test_scenarios(name, total):
    traj = scenario(P, name)
    assert traj.total_payoffs == pytest.approx([total] * 4, abs=1e-9)


def test_unit_schedule_default():
    assert unit_productivity_schedule(P) == [10] * 7 + [0] * 3


def test_unit_schedule_partial_last_vote():
    params = GameParams(base_productivity=0.35, strict_integer_votes=False)
    sched = unit_productivity_schedule(params)
    assert sched[:7] == [10] * 6 + [pytest.approx(5)]
    assert scenario(params, "nash_highest").records[6].productivity == pytest.approx(1)
    with pytest.raises(GameError):
        # 64.5 units needed: the last vote would be 4.5
        unit_productivity_schedule(GameParams(base_productivity=0.355))


@pytest.mark.parametrize("name", ["nash_highest", "nash_lowest"])
def test_scenario_infeasible(name):
    with pytest.raises(GameError):
        scenario(GameParams(n_periods=5), name)


def test_unknown_scenario():
    with pytest.raises(GameError):
        scenario(P, "best")


small_games = [
    GameParams(n_players=4, n_periods=3, endowment=2, base_productivity=0.3,
               productivity_rate=0.25),
    GameParams(n_players=3, n_periods=3, endowment=2, base_productivity=0.8,
               productivity_rate=0.1),
]


def random_policy(rng, params):
    omega = int(params.endowment)
    kind = rng.choice(["threshold", "constant", "switch"])
    if kind == "threshold":
        return ThresholdPolicy(tuple(rng.randint(0, omega) for _ in range(params.n_periods)),
                               float(rng.randint(0, omega)))
    if kind == "constant":
        return ConstantPolicy(rng.randint(0, omega), rng.choice([0.0, 0.5, 1.0]))
    return SwitchPolicy(float(rng.randint(0, params.n_periods)))


@pytest.mark.parametrize("seed", range(8))
@pytest.mark.parametrize("params", small_games)
def test_dynamic_program_matches_brute_force(params, seed):
    rng = random.Random(seed)
    profile = StrategyProfile(tuple(random_policy(rng, params)
                                    for _ in range(params.n_players)))
    player = rng.randrange(params.n_players)
    assert best_response_value(params, profile, player) == pytest.approx(
        brute_force_best(params, profile, player), abs=1e-9)


def test_vote_deviation_can_pay():
    # others vote 0, 2, 2: the deviator decides whether the median is 1 or 2
    params = small_games[0]
    others = [ConstantPolicy(0, 0.0), ConstantPolicy(2, 0.0), ConstantPolicy(2, 0.0)]
    profile = StrategyProfile((ConstantPolicy(2, 0.0), *others))
    assert best_deviation_gain(params, profile, 0) > 0


def test_nash_highest_has_no_profitable_deviation():
    _, prof = scenario_profile(P, "nash_highest")
    assert deviation_gains(P, prof) == pytest.approx([0] * 4, abs=1e-9)


def test_social_optimum_is_not_an_equilibrium():
    rules, prof = scenario_profile(P, "social_optimal")
    # free riding from the switch period on: 5 * 0.35 + 6 * 10 * 0.35
    assert best_deviation_gain(rules, prof, 0) == pytest.approx(22.75, abs=1e-9)
    assert not is_nash(rules, prof, 1.0, 1e-9)


def test_one_period_threshold_game():
    params = GameParams(n_periods=1)
    prof = threshold_profile([0], params)
    assert best_deviation_gain(params, prof, 2) == 0
    assert is_nash(params, prof)


@pytest.mark.parametrize("name", ["nash_lowest", "nash_no_invest", "nash_highest"])
def test_named_equilibria(name):
    _, prof = scenario_profile(P, name)
    assert is_nash(P, prof, 1.0, 1e-9)


def test_finer_contribution_grid():
    _, prof = scenario_profile(P, "nash_no_invest")
    assert best_deviation_gain(P, prof, 1, contribution_grid_step=0.25) == 0


def test_gain_is_never_negative_even_off_grid():
    # fractional own contributions are not on the grid; the own choice is still searched
    params = GameParams(strict_integer_votes=False)
    prof = StrategyProfile.symmetric(ConstantPolicy(0, 0.37), 4)
    assert best_deviation_gain(params, prof, 0, 3.0) >= 0


def test_sampled_threshold_schedules_are_equilibria():
    rng = random.Random(7)
    totals = []
    for _ in range(25):
        sched = [rng.randint(0, 10) for _ in range(10)]
        prof = threshold_profile(sched, P, rng.choice([0.0, 10.0]))
        assert is_nash(P, prof, 1.0, 1e-9)
        totals.append(run_game(P, prof).total_payoffs[0])
    assert max(totals) <= 120 + 1e-9


def test_equilibrium_payoff_can_fall_below_thirty():
    # investing everything forever is also a threshold equilibrium, worth 0
    prof = threshold_profile([10] * 10, P)
    assert is_nash(P, prof)
    assert run_game(P, prof).total_payoffs[0] == 0


def test_threshold_equilibrium_upper_bound_by_enumeration():
    """Highest total any symmetric integer schedule gives threshold players.

    Every player's period payoff depends only on the cumulative investment,
    so the maximum over all 11**10 schedules follows from a small table over
    (period, cumulative investment)."""
    best = {0: 0.0}
    for _ in range(10):
        nxt = {}
        for cum, val in best.items():
            for v in range(11):
                c2 = cum + v
                m = 0.3 + 0.01 * c2
                keep = 10 - v
                pay = keep if m < 1 - 1e-9 else 4 * m * keep
                nxt[c2] = max(nxt.get(c2, float("-inf")), val + pay)
        best = nxt
    assert max(best.values()) == pytest.approx(120, abs=1e-9)


def test_parallel_gains_match_serial():
    rules, prof = scenario_profile(P, "social_optimal")
    assert deviation_gains(rules, prof, max_workers=2) == deviation_gains(rules, prof)


@pytest.mark.parametrize("kwargs", [{"player": 4}, {"player": -1},
                                    {"player": 0, "contribution_grid_step": 0}])
def test_bad_deviation_arguments(kwargs):
    _, prof = scenario_profile(P, "nash_lowest")
    with pytest.raises(GameError):
        best_deviation_gain(P, prof, **kwargs)


def test_negative_epsilon():
    _, prof = scenario_profile(P, "nash_lowest")
    with pytest.raises(GameError):
        is_nash(P, prof, 1.0, -1)


def test_all_scenarios_listed():
    assert set(SCENARIOS) == {"lowest", "nash_highest", "nash_no_invest",
                              "nash_lowest", "social_optimal"}
