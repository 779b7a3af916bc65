import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dynpgg.game import GameError, GameParams, period_payoff
from dynpgg.optimizer import (
    InvestmentPlan,
    best_switch_on_grid,
    closed_form_optimum,
    closed_form_payoff,
    exhaustive_plan_search,
    grid_search,
    payoff_of_switch,
    plan_payoff,
    quadratic_coefficients,
    switch_grid,
)

P = GameParams()


def reference_plan_payoff(params, fractions):
    """Per-player total of a symmetric plan, straight from the payoff rule."""
    m = params.base_productivity
    total = 0.0
    w, n = params.endowment, params.n_players
    for p in fractions:
        inv = p * w
        m += params.productivity_rate * inv
        total += period_payoff(params, m, inv, w - inv, n * (w - inv))
    return total


def reference_exhaustive(params, levels):
    shares = [k / (levels - 1) for k in range(levels)]
    best, best_plan = float("-inf"), None
    for plan in itertools.product(shares, repeat=params.n_periods):
        pay = reference_plan_payoff(params, plan)
        if pay > best + 1e-9:
            best, best_plan = pay, plan
    return best_plan, best


@pytest.mark.parametrize("x, expected", [(3.5, 169), (0, 120), (10, 0), (7, 120)])
def test_payoff_of_switch(x, expected):
    assert payoff_of_switch(P, x) == pytest.approx(expected, abs=1e-9)


def test_payoff_of_switch_range():
    with pytest.raises(GameError):
        payoff_of_switch(P, 10.5)
    with pytest.raises(GameError):
        payoff_of_switch(P, -0.1)


def test_grid_search_coarse():
    res = grid_search(P, 0.5)
    assert res.x_best == 3.5
    assert res.payoff_best == pytest.approx(169, abs=1e-9)
    assert [x for x, _ in res.samples] == [k * 0.5 for k in range(21)]


def test_grid_search_fine():
    res = grid_search(P, 0.01)
    assert abs(res.x_best - 3.5) <= 0.005
    assert res.payoff_best == pytest.approx(169, abs=1e-6)
    assert len(res.samples) == 1001


def test_grid_search_single_period():
    assert grid_search(GameParams(n_periods=1), 0.1).x_best == 0


def test_grid_search_engine_matches_kernels():
    fast = grid_search(P, 0.25)
    slow = grid_search(P, 0.25, use_engine=True)
    assert fast.x_best == slow.x_best
    np.testing.assert_allclose([y for _, y in fast.samples],
                               [y for _, y in slow.samples], atol=1e-9, rtol=0)


def test_grid_ties_go_to_smaller_stage():
    # integer grid: stages 3 and 4 both pay 168
    res = grid_search(P, 1.0)
    assert res.x_best == 3
    assert res.payoff_best == pytest.approx(168, abs=1e-9)


@pytest.mark.parametrize("step", [0, -1, 11])
def test_grid_step_errors(step):
    with pytest.raises(GameError):
        grid_search(P, step)


def test_grid_includes_last_period():
    xs = switch_grid(10, 0.3)
    assert xs[0] == 0 and xs[-1] == 10
    assert np.all(np.diff(xs) > 0)


@pytest.mark.parametrize("x, expected", [(3.5, 169), (0, 120), (10, 0)])
def test_closed_form_payoff(x, expected):
    assert closed_form_payoff(P, x) == pytest.approx(expected, abs=1e-9)


def test_closed_form_normalized_coefficients():
    a, b, c = quadratic_coefficients(P)
    assert (a / 40, b / 40, c / 40) == pytest.approx((-0.1, 0.7, 3.0), abs=1e-12)


def test_closed_form_optimum_default():
    opt = closed_form_optimum(P)
    assert opt.x_max == pytest.approx(3.5, abs=1e-9)
    assert opt.f_max == pytest.approx(169, abs=1e-9)
    assert not opt.clamped


def test_closed_form_optimum_clamped():
    opt = closed_form_optimum(GameParams(base_productivity=1.5))
    assert opt.x_max == 0 and opt.clamped


def test_closed_form_optimum_no_growth():
    opt = closed_form_optimum(GameParams(productivity_rate=0.0))
    assert opt.x_max == 0 and opt.clamped
    assert opt.f_max == pytest.approx(120)


def test_closed_form_optimum_twenty_periods():
    params = GameParams(n_periods=20)
    opt = closed_form_optimum(params)
    assert opt.x_max == pytest.approx(8.5, abs=1e-12)
    assert opt.f_max == pytest.approx(closed_form_payoff(params, 8.5))
    assert abs(grid_search(params, 0.01).x_best - 8.5) <= 0.01


params_st = st.builds(
    GameParams,
    n_players=st.integers(2, 8),
    n_periods=st.integers(1, 20),
    endowment=st.sampled_from([1.0, 5.0, 10.0, 20.0]),
    base_productivity=st.floats(0.05, 2.0),
    productivity_rate=st.floats(0.0, 0.05),
    strict_integer_votes=st.just(False),
)


@settings(max_examples=60, deadline=None)
@given(params_st, st.floats(0, 1))
def test_simulation_equals_closed_form(params, u):
    x = u * params.n_periods
    sim = payoff_of_switch(params, x)
    assert sim == pytest.approx(closed_form_payoff(params, x), rel=1e-12, abs=1e-9)


@settings(max_examples=40, deadline=None)
@given(params_st)
def test_grid_search_near_vertex(params):
    step = 0.05
    res = grid_search(params, step)
    opt = closed_form_optimum(params)
    assert abs(res.x_best - opt.x_max) <= step + 1e-9


@settings(max_examples=30)
@given(params_st, st.integers(1, 5))
def test_argmax_scale_invariance(params, k):
    bigger = GameParams(params.n_players * k, params.n_periods, params.endowment,
                        params.base_productivity, params.productivity_rate, False)
    assert closed_form_optimum(bigger).x_max == closed_form_optimum(params).x_max
    x = params.n_periods / 3
    assert closed_form_payoff(bigger, x) == pytest.approx(k * closed_form_payoff(params, x))


# -- exhaustive search ---------------------------------------------------------

def test_exhaustive_four_periods_is_switch_shaped():
    params = GameParams(n_periods=4)
    plan, pay = exhaustive_plan_search(params, 11)
    ref_plan, ref_pay = reference_exhaustive(params, 11)
    assert plan.is_switch_shaped()
    assert plan.fractions == pytest.approx(ref_plan)
    assert pay == pytest.approx(ref_pay, abs=1e-9)
    assert pay == pytest.approx(best_switch_on_grid(params, 11)[1], abs=1e-9)
    assert plan.switch_stage() == pytest.approx(0.5)


def test_exhaustive_binary_ten_periods():
    plan, pay = exhaustive_plan_search(P, 2)
    assert pay == pytest.approx(168, abs=1e-9)
    assert plan.switch_stage() in (3, 4)
    assert pay == pytest.approx(max(payoff_of_switch(P, 3), payoff_of_switch(P, 4)))


def test_exhaustive_single_period():
    plan, pay = exhaustive_plan_search(GameParams(n_periods=1), 7)
    assert plan.fractions == (0.0,)
    assert pay == pytest.approx(12)


def test_exhaustive_cap():
    with pytest.raises(GameError):
        exhaustive_plan_search(GameParams(n_periods=9), 11)
    with pytest.raises(GameError):
        exhaustive_plan_search(P, 1)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 5), st.integers(2, 6), st.floats(0.05, 1.5),
       st.floats(0.0, 0.04), st.integers(2, 6))
def test_no_plan_beats_best_switch(t, levels, m0, m, n):
    params = GameParams(n_players=n, n_periods=t, base_productivity=m0,
                        productivity_rate=m, strict_integer_votes=False)
    plan, pay = exhaustive_plan_search(params, levels)
    _, switch_pay = best_switch_on_grid(params, levels)
    assert pay == pytest.approx(switch_pay, abs=1e-9)
    assert pay == pytest.approx(plan_payoff(params, plan), abs=1e-12)
    assert pay == pytest.approx(reference_plan_payoff(params, plan.fractions), abs=1e-9)


def test_investment_plan_validation():
    with pytest.raises(GameError):
        InvestmentPlan((0.5, 1.2))
    assert InvestmentPlan((1, 1, 0.3, 0)).switch_stage() == pytest.approx(2.3)
    assert InvestmentPlan((0.2, 0.5)).switch_stage() is None
    assert not InvestmentPlan((0.2, 0.5)).is_switch_shaped()
