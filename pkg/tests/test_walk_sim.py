import math
from fractions import Fraction

import numpy as np
import pytest

from raysearch import (
    LEFT,
    RIGHT,
    BudgetError,
    DomainError,
    ErrorAssignment,
    ErrorModel,
    GoalSpec,
    MonotonicityError,
    NotHitError,
    RangeError,
    StrategySpec,
    brute_force_worst_ratio,
    competitive_ratio,
    drift,
    execute_line_walk,
    execute_mray_walk,
    realize_assignment,
)
from raysearch.analysis import doubling_ratio_chain, doubling_worst_reach
from raysearch.walk_sim import trace_csv, worst_case_bits

DBL = StrategySpec.doubling()
WC = ErrorAssignment.worst_case(RIGHT)
FREE = ErrorAssignment.error_free()


def exact_worst_ratio(delta, j):
    """Walk the worst case in exact rationals; an oracle independent of the float simulator."""
    delta = Fraction(delta)
    pos, path, reach = Fraction(0), Fraction(0), None
    for i in range(1, 2 * j + 2):
        f = Fraction(2) ** i
        left, right = (1 + delta) * f, (1 - delta) * f
        if i % 2:  # left first
            path += left + right
            pos += right - left
        else:
            reach = pos + right
            path += left + right
            pos += right - left
    d = reach  # eps -> 0
    path += d - pos
    return path / d


def test_realize_worst_case_endpoints():
    lengths = realize_assignment(WC, ErrorModel.percentual(0.25), DBL, 3)
    assert tuple(lengths[0]) == (2.5, 1.5)
    lengths = realize_assignment(WC, ErrorModel.multiplicative(1.0), DBL, 1)
    assert tuple(lengths[0]) == (4.0, 1.0)


def test_realize_error_free():
    lengths = realize_assignment(FREE, ErrorModel.percentual(0.3), DBL, 3)
    assert tuple(lengths[2]) == (8, 8)


def test_custom_multiplier_outside_interval():
    rule = ErrorAssignment.custom([1.0, 1.3])
    with pytest.raises(DomainError, match="outside admissible"):
        realize_assignment(rule, ErrorModel.percentual(0.25), DBL, 1)


def test_error_free_hit_examples():
    trace = execute_line_walk(DBL, FREE, ErrorModel.percentual(0), GoalSpec.absolute(4 + 1e-9), 10)
    assert trace.hit_step == 4
    assert competitive_ratio(trace) == pytest.approx(32 / 4, rel=1e-8)
    first = execute_line_walk(DBL, FREE, ErrorModel.percentual(0), GoalSpec.absolute(2, LEFT), 1)
    assert first.hit_step == 1 and competitive_ratio(first) == 1


def test_goal_just_past_step_four():
    trace = execute_line_walk(DBL, FREE, ErrorModel.percentual(0), GoalSpec.beyond_step(4), 10)
    # direct summation: 2(2+4+8+16+32) + 16, divided by 16
    assert competitive_ratio(trace) == pytest.approx(140 / 16, rel=1e-8)


def test_doubling_fails_above_third():
    trace = execute_line_walk(DBL, WC, ErrorModel.percentual(0.4), GoalSpec.absolute(2), 50)
    assert not trace.hit
    with pytest.raises(NotHitError):
        competitive_ratio(trace)


def test_drift_examples():
    model = ErrorModel.percentual(0.25)
    trace = execute_line_walk(DBL, WC, model, GoalSpec.beyond_step(8), 20)
    assert drift(trace, 2) == pytest.approx(0.5 * (2 + 4))
    assert drift(trace, 3) == pytest.approx(0.5 * (2 + 4 + 8))
    free = execute_line_walk(DBL, FREE, model, GoalSpec.beyond_step(8), 20)
    assert all(drift(free, k) == 0 for k in range(free.iterations + 1))
    with pytest.raises(RangeError):
        drift(free, free.iterations + 1)


def test_worst_ratio_converges_to_limit():
    model = ErrorModel.percentual(0.2)
    trace = execute_line_walk(DBL, WC, model, GoalSpec.beyond_step(20), 30)
    assert competitive_ratio(trace) == pytest.approx(25, abs=1e-4)


@pytest.mark.parametrize("delta", [0, Fraction(1, 10), Fraction(1, 4), Fraction(3, 10)])
@pytest.mark.parametrize("j", [1, 2, 5])
def test_simulation_matches_exact_rationals(delta, j):
    trace = execute_line_walk(DBL, WC, ErrorModel.percentual(float(delta)),
                              GoalSpec.beyond_step(2 * j, epsilon=1e-12), 2 * j + 4)
    assert competitive_ratio(trace) == pytest.approx(float(exact_worst_ratio(delta, j)), rel=1e-10)


def test_path_agrees_with_summed_expression():
    # covered distance through step 2j+1, plus the drift back to the start, plus d
    model = ErrorModel.percentual(0.2)
    j = 3
    trace = execute_line_walk(DBL, WC, model, GoalSpec.beyond_step(2 * j), 20)
    lengths = realize_assignment(WC, model, DBL, 2 * j + 1)
    covered = lengths.sum()
    drift_total = (lengths[:, 0] - lengths[:, 1]).sum()
    assert trace.path_length == pytest.approx(covered + drift_total + trace.distance, rel=1e-14)


def test_trace_positions_follow_drift():
    model = ErrorModel.multiplicative(0.3)
    trace = execute_line_walk(StrategySpec.geometric(2.7), WC, model, GoalSpec.absolute(1e12), 20)
    assert [-p for p in trace.positions] == pytest.approx(list(trace.drift_per_iteration), rel=1e-12)


def test_mirror_symmetry_worst_case():
    model = ErrorModel.percentual(0.15)
    a = execute_line_walk(DBL, WC, model, GoalSpec.beyond_step(6), 20)
    b = execute_line_walk(DBL.mirror(), ErrorAssignment.worst_case(LEFT), model, GoalSpec.beyond_step(6), 20)
    assert b.goal_position == -a.goal_position
    assert competitive_ratio(a) == competitive_ratio(b)


def test_goal_validation():
    with pytest.raises(DomainError):
        GoalSpec.absolute(0.5)
    with pytest.raises(DomainError):
        GoalSpec(distance=2.0, just_beyond=3)
    with pytest.raises(DomainError):
        execute_line_walk(DBL, WC, ErrorModel.percentual(0.4), GoalSpec.beyond_step(8), 20)


def test_tabulated_runs_out():
    trace = execute_line_walk(StrategySpec.tabulated([1, 2]), FREE, ErrorModel.percentual(0),
                              GoalSpec.absolute(10), 50)
    assert not trace.hit and trace.iterations == 2


def test_overflow_propagates():
    with pytest.raises(OverflowError):
        execute_line_walk(StrategySpec.geometric(1e20), FREE, ErrorModel.percentual(0),
                          GoalSpec.absolute(1e300), 40)


# m rays


def test_mray_error_free_tends_to_nine():
    ratios = []
    for k in (10, 20, 40):
        t = execute_mray_walk(StrategySpec.mray(2), 2, FREE, ErrorModel.percentual(0),
                              GoalSpec.beyond_step(k), 60)
        ratios.append(competitive_ratio(t))
    assert ratios[0] < ratios[1] < ratios[2] < 9
    assert ratios[2] == pytest.approx(9, abs=1e-6)


def test_mray_worst_case_three_rays():
    t = execute_mray_walk(StrategySpec.mray(3), 3, ErrorAssignment.mray_worst_case(),
                          ErrorModel.percentual(0.2), GoalSpec.beyond_step(40), 60)
    assert competitive_ratio(t) == pytest.approx(20.25, abs=1e-3)
    assert t.hit_step == 43
    assert set(t.drift_per_iteration) == {0.0}


def test_mray_hit_on_boundary():
    t = execute_mray_walk(StrategySpec.mray(2), 2, FREE, ErrorModel.percentual(0),
                          GoalSpec.absolute(4.0, ray=0), 10)
    assert t.hit_step == 2
    assert t.path_length == 2 * 2 + 4


def test_mray_rejects_non_monotone():
    with pytest.raises(MonotonicityError):
        execute_mray_walk(StrategySpec.mray(2), 2, FREE, ErrorModel.percentual(0.7),
                          GoalSpec.absolute(3.0), 20)


def test_mray_beta_choice():
    model = ErrorModel.percentual(0.2)
    ratios = []
    for beta in (-0.2, 0.0, 0.2):
        t = execute_mray_walk(StrategySpec.mray(3), 3, ErrorAssignment.mray_worst_case(beta=beta),
                              model, GoalSpec.beyond_step(30), 60)
        ratios.append(competitive_ratio(t))
    assert ratios[0] < ratios[1] < ratios[2]
    with pytest.raises(DomainError):
        execute_mray_walk(StrategySpec.mray(3), 3, ErrorAssignment.mray_worst_case(beta=0.3),
                          model, GoalSpec.beyond_step(30), 60)


# brute force


def test_brute_force_error_free_collapses():
    res = brute_force_worst_ratio(DBL, ErrorModel.percentual(0), 3)
    eps = 4 ** 3 * 1e-9
    assert res.ratio == pytest.approx(1 + 2 * (2 ** 8 - 2) / (2 ** 6 + eps), rel=1e-12)
    assert len(res.maximizers) == 2 ** res.maximizers.shape[1]


@pytest.mark.parametrize("delta", [0.1, 0.25])
def test_brute_force_argmax_is_analytic_worst_case(delta):
    model = ErrorModel.percentual(delta)
    res = brute_force_worst_ratio(DBL, model, 2)
    wc = worst_case_bits(res, RIGHT)
    assert (res.maximizers == wc).all(axis=1).any()
    assert res.ratio == pytest.approx(doubling_ratio_chain(model, 2, doubling_worst_reach(model, 2) * 1e-9),
                                      rel=1e-9)
    assert res.goal_position > 0


def test_brute_force_one_step():
    delta = 0.2
    model = ErrorModel.percentual(delta)
    res = brute_force_worst_ratio(DBL, model, 0)
    assert res.ratio == pytest.approx(1 + 4 * (1 + delta), rel=1e-12)
    assert res.goal_position == pytest.approx(1.0)
    short = brute_force_worst_ratio(StrategySpec.tabulated([1, 1]), model, 0)
    assert short.ratio == pytest.approx(1 + 2 * (1 + delta) * 1 / 1, rel=1e-12)


def test_brute_force_budget():
    with pytest.raises(BudgetError):
        brute_force_worst_ratio(DBL, ErrorModel.percentual(0.1), 5)


# export


def test_trace_csv_columns_and_stability():
    model = ErrorModel.percentual(0.25)
    t = execute_line_walk(DBL, WC, model, GoalSpec.beyond_step(4), 20)
    text = trace_csv(t)
    lines = text.splitlines()
    assert lines[0] == "step,direction,nominal,realized,position,drift,cum_path"
    assert lines[1] == "1,left,2,2.5,-2.5,0,2.5"
    assert lines[2] == "1,right,2,1.5,-1,1,4"
    last = lines[-1].split(",")
    assert float(last[-1]) == pytest.approx(t.path_length, rel=1e-11)
    assert float(last[4]) == pytest.approx(t.goal_position, rel=1e-11)
    assert trace_csv(execute_line_walk(DBL, WC, model, GoalSpec.beyond_step(4), 20)) == text
