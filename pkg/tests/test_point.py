import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from patrol.point import (
    BudgetExceeded,
    PeriodicVisitSchedule,
    PointInstance,
    alpha_constant,
    approx_idle_2,
    bad_family,
    ceiling_instance,
    enumerate_minimal_candidates,
    f_sequence_check,
    halve_bound,
    halve_transform,
    idle_candidates,
    necessary_condition,
    optimal_idle_exact,
    power_of_two_schedule,
    solve_discretized,
    sufficient_condition_two,
    verify_minimal_candidates,
)

from . import oracles

CORPUS = oracles.point_instances(4, 200)


@pytest.mark.parametrize("inst, good", [
    ((2, 2), True), ((2, 3, 5), False), ((2, 3, 7), False), ((2, 4, 8, 8), True),
    ((3, 3, 3), True), ((1,), True), ((2,), False),
])
def test_solver_examples(inst, good):
    res = solve_discretized(inst)
    assert res.good == good
    if good:
        assert oracles.point_schedule_ok(res.schedule.assignment, inst)


def test_round_robin_period():
    res = solve_discretized((2, 2))
    assert res.schedule.period == 2


def test_solver_is_deterministic():
    a, b = solve_discretized((3, 4, 4, 6)), solve_discretized((3, 4, 4, 6))
    assert a.schedule == b.schedule and a.states == b.states


def test_budget_reported_apart_from_bad():
    res = solve_discretized((2, 3, 5, 9, 17), max_states=3)
    assert res.status == "unknown-budget" and not res.good


@pytest.mark.parametrize("prune", [False, True])
def test_oracle_agreement_on_corpus(prune):
    for inst in CORPUS:
        res = solve_discretized(inst, prune_dominated=prune)
        assert res.good == oracles.point_good(inst), inst
        if res.good:
            assert oracles.point_schedule_ok(res.schedule.assignment, inst), inst


def test_monotone_under_smaller_intervals():
    verdict = {inst: solve_discretized(inst).good for inst in CORPUS}
    for inst, good in verdict.items():
        if not good:
            continue
        for i in range(len(inst)):
            if inst[i] > 1:
                smaller = tuple(sorted(inst[:i] + (inst[i] - 1,) + inst[i + 1:]))
                assert verdict.get(smaller, True), (inst, smaller)


def test_necessary_condition_on_corpus():
    for inst in CORPUS:
        if not necessary_condition(inst):
            assert not solve_discretized(inst).good
    assert not necessary_condition((2, 3, 7))
    assert necessary_condition((1,)) and necessary_condition((3, 3, 3))


def test_schedule_invariants():
    s = PeriodicVisitSchedule((0, 1, 0, 2))
    assert s.is_valid_for((2, 4, 4))
    assert not s.is_valid_for((3, 4, 4))
    assert PeriodicVisitSchedule.from_text(s.to_text()) == s
    # an agent used once per period has gap equal to the period
    assert PeriodicVisitSchedule((0, 1, 1)).is_valid_for((3, 1))


@pytest.mark.parametrize("exps, period", [((0,), 1), ((1, 1), 2), ((1, 2, 2), 4)])
def test_power_of_two_examples(exps, period):
    s = power_of_two_schedule(exps)
    assert s.period == period
    assert oracles.point_schedule_ok(s.assignment, [2 ** b for b in exps])


def test_power_of_two_needs_enough_agents():
    with pytest.raises(ValueError):
        power_of_two_schedule((1, 2))


@settings(max_examples=150)
@given(st.lists(st.integers(0, 6), min_size=1, max_size=12))
def test_power_of_two_property(exps):
    if sum(F(1, 2 ** b) for b in exps) < 1:
        with pytest.raises(ValueError):
            power_of_two_schedule(exps)
        return
    s = power_of_two_schedule(exps)
    assert oracles.point_schedule_ok(s.assignment, [2 ** b for b in exps])
    used = {2 ** exps[i] for i in set(s.assignment)}
    assert s.period == max(used)


def test_sufficient_condition_two_examples():
    assert sufficient_condition_two((1, 2)) is None
    assert solve_discretized((1, 2)).good
    s = sufficient_condition_two((2, 2, 2, 2))
    assert oracles.point_schedule_ok(s.assignment, (2, 2, 2, 2))
    s = sufficient_condition_two((3,) * 6)
    assert s.period == 4 and oracles.point_schedule_ok(s.assignment, (3,) * 6)


@settings(max_examples=100)
@given(st.lists(st.integers(1, 40), min_size=1, max_size=20))
def test_sufficient_condition_two_property(a):
    s = sufficient_condition_two(a)
    if sum(F(1, x) for x in a) >= 2:
        assert s is not None and oracles.point_schedule_ok(s.assignment, a)
    else:
        assert s is None


@pytest.mark.parametrize("a, y, idle", [((1, 1), F(1, 2), 1), ((2, 2), 1, 2), ((1,), 1, 2)])
def test_approx_examples(a, y, idle):
    res = approx_idle_2(a)
    assert res.y == y and res.idle == idle


@settings(max_examples=80)
@given(st.lists(st.fractions(F(1, 4), 6, max_denominator=6), min_size=1, max_size=5))
def test_approx_schedule_respects_intervals(a):
    res = approx_idle_2(a)
    ticks = [math.ceil(x / res.idle) for x in a]
    assert oracles.point_schedule_ok(res.schedule.assignment, ticks)


@pytest.mark.parametrize("a, best", [((1,), 1), ((1, 1), F(1, 2)), ((2, 3, 5), F(5, 4))])
def test_optimal_idle_examples(a, best):
    assert optimal_idle_exact(a) == best


def _optimal_by_scan(a):
    feasible = [t for t in idle_candidates(a) if oracles.point_good(ceiling_instance(a, t).intervals)]
    return min(feasible)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.fractions(F(1, 2), 4, max_denominator=4), min_size=1, max_size=3))
def test_optimal_idle_matches_full_scan(a):
    assert optimal_idle_exact(a) == _optimal_by_scan(a)


def test_optimal_idle_against_fine_grid():
    # every T = a_i / j with j <= 20 that is feasible is at least the optimum
    a = (2, 3, 5)
    best = optimal_idle_exact(a)
    grid = sorted({F(x, j) for x in a for j in range(1, 21)})
    feasible = [t for t in grid if oracles.point_good(ceiling_instance(a, t).intervals)]
    assert min(feasible) == best


def test_optimal_idle_budget():
    with pytest.raises(BudgetExceeded):
        optimal_idle_exact((2, 3, 5, 9, 17), max_states=2)


@pytest.mark.parametrize("k, expect", [(0, (2,)), (2, (2, 3, 5)), (4, (2, 3, 5, 9, 17))])
def test_bad_family(k, expect):
    inst = bad_family(k)
    assert inst.intervals == expect
    assert not solve_discretized(inst).good


def test_bad_family_sums_approach_alpha():
    sums = [bad_family(k).reciprocal_sum() for k in range(8)]
    assert sums == sorted(sums) and all(s < alpha_constant(30) for s in sums)


@pytest.mark.parametrize("inst, m, out", [((2, 3, 8, 8), 4, (2, 3, 4)), ((2, 2), 1, (1,)),
                                          ((2, 3, 5, 9), 5, (2, 3, 5))])
def test_halve_examples(inst, m, out):
    res = halve_transform(inst, m)
    assert res.intervals == out
    t = PointInstance(inst).reciprocal_sum()
    assert res.reciprocal_sum() >= halve_bound(t, m)


def test_halve_keeps_badness_on_corpus():
    for inst in CORPUS:
        m = max(1, math.ceil(max(inst) / 2))
        if len(inst) == 1 and inst[0] > m:
            with pytest.raises(ValueError):
                halve_transform(inst, m)
            continue
        out = halve_transform(inst, m)
        assert max(out.intervals) <= m
        assert out.reciprocal_sum() >= halve_bound(PointInstance(inst).reciprocal_sum(), m)
        if not oracles.point_good(inst):
            assert not oracles.point_good(out.intervals), (inst, m)


def test_halve_rejects_large_entries():
    with pytest.raises(ValueError):
        halve_transform((2, 9), 4)


def test_f_sequence():
    res = f_sequence_check()
    assert res.ok and res.minimum > F(11822, 10000)
    low = f_sequence_check(base=1, r_max=4)
    assert not low.ok
    assert f_sequence_check(threshold=0, base=1, r_max=8).ok


def test_minimal_candidates():
    assert [c.intervals for c in enumerate_minimal_candidates(2, 1)] == [(1,), (2, 2)]
    assert [c.intervals for c in enumerate_minimal_candidates(3, 1)] == [
        (1,), (2, 2), (2, 3, 3), (3, 3, 3)]
    cands = {c.intervals for c in enumerate_minimal_candidates(8, F(11822, 10000))}
    assert (8,) * 10 in cands and (8,) * 9 not in cands


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 6), st.fractions(F(1, 2), F(3, 2), max_denominator=10))
def test_minimal_candidates_are_minimal(bound, threshold):
    seen = []
    for c in enumerate_minimal_candidates(bound, threshold):
        a = c.intervals
        assert list(a) == sorted(a) and max(a) <= bound
        assert c.reciprocal_sum() >= threshold
        assert PointInstance(a[:-1]).reciprocal_sum() < threshold if len(a) > 1 else True
        seen.append(a)
    assert seen == sorted(seen) and len(set(seen)) == len(seen)


def test_minimal_candidates_bound_six_all_good():
    rep = verify_minimal_candidates(6)
    assert rep.ok and rep.checked > 0


def test_alpha_partial_sums():
    assert alpha_constant(1) == F(1, 2)
    assert alpha_constant(3) == F(31, 30)
    assert F(1264, 1000) < alpha_constant(30) < F(12645, 10000)
    assert all(alpha_constant(n) < alpha_constant(n + 1) for n in range(1, 20))
