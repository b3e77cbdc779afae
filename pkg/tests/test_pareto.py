import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings

from repeater_timing.model import AppClass, LinkKind, Path, end_to_end_latency
from repeater_timing.pareto import (
    BudgetExceeded,
    Orientation,
    best_orientations,
    brute_force_min,
    check_condition_a,
    check_condition_b,
    flip,
    frontier_extremes,
    improving_slide,
    is_pareto,
)
from repeater_timing.timing import Schedule, evaluate, make_schedule, matched_tpt
from strategies import paths

FWD, REV = LinkKind.SENDER_RECEIVER, LinkKind.RECEIVER_SENDER
MIM, MSM = LinkKind.MEET_IN_THE_MIDDLE, LinkKind.MIDPOINT_SOURCE
B, C, T = AppClass.B, AppClass.C, AppClass.T
HALF = Fraction(1, 2)

FORWARD4 = Path.uniform([FWD] * 4)
BUTTERFLY4 = Path.uniform([REV, REV, FWD, FWD])


def test_condition_a_long_pole():
    p = Path.of([FWD] * 3, [1, 2, 1])
    res = check_condition_a(p, make_schedule(p, "forward"))
    assert not res.passed
    assert res.violating_nodes == (1,)


def test_condition_a_flat_equal_hops_coincident_lines():
    p = Path.uniform([FWD] * 4)
    assert check_condition_a(p, make_schedule(p, "flat")).passed


def test_condition_b_ridge_fold():
    res = check_condition_b(BUTTERFLY4, make_schedule(BUTTERFLY4, "ridge_fold"))
    assert not res.passed
    assert res.interval == (2, 3)


def test_condition_b_flat_forward_passes():
    p = Path.uniform([FWD] * 3)
    assert check_condition_b(p, make_schedule(p, "flat")).passed


@given(paths())
def test_bell_matched_passes_both(p):
    s = make_schedule(p, "bell_matched")
    assert check_condition_a(p, s).passed
    for cls in AppClass:
        assert check_condition_b(p, s, cls).passed
    verdict = is_pareto(p, s)
    assert all(verdict.is_pareto(c) for c in AppClass)


def test_is_pareto_examples():
    v = is_pareto(FORWARD4, make_schedule(FORWARD4, "bell_matched"), T)
    assert v.is_pareto(T) and v.tp[T] == 8
    assert not is_pareto(BUTTERFLY4, make_schedule(BUTTERFLY4, "ridge_fold"), T).is_pareto(T)
    v = is_pareto(FORWARD4, make_schedule(FORWARD4, "flat"), B)
    assert not v.is_pareto(B) and v.tp[B] == 3
    # flat is on the T frontier for equal hops
    assert v.is_pareto(T)


def test_is_pareto_oracle_mode_agrees():
    p = Path.uniform([FWD, REV, FWD])
    for pat in ("flat", "forward", "bell_matched", "ridge_fold"):
        s = make_schedule(p, pat)
        assert is_pareto(p, s, T, mode="oracle").pareto == is_pareto(p, s, T).pareto


def test_brute_force_examples():
    assert brute_force_min(Path.uniform([FWD, FWD]), T, HALF, 2).min_tp == 4
    assert brute_force_min(Path.uniform([REV, REV]), T, HALF, 2).min_tp == 0
    assert brute_force_min(Path.uniform([FWD, MIM, REV]), B, HALF, 1).min_tp == 0


def test_brute_force_budget():
    with pytest.raises(BudgetExceeded):
        brute_force_min(Path.uniform([FWD] * 5), T, HALF, 2, budget=100)


def test_brute_force_budget_env(monkeypatch):
    monkeypatch.setenv("RTL_EVAL_BUDGET", "10")
    with pytest.raises(BudgetExceeded):
        brute_force_min(Path.uniform([FWD] * 3), T, HALF, 2)


def test_brute_force_rejects_bad_step():
    with pytest.raises(ValueError):
        brute_force_min(Path.of([FWD, FWD], [1, "1/3"]), T, HALF, 2)


def test_brute_force_worker_count_independent():
    p = Path.of([FWD, REV, FWD], [1, 2, 1])
    a = brute_force_min(p, T, HALF, 2, workers=1)
    b = brute_force_min(p, T, HALF, 2, workers=3)
    assert a == b


def test_frontier_extremes_forward_path():
    # forward path frontier spans Bell matched (all at destination) to buffering spread along the path
    res = brute_force_min(Path.uniform([FWD] * 3), T, HALF, 2)
    ends = frontier_extremes(res)
    assert len(ends) == 2
    assert all(p.tp_total == 6 for p in res.points)
    assert ends[0].dest_wait == 6
    assert ends[1].dest_wait < ends[0].dest_wait
    assert len(res.points) > 2


def _grid_instances():
    for h in (2, 3):
        for kinds in itertools.product(list(LinkKind), repeat=h):
            yield Path.uniform(kinds)


@pytest.mark.parametrize("path", list(_grid_instances()), ids=lambda p: "".join(l.kind.value for l in p))
def test_grid_conditions_sound_and_characterising(path):
    step = HALF
    bell = make_schedule(path, "bell_matched").fire_times
    res = brute_force_min(path, T, step, 2)
    assert res.min_tp == matched_tpt(path)
    offs = [k * step for k in range(-4, 5)]
    discrepancies = []
    for rest in itertools.product(offs, repeat=path.hops - 1):
        s = Schedule((Fraction(0),) + tuple(b + o for b, o in zip(bell[1:], rest)))
        rep = evaluate(path, s)
        ok = check_condition_a(path, s, rep).passed and check_condition_b(path, s, T, rep).passed
        optimal = rep.tp[T] == res.min_tp
        if ok != optimal:
            discrepancies.append(s.fire_times)
        if not optimal:
            assert improving_slide(path, s, T, step) is not None
    assert discrepancies == []


def test_best_orientations_examples():
    ranked = best_orientations([1, 1, 1], T)
    assert ranked[0].symbols == "<<<" and ranked[0].tp == 0
    assert ranked[1].tp > 0
    assert ranked[-1].symbols == ">>>" and ranked[-1].tp == 6

    ranked = best_orientations([1, 2], T, allow_neutral=True)
    assert len(ranked) == 9
    assert (ranked[0].symbols, ranked[0].tp) == ("<<", 0)
    assert (ranked[1].symbols, ranked[1].tp) == ("=<", 1)

    ranked = best_orientations([1], B, allow_neutral=True)
    assert [r.tp for r in ranked] == [0, 0, 0]


def test_best_orientations_cap():
    with pytest.raises(BudgetExceeded):
        best_orientations([1] * 5, T, cap=4)


def test_orientation_closed_form_matches_evaluator():
    lats = [1, 2, 3]
    for r in best_orientations(lats, T, allow_neutral=True):
        p = r.path(lats)
        assert evaluate(p, make_schedule(p, "bell_matched")).tp[T] == r.tp


@settings(max_examples=25, deadline=None)
@given(paths(max_hops=6))
def test_orientation_flip_symmetry(p):
    lats = list(p.latencies)
    te = end_to_end_latency(p)
    ranked = best_orientations(lats, T, allow_neutral=True)
    by_vec = {r.orientation: r.tp for r in ranked}
    for vec, tp in by_vec.items():
        assert 0 <= tp <= 2 * te
        assert by_vec[flip(vec)] == 2 * te - tp


def test_orientation_workers_identical():
    lats = [1, 2, 3, 1, 2]
    assert best_orientations(lats, T, True, workers=1) == best_orientations(lats, T, True, workers=3)


def test_orientation_symbols():
    assert Orientation.REVERSE.link_kind() is REV
    assert flip((Orientation.REVERSE, Orientation.NEUTRAL)) == (Orientation.FORWARD, Orientation.NEUTRAL)
