"""Pareto-optimality checks, brute-force grid oracle and orientation search."""

from __future__ import annotations

import enum
import itertools
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Sequence

from .model import AppClass, LinkKind, Path, TimeLike, as_time
from .timing import NamedPattern, Schedule, WaitReport, evaluate, make_schedule, matched_tpt

DEFAULT_EVAL_BUDGET = 2_000_000
DEFAULT_ORIENTATION_CAP = 12
BUDGET_ENV = "RTL_EVAL_BUDGET"


class BudgetExceeded(RuntimeError):
    """Raised when an exhaustive search would exceed its evaluation budget or hop cap."""


def eval_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    if raw is None or raw == "":
        return DEFAULT_EVAL_BUDGET
    return int(raw)


# -- conditions ---------------------------------------------------------------


@dataclass(frozen=True)
class ConditionA:
    passed: bool
    violating_nodes: tuple[int, ...]


@dataclass(frozen=True)
class ConditionB:
    passed: bool
    interval: Optional[tuple[int, int]]


def check_condition_a(path: Path, schedule: Schedule, report: Optional[WaitReport] = None) -> ConditionA:
    """No swap's Pauli correction may reach the destination after the source's."""
    rep = report or evaluate(path, schedule)
    line = rep.pauli_arrivals[0]
    bad = tuple(j for j in range(1, path.hops) if rep.pauli_arrivals[j] > line)
    return ConditionA(not bad, bad)


def red_arrows(path: Path, rep: WaitReport, app_class: AppClass = AppClass.T):
    """Per-link (left_wait, right_wait) flags; zero-length waits are not red arrows."""
    h = path.hops
    left = []
    right = []
    for j in range(h):
        lt = rep.link_times[j]
        left.append(lt.ready_left < rep.swap_time(j))
        if j == h - 1:
            right.append(app_class is AppClass.T and lt.ready_right < rep.swap_time(h))
        else:
            right.append(lt.ready_right < rep.swap_time(j + 1))
    return left, right


def check_condition_b(
    path: Path,
    schedule: Schedule,
    app_class: AppClass = AppClass.T,
    report: Optional[WaitReport] = None,
) -> ConditionB:
    """No contiguous run of links may open with a left red arrow and close with a right one.

    Returns the shortest violating interval (1-based, inclusive), leftmost on ties.
    """
    rep = report or evaluate(path, schedule)
    left, right = red_arrows(path, rep, app_class)
    h = path.hops
    best = None
    for i in range(h):
        if not left[i]:
            continue
        for j in range(i, h):
            if right[j]:
                if best is None or j - i < best[1] - best[0]:
                    best = (i + 1, j + 1)
                break
    return ConditionB(best is None, best)


@dataclass(frozen=True)
class ParetoVerdict:
    condition_a: ConditionA
    condition_b: ConditionB
    pareto: dict
    tp: dict
    minimum: dict

    def is_pareto(self, app_class: AppClass) -> bool:
        return self.pareto[app_class]


def is_pareto(
    path: Path,
    schedule: Schedule,
    app_class: AppClass = AppClass.T,
    mode: str = "analytic",
    grid_step: TimeLike = Fraction(1, 2),
    radius: TimeLike = 2,
) -> ParetoVerdict:
    """Pareto verdict for every class; ``app_class`` selects which condition (b) variant is reported.

    ``mode="oracle"`` replaces the closed-form T-class minimum with the grid
    search from :func:`brute_force_min`.
    """
    rep = evaluate(path, schedule)
    cond_a = check_condition_a(path, schedule, rep)
    cond_b = check_condition_b(path, schedule, app_class, rep)
    cond_b_t = cond_b if app_class is AppClass.T else check_condition_b(path, schedule, AppClass.T, rep)

    if mode == "analytic":
        t_min = matched_tpt(path)
    elif mode == "oracle":
        t_min = brute_force_min(path, AppClass.T, grid_step, radius).min_tp
    else:
        raise ValueError(f"unknown mode {mode!r}")

    minimum = {AppClass.B: Fraction(0), AppClass.C: Fraction(0), AppClass.T: t_min}
    bc = rep.tp[AppClass.B] == 0
    pareto = {
        AppClass.B: bc,
        AppClass.C: bc,
        AppClass.T: cond_a.passed and cond_b_t.passed and rep.tp[AppClass.T] == t_min,
    }
    return ParetoVerdict(cond_a, cond_b, pareto, dict(rep.tp), minimum)


# -- brute-force oracle -------------------------------------------------------


@dataclass(frozen=True)
class FrontierPoint:
    schedule: Schedule
    tp_total: Fraction
    node_wait_profile: tuple[Fraction, ...]

    @property
    def dest_wait(self) -> Fraction:
        return self.node_wait_profile[-1]


@dataclass(frozen=True)
class BruteForceResult:
    min_tp: Fraction
    points: tuple[FrontierPoint, ...]
    evaluated: int


def _grid_chunk(args):
    path, app_class, centers, offsets, first_values = args
    best = None
    points = []
    count = 0
    for first in first_values:
        for rest in itertools.product(offsets, repeat=len(centers) - 1):
            fires = (Fraction(0), centers[0] + first) + tuple(c + o for c, o in zip(centers[1:], rest))
            sched = Schedule(fires, "custom")
            rep = evaluate(path, sched)
            count += 1
            value = rep.tp[app_class]
            if best is None or value < best:
                best = value
                points = []
            if value == best:
                points.append(FrontierPoint(sched, value, rep.node_waits + (rep.dest_pauli_wait,)))
    return best, points, count


def brute_force_min(
    path: Path,
    app_class: AppClass,
    grid_step: TimeLike,
    radius: TimeLike,
    budget: Optional[int] = None,
    workers: int = 1,
) -> BruteForceResult:
    """Exhaustive search over fire times on a grid around the Bell-matched schedule.

    ``f_1`` is pinned to 0 (time-translation invariance); every other fire
    time ranges over ``bell_j + k * grid_step`` with ``|k * grid_step| <= radius``.
    """
    step = as_time(grid_step)
    rad = as_time(radius)
    if step <= 0 or rad < 0:
        raise ValueError("grid_step must be positive and radius non-negative")
    for t in path.latencies:
        if (t / step).denominator != 1:
            raise ValueError(f"grid step {step} does not divide latency {t}")
    k = math.floor(rad / step)
    offsets = tuple(i * step for i in range(-k, k + 1))
    free = path.hops - 1
    size = len(offsets) ** free
    limit = eval_budget() if budget is None else budget
    if size > limit:
        raise BudgetExceeded(f"grid needs {size} evaluations, budget is {limit}")

    bell = make_schedule(path, NamedPattern.BELL_MATCHED).fire_times
    if free == 0:
        rep = evaluate(path, Schedule(bell, "custom"))
        pt = FrontierPoint(Schedule(bell, "custom"), rep.tp[app_class], rep.node_waits + (rep.dest_pauli_wait,))
        return BruteForceResult(pt.tp_total, (pt,), 1)

    centers = bell[1:]
    n_chunks = max(1, min(workers, len(offsets)))
    chunks = [offsets[i::n_chunks] for i in range(n_chunks)]
    jobs = [(path, app_class, centers, offsets, c) for c in chunks]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_grid_chunk, jobs))
    else:
        results = [_grid_chunk(j) for j in jobs]

    best = min(r[0] for r in results)
    points = [p for r in results if r[0] == best for p in r[1]]
    points.sort(key=lambda p: p.schedule.fire_times)
    return BruteForceResult(best, tuple(points), sum(r[2] for r in results))


def frontier_extremes(result: BruteForceResult) -> tuple[FrontierPoint, ...]:
    """Representative frontier points: everything-at-destination and the widest spread.

    The first is the point with the largest destination wait (the Bell-matched
    end of the continuum), the second the one pushing the most buffering into
    intermediate nodes.
    """
    at_dest = max(result.points, key=lambda p: (p.dest_wait, p.schedule.fire_times))
    spread = min(result.points, key=lambda p: (p.dest_wait, p.schedule.fire_times))
    return (at_dest,) if at_dest == spread else (at_dest, spread)


def slide_moves(schedule: Schedule, step: TimeLike) -> Iterator[Schedule]:
    """Schedules obtained by moving one contiguous block of links up or down by ``step``."""
    d = as_time(step)
    fires = schedule.fire_times
    h = len(fires)
    for i in range(h):
        for j in range(i, h):
            if i == 0 and j == h - 1:
                continue  # moving everything is a pure translation
            for sign in (1, -1):
                new = list(fires)
                for k in range(i, j + 1):
                    new[k] += sign * d
                yield Schedule(tuple(new), "custom")


def improving_slide(path: Path, schedule: Schedule, app_class: AppClass, step: TimeLike) -> Optional[Schedule]:
    """First slide move that strictly lowers the class's path wait, if any."""
    current = evaluate(path, schedule).tp[app_class]
    for cand in slide_moves(schedule, step):
        if evaluate(path, cand).tp[app_class] < current:
            return cand
    return None


# -- orientation search -------------------------------------------------------


class Orientation(enum.Enum):
    REVERSE = "<"
    NEUTRAL = "="
    FORWARD = ">"

    @property
    def rank(self) -> int:
        return _RANK[self]

    @property
    def sign(self) -> int:
        return self.rank - 1

    def link_kind(self) -> LinkKind:
        return _KIND[self]


_RANK = {Orientation.REVERSE: 0, Orientation.NEUTRAL: 1, Orientation.FORWARD: 2}
_KIND = {
    Orientation.REVERSE: LinkKind.RECEIVER_SENDER,
    Orientation.NEUTRAL: LinkKind.MEET_IN_THE_MIDDLE,
    Orientation.FORWARD: LinkKind.SENDER_RECEIVER,
}
_BY_RANK = (Orientation.REVERSE, Orientation.NEUTRAL, Orientation.FORWARD)


@dataclass(frozen=True)
class RankedOrientation:
    orientation: tuple[Orientation, ...]
    tp: Fraction

    @property
    def symbols(self) -> str:
        return "".join(o.value for o in self.orientation)

    def path(self, latencies: Sequence[TimeLike]) -> Path:
        return Path.of([o.link_kind() for o in self.orientation], latencies)


def _orientation_chunk(args):
    int_lat, app_class, ranks, prefixes = args
    h = len(int_lat)
    out = []
    for prefix in prefixes:
        for tail in itertools.product(ranks, repeat=h - len(prefix)):
            vec = prefix + tail
            # T_E + sum(tau) == sum((1 + sign) * t) with sign = rank - 1
            tp = sum(r * t for r, t in zip(vec, int_lat)) if app_class is AppClass.T else 0
            out.append((tp, vec))
    out.sort()
    return out


def best_orientations(
    latencies: Sequence[TimeLike],
    app_class: AppClass = AppClass.T,
    allow_neutral: bool = False,
    cap: int = DEFAULT_ORIENTATION_CAP,
    workers: int = 1,
) -> list[RankedOrientation]:
    """All 2^h (or 3^h with neutral links) orientations ranked by Bell-matched path wait.

    Ties are broken lexicographically with reverse < neutral < forward.
    """
    lat = [as_time(t) for t in latencies]
    h = len(lat)
    if h < 1:
        raise ValueError("need at least one latency")
    if h > cap:
        raise BudgetExceeded(f"{h} hops exceeds the orientation cap of {cap}")
    if any(t <= 0 for t in lat):
        raise ValueError("latencies must be positive")

    denom = math.lcm(*(t.denominator for t in lat))
    int_lat = tuple(int(t * denom) for t in lat)
    ranks = (0, 1, 2) if allow_neutral else (0, 2)

    depth = min(h, 2)
    prefixes = list(itertools.product(ranks, repeat=depth))
    n_chunks = max(1, min(workers, len(prefixes)))
    jobs = [(int_lat, app_class, ranks, prefixes[i::n_chunks]) for i in range(n_chunks)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_orientation_chunk, jobs))
    else:
        parts = [_orientation_chunk(j) for j in jobs]
    merged = sorted(itertools.chain.from_iterable(parts))

    ranked = [
        RankedOrientation(tuple(_BY_RANK[r] for r in vec), Fraction(tp, denom)) for tp, vec in merged
    ]
    if app_class is AppClass.T and not allow_neutral:
        top = ranked[0]
        if any(o is not Orientation.REVERSE for o in top.orientation) or top.tp != 0:
            raise RuntimeError("all-reverse orientation is not the minimum")
        if len(ranked) > 1 and ranked[1].tp == 0:
            raise RuntimeError("all-reverse orientation is not the unique minimum")
    return ranked


def flip(orientation: Sequence[Orientation]) -> tuple[Orientation, ...]:
    return tuple(_BY_RANK[2 - o.rank] for o in orientation)
