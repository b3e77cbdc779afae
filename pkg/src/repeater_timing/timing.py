"""Link ready-time semantics, named firing schedules and the wait evaluator.

Conventions used throughout:

* ``f_j`` is the time link ``j`` launches its burst.  For MIM both ends emit
  at ``f_j``; for MSM the midpoint source emits at ``f_j``.
* ``a^L_j`` / ``a^R_j`` are the times the left / right memory of link ``j``
  is usable with local knowledge of success (photon flight plus ack).
* Classical messages travel hop by hop at the link's one-way latency.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .model import AppClass, Link, LinkKind, Path, TimeLike, as_time, end_to_end_latency, polarity_sum

ZERO = Fraction(0)


class NamedPattern(enum.Enum):
    FLAT = "flat"
    FORWARD_TRIGGER = "forward"
    BELL_MATCHED = "bell_matched"
    RIDGE_FOLD = "ridge_fold"
    VALLEY_FOLD = "valley_fold"


PATTERN_TAGS = tuple(p.value for p in NamedPattern) + ("custom",)


@dataclass(frozen=True)
class LinkEndTimes:
    ready_left: Fraction
    ready_right: Fraction
    q_wait_left: Fraction
    c_wait_left: Fraction
    q_wait_right: Fraction
    c_wait_right: Fraction

    @property
    def half_entangled_left(self) -> Fraction:
        return self.q_wait_left + self.c_wait_left

    @property
    def half_entangled_right(self) -> Fraction:
        return self.q_wait_right + self.c_wait_right


@dataclass(frozen=True)
class Schedule:
    fire_times: tuple[Fraction, ...]
    pattern: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "fire_times", tuple(as_time(f) for f in self.fire_times))
        if self.pattern is not None and self.pattern not in PATTERN_TAGS:
            raise ValueError(f"unknown pattern tag {self.pattern!r}")

    def __len__(self) -> int:
        return len(self.fire_times)

    def shifted(self, delta: TimeLike) -> "Schedule":
        d = as_time(delta)
        return Schedule(tuple(f + d for f in self.fire_times), self.pattern)

    def scaled(self, factor: TimeLike) -> "Schedule":
        c = as_time(factor)
        return Schedule(tuple(f * c for f in self.fire_times), self.pattern)

    @classmethod
    def custom(cls, fire_times: Sequence[TimeLike]) -> "Schedule":
        return cls(tuple(as_time(f) for f in fire_times), "custom")


@dataclass(frozen=True)
class WaitReport:
    """Evaluated schedule.

    ``swap_times`` holds ``s_0`` (source measurement) followed by the Bell
    measurement times of nodes ``1..h-1``.  ``pauli_arrivals[j]`` is when the
    outcome of the event at node ``j`` reaches the destination.
    """

    link_times: tuple[LinkEndTimes, ...]
    swap_times: tuple[Fraction, ...]
    dest_ready: Fraction
    node_waits: tuple[Fraction, ...]
    pauli_arrivals: tuple[Fraction, ...]
    dest_pauli_wait: Fraction
    tp: dict = field(hash=False)
    th: dict = field(hash=False)
    total: dict = field(hash=False)

    @property
    def source_time(self) -> Fraction:
        return self.swap_times[0]

    @property
    def max_pauli_arrival(self) -> Fraction:
        return max(self.pauli_arrivals)

    @property
    def matched(self) -> bool:
        """True when every intermediate Bell measurement finds both qubits ready together."""
        return all(w == 0 for w in self.node_waits)

    def swap_time(self, node: int) -> Fraction:
        """``s_node`` for 0 <= node < h, and the destination release time for node == h.

        The destination release is the later of its own ready time and the
        last Pauli frame arrival, i.e. when a T-class consumer may proceed.
        """
        if node < len(self.swap_times):
            return self.swap_times[node]
        return self.dest_ready + self.dest_pauli_wait


def ready_times(link: Link, fire: TimeLike) -> LinkEndTimes:
    f = as_time(fire)
    t = link.latency
    kind = link.kind
    if kind is LinkKind.SENDER_RECEIVER:
        return LinkEndTimes(f + 2 * t, f + t, t, t, ZERO, ZERO)
    if kind is LinkKind.RECEIVER_SENDER:
        return LinkEndTimes(f + t, f + 2 * t, ZERO, ZERO, t, t)
    if kind is LinkKind.MEET_IN_THE_MIDDLE:
        half = t / 2
        return LinkEndTimes(f + t, f + t, half, half, half, half)
    # MSM: photons land at f + t/2, then a full-link classical exchange confirms.
    return LinkEndTimes(f + t + t / 2, f + t + t / 2, ZERO, t, ZERO, t)


def _offsets(link: Link) -> tuple[Fraction, Fraction]:
    rt = ready_times(link, ZERO)
    return rt.ready_left, rt.ready_right


def _emitting_node(path: Path, j: int, middle: int) -> int:
    """Node (0-based) whose trigger arrival launches link ``j`` (0-based link index)."""
    kind = path[j].kind
    if kind is LinkKind.SENDER_RECEIVER:
        return j
    if kind is LinkKind.RECEIVER_SENDER:
        return j + 1
    # symmetric links fire from the end nearer the trigger origin
    return j + 1 if j + 1 <= middle else j


def make_schedule(path: Path, pattern: NamedPattern | str) -> Schedule:
    pattern = NamedPattern(pattern)
    h = path.hops
    if pattern in (NamedPattern.RIDGE_FOLD, NamedPattern.VALLEY_FOLD) and h < 2:
        raise ValueError(f"{pattern.value} needs at least 2 hops, path has {h}")

    if pattern is NamedPattern.FLAT:
        fires = [ZERO] * h
    elif pattern is NamedPattern.FORWARD_TRIGGER:
        fires = path.node_positions()[:-1]
    elif pattern is NamedPattern.RIDGE_FOLD:
        pos = path.node_positions()
        middle = h // 2
        fires = [abs(pos[_emitting_node(path, j, middle)] - pos[middle]) for j in range(h)]
    else:
        # Bell matched (valley fold is the same construction under its own tag):
        # a^R_j == a^L_{j+1} at every intermediate node, anchored at f_1 = 0.
        fires = [ZERO]
        for j in range(1, h):
            _, right_prev = _offsets(path[j - 1])
            left_next, _ = _offsets(path[j])
            fires.append(fires[-1] + right_prev - left_next)
    return Schedule(tuple(fires), pattern.value)


def evaluate(path: Path, schedule: Schedule) -> WaitReport:
    h = path.hops
    if len(schedule) != h:
        raise ValueError(f"schedule has {len(schedule)} fire times for a {h}-hop path")

    lt = tuple(ready_times(link, f) for link, f in zip(path, schedule.fire_times))
    swaps = [lt[0].ready_left]
    waits = []
    for j in range(h - 1):
        right, left = lt[j].ready_right, lt[j + 1].ready_left
        swaps.append(max(right, left))
        waits.append(abs(right - left))

    # remaining latency from node j to the destination
    remaining = [ZERO] * (h + 1)
    for j in range(h - 1, -1, -1):
        remaining[j] = remaining[j + 1] + path[j].latency
    arrivals = tuple(swaps[j] + remaining[j] for j in range(h))

    dest_ready = lt[-1].ready_right
    dest_wait = max(ZERO, max(arrivals) - dest_ready)

    round_trip = 2 * end_to_end_latency(path)
    th_b = round_trip - lt[0].half_entangled_left - lt[-1].half_entangled_right
    tp_bc = sum(waits, ZERO)
    tp = {AppClass.B: tp_bc, AppClass.C: tp_bc, AppClass.T: tp_bc + dest_wait}
    th = {AppClass.B: th_b, AppClass.C: round_trip, AppClass.T: round_trip}
    total = {c: th[c] + tp[c] for c in AppClass}
    return WaitReport(
        link_times=lt,
        swap_times=tuple(swaps),
        dest_ready=dest_ready,
        node_waits=tuple(waits),
        pauli_arrivals=arrivals,
        dest_pauli_wait=dest_wait,
        tp=tp,
        th=th,
        total=total,
    )


def matched_tpt(path: Path) -> Fraction:
    """Closed-form T-class path wait of the Bell-matched schedule: T_E plus the polarity sum."""
    return end_to_end_latency(path) + polarity_sum(path)


@dataclass(frozen=True)
class RepRate:
    per_rtt: Optional[int]
    label: str


def rep_rate(link: Link) -> RepRate:
    if link.kind in (LinkKind.SENDER_RECEIVER, LinkKind.RECEIVER_SENDER):
        return RepRate(1, "1/RTT")
    if link.kind is LinkKind.MEET_IN_THE_MIDDLE:
        return RepRate(2, "2/RTT")
    return RepRate(None, "many/RTT (source-limited)")
