"""Domain types: links, paths, application classes and code parameters.

All latencies and times are exact :class:`fractions.Fraction` values in
abstract latency units.  Probabilities stay floats.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterable, Sequence, Union

TimeLike = Union[Fraction, int, str]


def as_time(value: TimeLike) -> Fraction:
    """Coerce an int, Fraction or decimal/rational string to an exact time.

    Floats are rejected: ``0.1`` has no exact binary value and would leak
    rounding into schedule comparisons.
    """
    if isinstance(value, bool) or isinstance(value, float):
        raise TypeError(f"times must be exact (int, Fraction or str), got {value!r}")
    return Fraction(value)


class LinkKind(enum.Enum):
    SENDER_RECEIVER = "MM>"
    RECEIVER_SENDER = "MM<"
    MEET_IN_THE_MIDDLE = "MIM"
    MIDPOINT_SOURCE = "MSM"

    @property
    def token(self) -> str:
        return self.value

    @classmethod
    def from_token(cls, token: str) -> "LinkKind":
        for kind in cls:
            if kind.value == token:
                return kind
        raise ValueError(f"unknown link kind {token!r}")

    def mirrored(self) -> "LinkKind":
        if self is LinkKind.SENDER_RECEIVER:
            return LinkKind.RECEIVER_SENDER
        if self is LinkKind.RECEIVER_SENDER:
            return LinkKind.SENDER_RECEIVER
        return self


class AppClass(enum.Enum):
    """Application usage pattern.

    B: Bell inequality / QKD, measures immediately and post-selects.
    C: Clifford computation, waits for link acks but defers Pauli frames.
    T: teleportation / non-Clifford, waits for acks and Pauli frames.
    """

    B = "B"
    C = "C"
    T = "T"


@dataclass(frozen=True)
class Link:
    kind: LinkKind
    latency: Fraction
    reception_prob: float = 0.01
    transmitters: int = 1460

    def __post_init__(self):
        object.__setattr__(self, "latency", as_time(self.latency))
        if self.latency <= 0:
            raise ValueError(f"link latency must be positive, got {self.latency}")
        if not 0.0 < self.reception_prob <= 1.0:
            raise ValueError(f"reception_prob must lie in (0, 1], got {self.reception_prob}")
        if int(self.transmitters) != self.transmitters or self.transmitters < 1:
            raise ValueError(f"transmitters must be a positive integer, got {self.transmitters}")


@dataclass(frozen=True)
class Path:
    """Ordered chain of links; node 0 is the source, node ``h`` the destination."""

    links: tuple[Link, ...]

    def __post_init__(self):
        object.__setattr__(self, "links", tuple(self.links))
        if not self.links:
            raise ValueError("a path needs at least one link")

    @property
    def hops(self) -> int:
        return len(self.links)

    def __len__(self) -> int:
        return len(self.links)

    def __iter__(self):
        return iter(self.links)

    def __getitem__(self, i):
        return self.links[i]

    @property
    def latencies(self) -> tuple[Fraction, ...]:
        return tuple(link.latency for link in self.links)

    def node_positions(self) -> list[Fraction]:
        """Cumulative latency of every node, source at 0."""
        pos = [Fraction(0)]
        for link in self.links:
            pos.append(pos[-1] + link.latency)
        return pos

    @classmethod
    def uniform(cls, kinds: Iterable[LinkKind], latency: TimeLike = 1, **link_kw) -> "Path":
        return cls(tuple(Link(k, as_time(latency), **link_kw) for k in kinds))

    @classmethod
    def of(cls, kinds: Sequence[LinkKind], latencies: Sequence[TimeLike], **link_kw) -> "Path":
        if len(kinds) != len(latencies):
            raise ValueError("kinds and latencies differ in length")
        return cls(tuple(Link(k, as_time(t), **link_kw) for k, t in zip(kinds, latencies)))


@dataclass(frozen=True)
class CodeParams:
    """[[n, k, d]] block code; only the block size matters for timing."""

    n: int
    k: int = 1
    d: int = 1

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"block size must be positive, got {self.n}")
        if not 1 <= self.k <= self.n:
            raise ValueError(f"need 1 <= k <= n, got k={self.k}, n={self.n}")
        if not 1 <= self.d <= self.n:
            raise ValueError(f"need 1 <= d <= n, got d={self.d}, n={self.n}")

    @property
    def majority_threshold(self) -> int:
        return self.n // 2 + 1

    def __str__(self) -> str:
        return f"[[{self.n},{self.k},{self.d}]]"


STEANE = CodeParams(7, 1, 3)
GOLAY = CodeParams(23, 1, 7)


def end_to_end_latency(path: Path) -> Fraction:
    return sum(path.latencies, Fraction(0))


def polarity(link: Link) -> Fraction:
    """Signed latency: positive when photons travel with teleportation (left to right)."""
    if link.kind is LinkKind.SENDER_RECEIVER:
        return link.latency
    if link.kind is LinkKind.RECEIVER_SENDER:
        return -link.latency
    return Fraction(0)


def polarity_sum(path: Path) -> Fraction:
    return sum((polarity(link) for link in path), Fraction(0))


def mirror(path: Path) -> Path:
    return Path(tuple(replace(link, kind=link.kind.mirrored()) for link in reversed(path.links)))
