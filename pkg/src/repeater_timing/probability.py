"""Binomial calculators for cascade success and probability-regime boundaries."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

from .model import CodeParams, Link

_TINY = 1e-290


def _check_prob(p: float, name: str = "p") -> None:
    if not 0.0 <= p <= 1.0 or math.isnan(p):
        raise ValueError(f"{name} must lie in [0, 1], got {p}")


def binom_pmf(trials: int, p: float, k: int) -> float:
    q = 1.0 - p
    c = math.comb(trials, k)
    if c < 2**1000:
        a = p**k
        b = q ** (trials - k)
        if (a > _TINY or k == 0) and (b > _TINY or k == trials):
            return c * a * b
    if p == 0.0 or q == 0.0:
        return 0.0
    return math.exp(math.log(c) + k * math.log(p) + (trials - k) * math.log1p(-p))


def binom_tail(trials: int, p: float, k_min: int) -> float:
    """P(X >= k_min) for X ~ Binomial(trials, p).

    Sums whichever side of the distribution has fewer terms; the lower side
    is complemented.
    """
    if trials < 0:
        raise ValueError(f"trials must be non-negative, got {trials}")
    _check_prob(p)
    if not 0 <= k_min <= trials + 1:
        raise ValueError(f"k_min must lie in [0, {trials + 1}], got {k_min}")
    if k_min == 0:
        return 1.0
    if k_min == trials + 1:
        return 0.0
    if p == 0.0:
        return 0.0
    if p == 1.0:
        return 1.0
    if k_min <= trials - k_min + 1:
        lower = math.fsum(binom_pmf(trials, p, j) for j in range(k_min))
        return min(1.0, max(0.0, 1.0 - lower))
    return min(1.0, math.fsum(binom_pmf(trials, p, j) for j in range(k_min, trials + 1)))


def link_cascade_prob(transmitters: int, reception_prob: float, n: int) -> float:
    """Chance that one burst over ``transmitters`` attempts yields at least ``n`` successes."""
    if n < 1 or transmitters < 1:
        raise ValueError("need n >= 1 and transmitters >= 1")
    if n > transmitters:
        return 0.0
    return binom_tail(transmitters, reception_prob, n)


def required_transmitters(reception_prob: float, n: int, target: float) -> int:
    """Smallest transmitter count whose cascade probability reaches ``target``."""
    if not 0.0 < reception_prob <= 1.0:
        raise ValueError(f"reception_prob must lie in (0, 1], got {reception_prob}")
    if not 0.0 < target < 1.0:
        raise ValueError(f"target must lie in (0, 1), got {target}")
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")

    def ok(nt: int) -> bool:
        return link_cascade_prob(nt, reception_prob, n) >= target

    lo, hi = n - 1, n  # lo always fails: fewer than n attempts cannot give n successes
    while not ok(hi):
        lo, hi = hi, hi * 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


def path_cascade_prob(per_link: Sequence[float]) -> float:
    for p in per_link:
        _check_prob(p, "per-link probability")
    return math.prod(per_link)


def direct_tx_success(code: CodeParams, reception_prob: float) -> float:
    """Chance that a strict majority of the block's physical qubits arrive."""
    _check_prob(reception_prob, "reception_prob")
    return binom_tail(code.n, reception_prob, code.majority_threshold)


def alpha_threshold(code: CodeParams, target: float, decimals: int = 4) -> float:
    """Smallest reception probability on a ``10**-decimals`` grid meeting ``target``.

    Bisection runs over the integer grid so the answer is exactly
    representable at the requested resolution.
    """
    if not 0.0 < target < 1.0:
        raise ValueError(f"target must lie in (0, 1), got {target}")
    scale = 10**decimals
    lo, hi = 0, scale  # success(1.0) == 1 >= target
    while lo < hi:
        mid = (lo + hi) // 2
        if direct_tx_success(code, mid / scale) >= target:
            hi = mid
        else:
            lo = mid + 1
    return lo / scale


def path_adjusted_target(target: float, hops: int) -> float:
    """Per-block target such that all ``hops`` blocks jointly meet ``target``."""
    if hops < 1:
        raise ValueError("hops must be positive")
    return target ** (1.0 / hops)


class Regime(enum.Enum):
    LOW_PROBABILITY = "low probability"
    HIGH_PROBABILITY = "high probability"
    HIGH_PROBABILITY_EXTENDED = "high probability (extended)"
    VERY_HIGH_PROBABILITY = "very high probability"
    PERFECT = "perfect"


@dataclass(frozen=True)
class RegimeParams:
    code: CodeParams = field(default_factory=lambda: CodeParams(7, 1, 3))
    alpha: float = 0.9
    epsilon: float = 1e-2
    cascade_target: float = 0.99
    direct_target: float = 0.999

    def __post_init__(self):
        if not 0.0 < self.epsilon < 0.5:
            raise ValueError(f"epsilon must lie in (0, 0.5), got {self.epsilon}")
        if not 0.5 < self.alpha < 1.0 - self.epsilon:
            raise ValueError(
                f"need 0.5 < alpha < 1 - epsilon, got alpha={self.alpha}, epsilon={self.epsilon}"
            )


def cascade_floor(code: CodeParams, transmitters: int) -> float:
    """Approximate low/high boundary ``2n / N_T``."""
    return 2 * code.n / transmitters


def classify_regime(link: Link, params: RegimeParams) -> Regime:
    """Place a link's reception probability in one of the five regimes.

    The ``2n/N_T`` boundary is approximate by nature; it is applied as a sharp cut.
    """
    floor = cascade_floor(params.code, link.transmitters)
    if not floor < 0.5:
        raise ValueError(
            f"2n/N_T = {floor:.4g} must be below 0.5 (n={params.code.n}, N_T={link.transmitters})"
        )
    pr = link.reception_prob
    if pr < floor:
        return Regime.LOW_PROBABILITY
    if pr < 0.5:
        return Regime.HIGH_PROBABILITY
    if pr <= params.alpha:
        return Regime.HIGH_PROBABILITY_EXTENDED
    if pr < 1.0 - params.epsilon:
        return Regime.VERY_HIGH_PROBABILITY
    return Regime.PERFECT
