"""Independent reference computations used only by the tests."""

import math
from fractions import Fraction

from repeater_timing.model import LinkKind


def exact_binom_tail(trials, p, k_min):
    """P(X >= k_min) with exact rational arithmetic on the binary value of ``p``."""
    p = Fraction(p)
    q = 1 - p

    def term(j):
        return math.comb(trials, j) * p**j * q ** (trials - j)

    if k_min <= trials - k_min:
        return 1 - sum((term(j) for j in range(k_min)), Fraction(0))
    return sum((term(j) for j in range(k_min, trials + 1)), Fraction(0))


def light_cone_ready(kind, latency, fire):
    """Ready times from signal geometry rather than the per-kind table.

    The link spans positions 0..t and signals move one position per unit of
    time.  Each end is usable once news of every detection event has reached it.
    """
    t = Fraction(latency)
    f = Fraction(fire)
    if kind is LinkKind.SENDER_RECEIVER:
        detections = [(t, f + t)]
    elif kind is LinkKind.RECEIVER_SENDER:
        detections = [(Fraction(0), f + t)]
    elif kind is LinkKind.MEET_IN_THE_MIDDLE:
        detections = [(t / 2, f + t / 2)]
    else:
        detections = [(Fraction(0), f + t / 2), (t, f + t / 2)]
    left = max(time + abs(x - 0) for x, time in detections)
    right = max(time + abs(x - t) for x, time in detections)
    return left, right


def reference_waits(path, fires):
    """Node waits and T-class path wait straight from the definitions."""
    ready = [light_cone_ready(link.kind, link.latency, f) for link, f in zip(path, fires)]
    h = len(ready)
    s = [ready[0][0]]
    waits = []
    for j in range(1, h):
        a, b = ready[j - 1][1], ready[j][0]
        s.append(max(a, b))
        waits.append(abs(a - b))
    lat = [link.latency for link in path]
    arrivals = [s[j] + sum(lat[j:], Fraction(0)) for j in range(h)]
    dest = ready[-1][1]
    dest_wait = max(Fraction(0), max(arrivals) - dest)
    return waits, sum(waits, Fraction(0)) + dest_wait
