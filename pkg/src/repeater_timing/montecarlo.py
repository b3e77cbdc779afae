"""Burst-level success simulator, used as an independent check on the binomial formulas.

Randomness is counter based: link ``j`` owns a Philox stream keyed by
``(seed, j)`` and burst ``b`` always reads the same fixed window of that
stream.  Results therefore do not depend on block size or worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .model import CodeParams, Path

BERNOULLI_LIMIT = 10_000
BLOCK_BURSTS = 1024
_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class SimConfig:
    path: Path
    code: CodeParams
    bursts: int
    seed: int = 0
    method: str = "auto"

    def __post_init__(self):
        if self.bursts < 1:
            raise ValueError(f"bursts must be positive, got {self.bursts}")
        if not 0 <= self.seed <= _MASK64:
            raise ValueError("seed must be a non-negative 64-bit integer")
        if self.method not in ("auto", "bernoulli", "inverse_cdf"):
            raise ValueError(f"unknown sampling method {self.method!r}")


@dataclass(frozen=True)
class SimResult:
    bursts: int
    per_link_success_rate: tuple[float, ...]
    per_link_stderr: tuple[float, ...]
    path_cascade_rate: float
    path_stderr: float
    success_count_histogram: tuple[tuple[int, ...], ...]
    mean_successes: tuple[float, ...]
    mean_successes_stderr: tuple[float, ...]

    @property
    def product_of_links(self) -> float:
        return math.prod(self.per_link_success_rate)


def _method_for(transmitters: int, method: str) -> str:
    if method != "auto":
        return method
    return "bernoulli" if transmitters <= BERNOULLI_LIMIT else "inverse_cdf"


def _window(transmitters: int, method: str) -> int:
    # uniforms reserved per burst, padded to Philox's 4-word block
    used = transmitters if method == "bernoulli" else 1
    return 4 * ((used + 3) // 4)


def _uniforms(seed: int, link_index: int, first_burst: int, count: int, window: int) -> np.ndarray:
    bitgen = np.random.Philox(key=[seed, link_index])
    bitgen.advance(first_burst * window // 4)
    return np.random.Generator(bitgen).random(count * window).reshape(count, window)


def _inverse_cdf_table(transmitters: int, p: float) -> np.ndarray:
    k = np.arange(transmitters, dtype=np.float64)
    steps = np.log(transmitters - k) - np.log(k + 1) + math.log(p) - math.log1p(-p)
    log_pmf = transmitters * math.log1p(-p) + np.concatenate(([0.0], np.cumsum(steps)))
    return np.cumsum(np.exp(log_pmf))


def _sample_block(config: SimConfig, first: int, count: int) -> list[np.ndarray]:
    out = []
    for j, link in enumerate(config.path):
        method = _method_for(link.transmitters, config.method)
        window = _window(link.transmitters, method)
        u = _uniforms(config.seed, j, first, count, window)
        if method == "bernoulli":
            successes = np.count_nonzero(u[:, : link.transmitters] < link.reception_prob, axis=1)
        elif link.reception_prob >= 1.0:
            successes = np.full(count, link.transmitters)
        else:
            table = _inverse_cdf_table(link.transmitters, link.reception_prob)
            successes = np.minimum(np.searchsorted(table, u[:, 0], side="right"), link.transmitters)
        out.append(successes.astype(np.int64))
    return out


def _run_range(args):
    config, start, stop = args
    h = config.path.hops
    n = config.code.n
    link_ok = np.zeros(h, dtype=np.int64)
    path_ok = 0
    sums = np.zeros(h, dtype=object)
    sq_sums = np.zeros(h, dtype=object)
    hists = [np.zeros(link.transmitters + 1, dtype=np.int64) for link in config.path]
    for first in range(start, stop, BLOCK_BURSTS):
        count = min(BLOCK_BURSTS, stop - first)
        counts = _sample_block(config, first, count)
        ok = np.ones(count, dtype=bool)
        for j, nr in enumerate(counts):
            good = nr >= n
            link_ok[j] += int(good.sum())
            ok &= good
            sums[j] += int(nr.sum())
            sq_sums[j] += int((nr * nr).sum())
            hists[j] += np.bincount(nr, minlength=len(hists[j]))
        path_ok += int(ok.sum())
    return link_ok, path_ok, sums, sq_sums, hists


def _stderr(rate: float, trials: int) -> float:
    return math.sqrt(rate * (1.0 - rate) / trials)


def simulate(config: SimConfig, workers: int = 1) -> SimResult:
    total = config.bursts
    blocks = list(range(0, total, BLOCK_BURSTS))
    n_parts = max(1, min(workers, len(blocks)))
    # split on block boundaries so every worker sees whole blocks
    cuts = [blocks[len(blocks) * i // n_parts] for i in range(n_parts)] + [total]
    jobs = [(config, cuts[i], cuts[i + 1]) for i in range(n_parts)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_run_range, jobs))
    else:
        parts = [_run_range(job) for job in jobs]

    h = config.path.hops
    link_ok = sum(p[0] for p in parts)
    path_ok = sum(p[1] for p in parts)
    sums = [sum(p[2][j] for p in parts) for j in range(h)]
    sq_sums = [sum(p[3][j] for p in parts) for j in range(h)]
    hists = tuple(tuple(int(c) for c in sum(p[4][j] for p in parts)) for j in range(h))

    rates = tuple(int(c) / total for c in link_ok)
    means = tuple(s / total for s in sums)
    mean_se = []
    for s, sq in zip(sums, sq_sums):
        # exact integer numerator for the sample variance
        var = (sq * total - s * s) / (total * (total - 1)) if total > 1 else 0.0
        mean_se.append(math.sqrt(max(var, 0.0) / total))
    path_rate = path_ok / total
    return SimResult(
        bursts=total,
        per_link_success_rate=rates,
        per_link_stderr=tuple(_stderr(r, total) for r in rates),
        path_cascade_rate=path_rate,
        path_stderr=_stderr(path_rate, total),
        success_count_histogram=hists,
        mean_successes=means,
        mean_successes_stderr=tuple(mean_se),
    )
