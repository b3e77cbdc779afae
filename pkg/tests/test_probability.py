import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from repeater_timing.model import GOLAY, STEANE, CodeParams, Link, LinkKind
from repeater_timing.probability import (
    Regime,
    RegimeParams,
    alpha_threshold,
    binom_tail,
    classify_regime,
    direct_tx_success,
    link_cascade_prob,
    path_adjusted_target,
    path_cascade_prob,
    required_transmitters,
)
from oracles import exact_binom_tail

# pinned from an exact rational search; the literature figure is 1460
PINNED_NT = 1453


def test_binom_tail_examples():
    assert binom_tail(7, 0.5, 4) == pytest.approx(0.5, abs=1e-12)
    assert binom_tail(13, 0.3, 0) == 1.0
    assert binom_tail(1460, 0.01, 7) >= 0.99
    assert binom_tail(5, 0.3, 6) == 0.0


@given(st.integers(0, 25), st.floats(0, 1), st.data())
def test_binom_tail_exact_oracle(n, p, data):
    k = data.draw(st.integers(0, n + 1))
    assert abs(binom_tail(n, p, k) - float(exact_binom_tail(n, p, k))) < 1e-12


@pytest.mark.parametrize("n, p, k", [(1460, 0.01, 7), (2000, 0.05, 120), (500, 0.9, 430), (1000, 0.5, 500)])
def test_binom_tail_large_exact(n, p, k):
    assert abs(binom_tail(n, p, k) - float(exact_binom_tail(n, p, k))) < 1e-12


def test_binom_tail_domain():
    with pytest.raises(ValueError):
        binom_tail(5, 1.5, 2)
    with pytest.raises(ValueError):
        binom_tail(5, 0.5, 7)


def test_link_cascade_examples():
    assert link_cascade_prob(1460, 0.01, 7) == pytest.approx(0.99, abs=1e-3)
    assert link_cascade_prob(9, 1.0, 9) == 1.0
    assert link_cascade_prob(3, 0.9, 7) == 0.0


def test_required_transmitters():
    nt = required_transmitters(0.01, 7, 0.99)
    assert nt == PINNED_NT
    assert abs(nt - 1460) / 1460 <= 0.02
    assert link_cascade_prob(nt - 1, 0.01, 7) < 0.99 <= link_cascade_prob(nt, 0.01, 7)
    assert required_transmitters(1.0 - 1e-12, 7, 0.99) == 7
    assert required_transmitters(0.5, 1, 0.5) == 1


@given(st.floats(0.005, 0.5), st.integers(1, 12), st.floats(0.5, 0.999))
def test_required_transmitters_minimal(pr, n, target):
    nt = required_transmitters(pr, n, target)
    assert link_cascade_prob(nt, pr, n) >= target
    if nt > n:
        assert link_cascade_prob(nt - 1, pr, n) < target


def test_required_transmitters_monotone_in_pr():
    values = [required_transmitters(pr, 7, 0.99) for pr in (0.005, 0.01, 0.02, 0.05, 0.1)]
    assert values == sorted(values, reverse=True)


@given(st.integers(1, 300), st.floats(0.01, 0.99), st.integers(1, 10))
def test_cascade_monotone(nt, pr, n):
    assert link_cascade_prob(nt + 1, pr, n) >= link_cascade_prob(nt, pr, n) - 1e-12
    assert link_cascade_prob(nt, min(1.0, pr + 0.01), n) >= link_cascade_prob(nt, pr, n) - 1e-12


def test_path_cascade():
    assert path_cascade_prob([0.99] * 50) == pytest.approx(0.6050, abs=1e-4)
    assert path_cascade_prob([0.99] * 50) == pytest.approx(0.99**50, rel=1e-14)
    assert path_cascade_prob([1.0] * 7) == 1.0
    assert path_cascade_prob([0.42]) == 0.42


def test_direct_tx_examples():
    assert direct_tx_success(STEANE, 0.93) >= 0.999
    assert direct_tx_success(GOLAY, 0.79) >= 0.999
    assert direct_tx_success(STEANE, 1.0) == 1.0


@pytest.mark.parametrize("n", [1, 3, 5, 7, 9, 23, 25])
def test_direct_tx_fair_coin_majority(n):
    assert direct_tx_success(CodeParams(n), 0.5) == pytest.approx(0.5, abs=1e-12)
    assert direct_tx_success(CodeParams(n), 0.5) == pytest.approx(float(exact_binom_tail(n, 0.5, n // 2 + 1)), abs=1e-15)


def test_alpha_threshold_values():
    # minimal P_r at 4 dp; the two-decimal figures quoted for these codes are the 2 dp rounding-up
    assert alpha_threshold(STEANE, 0.999) == 0.9234
    assert alpha_threshold(GOLAY, 0.999) == 0.7889
    assert alpha_threshold(STEANE, 0.999, decimals=2) == 0.93
    assert alpha_threshold(GOLAY, 0.999, decimals=2) == 0.79
    assert alpha_threshold(CodeParams(1), 0.999) == 0.999


@pytest.mark.parametrize("code", [STEANE, GOLAY, CodeParams(5), CodeParams(15)])
def test_alpha_threshold_is_minimal(code):
    a = alpha_threshold(code, 0.999)
    assert direct_tx_success(code, a) >= 0.999
    assert direct_tx_success(code, round(a - 1e-4, 4)) < 0.999


def test_larger_block_tolerates_lower_pr():
    assert alpha_threshold(GOLAY, 0.999) < alpha_threshold(STEANE, 0.999)


def test_path_adjusted_target():
    t = path_adjusted_target(0.999, 50)
    assert t**50 == pytest.approx(0.999)
    assert alpha_threshold(STEANE, t) > alpha_threshold(STEANE, 0.999)


def _link(pr, nt=1460):
    return Link(LinkKind.SENDER_RECEIVER, 1, pr, nt)


def test_classify_examples():
    params = RegimeParams(code=STEANE, alpha=0.9, epsilon=0.01)
    assert classify_regime(_link(0.01), params) is Regime.HIGH_PROBABILITY
    assert classify_regime(_link(0.6), params) is Regime.HIGH_PROBABILITY_EXTENDED
    assert classify_regime(_link(1.0), params) is Regime.PERFECT
    assert classify_regime(_link(0.005), params) is Regime.LOW_PROBABILITY
    assert classify_regime(_link(0.95), params) is Regime.VERY_HIGH_PROBABILITY


def test_classify_boundaries():
    params = RegimeParams(code=STEANE, alpha=0.9, epsilon=0.01)
    assert classify_regime(_link(14 / 1400, 1400), params) is Regime.HIGH_PROBABILITY
    assert classify_regime(_link(0.5), params) is Regime.HIGH_PROBABILITY_EXTENDED
    assert classify_regime(_link(0.9), params) is Regime.HIGH_PROBABILITY_EXTENDED
    assert classify_regime(_link(0.99), params) is Regime.PERFECT


@given(st.floats(1e-6, 1.0))
def test_classify_partitions(pr):
    params = RegimeParams(code=STEANE, alpha=0.9, epsilon=0.01)
    regime = classify_regime(_link(pr), params)
    hits = [
        pr < 14 / 1460,
        14 / 1460 <= pr < 0.5,
        0.5 <= pr <= 0.9,
        0.9 < pr < 0.99,
        pr >= 0.99,
    ]
    assert sum(hits) == 1
    assert list(Regime)[hits.index(True)] is regime


def test_regime_params_validation():
    with pytest.raises(ValueError):
        RegimeParams(alpha=0.995, epsilon=0.01)
    with pytest.raises(ValueError):
        RegimeParams(alpha=0.4)
    with pytest.raises(ValueError):
        classify_regime(_link(0.3, nt=20), RegimeParams())
