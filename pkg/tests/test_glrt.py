"""Distance pmfs, the randomized threshold rule, and normal approximations."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from codescout import (
    BlockPmf,
    ConfigError,
    WordPmf,
    block_pmf,
    detection_probability,
    inv_norm_cdf,
    norm_cdf,
    np_rule,
    required_codewords,
    word_pmf_alt,
    word_pmf_null,
)
from codescout.glrt import log_int


def test_log_int_small_and_huge():
    for value in (1, 2, 3, 10, 12345):
        assert log_int(value) == pytest.approx(math.log(value), rel=1e-14)
    assert log_int(1 << 400) == pytest.approx(400 * math.log(2.0), rel=1e-14)
    big = (1 << 400) + (1 << 399)
    assert log_int(big) == pytest.approx(math.log(1.5) + 400 * math.log(2.0), rel=1e-14)


def test_word_pmf_null_hamming74(hamming74_profile):
    q0 = word_pmf_null(hamming74_profile)
    assert q0.hypothesis == "H0"
    assert q0.probs[0] == pytest.approx(1 / 8)
    assert q0.probs[1] == pytest.approx(7 / 8)
    assert q0.probs[2:].sum() == 0.0
    assert q0.mean == pytest.approx(7 / 8)


def test_word_pmf_alt_hamming74(hamming74_profile):
    q1 = word_pmf_alt(hamming74_profile, 0.1)
    # Independent arithmetic from the known aggregate rows.
    w0 = (1, 0, 0, 7, 7, 0, 0, 1)
    w1 = (0, 7, 21, 28, 28, 21, 7, 0)
    expect0 = math.fsum(c * 0.1**i * 0.9 ** (7 - i) for i, c in enumerate(w0))
    expect1 = math.fsum(c * 0.1**i * 0.9 ** (7 - i) for i, c in enumerate(w1))
    assert q1.probs[0] == pytest.approx(expect0, abs=1e-14)
    assert q1.probs[1] == pytest.approx(expect1, abs=1e-14)
    assert expect0 == pytest.approx(0.4834, abs=1e-10)
    assert q1.probs.sum() == pytest.approx(1.0, abs=1e-12)


def test_word_pmf_alt_degenerate_and_invalid(hamming74_profile):
    q1 = word_pmf_alt(hamming74_profile, 0.0)
    assert q1.probs[0] == 1.0 and q1.probs[1:].sum() == 0.0
    for bad in (-0.01, 0.5, 0.9):
        with pytest.raises(ConfigError):
            word_pmf_alt(hamming74_profile, bad)


def test_word_pmf_validates_construction():
    with pytest.raises(ValueError):
        WordPmf(hypothesis="H0", probs=np.array([0.5, 0.6]), mean=0.55, variance=0.2)
    with pytest.raises(ValueError):
        WordPmf(hypothesis="H0", probs=np.array([-0.1, 1.1]), mean=1.0, variance=0.0)
    with pytest.raises(ValueError):
        WordPmf(hypothesis="H0", probs=np.array([0.5, 0.5]), mean=0.9, variance=0.25)


def test_block_pmf_matches_manual_convolution(hamming74_profile):
    q1 = word_pmf_alt(hamming74_profile, 0.1)
    one = block_pmf(q1, 1)
    np.testing.assert_allclose(one.probs, q1.probs, atol=0)
    two = block_pmf(q1, 2)
    np.testing.assert_allclose(two.probs, np.convolve(q1.probs, q1.probs), atol=0)
    five = block_pmf(q1, 5)
    assert five.probs.size == 5 * 7 + 1
    assert five.mean == pytest.approx(5 * q1.mean, rel=1e-12)
    assert five.probs.sum() == pytest.approx(1.0, abs=1e-9)
    with pytest.raises(ConfigError):
        block_pmf(q1, 0)


def test_np_rule_hand_example(hamming74_profile):
    q0 = word_pmf_null(hamming74_profile)
    q1 = word_pmf_alt(hamming74_profile, 0.1)
    rule = np_rule(block_pmf(q0, 1), block_pmf(q1, 1), alpha=0.05)
    assert rule.threshold == 0
    assert rule.randomization == pytest.approx(0.4, abs=1e-12)
    assert rule.alpha_achieved == pytest.approx(0.05, abs=1e-15)
    assert rule.predicted_pd == pytest.approx(0.4 * 0.4834, abs=1e-10)
    assert detection_probability(rule, block_pmf(q1, 1)) == rule.predicted_pd


@given(
    alpha=st.floats(1e-3, 0.9),
    M=st.integers(1, 6),
    p=st.sampled_from([0.05, 0.1, 0.2]),
)
@settings(deadline=None, max_examples=60)
def test_np_rule_spends_alpha_exactly(hamming74_profile, alpha, M, p):
    profile = hamming74_profile
    Q0 = block_pmf(word_pmf_null(profile), M)
    Q1 = block_pmf(word_pmf_alt(profile, p), M)
    rule = np_rule(Q0, Q1, alpha)
    assert 0.0 <= rule.randomization <= 1.0
    assert rule.alpha_achieved <= alpha + 1e-12
    if rule.randomization > 0.0:
        assert rule.alpha_achieved == pytest.approx(alpha, abs=1e-12)
    # The rule is most powerful: strictly below the threshold is always in.
    below = float(np.sum(Q1.probs[: rule.threshold]))
    assert rule.predicted_pd >= below - 1e-15


def test_np_rule_zero_mass_boundary_warns():
    Q0 = np.array([0.5, 0.3, 0.0])  # truncated null: top value impossible
    Q1 = np.array([0.1, 0.2, 0.7])
    with pytest.warns(RuntimeWarning):
        rule = np_rule(Q0, Q1, alpha=0.9)
    assert rule.threshold == 2
    assert rule.randomization == 0.0
    assert rule.alpha_achieved == pytest.approx(0.8)


def test_np_rule_validates(hamming74_profile):
    q0 = block_pmf(word_pmf_null(hamming74_profile), 2)
    q1 = block_pmf(word_pmf_alt(hamming74_profile, 0.1), 3)
    with pytest.raises(ConfigError):
        np_rule(q0, q1, alpha=0.05)  # mismatched block sizes
    with pytest.raises(ConfigError):
        np_rule(q0, q0, alpha=0.0)
    with pytest.raises(ConfigError):
        np_rule(q0, q0, alpha=1.0)


def _quantile_by_bisection(u: float) -> float:
    lo, hi = -40.0, 40.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if norm_cdf(mid) < u:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def test_required_codewords_against_manual_formula(bch157_profile):
    q0 = word_pmf_null(bch157_profile)
    q1 = word_pmf_alt(bch157_profile, 0.1)
    alpha, beta = 0.05, 0.997
    value = required_codewords(q0, q1, alpha, beta)
    z_alpha = _quantile_by_bisection(alpha)
    z_beta = _quantile_by_bisection(beta)
    manual = (
        (math.sqrt(q0.variance) * z_alpha - math.sqrt(q1.variance) * z_beta)
        / (q1.mean - q0.mean)
    ) ** 2
    assert value == pytest.approx(manual, rel=1e-9)


def test_required_codewords_grows_as_targets_tighten(bch157_profile):
    q0 = word_pmf_null(bch157_profile)
    q1 = word_pmf_alt(bch157_profile, 0.1)
    loose = required_codewords(q0, q1, 0.05, 0.9)
    tight_alpha = required_codewords(q0, q1, 0.01, 0.9)
    tight_beta = required_codewords(q0, q1, 0.05, 0.999)
    assert tight_alpha > loose
    assert tight_beta > loose
    with pytest.raises(ConfigError):
        required_codewords(q0, q0, 0.05, 0.997)
    with pytest.raises(ConfigError):
        required_codewords(q0, q1, 0.0, 0.9)


def test_norm_cdf_known_values():
    assert norm_cdf(0.0) == pytest.approx(0.5, abs=1e-15)
    assert norm_cdf(1.96) == pytest.approx(0.9750021048517795, abs=1e-12)
    assert norm_cdf(-1.0) == pytest.approx(0.15865525393145707, abs=1e-12)


def test_inv_norm_cdf_known_values_and_domain():
    assert inv_norm_cdf(0.5) == pytest.approx(0.0, abs=1e-12)
    assert inv_norm_cdf(0.975) == pytest.approx(1.959963984540054, abs=1e-9)
    assert inv_norm_cdf(0.001) == pytest.approx(-3.090232306167813, abs=1e-9)
    for bad in (0.0, 1.0, -0.1, 1.1):
        with pytest.raises(ConfigError):
            inv_norm_cdf(bad)


@given(st.floats(1e-12, 1 - 1e-12))
@settings(deadline=None)
def test_inv_norm_cdf_round_trip(u):
    assert norm_cdf(inv_norm_cdf(u)) == pytest.approx(u, abs=1e-10)
