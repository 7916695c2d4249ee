"""Monte Carlo harness: word generation, statistics, and trial reports."""

import math

import numpy as np
import pytest

from codescout import (
    BitWord,
    ChannelModel,
    ConfigError,
    Hypothesis,
    TrialReport,
    build_syndrome_table,
    generate_block,
    glrt_statistic,
    leader_weight_histogram,
    run_np_trials,
    run_sprt_trials,
    syndrome,
    trial_rng,
    word_pmf_alt,
)


def test_channel_model_validates():
    assert ChannelModel(0.0).p == 0.0
    assert ChannelModel(0.25).p == 0.25
    for bad in (-0.1, 0.5, 0.7):
        with pytest.raises(ConfigError):
            ChannelModel(bad)


def test_hypothesis_enum_round_trip():
    assert Hypothesis("h0") is Hypothesis.H0
    assert Hypothesis("h1") is Hypothesis.H1
    with pytest.raises(ValueError):
        Hypothesis("h2")


def test_trial_rng_streams_are_reproducible_and_distinct():
    a = trial_rng(42, 7).random(8)
    b = trial_rng(42, 7).random(8)
    c = trial_rng(42, 8).random(8)
    d = trial_rng(43, 7).random(8)
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, c)
    assert not np.array_equal(a, d)


def test_generate_block_shapes_and_reproducibility(hamming74):
    words = generate_block(hamming74, 16, ChannelModel(0.1), "h1", trial_rng(5, 0))
    assert len(words) == 16
    assert all(isinstance(w, BitWord) and w.n == 7 for w in words)
    again = generate_block(hamming74, 16, ChannelModel(0.1), "h1", trial_rng(5, 0))
    assert [int(w) for w in words] == [int(w) for w in again]
    with pytest.raises(ConfigError):
        generate_block(hamming74, 0, ChannelModel(0.1), "h1", trial_rng(5, 0))


def test_noiseless_traffic_is_all_codewords(hamming74):
    words = generate_block(hamming74, 200, ChannelModel(0.0), "h1", trial_rng(9, 0))
    assert all(syndrome(hamming74, w) == 0 for w in words)
    # Uniform noise hits the code only 16/128 of the time; 200 draws make
    # an all-codeword run astronomically unlikely.
    noise = generate_block(hamming74, 200, ChannelModel(0.0), "h0", trial_rng(9, 1))
    assert any(syndrome(hamming74, w) != 0 for w in noise)


def test_noise_words_cover_the_space(hamming74):
    words = generate_block(hamming74, 4000, ChannelModel(0.1), "h0", trial_rng(11, 0))
    mean_weight = np.mean([w.weight for w in words])
    assert abs(mean_weight - 3.5) < 0.15  # E[weight] = n/2, sigma_mean ~ 0.02
    values = {int(w) for w in words}
    assert len(values) > 100  # far more than the 16 codewords


def test_glrt_statistic_matches_scalar_syndrome_walk(hamming1511):
    table = build_syndrome_table(hamming1511)
    words = generate_block(hamming1511, 300, ChannelModel(0.1), "h1", trial_rng(3, 2))
    expected = sum(int(table.leader_weight[syndrome(hamming1511, w)]) for w in words)
    assert glrt_statistic(table, words) == expected
    packed = np.array([int(w) for w in words], dtype=np.uint64)
    assert glrt_statistic(table, packed) == expected  # vectorized path agrees


def test_leader_weight_histogram_tracks_channel_quality(hamming1511, hamming1511_profile):
    table = build_syndrome_table(hamming1511)
    M = 20_000
    words = generate_block(hamming1511, M, ChannelModel(0.05), "h1", trial_rng(21, 0))
    histogram = leader_weight_histogram(table, words)
    assert histogram.sum() == M
    q1 = word_pmf_alt(hamming1511_profile, 0.05)
    for distance in (0, 1):
        expected = M * float(q1.probs[distance])
        sigma = math.sqrt(expected * (1 - float(q1.probs[distance])))
        assert abs(histogram[distance] - expected) < 5 * sigma


def test_trial_report_validates_consistency():
    TrialReport(trials=10, decide_h1=3, empirical_rate=0.3,
                std_error=math.sqrt(0.3 * 0.7 / 10), seed=0)
    with pytest.raises(ValueError):
        TrialReport(trials=10, decide_h1=3, empirical_rate=0.4,
                    std_error=math.sqrt(0.3 * 0.7 / 10), seed=0)


def test_run_np_trials_reproducible_and_calibrated(hamming74, hamming74_profile):
    report = run_np_trials(hamming74, hamming74_profile, M=4, p=0.1, alpha=0.2,
                           trials=4000, seed=77, hypothesis="h0")
    again = run_np_trials(hamming74, hamming74_profile, M=4, p=0.1, alpha=0.2,
                          trials=4000, seed=77, hypothesis="h0")
    assert report == again
    assert report.trials == 4000
    assert report.decide_h1 == round(report.empirical_rate * 4000)
    # The randomized rule spends alpha exactly, so the empirical false-alarm
    # rate concentrates on 0.2.
    assert abs(report.empirical_rate - 0.2) < 5 * math.sqrt(0.2 * 0.8 / 4000)
    with pytest.raises(ConfigError):
        run_np_trials(hamming74, hamming74_profile, 4, 0.1, 0.2, 0, 1, "h0")


def test_run_np_trials_detects_planted_traffic(hamming74, hamming74_profile):
    report = run_np_trials(hamming74, hamming74_profile, M=25, p=0.05, alpha=0.05,
                           trials=400, seed=12, hypothesis="h1")
    assert report.empirical_rate > 0.9


def test_run_sprt_trials_reports_durations(hamming1511, hamming1511_profile):
    report = run_sprt_trials(hamming1511, hamming1511_profile, p=0.05, alpha=0.05,
                             beta=0.997, trials=2000, seed=31, hypothesis="h1")
    assert report.undecided == 0
    assert report.empirical_rate > 0.98
    assert report.mean_samples is not None and report.mean_samples > 1.0
    again = run_sprt_trials(hamming1511, hamming1511_profile, p=0.05, alpha=0.05,
                            beta=0.997, trials=2000, seed=31, hypothesis="h1")
    assert report == again


def test_run_sprt_trials_word_cap_counts_undecided(hamming1511, hamming1511_profile):
    report = run_sprt_trials(hamming1511, hamming1511_profile, p=0.05, alpha=0.05,
                             beta=0.997, trials=50, seed=13, hypothesis="h0",
                             max_words=1)
    # One word can never bridge the boundary gap for this plan.
    assert report.undecided == 50
    assert math.isnan(report.mean_samples)
    assert report.empirical_rate == 0.0


def test_run_sprt_trials_noiseless_uses_exact_stepping(hamming74, hamming74_profile):
    # p = 0 places an infinite increment in the plan, forcing the scalar path.
    report = run_sprt_trials(hamming74, hamming74_profile, p=0.0, alpha=0.05,
                             beta=0.997, trials=200, seed=8, hypothesis="h1")
    assert report.empirical_rate == 1.0
    assert report.mean_samples == pytest.approx(2.0)  # ceil(log boundary / log 16)
