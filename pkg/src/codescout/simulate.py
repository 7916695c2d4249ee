"""Monte Carlo harness: synthetic streams, trial runners, empirical rates.

Every trial owns an independent counter-based RNG stream keyed by
``(seed, trial_index)``, so results are bit-for-bit reproducible and
independent of execution order.  Word generation and syndrome evaluation are
vectorized over each block using 64-bit packed words (codes up to n = 63,
which covers every built-in code used for simulation; a plain-integer path
handles longer codes).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .codes import LinearCode, SyndromeTable, build_syndrome_table
from .coset import CosetWeightProfile
from .errors import ConfigError
from .gf2 import BitWord
from .glrt import block_pmf, np_rule, word_pmf_alt, word_pmf_null
from .sequential import (
    DEFAULT_MAX_WORDS,
    VERDICT_ACCEPT_H0,
    VERDICT_ACCEPT_H1,
    VERDICT_PENDING,
    SprtState,
    sprt_plan,
    sprt_step,
)


class Hypothesis(str, Enum):
    """Which data-generating model a simulated stream follows."""

    H0 = "h0"
    H1 = "h1"


@dataclass(frozen=True)
class ChannelModel:
    """Binary symmetric channel with crossover probability p."""

    p: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.p < 0.5:
            raise ConfigError(f"crossover probability must be in [0, 0.5), got {self.p}")


@dataclass(frozen=True)
class TrialReport:
    """Aggregate outcome of a batch of Monte Carlo trials."""

    trials: int
    decide_h1: int
    empirical_rate: float
    std_error: float
    seed: int
    mean_samples: float | None = None
    undecided: int = 0

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not 0 <= self.decide_h1 <= self.trials:
            raise ValueError("decide_h1 outside [0, trials]")
        rate = self.decide_h1 / self.trials
        if abs(rate - self.empirical_rate) > 1e-12:
            raise ValueError("empirical_rate inconsistent with counts")
        se = math.sqrt(rate * (1.0 - rate) / self.trials)
        if abs(se - self.std_error) > 1e-12:
            raise ValueError("std_error inconsistent with counts")


def trial_rng(seed: int, trial_index: int) -> np.random.Generator:
    """Independent counter-based stream for one trial."""
    return np.random.Generator(np.random.Philox(key=[seed, trial_index]))


def _pack_rows(bits: np.ndarray) -> np.ndarray:
    """Pack rows of 0/1 values into uint64 words (bit j = column j)."""
    n = bits.shape[-1]
    weights = (np.uint64(1) << np.arange(n, dtype=np.uint64))
    return np.sum(bits.astype(np.uint64) * weights, axis=-1, dtype=np.uint64)


def _random_words(code: LinearCode, M: int, rng: np.random.Generator) -> np.ndarray | list[int]:
    bits = rng.integers(0, 2, size=(M, code.n), dtype=np.uint8)
    if code.n <= 63:
        return _pack_rows(bits)
    from .gf2 import pack_bits

    return [pack_bits(row.tolist()) for row in bits]


def _noisy_codewords(
    code: LinearCode, M: int, p: float, rng: np.random.Generator
) -> np.ndarray | list[int]:
    message_bits = rng.integers(0, 2, size=(M, code.k), dtype=np.uint8)
    error_bits = (rng.random(size=(M, code.n)) < p).astype(np.uint8)
    if code.n <= 63:
        g_rows = np.array(code.generator.rows, dtype=np.uint64)
        selected = np.where(message_bits.astype(bool), g_rows[np.newaxis, :], np.uint64(0))
        words = np.bitwise_xor.reduce(selected, axis=1)
        return words ^ _pack_rows(error_bits)
    from .gf2 import combine_rows, pack_bits

    out = []
    for i in range(M):
        cw = combine_rows(code.generator.rows, pack_bits(message_bits[i].tolist()))
        out.append(cw ^ pack_bits(error_bits[i].tolist()))
    return out


def generate_block(
    code: LinearCode,
    M: int,
    channel: ChannelModel,
    hypothesis: Hypothesis | str,
    rng: np.random.Generator,
) -> list[BitWord]:
    """Draw M words: uniform noise under H0, noisy codewords under H1."""
    if M < 1:
        raise ConfigError(f"M must be >= 1, got {M}")
    hyp = Hypothesis(hypothesis)
    if hyp is Hypothesis.H0:
        words = _random_words(code, M, rng)
    else:
        words = _noisy_codewords(code, M, channel.p, rng)
    return [BitWord(code.n, int(w)) for w in words]


def _leader_weights(table: SyndromeTable, words: np.ndarray | Sequence[int | BitWord]) -> np.ndarray:
    """Per-word distance to the nearest codeword via the syndrome table."""
    code = table.code
    if isinstance(words, np.ndarray) and code.n <= 63:
        h_rows = np.array(code.parity_check.rows, dtype=np.uint64)
        syndromes = np.zeros(words.shape, dtype=np.uint64)
        for row_index in range(code.redundancy):
            bits = np.bitwise_count(words & h_rows[row_index]) & np.uint64(1)
            syndromes |= bits << np.uint64(row_index)
        return table.leader_weight[syndromes.astype(np.int64)].astype(np.int64)
    from .codes import syndrome as _syndrome

    values = [_syndrome(code, w) for w in words]
    return table.leader_weight[np.array(values, dtype=np.int64)].astype(np.int64)


def glrt_statistic(table: SyndromeTable, words: np.ndarray | Sequence[int | BitWord]) -> int:
    """Total distance from the observed words to the nearest codewords."""
    return int(_leader_weights(table, words).sum())


def run_np_trials(
    code: LinearCode,
    profile: CosetWeightProfile,
    M: int,
    p: float,
    alpha: float,
    trials: int,
    seed: int,
    hypothesis: Hypothesis | str,
) -> TrialReport:
    """Empirical decide-H1 rate of the fixed-sample randomized test.

    Reports the false-alarm rate when streams are generated under H0 and the
    detection rate under H1.  Each trial draws its block, computes the total
    distance, and applies the threshold rule; a boundary tie consumes one
    uniform draw from the trial's own stream.
    """
    if trials < 1:
        raise ConfigError(f"trials must be >= 1, got {trials}")
    hyp = Hypothesis(hypothesis)
    channel = ChannelModel(p)
    q0 = word_pmf_null(profile)
    q1 = word_pmf_alt(profile, p)
    rule = np_rule(block_pmf(q0, M), block_pmf(q1, M), alpha)
    table = build_syndrome_table(code)
    decide_h1 = 0
    for index in range(trials):
        rng = trial_rng(seed, index)
        if hyp is Hypothesis.H0:
            words = _random_words(code, M, rng)
        else:
            words = _noisy_codewords(code, M, channel.p, rng)
        statistic = glrt_statistic(table, words)
        if statistic < rule.threshold:
            decide_h1 += 1
        elif statistic == rule.threshold and rule.randomization > 0.0:
            if rng.random() < rule.randomization:
                decide_h1 += 1
    rate = decide_h1 / trials
    return TrialReport(
        trials=trials,
        decide_h1=decide_h1,
        empirical_rate=rate,
        std_error=math.sqrt(rate * (1.0 - rate) / trials),
        seed=seed,
    )


def run_sprt_trials(
    code: LinearCode,
    profile: CosetWeightProfile,
    p: float,
    alpha: float,
    beta: float,
    trials: int,
    seed: int,
    hypothesis: Hypothesis | str,
    max_words: int = DEFAULT_MAX_WORDS,
    chunk: int = 64,
) -> TrialReport:
    """Empirical acceptance rate and mean duration of the sequential test.

    ``mean_samples`` averages words consumed over decided trials; trials
    still pending at ``max_words`` are counted in ``undecided`` and excluded
    from the mean.
    """
    if trials < 1:
        raise ConfigError(f"trials must be >= 1, got {trials}")
    hyp = Hypothesis(hypothesis)
    channel = ChannelModel(p)
    plan = sprt_plan(word_pmf_null(profile), word_pmf_alt(profile, p), alpha, beta)
    table = build_syndrome_table(code)
    increments = plan.log_increments
    vector_path = bool(np.isfinite(increments).all())
    accept_h1 = 0
    undecided = 0
    total_words = 0
    decided_trials = 0
    for index in range(trials):
        rng = trial_rng(seed, index)
        log_likelihood = 0.0
        scalar_state = SprtState()
        used = 0
        verdict = None
        while used < max_words:
            take = min(chunk, max_words - used)
            if hyp is Hypothesis.H0:
                words = _random_words(code, take, rng)
            else:
                words = _noisy_codewords(code, take, channel.p, rng)
            distances = _leader_weights(table, words)
            if vector_path:
                partial = log_likelihood + np.cumsum(increments[distances])
                hits = (partial >= plan.log_accept_h1) | (partial <= plan.log_accept_h0)
                if hits.any():
                    stop = int(hits.argmax())
                    used += stop + 1
                    verdict = (
                        VERDICT_ACCEPT_H1
                        if partial[stop] >= plan.log_accept_h1
                        else VERDICT_ACCEPT_H0
                    )
                    break
                log_likelihood = float(partial[-1])
                used += take
            else:
                # Scalar stepping carries state exactly across chunks; only
                # used when some increment is infinite (e.g. p = 0).
                for d in distances:
                    scalar_state = sprt_step(plan, scalar_state, int(d))
                    used += 1
                    if scalar_state.verdict != VERDICT_PENDING:
                        verdict = scalar_state.verdict
                        break
                if verdict is not None:
                    break
        if verdict is None:
            undecided += 1
        else:
            decided_trials += 1
            total_words += used
            if verdict == VERDICT_ACCEPT_H1:
                accept_h1 += 1
    rate = accept_h1 / trials
    mean_samples = total_words / decided_trials if decided_trials else float("nan")
    return TrialReport(
        trials=trials,
        decide_h1=accept_h1,
        empirical_rate=rate,
        std_error=math.sqrt(rate * (1.0 - rate) / trials),
        seed=seed,
        mean_samples=mean_samples,
        undecided=undecided,
    )


def leader_weight_histogram(
    table: SyndromeTable, words: np.ndarray | Sequence[int | BitWord]
) -> np.ndarray:
    """Count how many words fall at each distance 0..n (for calibration tests)."""
    distances = _leader_weights(table, words)
    return np.bincount(distances, minlength=table.code.n + 1)
