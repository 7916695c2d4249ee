"""Wald sequential test on the per-word distance stream.

Instead of fixing the number of observed words up front, accumulate the
log-likelihood ratio of each word's distance and stop as soon as it crosses
either boundary: accept H1 at ``log(beta/alpha)`` or accept H0 at
``log((1-beta)/(1-alpha))`` (``alpha`` = false-alarm target, ``beta`` =
detection target).  The plan also carries the expected per-word drift under
each hypothesis and Wald's approximate expected word counts, which ignore
boundary overshoot.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterable

import numpy as np

from .errors import CodescoutError, ConfigError
from .glrt import WordPmf

VERDICT_PENDING = "pending"
VERDICT_ACCEPT_H0 = "accept_h0"
VERDICT_ACCEPT_H1 = "accept_h1"
VERDICT_UNDECIDED = "undecided"

DEFAULT_MAX_WORDS = 1_000_000


@dataclass(frozen=True, eq=False)
class SprtPlan:
    """Precomputed increments, boundaries, and expected durations."""

    log_increments: np.ndarray
    log_accept_h1: float
    log_accept_h0: float
    drift_h0: float
    drift_h1: float
    expected_words_h0: float
    expected_words_h1: float
    alpha: float
    beta: float

    def __post_init__(self) -> None:
        incs = np.asarray(self.log_increments, dtype=float)
        incs.setflags(write=False)
        object.__setattr__(self, "log_increments", incs)
        if not self.log_accept_h0 < 0.0 < self.log_accept_h1:
            raise ValueError("boundaries must straddle zero")
        if not (self.drift_h0 < 0.0 < self.drift_h1):
            raise ValueError("drifts must straddle zero (distinct hypotheses)")
        if math.isfinite(self.drift_h0) and not self.expected_words_h0 > 0.0:
            raise ValueError("expected word count under H0 must be positive")
        if math.isfinite(self.drift_h1) and not self.expected_words_h1 > 0.0:
            raise ValueError("expected word count under H1 must be positive")


@dataclass(frozen=True)
class SprtState:
    """Running state of one sequential test."""

    log_likelihood: float = 0.0
    words_used: int = 0
    verdict: str = VERDICT_PENDING


def sprt_plan(
    q0: WordPmf | np.ndarray, q1: WordPmf | np.ndarray, alpha: float, beta: float
) -> SprtPlan:
    """Build a sequential plan from the two per-word distance pmfs.

    Increment conventions at zero-probability distances: impossible under H0
    but possible under H1 gives +inf (observing it settles H1), the reverse
    gives -inf, and impossible under both is undefined (NaN; an error only if
    such a distance is ever observed).  The drift sums skip undefined
    distances and treat 0*log(0) terms as 0.
    """
    if not 0.0 < alpha < beta < 1.0:
        raise ConfigError(f"need 0 < alpha < beta < 1, got alpha={alpha}, beta={beta}")
    r = q0.probs if isinstance(q0, WordPmf) else np.asarray(q0, dtype=float)
    s = q1.probs if isinstance(q1, WordPmf) else np.asarray(q1, dtype=float)
    if r.shape != s.shape:
        raise ConfigError("pmfs must share a support length")
    if np.abs(r - s).max() < 1e-15:
        raise ConfigError("pmfs are identical; the sequential test cannot drift")

    increments = np.full(r.size, np.nan)
    both = (r > 0.0) & (s > 0.0)
    increments[both] = np.log(s[both] / r[both])
    increments[(r == 0.0) & (s > 0.0)] = math.inf
    increments[(s == 0.0) & (r > 0.0)] = -math.inf

    drift_h0 = math.fsum(
        float(r[j]) * float(increments[j]) for j in range(r.size) if r[j] > 0.0
    )
    drift_h1 = math.fsum(
        float(s[j]) * float(increments[j]) for j in range(s.size) if s[j] > 0.0
    )
    log_a = math.log(beta / alpha)
    log_b = math.log((1.0 - beta) / (1.0 - alpha))
    expected_h0 = ((1.0 - alpha) * log_b + alpha * log_a) / drift_h0
    expected_h1 = ((1.0 - beta) * log_b + beta * log_a) / drift_h1
    return SprtPlan(
        log_increments=increments,
        log_accept_h1=log_a,
        log_accept_h0=log_b,
        drift_h0=drift_h0,
        drift_h1=drift_h1,
        expected_words_h0=expected_h0,
        expected_words_h1=expected_h1,
        alpha=alpha,
        beta=beta,
    )


def sprt_step(plan: SprtPlan, state: SprtState, distance: int) -> SprtState:
    """Consume one word's distance and return the advanced state."""
    if state.verdict != VERDICT_PENDING:
        raise CodescoutError(f"cannot step a terminated test (verdict {state.verdict})")
    if not 0 <= distance < plan.log_increments.size:
        raise ConfigError(
            f"distance {distance} outside support [0, {plan.log_increments.size - 1}]"
        )
    increment = float(plan.log_increments[distance])
    if math.isnan(increment):
        raise CodescoutError(
            f"distance {distance} has zero probability under both hypotheses; "
            "its likelihood ratio is undefined"
        )
    total = state.log_likelihood + increment
    if total >= plan.log_accept_h1:
        verdict = VERDICT_ACCEPT_H1
    elif total <= plan.log_accept_h0:
        verdict = VERDICT_ACCEPT_H0
    else:
        verdict = VERDICT_PENDING
    return SprtState(log_likelihood=total, words_used=state.words_used + 1, verdict=verdict)


def run_sprt(
    plan: SprtPlan,
    distances: Iterable[int],
    max_words: int = DEFAULT_MAX_WORDS,
) -> SprtState:
    """Run the test over a distance stream until a verdict or the word cap.

    Hitting the cap yields the distinct verdict ``"undecided"``; exhausting
    the stream early returns the still-``"pending"`` state.
    """
    state = SprtState()
    for distance in distances:
        state = sprt_step(plan, state, int(distance))
        if state.verdict != VERDICT_PENDING:
            return state
        if state.words_used >= max_words:
            return replace(state, verdict=VERDICT_UNDECIDED)
    return state


def expected_sample_sizes(plan: SprtPlan) -> tuple[float, float]:
    """Wald's approximate expected word counts under (H0, H1)."""
    return plan.expected_words_h0, plan.expected_words_h1
