"""Exact distributions of the detection statistic and fixed-sample tests.

Under H0 (pure noise) each observed word is uniform, so its distance to the
nearest codeword — the coset leader weight — has pmf ``leader_counts[l] /
2^(n-k)``.  Under H1 (codewords through a binary symmetric channel) the
distance distribution follows from the aggregated coset weight rows and the
channel crossover probability.  Summing over M independent words convolves
the pmf M times; a most-powerful test at false-alarm level alpha then
thresholds the total distance, randomizing on the boundary value to hit
alpha exactly.  The module also provides the Gaussian-approximation formula
for how many words are needed to reach a target detection probability, and
the inverse normal CDF it requires.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .coset import CosetWeightProfile
from .errors import ConfigError

_LN2 = math.log(2.0)


def log_int(value: int) -> float:
    """Natural log of a positive integer, exact for arbitrary precision.

    Reduces the integer to 53 significant bits plus a power of two so counts
    far beyond float range (e.g. 2^120) keep full double precision.
    """
    if value <= 0:
        raise ValueError(f"log_int needs a positive integer, got {value}")
    excess = value.bit_length() - 53
    if excess <= 0:
        return math.log(value)
    return math.log(value >> excess) + excess * _LN2


@dataclass(frozen=True, eq=False)
class WordPmf:
    """Distribution of a single word's distance to the nearest codeword."""

    hypothesis: str
    probs: np.ndarray
    mean: float
    variance: float
    crossover: float | None = None

    def __post_init__(self) -> None:
        probs = np.asarray(self.probs, dtype=float)
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)
        if self.hypothesis not in ("H0", "H1"):
            raise ValueError(f"hypothesis must be 'H0' or 'H1', got {self.hypothesis!r}")
        if (probs < 0).any():
            raise ValueError("probabilities must be nonnegative")
        total = math.fsum(probs.tolist())
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"pmf sums to {total}, expected 1 within 1e-9")
        support = np.arange(probs.size)
        mean = float(np.dot(support, probs))
        var = float(np.dot((support - mean) ** 2, probs))
        if abs(mean - self.mean) > 1e-9 * max(1.0, abs(mean)):
            raise ValueError("stored mean inconsistent with probabilities")
        if abs(var - self.variance) > 1e-9 * max(1.0, var):
            raise ValueError("stored variance inconsistent with probabilities")

    @property
    def n(self) -> int:
        return self.probs.size - 1


@dataclass(frozen=True, eq=False)
class BlockPmf:
    """Distribution of the summed distance over M independent words."""

    M: int
    probs: np.ndarray

    def __post_init__(self) -> None:
        probs = np.asarray(self.probs, dtype=float)
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)
        if self.M < 1:
            raise ValueError(f"M must be >= 1, got {self.M}")
        total = math.fsum(probs.tolist())
        if abs(total - 1.0) > 1e-8:
            raise ValueError(f"block pmf sums to {total}, expected 1 within 1e-8")

    @property
    def mean(self) -> float:
        support = np.arange(self.probs.size)
        return float(np.dot(support, self.probs))


@dataclass(frozen=True)
class NpRule:
    """Randomized threshold test on the total distance statistic.

    Decide H1 when the statistic is strictly below ``threshold``; on a tie,
    decide H1 with probability ``randomization``; otherwise decide H0.
    """

    threshold: int
    randomization: float
    alpha_achieved: float
    predicted_pd: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.randomization <= 1.0:
            raise ValueError(f"randomization must be in [0, 1], got {self.randomization}")


def _pmf_moments(probs: list[float]) -> tuple[float, float]:
    mean = math.fsum(i * p for i, p in enumerate(probs))
    var = math.fsum((i - mean) ** 2 * p for i, p in enumerate(probs))
    return mean, var


def word_pmf_null(profile: CosetWeightProfile) -> WordPmf:
    """Distance pmf for a uniform random word: leader counts / 2^(n-k)."""
    denominator = 1 << (profile.n - profile.k)
    probs = [count / denominator for count in profile.leader_counts]
    mean, var = _pmf_moments(probs)
    return WordPmf(hypothesis="H0", probs=np.array(probs), mean=mean, variance=var)


def word_pmf_alt(profile: CosetWeightProfile, p: float) -> WordPmf:
    """Distance pmf for a codeword crossed through a BSC(p).

    The chance that the channel error lands in a coset with leader weight l
    is the weighted sum of that leader weight's aggregate row under the
    i.i.d. error measure; each term is evaluated in the log domain so counts
    of arbitrary magnitude and tiny tail probabilities survive, and terms
    are combined with compensated summation.
    """
    if not 0.0 <= p < 0.5:
        raise ConfigError(f"crossover probability must be in [0, 0.5), got {p}")
    n = profile.n
    if p == 0.0:
        probs = [0.0] * (n + 1)
        probs[0] = 1.0
    else:
        log_p = math.log(p)
        log_1mp = math.log1p(-p)
        probs = []
        for row in profile.weight_rows:
            terms = [
                math.exp(log_int(count) + i * log_p + (n - i) * log_1mp)
                for i, count in enumerate(row)
                if count
            ]
            probs.append(math.fsum(terms))
    mean, var = _pmf_moments(probs)
    return WordPmf(
        hypothesis="H1", probs=np.array(probs), mean=mean, variance=var, crossover=p
    )


def block_pmf(word: WordPmf, M: int) -> BlockPmf:
    """Distribution of the total distance over M words (M-fold convolution)."""
    if M < 1:
        raise ConfigError(f"M must be >= 1, got {M}")
    probs = np.array(word.probs, dtype=float)
    result = probs
    for _ in range(M - 1):
        result = np.convolve(result, probs)
    block = BlockPmf(M=M, probs=result)
    expected_mean = M * word.mean
    if expected_mean > 0 and abs(block.mean - expected_mean) > 1e-6 * expected_mean:
        raise ValueError("block mean inconsistent with word mean; convolution bug")
    _warn_on_underflow(word, block)
    return block


def _warn_on_underflow(word: WordPmf, block: BlockPmf) -> None:
    support = np.nonzero(word.probs)[0]
    low, high = int(support.min()) * block.M, int(support.max()) * block.M
    inner = block.probs[low : high + 1]
    if (inner <= 0.0).any():
        warnings.warn(
            "block pmf underflowed to zero inside its support; thresholds in "
            "that tail are unreliable",
            RuntimeWarning,
            stacklevel=3,
        )


def np_rule(Q0: BlockPmf | np.ndarray, Q1: BlockPmf | np.ndarray, alpha: float) -> NpRule:
    """Most-powerful randomized threshold at false-alarm level alpha.

    Picks the largest threshold whose strict-below null mass stays within
    alpha, then sets the boundary randomization to spend the remaining false
    alarm budget exactly.  If the boundary value has zero null probability
    the randomization is set to 0 and the achieved level honestly reported
    below target (with a diagnostic warning).
    """
    if not 0.0 < alpha < 1.0:
        raise ConfigError(f"alpha must be in (0, 1), got {alpha}")
    q0 = Q0.probs if isinstance(Q0, BlockPmf) else np.asarray(Q0, dtype=float)
    q1 = Q1.probs if isinstance(Q1, BlockPmf) else np.asarray(Q1, dtype=float)
    if q0.shape != q1.shape:
        raise ConfigError("null and alternative block pmfs must have the same length")
    below = np.concatenate(([0.0], np.cumsum(q0)))[: q0.size]
    candidates = np.nonzero(below <= alpha)[0]
    threshold = int(candidates.max())
    strict_mass = float(below[threshold])
    eta = 0.0
    if strict_mass < alpha:
        if q0[threshold] > 0.0:
            eta = (alpha - strict_mass) / float(q0[threshold])
        else:
            warnings.warn(
                f"boundary value {threshold} has zero null probability; achieved "
                f"false-alarm level {strict_mass} falls short of target {alpha}",
                RuntimeWarning,
                stacklevel=2,
            )
    eta = min(eta, 1.0)
    alpha_achieved = strict_mass + eta * float(q0[threshold])
    predicted_pd = float(np.sum(q1[:threshold])) + eta * float(q1[threshold])
    return NpRule(
        threshold=threshold,
        randomization=eta,
        alpha_achieved=alpha_achieved,
        predicted_pd=predicted_pd,
    )


def detection_probability(rule: NpRule, Q1: BlockPmf | np.ndarray) -> float:
    """Detection probability of a rule against an alternative block pmf."""
    q1 = Q1.probs if isinstance(Q1, BlockPmf) else np.asarray(Q1, dtype=float)
    if not 0 <= rule.threshold < q1.size:
        raise ConfigError("rule threshold outside the pmf support")
    return float(np.sum(q1[: rule.threshold])) + rule.randomization * float(q1[rule.threshold])


def required_codewords(q0: WordPmf, q1: WordPmf, alpha: float, beta: float) -> float:
    """Gaussian-approximation word count to reach detection beta at level alpha.

    Returns the unrounded real value ((s0*z_alpha - s1*z_beta)/(m1 - m0))^2
    where z_x is the standard normal quantile and (m, s) are the per-word
    distance moments under each hypothesis.
    """
    for name, value in (("alpha", alpha), ("beta", beta)):
        if not 0.0 < value < 1.0:
            raise ConfigError(f"{name} must be in (0, 1), got {value}")
    mu0, sigma0 = q0.mean, math.sqrt(q0.variance)
    mu1, sigma1 = q1.mean, math.sqrt(q1.variance)
    if mu0 == mu1:
        raise ConfigError(
            "hypotheses have identical mean distance; the statistic cannot "
            "separate them (degenerate profile or crossover)"
        )
    numerator = sigma0 * inv_norm_cdf(alpha) - sigma1 * inv_norm_cdf(beta)
    return (numerator / (mu1 - mu0)) ** 2


def norm_cdf(x: float) -> float:
    """Standard normal CDF via the error function."""
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


# Rational approximation coefficients (Acklam) for the normal quantile.
_A = (
    -3.969683028665376e01, 2.209460984245205e02, -2.759285104469687e02,
    1.383577518672690e02, -3.066479806614716e01, 2.506628277459239e00,
)
_B = (
    -5.447609879822406e01, 1.615858368580409e02, -1.556989798598866e02,
    6.680131188771972e01, -1.328068155288572e01,
)
_C = (
    -7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e00,
    -2.549732539343734e00, 4.374664141464968e00, 2.938163982698783e00,
)
_D = (
    7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e00,
    3.754408661907416e00,
)


def inv_norm_cdf(u: float) -> float:
    """Inverse standard normal CDF, accurate to well below 1e-8.

    Rational polynomial initial estimate refined by one Newton step against
    the erf-based CDF.
    """
    if not 0.0 < u < 1.0:
        raise ConfigError(f"quantile argument must be in (0, 1), got {u}")
    p_low = 0.02425
    if u < p_low:
        q = math.sqrt(-2.0 * math.log(u))
        x = (((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]) / (
            (((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0
        )
    elif u <= 1.0 - p_low:
        q = u - 0.5
        r = q * q
        x = (
            (((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5])
            * q
            / (((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0)
        )
    else:
        q = math.sqrt(-2.0 * math.log1p(-u))
        x = -(((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]) / (
            (((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0
        )
    # One Newton step: x -= (Phi(x) - u) / phi(x).
    density = math.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)
    if density > 0.0:
        x -= (norm_cdf(x) - u) / density
    return x
