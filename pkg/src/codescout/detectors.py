"""scikit-learn style detectors wrapping the statistical pipeline.

Both estimators treat a row of ``X`` as one observed bit sequence (0/1
entries, one column per stream bit) and decide between pure noise (label 0)
and code traffic (label 1).  ``fit`` performs the pre-calculation — coset
profile, distance pmfs, thresholds — and learns nothing from ``X``; it
exists so the objects compose with sklearn tooling (``get_params``,
``clone``, pipelines).
"""

from __future__ import annotations

from typing import Mapping

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .codes import LinearCode, build_syndrome_table, load_code_config, parse_code_spec
from .coset import (
    CosetWeightProfile,
    import_profile,
    profile_direct,
    profile_dual_transform,
)
from .errors import ConfigError
from .glrt import block_pmf, np_rule, word_pmf_alt, word_pmf_null
from .sequential import (
    VERDICT_ACCEPT_H1,
    VERDICT_PENDING,
    SprtState,
    sprt_plan,
    sprt_step,
)
from .simulate import trial_rng

_DIRECT_AUTO_LIMIT = 20


def _resolve_code(code) -> LinearCode:
    if isinstance(code, LinearCode):
        return code
    if isinstance(code, str):
        return parse_code_spec(code)
    if isinstance(code, Mapping):
        return load_code_config(code)
    raise ConfigError(
        "code must be a LinearCode, a spec string like 'hamming:4', or a config mapping"
    )


def _resolve_profile(profile, profile_method: str, code: LinearCode) -> CosetWeightProfile:
    if isinstance(profile, CosetWeightProfile):
        if (profile.n, profile.k) != (code.n, code.k):
            raise ConfigError(
                f"profile is for an ({profile.n},{profile.k}) code, "
                f"but the code is ({code.n},{code.k})"
            )
        return profile
    if isinstance(profile, str):
        return _resolve_profile(import_profile(profile), profile_method, code)
    if profile is not None:
        raise ConfigError("profile must be a CosetWeightProfile, a file path, or None")
    method = profile_method
    if method == "auto":
        method = "direct" if code.n <= _DIRECT_AUTO_LIMIT else "dual"
    if method == "direct":
        return profile_direct(code)
    if method == "dual":
        return profile_dual_transform(code)
    raise ConfigError(f"profile_method must be 'auto', 'direct', or 'dual', got {method!r}")


def _check_bit_matrix(X, expected_width: int | None, multiple_of: int | None) -> np.ndarray:
    X = np.asarray(X)
    if X.ndim != 2:
        raise ValueError(f"X must be 2-dimensional, got shape {X.shape}")
    if X.size == 0:
        raise ValueError("X must contain at least one sequence")
    values = np.unique(X)
    if not np.isin(values, (0, 1)).all():
        raise ValueError("X entries must be bits (0 or 1)")
    width = X.shape[1]
    if expected_width is not None and width != expected_width:
        raise ValueError(f"each row must have {expected_width} bits, got {width}")
    if multiple_of is not None and width % multiple_of:
        raise ValueError(f"row width {width} is not a multiple of the block length {multiple_of}")
    return X.astype(np.uint8)


def _rows_to_words(X: np.ndarray, n: int) -> np.ndarray:
    """Reshape flat bit rows into packed words, one row of words per sequence."""
    sequences, width = X.shape
    bits = X.reshape(sequences, width // n, n)
    weights = (np.uint64(1) << np.arange(n, dtype=np.uint64))
    return np.sum(bits.astype(np.uint64) * weights, axis=-1, dtype=np.uint64)


class _DetectorBase(BaseEstimator):
    def _fit_common(self):
        code = _resolve_code(self.code)
        if code.n > 63:
            raise ConfigError("detector estimators support block lengths up to 63 bits")
        profile = _resolve_profile(self.profile, self.profile_method, code)
        table = build_syndrome_table(code)
        return code, profile, table

    def _require_fitted(self):
        if not hasattr(self, "code_"):
            raise NotFittedError(
                f"This {type(self).__name__} instance is not fitted yet; call 'fit' first."
            )

    def _distances(self, X: np.ndarray) -> np.ndarray:
        words = _rows_to_words(X, self.code_.n)
        h_rows = np.array(self.code_.parity_check.rows, dtype=np.uint64)
        syndromes = np.zeros(words.shape, dtype=np.uint64)
        for row_index in range(self.code_.redundancy):
            bits = np.bitwise_count(words & h_rows[row_index]) & np.uint64(1)
            syndromes |= bits << np.uint64(row_index)
        return self.table_.leader_weight[syndromes.astype(np.int64)].astype(np.int64)


class NeymanPearsonDetector(_DetectorBase):
    """Fixed-sample detector: threshold the summed distance over M words.

    Parameters
    ----------
    code : LinearCode, spec string ("hamming:4", "bch:15,7", ...), or config mapping
    p : assumed channel crossover probability under the traffic hypothesis
    alpha : false-alarm budget; the randomized rule achieves it exactly
    M : number of words per decision (row width must be M * n bits)
    profile : optional precomputed coset profile or profile file path
    profile_method : "auto", "direct", or "dual" when the profile is computed here
    seed : stream key for boundary tie-break draws (one substream per row)
    """

    def __init__(
        self,
        code="hamming:3",
        p: float = 0.05,
        alpha: float = 0.05,
        M: int = 10,
        profile=None,
        profile_method: str = "auto",
        seed: int = 0,
    ):
        self.code = code
        self.p = p
        self.alpha = alpha
        self.M = M
        self.profile = profile
        self.profile_method = profile_method
        self.seed = seed

    def fit(self, X=None, y=None):
        """Precompute the profile, block pmfs, and randomized threshold."""
        code, profile, table = self._fit_common()
        if int(self.M) < 1:
            raise ConfigError(f"M must be >= 1, got {self.M}")
        self.code_ = code
        self.profile_ = profile
        self.table_ = table
        self.null_pmf_ = word_pmf_null(profile)
        self.alt_pmf_ = word_pmf_alt(profile, self.p)
        self.null_block_ = block_pmf(self.null_pmf_, int(self.M))
        self.alt_block_ = block_pmf(self.alt_pmf_, int(self.M))
        self.rule_ = np_rule(self.null_block_, self.alt_block_, self.alpha)
        self.n_features_in_ = int(self.M) * code.n
        self.classes_ = np.array([0, 1])
        return self

    def decision_function(self, X) -> np.ndarray:
        """Negated total distance: larger values look more like code traffic."""
        self._require_fitted()
        X = _check_bit_matrix(X, self.n_features_in_, None)
        return -self._distances(X).sum(axis=1).astype(float)

    def predict(self, X) -> np.ndarray:
        """1 = code traffic (H1), 0 = noise (H0); boundary ties are randomized."""
        self._require_fitted()
        X = _check_bit_matrix(X, self.n_features_in_, None)
        statistics = self._distances(X).sum(axis=1)
        decisions = (statistics < self.rule_.threshold).astype(np.int64)
        if self.rule_.randomization > 0.0:
            for row in np.nonzero(statistics == self.rule_.threshold)[0]:
                draw = trial_rng(self.seed, int(row)).random()
                decisions[row] = int(draw < self.rule_.randomization)
        return decisions


class SequentialDetector(_DetectorBase):
    """Sequential detector: walk each row word by word until a boundary.

    Rows supply up to ``width / n`` words; a row whose likelihood never
    reaches a boundary is handled per ``undecided``: "error" (default),
    "h0", or "h1".
    """

    def __init__(
        self,
        code="hamming:3",
        p: float = 0.05,
        alpha: float = 0.05,
        beta: float = 0.997,
        profile=None,
        profile_method: str = "auto",
        undecided: str = "error",
    ):
        self.code = code
        self.p = p
        self.alpha = alpha
        self.beta = beta
        self.profile = profile
        self.profile_method = profile_method
        self.undecided = undecided

    def fit(self, X=None, y=None):
        """Precompute the per-distance increments and Wald boundaries."""
        code, profile, table = self._fit_common()
        if self.undecided not in ("error", "h0", "h1"):
            raise ConfigError(f"undecided must be 'error', 'h0', or 'h1', got {self.undecided!r}")
        self.code_ = code
        self.profile_ = profile
        self.table_ = table
        self.null_pmf_ = word_pmf_null(profile)
        self.alt_pmf_ = word_pmf_alt(profile, self.p)
        self.plan_ = sprt_plan(self.null_pmf_, self.alt_pmf_, self.alpha, self.beta)
        self.classes_ = np.array([0, 1])
        return self

    def predict_detail(self, X) -> list[SprtState]:
        """Final sequential state for each row (verdict, words used, log LR)."""
        self._require_fitted()
        X = _check_bit_matrix(X, None, self.code_.n)
        states = []
        for row_distances in self._distances(X):
            state = SprtState()
            for distance in row_distances:
                state = sprt_step(self.plan_, state, int(distance))
                if state.verdict != VERDICT_PENDING:
                    break
            states.append(state)
        return states

    def predict(self, X) -> np.ndarray:
        """1 = code traffic (H1), 0 = noise (H0)."""
        states = self.predict_detail(X)
        pending = [i for i, s in enumerate(states) if s.verdict == VERDICT_PENDING]
        if pending and self.undecided == "error":
            raise ValueError(
                f"rows {pending} ended without a verdict; supply longer rows or "
                "set undecided='h0'/'h1'"
            )
        fallback = 1 if self.undecided == "h1" else 0
        return np.array(
            [
                1 if s.verdict == VERDICT_ACCEPT_H1
                else fallback if s.verdict == VERDICT_PENDING
                else 0
                for s in states
            ],
            dtype=np.int64,
        )
