"""Coset weight distributions: the detector's one-time pre-calculation.

The space of n-bit words splits into 2^(n-k) cosets of the code.  For each
coset, the weight of its minimum-weight member (the leader) is the distance
from every member to its nearest codeword, which is all the detector's test
statistic ever uses.  A :class:`CosetWeightProfile` therefore stores, per
leader weight ``l``:

* ``leader_counts[l]`` — how many cosets have a leader of weight ``l``, and
* ``weight_rows[l][i]`` — the total number of weight-``i`` words across all
  those cosets.

Two independent construction routes are provided: a direct scan of all 2^n
words (:func:`profile_direct`) and an exact dual-code transform
(:func:`profile_dual_transform`) that only enumerates the 2^(n-k)-element
dual code and so reaches codes whose word space is far beyond enumeration.
All counts are exact integers; profiles serialize to JSON with counts as
decimal strings.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Mapping

import numpy as np

from .codes import LinearCode
from .errors import ConfigError, EnumerationLimitError, InvariantViolationError
from .gf2 import iterate_span

#: Largest block length accepted by the direct 2^n scan.
MAX_DIRECT_BITS = 32

#: Largest redundancy accepted by the dual transform (2^(n-k) dual words).
MAX_DUAL_REDUNDANCY = 26

# The direct scan buckets counts by (syndrome, weight); cap the bucket table.
_MAX_DIRECT_REDUNDANCY = 24
_CHUNK_BITS = 20
_INT64_BUDGET = 1 << 62


@dataclass(frozen=True)
class CosetWeightProfile:
    """Aggregated coset weight distribution of a code (exact integers)."""

    n: int
    k: int
    leader_counts: tuple[int, ...]
    weight_rows: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "leader_counts", tuple(int(c) for c in self.leader_counts))
        object.__setattr__(
            self, "weight_rows", tuple(tuple(int(c) for c in row) for row in self.weight_rows)
        )
        self.validate()

    def validate(self) -> None:
        """Check every structural invariant; raise on any violation."""
        n, k = self.n, self.k
        if not 1 <= k < n:
            raise InvariantViolationError(f"need 1 <= k < n, got k={k}, n={n}")
        beta, rows = self.leader_counts, self.weight_rows
        if len(beta) != n + 1 or len(rows) != n + 1:
            raise InvariantViolationError("leader_counts and weight_rows must have n+1 entries")
        if any(len(row) != n + 1 for row in rows):
            raise InvariantViolationError("every weight row must have n+1 entries")
        if any(c < 0 for c in beta) or any(c < 0 for row in rows for c in row):
            raise InvariantViolationError("counts must be nonnegative")
        if sum(beta) != 1 << (n - k):
            raise InvariantViolationError(
                f"leader counts sum to {sum(beta)}, expected 2^{n - k}"
            )
        if beta[0] != 1:
            raise InvariantViolationError("exactly one coset (the code) has leader weight 0")
        if rows[0][0] != 1 or sum(rows[0]) != 1 << k:
            raise InvariantViolationError("row 0 must be the code's weight distribution")
        total = sum(sum(row) for row in rows)
        if total != 1 << n:
            raise InvariantViolationError(f"rows sum to {total}, expected 2^{n}")
        for l in range(n + 1):
            row = rows[l]
            if any(row[i] for i in range(l)):
                raise InvariantViolationError(
                    f"leader weight {l} row has mass below weight {l}"
                )
            if sum(row) != beta[l] << k:
                raise InvariantViolationError(
                    f"leader weight {l} row mass {sum(row)} != beta[{l}] * 2^k"
                )
            if beta[l] and row[l] < beta[l]:
                raise InvariantViolationError(
                    f"leader weight {l} row needs at least {beta[l]} words of weight {l}"
                )

    @property
    def code_weight_distribution(self) -> tuple[int, ...]:
        """Codeword weight counts A_0..A_n (the leader-weight-0 row)."""
        return self.weight_rows[0]

    def occupied_leader_weights(self) -> list[int]:
        return [l for l, c in enumerate(self.leader_counts) if c]


# ---------------------------------------------------------------------------
# Direct enumeration route


def profile_direct(code: LinearCode) -> CosetWeightProfile:
    """Profile by scanning all 2^n words, bucketing weights by syndrome.

    Exact and simple, but exponential in n; refuses n beyond
    ``MAX_DIRECT_BITS`` (and redundancy beyond the bucket-table budget).
    """
    n, k, r = code.n, code.k, code.redundancy
    if n > MAX_DIRECT_BITS:
        raise EnumerationLimitError(
            f"direct profile scans 2^{n} words; limit is 2^{MAX_DIRECT_BITS}"
        )
    if r > _MAX_DIRECT_REDUNDANCY:
        raise EnumerationLimitError(
            f"direct profile buckets 2^{r} x {n + 1} counts; redundancy limit is "
            f"{_MAX_DIRECT_REDUNDANCY} (use the dual-transform route)"
        )
    width = n + 1
    h_rows = np.array(code.parity_check.rows, dtype=np.uint64)
    counts = np.zeros((1 << r) * width, dtype=np.int64)
    chunk = 1 << min(n, _CHUNK_BITS)
    offsets = np.arange(chunk, dtype=np.uint64)
    for start in range(0, 1 << n, chunk):
        words = np.uint64(start) + offsets
        weights = np.bitwise_count(words)
        syndromes = np.zeros(chunk, dtype=np.uint64)
        for row_index in range(r):
            bits = np.bitwise_count(words & h_rows[row_index]) & np.uint64(1)
            syndromes |= bits << np.uint64(row_index)
        keys = syndromes * np.uint64(width) + weights
        counts += np.bincount(keys, minlength=counts.size)
    matrix = counts.reshape(1 << r, width)
    return _aggregate_int_matrix(code, matrix)


def _aggregate_int_matrix(code: LinearCode, matrix: np.ndarray) -> CosetWeightProfile:
    """Aggregate per-syndrome weight counts (int64 matrix) by leader weight."""
    n = code.n
    occupied = matrix > 0
    if not occupied.any(axis=1).all():
        raise InvariantViolationError("a coset came out empty; internal bug")
    leaders = occupied.argmax(axis=1)
    beta = np.bincount(leaders, minlength=n + 1)
    rows = np.zeros((n + 1, n + 1), dtype=np.int64)
    np.add.at(rows, leaders, matrix)
    return CosetWeightProfile(
        n=n,
        k=code.k,
        leader_counts=tuple(int(b) for b in beta),
        weight_rows=tuple(tuple(int(c) for c in row) for row in rows),
    )


# ---------------------------------------------------------------------------
# Dual-transform route


def krawtchouk_table(n: int) -> list[list[int]]:
    """Exact integer table K[i][w] = sum_j (-1)^j C(w, j) C(n-w, i-j).

    K[i][w] is the coefficient of x^i in (1-x)^w (1+x)^(n-w); weighting the
    dual code's weight enumerator by these values turns it into any coset's
    weight distribution.
    """
    table = [[0] * (n + 1) for _ in range(n + 1)]
    for w in range(n + 1):
        for i in range(n + 1):
            total = 0
            for j in range(max(0, i - (n - w)), min(i, w) + 1):
                term = math.comb(w, j) * math.comb(n - w, i - j)
                total += -term if j & 1 else term
            table[i][w] = total
    return table


def _signed_dual_weight_sums(code: LinearCode) -> np.ndarray:
    """T[s, w] = sum over dual codewords u of weight w of (-1)^<e_s, u>.

    Writing each dual codeword as a combination of parity-check rows with
    coefficient vector a, the sign for the coset with syndrome s is
    (-1)^<a, s>.  Collecting dual words by weight w gives indicator columns
    over a; the full sign-weighted table over all syndromes is then one
    Walsh-Hadamard transform per weight column (exact int64 arithmetic).
    """
    n, r = code.n, code.redundancy
    size = 1 << r
    dual_weights = np.empty(size, dtype=np.int64)
    for coeffs, value in iterate_span(code.parity_check.rows):
        dual_weights[coeffs] = value.bit_count()
    table = np.zeros((size, n + 1), dtype=np.int64)
    table[np.arange(size), dual_weights] = 1
    half = 1
    while half < size:
        shaped = table.reshape(-1, 2, half, n + 1)
        top = shaped[:, 0] + shaped[:, 1]
        bottom = shaped[:, 0] - shaped[:, 1]
        shaped[:, 0] = top
        shaped[:, 1] = bottom
        half *= 2
    return table


def profile_dual_transform(code: LinearCode) -> CosetWeightProfile:
    """Profile via the dual code: exact for any n with modest redundancy.

    Each coset's weight enumerator is a signed average over the 2^(n-k) dual
    codewords; evaluating the signed sums for all cosets at once (one
    Walsh-Hadamard transform per dual weight) and weighting by exact
    Krawtchouk integers yields every count directly.  All arithmetic is
    integer-exact: a certified int64 path when value bounds allow, otherwise
    per-syndrome big integers; the final division by 2^(n-k) is checked to be
    exact and any negative or fractional count aborts.
    """
    n, k, r = code.n, code.k, code.redundancy
    if r > MAX_DUAL_REDUNDANCY:
        raise EnumerationLimitError(
            f"dual transform enumerates 2^{r} dual codewords; limit is 2^{MAX_DUAL_REDUNDANCY}"
        )
    signed = _signed_dual_weight_sums(code)
    kraw = krawtchouk_table(n)
    max_kraw = max(abs(v) for row in kraw for v in row)
    divisor = 1 << r
    # |signed| <= 2^r, so per-entry products are bounded by 2^r * max|K|.
    if (n + 1) * divisor * max_kraw < _INT64_BUDGET:
        kraw_t = np.array(kraw, dtype=np.int64).T  # [w, i]
        scaled = signed @ kraw_t
        if (scaled < 0).any() or (scaled % divisor).any():
            raise InvariantViolationError(
                "dual transform produced a negative or fractional count"
            )
        return _aggregate_int_matrix(code, scaled // divisor)
    return _profile_dual_bigint(code, signed, kraw)


def _profile_dual_bigint(
    code: LinearCode, signed: np.ndarray, kraw: list[list[int]]
) -> CosetWeightProfile:
    n, k, r = code.n, code.k, code.redundancy
    divisor = 1 << r
    beta = [0] * (n + 1)
    rows = [[0] * (n + 1) for _ in range(n + 1)]
    for s in range(1 << r):
        t_row = [int(v) for v in signed[s]]
        counts = []
        for i in range(n + 1):
            total = sum(t * kraw[i][w] for w, t in enumerate(t_row) if t)
            if total < 0 or total % divisor:
                raise InvariantViolationError(
                    "dual transform produced a negative or fractional count"
                )
            counts.append(total // divisor)
        leader = next((i for i, c in enumerate(counts) if c), None)
        if leader is None:
            raise InvariantViolationError("a coset came out empty; internal bug")
        beta[leader] += 1
        row = rows[leader]
        for i, c in enumerate(counts):
            row[i] += c
    return CosetWeightProfile(n=n, k=k, leader_counts=beta, weight_rows=rows)


# ---------------------------------------------------------------------------
# Serialization


def export_profile(profile: CosetWeightProfile, destination: str | Path | IO[str]) -> None:
    """Write a profile as JSON with counts as decimal strings.

    Only leader weights with at least one coset get a row; the output is
    deterministic (sorted keys, fixed layout) so identical profiles produce
    byte-identical files.
    """
    payload = {
        "n": profile.n,
        "k": profile.k,
        "beta": list(profile.leader_counts),
        "rows": {
            str(l): [str(c) for c in profile.weight_rows[l]]
            for l in profile.occupied_leader_weights()
        },
    }
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if hasattr(destination, "write"):
        destination.write(text)
    else:
        Path(destination).write_text(text, encoding="utf-8")


def import_profile(source: str | Path | IO[str] | Mapping) -> CosetWeightProfile:
    """Read and fully validate a profile; reject rather than repair."""
    if isinstance(source, Mapping):
        payload = source
    elif hasattr(source, "read"):
        payload = _parse_json(source.read())
    else:
        try:
            text = Path(source).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read profile: {exc}") from exc
        payload = _parse_json(text)
    if not isinstance(payload, Mapping):
        raise ConfigError("profile must be a JSON object")
    try:
        n = int(payload["n"])
        k = int(payload["k"])
        beta = [int(b) for b in payload["beta"]]
        raw_rows = payload["rows"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed profile: {exc}") from exc
    if not isinstance(raw_rows, Mapping):
        raise ConfigError("profile 'rows' must be an object keyed by leader weight")
    if n < 1 or len(beta) != n + 1:
        raise ConfigError("profile 'beta' must have n+1 entries")
    rows = [[0] * (n + 1) for _ in range(n + 1)]
    for key, row in raw_rows.items():
        try:
            l = int(key)
            values = [int(str(c)) for c in row]
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"malformed profile row {key!r}: {exc}") from exc
        if not 0 <= l <= n or len(values) != n + 1:
            raise ConfigError(f"profile row {key!r} has wrong shape")
        rows[l] = values
    try:
        return CosetWeightProfile(n=n, k=k, leader_counts=beta, weight_rows=rows)
    except InvariantViolationError:
        raise
    except ValueError as exc:
        raise InvariantViolationError(str(exc)) from exc


def _parse_json(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed profile JSON: {exc}") from exc


def leader_weight_counts(profile: CosetWeightProfile) -> tuple[int, ...]:
    """Convenience accessor for the leader-weight count vector."""
    return profile.leader_counts
