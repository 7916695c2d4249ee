"""Construction of binary linear block codes and syndrome machinery.

A :class:`LinearCode` couples a full-rank generator matrix with a matching
parity-check matrix (orthogonality and rank are verified at construction).
Built-in families: Hamming, Reed-Muller, repetition, plus arbitrary codes from
explicit generator rows or a cyclic generator polynomial.  Code configuration
files (JSON) describe a code by family parameters, hex generator rows, or a
generator-polynomial bit string; shipped configs include two BCH codes whose
declared minimum distance is re-verified exhaustively at load time.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from importlib import resources
from itertools import combinations
from pathlib import Path
from typing import Iterator, Mapping, Sequence

import numpy as np

from .errors import ConfigError, EnumerationLimitError
from .gf2 import (
    BitWord,
    GF2Matrix,
    combine_rows,
    gf2_null_space,
    gf2_rank,
    is_orthogonal,
    iterate_span,
    mat_vec_bits,
)

#: Largest dimension accepted by exhaustive codeword scans (2^k codewords).
MAX_SCAN_DIMENSION = 26

#: Largest redundancy (n - k) for which a dense syndrome table is built.
MAX_SYNDROME_TABLE_BITS = 32


@dataclass(frozen=True)
class LinearCode:
    """An (n, k) binary linear block code with generator and parity check."""

    n: int
    k: int
    generator: GF2Matrix
    parity_check: GF2Matrix
    label: str

    def __post_init__(self) -> None:
        n, k = self.n, self.k
        if not 1 <= k < n:
            raise ValueError(f"need 1 <= k < n, got k={k}, n={n}")
        g, h = self.generator, self.parity_check
        if (g.nrows, g.ncols) != (k, n):
            raise ValueError(f"generator must be {k}x{n}, got {g.nrows}x{g.ncols}")
        if (h.nrows, h.ncols) != (n - k, n):
            raise ValueError(
                f"parity check must be {n - k}x{n}, got {h.nrows}x{h.ncols}"
            )
        if gf2_rank(g.rows, n) != k:
            raise ValueError("generator matrix is rank deficient")
        if gf2_rank(h.rows, n) != n - k:
            raise ValueError("parity-check matrix is rank deficient")
        if not is_orthogonal(g, h):
            raise ValueError("generator and parity check are not orthogonal")

    @property
    def redundancy(self) -> int:
        return self.n - self.k


@dataclass(frozen=True)
class SyndromeTable:
    """Per-syndrome minimum achievable Hamming distance to the code.

    ``leader_weight[s]`` is the weight of a minimum-weight word with syndrome
    ``s`` — the distance from any word in that coset to its nearest codeword.
    """

    code: LinearCode
    leader_weight: np.ndarray

    def __post_init__(self) -> None:
        lw = self.leader_weight
        if lw.shape != (1 << self.code.redundancy,):
            raise ValueError("leader-weight table has wrong length")
        if lw[0] != 0:
            raise ValueError("zero syndrome must map to distance 0")
        if int(lw.max(initial=0)) > self.code.n:
            raise ValueError("leader weight exceeds block length")


def encode(code: LinearCode, message: BitWord | int) -> BitWord:
    """Encode a k-bit message: message x generator over GF(2)."""
    value = _coerce_value(message, code.k, "message")
    return BitWord(code.n, combine_rows(code.generator.rows, value))


def syndrome(code: LinearCode, word: BitWord | int) -> int:
    """Parity-check syndrome of an n-bit word as an (n-k)-bit integer.

    Two words share a syndrome exactly when they lie in the same coset of the
    code; codewords map to 0.
    """
    value = _coerce_value(word, code.n, "word")
    return mat_vec_bits(code.parity_check, value)


def codewords(code: LinearCode, limit_dimension: int = MAX_SCAN_DIMENSION) -> Iterator[int]:
    """Iterate all 2^k codeword values (Gray order, one XOR per step)."""
    if code.k > limit_dimension:
        raise EnumerationLimitError(
            f"enumerating 2^{code.k} codewords exceeds the limit 2^{limit_dimension}"
        )
    for _, value in iterate_span(code.generator.rows):
        yield value


def minimum_distance(code: LinearCode, limit_dimension: int = MAX_SCAN_DIMENSION) -> int:
    """Exact minimum distance by scanning all nonzero codewords."""
    best = code.n
    for value in codewords(code, limit_dimension):
        if value:
            w = value.bit_count()
            if w < best:
                best = w
    return best


def build_syndrome_table(code: LinearCode) -> SyndromeTable:
    """Map every syndrome to its coset leader weight.

    Expands error patterns by increasing weight (all C(n, w) patterns of
    weight w) and records the first weight at which each syndrome appears;
    stops once all 2^(n-k) syndromes are assigned.
    """
    r = code.redundancy
    if r > MAX_SYNDROME_TABLE_BITS:
        raise EnumerationLimitError(
            f"syndrome table needs 2^{r} entries; limit is 2^{MAX_SYNDROME_TABLE_BITS}"
        )
    size = 1 << r
    unassigned = np.iinfo(np.uint16).max
    table = np.full(size, unassigned, dtype=np.uint16)
    # Syndromes of single-position errors; higher weights combine these.
    col_syndromes = [mat_vec_bits(code.parity_check, 1 << j) for j in range(code.n)]
    table[0] = 0
    remaining = size - 1
    for weight in range(1, code.n + 1):
        if remaining == 0:
            break
        for positions in combinations(range(code.n), weight):
            s = 0
            for j in positions:
                s ^= col_syndromes[j]
            if table[s] == unassigned:
                table[s] = weight
                remaining -= 1
                if remaining == 0:
                    break
    if remaining:
        raise RuntimeError("syndrome table incomplete; parity-check rank bug")
    return SyndromeTable(code, table)


# ---------------------------------------------------------------------------
# Code families


def build_hamming(m: int) -> LinearCode:
    """The (2^m - 1, 2^m - 1 - m) Hamming code.

    Parity-check columns are the nonzero m-bit values in ascending numeric
    order (column j encodes j + 1), so the syndrome of a single-bit error at
    position j is j + 1.  The generator is systematic on the non-power-of-two
    positions, consistent with that parity check.
    """
    if not 2 <= m <= 16:
        raise ConfigError(f"hamming parameter m must be in [2, 16], got {m}")
    n = (1 << m) - 1
    k = n - m
    h_rows = []
    for r in range(m):
        row = 0
        for j in range(n):
            row |= (((j + 1) >> r) & 1) << j
        h_rows.append(row)
    data_positions = [j for j in range(n) if (j + 1) & j]  # j+1 not a power of two
    parity_position = {r: (1 << r) - 1 for r in range(m)}
    g_rows = []
    for j in data_positions:
        row = 1 << j
        for r in range(m):
            if ((j + 1) >> r) & 1:
                row |= 1 << parity_position[r]
        g_rows.append(row)
    return LinearCode(
        n=n,
        k=k,
        generator=GF2Matrix.from_rows(g_rows, n),
        parity_check=GF2Matrix.from_rows(h_rows, n),
        label=f"Hamming({n},{k})",
    )


def build_reed_muller(r: int, m: int) -> LinearCode:
    """The Reed-Muller code RM(r, m): n = 2^m, k = sum_{i<=r} C(m, i).

    Generator rows are the evaluation vectors of all monomials of degree at
    most r in m boolean variables; column j evaluates at the point whose
    coordinates are the bits of j.
    """
    if not (0 <= r <= m):
        raise ConfigError(f"need 0 <= r <= m, got r={r}, m={m}")
    if m > 7:
        raise ConfigError(f"reed-muller parameter m must be <= 7, got {m}")
    if r == m:
        raise ConfigError("r = m gives the full space (k = n); not a proper code")
    n = 1 << m
    variables = []
    for v in range(m):
        col = 0
        for j in range(n):
            col |= ((j >> v) & 1) << j
        variables.append(col)
    g_rows = []
    all_ones = (1 << n) - 1
    for degree in range(r + 1):
        for subset in combinations(range(m), degree):
            row = all_ones
            for v in subset:
                row &= variables[v]
            g_rows.append(row)
    k = len(g_rows)
    generator = GF2Matrix.from_rows(g_rows, n)
    return LinearCode(
        n=n,
        k=k,
        generator=generator,
        parity_check=gf2_null_space(generator),
        label=f"RM({n},{k})",
    )


def build_repetition(n: int) -> LinearCode:
    """The (n, 1) repetition code."""
    if n < 2:
        raise ConfigError(f"repetition length must be >= 2, got {n}")
    generator = GF2Matrix.from_rows([(1 << n) - 1], n)
    return LinearCode(
        n=n,
        k=1,
        generator=generator,
        parity_check=gf2_null_space(generator),
        label=f"Repetition({n},1)",
    )


def from_generator(generator: GF2Matrix | Sequence[int], label: str, n: int | None = None) -> LinearCode:
    """Build a code from explicit generator rows.

    The parity check is a basis of the orthogonal complement of the row
    space, so the returned pair describes exactly the same code (no column
    permutation is introduced).
    """
    if not isinstance(generator, GF2Matrix):
        if n is None:
            raise ConfigError("n is required when passing raw generator rows")
        generator = GF2Matrix.from_rows(list(generator), n)
    k = generator.nrows
    if gf2_rank(generator.rows, generator.ncols) != k:
        raise ConfigError("generator matrix is rank deficient")
    if k >= generator.ncols:
        raise ConfigError("generator must have fewer rows than columns")
    return LinearCode(
        n=generator.ncols,
        k=k,
        generator=generator,
        parity_check=gf2_null_space(generator),
        label=label,
    )


def cyclic_code_from_polynomial(n: int, polynomial: int, label: str) -> LinearCode:
    """Cyclic code of length n generated by the given polynomial.

    ``polynomial`` holds coefficients as bits (bit i = coefficient of x^i)
    and must divide x^n + 1 over GF(2); the generator matrix rows are the
    shifts g, x.g, ..., x^(k-1).g with k = n - deg(g).
    """
    if polynomial <= 1:
        raise ConfigError("generator polynomial must have degree >= 1")
    degree = polynomial.bit_length() - 1
    if not (polynomial & 1):
        raise ConfigError("generator polynomial must have a nonzero constant term")
    if degree >= n:
        raise ConfigError(f"polynomial degree {degree} must be < n = {n}")
    if _poly_mod((1 << n) | 1, polynomial):
        raise ConfigError(
            f"polynomial {polynomial:#x} does not divide x^{n} + 1; not a cyclic code"
        )
    k = n - degree
    rows = [polynomial << i for i in range(k)]
    return from_generator(GF2Matrix.from_rows(rows, n), label)


def _poly_mod(a: int, b: int) -> int:
    """Remainder of GF(2) polynomial division a mod b."""
    db = b.bit_length()
    while a.bit_length() >= db:
        a ^= b << (a.bit_length() - db)
    return a


# ---------------------------------------------------------------------------
# Configuration files and code specs


def load_code_config(source: str | Path | Mapping) -> LinearCode:
    """Build a code from a JSON config file or an equivalent mapping.

    Schema: ``{"label": str, "family": "hamming"|"reed_muller"|"generator",
    ...params}``.  The generator family takes either ``"rows"`` (hex strings,
    one per generator row, bit j = column j) with ``"n"``, or
    ``"generator_polynomial"`` (bit string, highest degree first) with
    ``"n"``.  An optional ``"minimum_distance"`` is re-verified by an
    exhaustive codeword scan and mismatches are rejected.
    """
    if isinstance(source, (str, Path)):
        try:
            with open(source, "r", encoding="utf-8") as fh:
                config = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read code config: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"malformed JSON in code config: {exc}") from exc
    else:
        config = dict(source)
    if not isinstance(config, dict):
        raise ConfigError("code config must be a JSON object")

    family = config.get("family")
    label = config.get("label")
    try:
        if family == "hamming":
            code = build_hamming(int(config["m"]))
        elif family == "reed_muller":
            code = build_reed_muller(int(config["r"]), int(config["m"]))
        elif family == "generator":
            n = int(config["n"])
            if "generator_polynomial" in config:
                bits = str(config["generator_polynomial"])
                if not bits or set(bits) - {"0", "1"}:
                    raise ConfigError("generator_polynomial must be a nonempty bit string")
                code = cyclic_code_from_polynomial(n, int(bits, 2), label or "cyclic")
            elif "rows" in config:
                rows = [int(str(h), 16) for h in config["rows"]]
                code = from_generator(rows, label or "generator", n=n)
            else:
                raise ConfigError("generator family needs 'rows' or 'generator_polynomial'")
        else:
            raise ConfigError(f"unknown code family: {family!r}")
    except KeyError as exc:
        raise ConfigError(f"code config missing field {exc}") from exc
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"invalid code config: {exc}") from exc

    if label:
        code = LinearCode(code.n, code.k, code.generator, code.parity_check, str(label))
    declared = config.get("minimum_distance")
    if declared is not None:
        actual = minimum_distance(code)
        if actual != int(declared):
            raise ConfigError(
                f"declared minimum distance {declared} but exhaustive scan gives {actual}"
            )
    return code


def _packaged_config(name: str) -> LinearCode:
    ref = resources.files("codescout.data").joinpath(name)
    with resources.as_file(ref) as path:
        return load_code_config(path)


def parse_code_spec(spec: str) -> LinearCode:
    """Parse an inline code spec of the form ``family:params``.

    Supported: ``hamming:M``, ``rm:R,M`` (alias ``reed_muller`` /
    ``reed-muller``), ``repetition:N`` (alias ``rep``), and ``bch:15,7`` /
    ``bch:31,16`` (shipped generator-polynomial configs).
    """
    family, sep, params = spec.partition(":")
    if not sep:
        raise ConfigError(f"code spec must look like family:params, got {spec!r}")
    family = family.strip().lower().replace("-", "_")
    try:
        numbers = [int(x) for x in params.split(",")]
    except ValueError as exc:
        raise ConfigError(f"non-integer parameters in code spec {spec!r}") from exc
    if family == "hamming" and len(numbers) == 1:
        return build_hamming(numbers[0])
    if family in ("rm", "reed_muller") and len(numbers) == 2:
        return build_reed_muller(numbers[0], numbers[1])
    if family in ("rep", "repetition") and len(numbers) == 1:
        return build_repetition(numbers[0])
    if family == "bch" and len(numbers) == 2:
        name = f"bch_{numbers[0]}_{numbers[1]}.json"
        try:
            return _packaged_config(name)
        except FileNotFoundError:
            raise ConfigError(
                f"no shipped BCH({numbers[0]},{numbers[1]}) config; "
                "use --code-file with a generator polynomial"
            ) from None
    raise ConfigError(f"unrecognized code spec {spec!r}")


def _coerce_value(word: BitWord | int, length: int, what: str) -> int:
    if isinstance(word, BitWord):
        if word.n != length:
            raise ValueError(f"{what} length mismatch: expected {length}, got {word.n}")
        return word.value
    value = int(word)
    if value < 0 or value >> length:
        raise ValueError(f"{what} value does not fit in {length} bits")
    return value


def weight_distribution(code: LinearCode, limit_dimension: int = MAX_SCAN_DIMENSION) -> list[int]:
    """Codeword weight counts A_0..A_n by exhaustive enumeration."""
    counts = [0] * (code.n + 1)
    for value in codewords(code, limit_dimension):
        counts[value.bit_count()] += 1
    return counts
