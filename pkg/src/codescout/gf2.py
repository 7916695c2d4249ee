"""Bit-packed linear algebra over GF(2).

Vectors are plain Python integers whose bit ``j`` holds coordinate ``j``
(least-significant bit = coordinate 0), so arbitrary lengths cost nothing and
XOR/AND give vector addition and coordinate masking.  :class:`BitWord` wraps a
value with its declared length for the public API; :class:`GF2Matrix` stores a
matrix as one integer bitmask per row.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence


def popcount(x: int) -> int:
    """Number of one-bits of a nonnegative integer."""
    return x.bit_count()


def parity(x: int) -> int:
    """Parity (popcount mod 2) of a nonnegative integer."""
    return x.bit_count() & 1


def pack_bits(bits: Iterable[int]) -> int:
    """Pack an iterable of 0/1 coordinates into an integer (bit j = coord j)."""
    value = 0
    for j, b in enumerate(bits):
        if b not in (0, 1):
            raise ValueError(f"bit values must be 0 or 1, got {b!r}")
        value |= b << j
    return value


def unpack_bits(value: int, length: int) -> list[int]:
    """Unpack an integer into a list of `length` 0/1 coordinates."""
    if value < 0 or value >> length:
        raise ValueError(f"value {value} does not fit in {length} bits")
    return [(value >> j) & 1 for j in range(length)]


@dataclass(frozen=True)
class BitWord:
    """A binary vector of fixed length ``n``, packed into an integer.

    Coordinate ``j`` is bit ``j`` of ``value``.  Operations between words
    check length agreement.
    """

    n: int
    value: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"word length must be >= 1, got {self.n}")
        if self.value < 0 or self.value >> self.n:
            raise ValueError(f"value {self.value} does not fit in {self.n} bits")

    @classmethod
    def from_bits(cls, bits: Sequence[int]) -> "BitWord":
        return cls(len(bits), pack_bits(bits))

    def to_bits(self) -> list[int]:
        return unpack_bits(self.value, self.n)

    @property
    def weight(self) -> int:
        """Hamming weight (number of one-coordinates)."""
        return self.value.bit_count()

    def bit(self, j: int) -> int:
        if not 0 <= j < self.n:
            raise IndexError(f"coordinate {j} out of range for length {self.n}")
        return (self.value >> j) & 1

    def __xor__(self, other: "BitWord") -> "BitWord":
        if not isinstance(other, BitWord):
            return NotImplemented
        if other.n != self.n:
            raise ValueError(f"length mismatch: {self.n} vs {other.n}")
        return BitWord(self.n, self.value ^ other.value)

    def __int__(self) -> int:
        return self.value


@dataclass(frozen=True)
class GF2Matrix:
    """A binary matrix stored as one integer bitmask per row.

    Bit ``j`` of ``rows[i]`` is the entry in row ``i``, column ``j``.
    """

    nrows: int
    ncols: int
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.nrows < 1 or self.ncols < 1:
            raise ValueError("matrix dimensions must be positive")
        if len(self.rows) != self.nrows:
            raise ValueError(f"expected {self.nrows} rows, got {len(self.rows)}")
        mask = (1 << self.ncols) - 1
        for i, r in enumerate(self.rows):
            if r < 0 or r & ~mask:
                raise ValueError(f"row {i} does not fit in {self.ncols} columns")

    @classmethod
    def from_rows(cls, rows: Sequence[int], ncols: int) -> "GF2Matrix":
        return cls(len(rows), ncols, tuple(rows))

    @classmethod
    def from_bit_lists(cls, bit_lists: Sequence[Sequence[int]]) -> "GF2Matrix":
        ncols = len(bit_lists[0])
        if any(len(r) != ncols for r in bit_lists):
            raise ValueError("ragged rows")
        return cls(len(bit_lists), ncols, tuple(pack_bits(r) for r in bit_lists))

    def to_bit_lists(self) -> list[list[int]]:
        return [unpack_bits(r, self.ncols) for r in self.rows]

    def transpose(self) -> "GF2Matrix":
        cols = []
        for j in range(self.ncols):
            col = 0
            for i, r in enumerate(self.rows):
                col |= ((r >> j) & 1) << i
            cols.append(col)
        return GF2Matrix(self.ncols, self.nrows, tuple(cols))

    @property
    def rank(self) -> int:
        return gf2_rank(self.rows)


def gf2_rref(rows: Sequence[int], ncols: int) -> tuple[list[int], list[int]]:
    """Reduced row echelon form by elimination over GF(2).

    Returns ``(reduced_rows, pivot_columns)`` where ``reduced_rows`` contains
    only the nonzero rows, one per pivot, with pivot columns ascending and
    each pivot column cleared in all other rows.
    """
    work = list(rows)
    reduced: list[int] = []
    pivots: list[int] = []
    for col in range(ncols):
        bit = 1 << col
        pivot_row = None
        for i, r in enumerate(work):
            if r & bit:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        pivot = work.pop(pivot_row)
        work = [r ^ pivot if r & bit else r for r in work]
        reduced = [r ^ pivot if r & bit else r for r in reduced]
        reduced.append(pivot)
        pivots.append(col)
        if not work:
            break
    return reduced, pivots


def gf2_rank(rows: Sequence[int], ncols: int | None = None) -> int:
    """Rank of a matrix given as row bitmasks."""
    if ncols is None:
        ncols = max((r.bit_length() for r in rows), default=1) or 1
    return len(gf2_rref(rows, ncols)[0])


def gf2_null_space(matrix: GF2Matrix) -> GF2Matrix:
    """A basis of ``{v : parity(row & v) = 0 for every row}`` as matrix rows.

    The result has ``ncols - rank`` rows of length ``ncols``.  Raises
    ``ValueError`` when the null space is trivial (full column rank).
    """
    reduced, pivots = gf2_rref(matrix.rows, matrix.ncols)
    pivot_set = set(pivots)
    free_cols = [j for j in range(matrix.ncols) if j not in pivot_set]
    if not free_cols:
        raise ValueError("null space is trivial (matrix has full column rank)")
    basis = []
    for f in free_cols:
        v = 1 << f
        for row, pc in zip(reduced, pivots):
            if (row >> f) & 1:
                v |= 1 << pc
        basis.append(v)
    return GF2Matrix(len(basis), matrix.ncols, tuple(basis))


def mat_vec_bits(matrix: GF2Matrix, vec: int) -> int:
    """Matrix-vector product over GF(2); result bit i = <row_i, vec>."""
    if vec < 0 or vec >> matrix.ncols:
        raise ValueError(f"vector does not fit in {matrix.ncols} bits")
    out = 0
    for i, row in enumerate(matrix.rows):
        out |= ((row & vec).bit_count() & 1) << i
    return out


def combine_rows(rows: Sequence[int], coefficients: int) -> int:
    """XOR of the rows selected by the bits of ``coefficients``."""
    out = 0
    c = coefficients
    while c:
        j = (c & -c).bit_length() - 1
        out ^= rows[j]
        c &= c - 1
    return out


def iterate_span(rows: Sequence[int]) -> Iterator[tuple[int, int]]:
    """Yield ``(coefficients, combination)`` for all 2^len(rows) combinations.

    Visits every coefficient vector exactly once (Gray-code order, one XOR per
    step), starting from ``(0, 0)``.
    """
    value = 0
    gray_prev = 0
    yield 0, 0
    for i in range(1, 1 << len(rows)):
        gray = i ^ (i >> 1)
        changed = gray ^ gray_prev
        value ^= rows[changed.bit_length() - 1]
        gray_prev = gray
        yield gray, value


def is_orthogonal(a: GF2Matrix, b: GF2Matrix) -> bool:
    """True when every row of ``a`` is orthogonal to every row of ``b``."""
    if a.ncols != b.ncols:
        raise ValueError(f"column count mismatch: {a.ncols} vs {b.ncols}")
    return all((ra & rb).bit_count() & 1 == 0 for ra in a.rows for rb in b.rows)
