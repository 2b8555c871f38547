"""Exact rational arithmetic and dense rational matrices.

All values are immutable and all operations are pure. No floating point
appears anywhere in this package: the verdicts downstream are rank
conditions, and a single rounding error would flip them.

Rationals are ``fractions.Fraction`` (always in lowest terms, positive
denominator, structural equality), serialized as ``"a/b"`` or ``"a"``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence, Union

RatLike = Union[Fraction, int, str]

_RAT_RE = re.compile(r"^[+-]?\d+(/\d+)?$")


def rat(value: RatLike) -> Fraction:
    """Coerce an int, a string like ``"a/b"`` or ``"a"``, or a Fraction.

    Floats are rejected: exactness is a hard requirement.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        s = value.strip()
        if not _RAT_RE.match(s):
            raise ValueError(f"not a rational literal: {value!r}")
        return Fraction(s)
    raise TypeError(f"cannot interpret {type(value).__name__} as an exact rational")


def rat_to_str(value: Fraction) -> str:
    """Serialize a rational as ``"a/b"`` in lowest terms, ``"a"`` when b = 1."""
    return str(value)


def rat_vector(values: Iterable[RatLike]) -> tuple[Fraction, ...]:
    return tuple(rat(v) for v in values)


def integerize(vec: Sequence[Fraction]) -> tuple[int, ...]:
    """Scale a rational vector to a primitive integer vector (same line)."""
    if not vec:
        return ()
    scale = 1
    for v in vec:
        scale = scale * v.denominator // gcd(scale, v.denominator)
    ints = [int(v * scale) for v in vec]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g > 1:
        ints = [x // g for x in ints]
    return tuple(ints)


class QMatrix:
    """Immutable dense matrix over Q with exact rank and kernel.

    Elimination uses a fixed pivot rule (first remaining row with a nonzero
    entry in the leftmost unresolved column) so that kernel bases, and every
    report built from them, are reproducible.
    """

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Sequence[Sequence[RatLike]]):
        grid = tuple(tuple(rat(v) for v in row) for row in entries)
        if not grid or not grid[0]:
            raise ValueError("matrix needs at least one row and one column")
        width = len(grid[0])
        if any(len(row) != width for row in grid):
            raise ValueError("ragged rows in matrix input")
        object.__setattr__(self, "rows", len(grid))
        object.__setattr__(self, "cols", width)
        object.__setattr__(self, "entries", grid)

    def __setattr__(self, name, value):
        raise AttributeError("QMatrix is immutable")

    # -- constructors ---------------------------------------------------

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[RatLike]]) -> "QMatrix":
        cols = [rat_vector(c) for c in columns]
        if not cols:
            raise ValueError("need at least one column")
        return cls([[c[i] for c in cols] for i in range(len(cols[0]))])

    @classmethod
    def identity(cls, size: int) -> "QMatrix":
        return cls([[1 if i == j else 0 for j in range(size)] for i in range(size)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "QMatrix":
        return cls([[0] * cols for _ in range(rows)])

    # -- basic accessors ------------------------------------------------

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(row[j] for row in self.entries)

    def columns(self) -> list[tuple[Fraction, ...]]:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> "QMatrix":
        return QMatrix([[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, QMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self) -> int:
        return hash(self.entries)

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(v) for v in row) for row in self.entries)
        return f"QMatrix({self.rows}x{self.cols}: {body})"

    # -- arithmetic -----------------------------------------------------

    def matvec(self, vec: Sequence[RatLike]) -> tuple[Fraction, ...]:
        v = rat_vector(vec)
        if len(v) != self.cols:
            raise ValueError(f"vector length {len(v)} does not match {self.cols} columns")
        return tuple(sum((row[j] * v[j] for j in range(self.cols)), Fraction(0)) for row in self.entries)

    def matmul(self, other: "QMatrix") -> "QMatrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        return QMatrix(
            [
                [
                    sum((self.entries[i][k] * other.entries[k][j] for k in range(self.cols)), Fraction(0))
                    for j in range(other.cols)
                ]
                for i in range(self.rows)
            ]
        )

    def scale_columns(self, scales: Sequence[RatLike]) -> "QMatrix":
        s = rat_vector(scales)
        if len(s) != self.cols:
            raise ValueError("one scale per column required")
        return QMatrix([[row[j] * s[j] for j in range(self.cols)] for row in self.entries])

    # -- elimination ----------------------------------------------------

    def rref(self) -> tuple["QMatrix", tuple[int, ...]]:
        """Reduced row echelon form and the tuple of pivot columns."""
        m = [list(row) for row in self.entries]
        pivots: list[int] = []
        r = 0
        for c in range(self.cols):
            if r == self.rows:
                break
            pivot = next((i for i in range(r, self.rows) if m[i][c] != 0), None)
            if pivot is None:
                continue
            m[r], m[pivot] = m[pivot], m[r]
            inv = 1 / m[r][c]
            m[r] = [x * inv for x in m[r]]
            for i in range(self.rows):
                if i != r and m[i][c]:
                    f = m[i][c]
                    m[i] = [a - f * b for a, b in zip(m[i], m[r])]
            pivots.append(c)
            r += 1
        return QMatrix(m), tuple(pivots)

    def rank(self) -> int:
        """Exact rank over Q."""
        if all(v.denominator == 1 for row in self.entries for v in row):
            return _int_rank([[v.numerator for v in row] for row in self.entries])
        return len(self.rref()[1])

    def kernel_basis(self) -> list[tuple[Fraction, ...]]:
        """Deterministic basis of the right null space.

        One basis vector per free column, in ascending column order; the
        free coordinate is set to 1 and pivot coordinates are read off the
        reduced echelon form, so ``self.matvec(v)`` is exactly zero.
        """
        reduced, pivots = self.rref()
        pivot_set = set(pivots)
        basis = []
        for f in range(self.cols):
            if f in pivot_set:
                continue
            v = [Fraction(0)] * self.cols
            v[f] = Fraction(1)
            for i, c in enumerate(pivots):
                v[c] = -reduced.entries[i][f]
            basis.append(tuple(v))
        return basis


def _int_rank(m: list[list[int]]) -> int:
    """Fraction-free rank of an integer matrix (same pivot rule as rref)."""
    rows = len(m)
    cols = len(m[0])
    r = 0
    for c in range(cols):
        if r == rows:
            break
        pivot = next((i for i in range(r, rows) if m[i][c]), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        p = m[r][c]
        for i in range(r + 1, rows):
            if m[i][c]:
                f = m[i][c]
                row = [a * p - b * f for a, b in zip(m[i], m[r])]
                g = 0
                for x in row:
                    g = gcd(g, x)
                if g > 1:
                    row = [x // g for x in row]
                m[i] = row
        r += 1
    return r
