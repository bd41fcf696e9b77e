"""Exact rational scalars and small dense matrix algebra.

Every classical machine in this package evaluates over
:class:`fractions.Fraction`, so nothing in this module ever rounds.
Matrices follow the column-to-row transition convention: entry ``m[k, j]``
is the weight carried from state ``j`` to state ``k``, and state column
vectors evolve by left multiplication, ``v2 = m.apply(v)``.

Machines in scope stay small (a few dozen states), so matrices are plain
dense tuples; there is deliberately no sparse machinery here.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence

Rational = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)

_RATIONAL_FORM = re.compile(r"-?[0-9]+(/[1-9][0-9]*)?\Z")


class RationalParseError(ValueError):
    """Raised for text that is not a valid rational literal."""


def parse_rational(text: str) -> Fraction:
    """Parse ``-?digits[/digits]`` into a fraction in lowest terms.

    The denominator, when present, must be a positive integer without a
    leading zero, so ``"3/0"``, ``"1.5"`` and ``"1/-2"`` are all rejected.
    """
    if not isinstance(text, str) or not _RATIONAL_FORM.match(text):
        raise RationalParseError(f"not a rational literal: {text!r}")
    return Fraction(text)


def render_rational(value: Fraction) -> str:
    """Inverse of :func:`parse_rational`: lowest terms, no ``/1`` suffix."""
    return str(Fraction(value))


def _entry(value) -> Fraction:
    # Floats are refused on purpose: silently converting them would smuggle
    # binary rounding into a module whose whole point is exactness.
    if isinstance(value, float):
        raise TypeError(f"float entry {value!r} not allowed; pass Fraction, int or str")
    return Fraction(value)


def vec(entries: Iterable) -> tuple[Fraction, ...]:
    """Coerce an iterable into an exact state vector."""
    out = tuple(_entry(x) for x in entries)
    if not out:
        raise ValueError("vectors need at least one entry")
    return out


def basis_vector(size: int, index: int) -> tuple[Fraction, ...]:
    if not 0 <= index < size:
        raise ValueError(f"basis index {index} out of range for size {size}")
    return tuple(ONE if i == index else ZERO for i in range(size))


def vec_sum(v: Sequence[Fraction]) -> Fraction:
    return sum(v, ZERO)


def l1_norm(v: Sequence[Fraction]) -> Fraction:
    """Sum of absolute entries. Always at least ``abs(vec_sum(v))``."""
    return sum((abs(x) for x in v), ZERO)


class MatrixKind(Enum):
    AFFINE = "affine"
    STOCHASTIC = "stochastic"
    UNCONSTRAINED = "unconstrained"


class Mat:
    """Immutable dense matrix of exact rationals."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: Iterable[Iterable]):
        data = tuple(tuple(_entry(x) for x in row) for row in rows)
        if not data or not data[0]:
            raise ValueError("matrices need at least one row and one column")
        width = len(data[0])
        if any(len(row) != width for row in data):
            raise ValueError("ragged matrix rows")
        object.__setattr__(self, "rows", len(data))
        object.__setattr__(self, "cols", width)
        object.__setattr__(self, "data", data)

    def __setattr__(self, name, value):
        raise AttributeError("Mat is immutable")

    @classmethod
    def identity(cls, n: int) -> "Mat":
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def from_cols(cls, cols: Iterable[Iterable]) -> "Mat":
        """Build from column vectors, matching how transitions are usually read."""
        cols = [list(c) for c in cols]
        if not cols:
            raise ValueError("matrices need at least one column")
        return cls([[cols[j][k] for j in range(len(cols))] for k in range(len(cols[0]))])

    def __getitem__(self, key: tuple[int, int]) -> Fraction:
        k, j = key
        return self.data[k][j]

    def row(self, k: int) -> tuple[Fraction, ...]:
        return self.data[k]

    def col(self, j: int) -> tuple[Fraction, ...]:
        return tuple(row[j] for row in self.data)

    def column_sums(self) -> tuple[Fraction, ...]:
        return tuple(sum((row[j] for row in self.data), ZERO) for j in range(self.cols))

    def apply(self, v: Sequence[Fraction]) -> tuple[Fraction, ...]:
        """Left-multiply a state column vector: returns ``self @ v``."""
        if len(v) != self.cols:
            raise ValueError(f"vector length {len(v)} does not match {self.cols} columns")
        out = []
        for row in self.data:
            acc = ZERO
            for a, x in zip(row, v):
                if a:
                    acc += a * x
            out.append(acc)
        return tuple(out)

    def __matmul__(self, other: "Mat") -> "Mat":
        if not isinstance(other, Mat):
            return NotImplemented
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        cols = [self.apply(other.col(j)) for j in range(other.cols)]
        return Mat.from_cols(cols)

    def tolists(self) -> list[list[Fraction]]:
        return [list(row) for row in self.data]

    def __eq__(self, other) -> bool:
        return isinstance(other, Mat) and self.data == other.data

    def __hash__(self) -> int:
        return hash(self.data)

    def __repr__(self) -> str:
        body = "; ".join(" ".join(render_rational(x) for x in row) for row in self.data)
        return f"Mat[{body}]"


def kron(a: Mat, b: Mat) -> Mat:
    """Kronecker product; block (i, j) of the result is ``a[i, j] * b``."""
    rows = []
    for arow in a.data:
        for brow in b.data:
            rows.append([x * y for x in arow for y in brow])
    return Mat(rows)


def kron_vec(u: Sequence[Fraction], v: Sequence[Fraction]) -> tuple[Fraction, ...]:
    return tuple(x * y for x in u for y in v)


def direct_sum(a: Mat, b: Mat) -> Mat:
    """Block-diagonal sum ``diag(a, b)``."""
    rows = []
    for arow in a.data:
        rows.append(list(arow) + [ZERO] * b.cols)
    for brow in b.data:
        rows.append([ZERO] * a.cols + list(brow))
    return Mat(rows)


@dataclass(frozen=True)
class KindViolation:
    """One offending column of a matrix that fails its kind constraint."""

    col: int
    reason: str

    def __str__(self) -> str:
        return f"column {self.col}: {self.reason}"


def validate_kind(m: Mat, kind: MatrixKind) -> list[KindViolation]:
    """Check the column constraints for a matrix kind.

    Affine matrices need every column to sum to exactly 1; stochastic
    matrices additionally need every entry in [0, 1]. An empty list means
    the matrix is valid. Unconstrained matrices always pass.
    """
    if kind is MatrixKind.UNCONSTRAINED:
        return []
    out = []
    for j in range(m.cols):
        total = ZERO
        bad_entry = None
        for k in range(m.rows):
            x = m.data[k][j]
            total += x
            if bad_entry is None and kind is MatrixKind.STOCHASTIC and not (0 <= x <= 1):
                bad_entry = (k, x)
        if total != 1:
            out.append(KindViolation(j, f"sums to {render_rational(total)}, expected 1"))
        if bad_entry is not None:
            k, x = bad_entry
            out.append(KindViolation(j, f"entry at row {k} is {render_rational(x)}, outside [0, 1]"))
    return out
