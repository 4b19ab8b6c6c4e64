"""Small exact matrices over Fractions (or PadicScalar entries)."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def _is_zero(x) -> bool:
    if hasattr(x, "is_indistinguishable_from_zero"):
        return x.is_indistinguishable_from_zero()
    return x == 0


class RationalMatrix:
    """Immutable dense matrix.  Entries are Fractions unless PadicScalars are supplied."""

    __slots__ = ("rows",)

    def __init__(self, rows: Sequence[Sequence]):
        rows = tuple(
            tuple(x if hasattr(x, "approximant") else Fraction(x) for x in row) for row in rows
        )
        if not rows or any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("ragged or empty matrix")
        self.rows = rows

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def diag(cls, values: Sequence) -> "RationalMatrix":
        n = len(values)
        return cls([[values[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def shape(self):
        return len(self.rows), len(self.rows[0])

    def __getitem__(self, idx):
        i, j = idx
        return self.rows[i][j]

    @property
    def T(self) -> "RationalMatrix":
        return RationalMatrix(list(zip(*self.rows)))

    def __matmul__(self, other):
        if isinstance(other, RationalMatrix):
            cols = list(zip(*other.rows))
            if self.shape[1] != len(other.rows):
                raise ValueError("shape mismatch")
            return RationalMatrix(
                [[sum((a * b for a, b in zip(row, col)), Fraction(0)) for col in cols] for row in self.rows]
            )
        # vector
        return [sum((a * b for a, b in zip(row, other)), Fraction(0)) for row in self.rows]

    def __mul__(self, scalar):
        return RationalMatrix([[scalar * x for x in row] for row in self.rows])

    __rmul__ = __mul__

    def __add__(self, other):
        return RationalMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other):
        return RationalMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self):
        return self * -1

    def __eq__(self, other):
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def agrees_with(self, other: "RationalMatrix") -> bool:
        """Entrywise equality, to precision for truncated entries."""
        if self.shape != other.shape:
            return False
        return all(_is_zero(a - b) for r, s in zip(self.rows, other.rows) for a, b in zip(r, s))

    def det(self):
        n, m = self.shape
        if n != m:
            raise ValueError("determinant of a non-square matrix")
        a = [list(r) for r in self.rows]
        det = Fraction(1)
        for c in range(n):
            piv = next((r for r in range(c, n) if not _is_zero(a[r][c])), None)
            if piv is None:
                return Fraction(0)
            if piv != c:
                a[c], a[piv] = a[piv], a[c]
                det = -det
            det = det * a[c][c]
            for r in range(c + 1, n):
                f = a[r][c] / a[c][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
        return det

    def rank(self) -> int:
        a = [list(r) for r in self.rows]
        n, m = self.shape
        rank = 0
        for c in range(m):
            piv = next((r for r in range(rank, n) if not _is_zero(a[r][c])), None)
            if piv is None:
                continue
            a[rank], a[piv] = a[piv], a[rank]
            for r in range(n):
                if r != rank and not _is_zero(a[r][c]):
                    f = a[r][c] / a[rank][c]
                    a[r] = [x - f * y for x, y in zip(a[r], a[rank])]
            rank += 1
        return rank

    def inverse(self) -> "RationalMatrix":
        n, m = self.shape
        if n != m:
            raise ValueError("inverse of a non-square matrix")
        a = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(self.rows)]
        for c in range(n):
            piv = next((r for r in range(c, n) if not _is_zero(a[r][c])), None)
            if piv is None:
                raise ZeroDivisionError("singular matrix")
            a[c], a[piv] = a[piv], a[c]
            pv = a[c][c]
            a[c] = [x / pv for x in a[c]]
            for r in range(n):
                if r != c:
                    f = a[r][c]
                    a[r] = [x - f * y for x, y in zip(a[r], a[c])]
        return RationalMatrix([row[n:] for row in a])

    def charpoly(self) -> list:
        """Characteristic polynomial det(tI - M), coefficients low to high (Faddeev-LeVerrier)."""
        n, m = self.shape
        if n != m:
            raise ValueError("non-square matrix")
        coeffs = [Fraction(0)] * (n + 1)
        coeffs[n] = Fraction(1)
        ident = RationalMatrix.identity(n)
        mk = RationalMatrix([[0] * n for _ in range(n)])
        for k in range(1, n + 1):
            mk = self @ (mk + ident * coeffs[n - k + 1])
            trace = sum((mk[i, i] for i in range(n)), Fraction(0))
            coeffs[n - k] = -trace / k
        return coeffs

    def to_strings(self):
        return [[str(x) for x in row] for row in self.rows]

    def __repr__(self):
        return f"RationalMatrix({self.to_strings()})"
