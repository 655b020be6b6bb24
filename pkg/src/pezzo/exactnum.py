"""Exact arithmetic substrate: rationals, the field Q(w) with w^2+w+1=0,
and exact dense linear algebra over the rationals.

All values are immutable; every operation is a pure function.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

RationalLike = Union[int, Fraction, str]


class SingularMatrix(ValueError):
    pass


class NotSymmetric(ValueError):
    pass


def rational(x: RationalLike) -> Fraction:
    """Coerce ints, Fractions and 'p/q' strings to an exact rational."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    return Fraction(str(x))


def format_rational(x: Fraction) -> str:
    """Serialize as 'p/q', or plain 'p' for integers."""
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class QuadElem:
    """Element a + b*w of Q(w), where w is a primitive cube root of unity
    (w^2 + w + 1 = 0)."""

    a: Fraction
    b: Fraction

    @staticmethod
    def of(a: RationalLike, b: RationalLike = 0) -> "QuadElem":
        return QuadElem(rational(a), rational(b))

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def __add__(self, other: "QuadElem") -> "QuadElem":
        other = _coerce(other)
        return QuadElem(self.a + other.a, self.b + other.b)

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self) -> "QuadElem":
        return QuadElem(-self.a, -self.b)

    def __sub__(self, other: "QuadElem") -> "QuadElem":
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __mul__(self, other: "QuadElem") -> "QuadElem":
        other = _coerce(other)
        # (a1 + b1 w)(a2 + b2 w) with w^2 = -1 - w
        a = self.a * other.a - self.b * other.b
        b = self.a * other.b + self.b * other.a - self.b * other.b
        return QuadElem(a, b)

    def __rmul__(self, other):
        return self.__mul__(other)

    def conjugate(self) -> "QuadElem":
        # a + b w  ->  a + b w^2 = (a - b) - b w
        return QuadElem(self.a - self.b, -self.b)

    def norm(self) -> Fraction:
        # (a + bw)(a + bw^2) = a^2 - ab + b^2
        return self.a * self.a - self.a * self.b + self.b * self.b

    def inverse(self) -> "QuadElem":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in Q(w)")
        c = self.conjugate()
        return QuadElem(c.a / n, c.b / n)

    def __truediv__(self, other: "QuadElem") -> "QuadElem":
        return self * _coerce(other).inverse()

    def __bool__(self) -> bool:
        return self.a != 0 or self.b != 0

    def __pow__(self, n: int) -> "QuadElem":
        if n < 0:
            return self.inverse() ** (-n)
        out = QONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __str__(self) -> str:
        if self.b == 0:
            return format_rational(self.a)
        if self.a == 0:
            return f"{format_rational(self.b)}*w"
        return f"{format_rational(self.a)}+{format_rational(self.b)}*w"


def _coerce(x) -> QuadElem:
    if isinstance(x, QuadElem):
        return x
    return QuadElem(rational(x), Fraction(0))


QZERO = QuadElem(Fraction(0), Fraction(0))
QONE = QuadElem(Fraction(1), Fraction(0))
OMEGA = QuadElem(Fraction(0), Fraction(1))


class RatMatrix:
    """Immutable dense matrix of exact rationals."""

    __slots__ = ("rows", "cols", "_entries")

    def __init__(self, entries: Sequence[Sequence[RationalLike]]):
        rows = len(entries)
        cols = len(entries[0]) if rows else 0
        if any(len(row) != cols for row in entries):
            raise ValueError("ragged matrix")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(
            self,
            "_entries",
            tuple(tuple(rational(x) for x in row) for row in entries),
        )

    @staticmethod
    def identity(n: int) -> "RatMatrix":
        return RatMatrix([[Fraction(int(i == j)) for j in range(n)] for i in range(n)])

    @staticmethod
    def zero(rows: int, cols: int) -> "RatMatrix":
        return RatMatrix([[Fraction(0)] * cols for _ in range(rows)])

    def __getitem__(self, ij) -> Fraction:
        i, j = ij
        return self._entries[i][j]

    def row(self, i: int) -> tuple:
        return self._entries[i]

    def tolist(self):
        return [list(row) for row in self._entries]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_symmetric(self) -> bool:
        if not self.is_square:
            return False
        e = self._entries
        return all(e[i][j] == e[j][i] for i in range(self.rows) for j in range(i))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RatMatrix)
            and self._entries == other._entries
        )

    def __hash__(self):
        return hash(self._entries)

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        a, b = self._entries, other._entries
        return RatMatrix(
            [
                [sum(a[i][k] * b[k][j] for k in range(self.cols)) for j in range(other.cols)]
                for i in range(self.rows)
            ]
        )

    def __repr__(self) -> str:
        body = "; ".join(
            " ".join(format_rational(x) for x in row) for row in self._entries
        )
        return f"RatMatrix[{body}]"

    def submatrix(self, keep: Iterable[int]) -> "RatMatrix":
        idx = list(keep)
        e = self._entries
        return RatMatrix([[e[i][j] for j in idx] for i in idx])

    def determinant(self) -> Fraction:
        if not self.is_square:
            raise ValueError("determinant of non-square matrix")
        n = self.rows
        m = [list(row) for row in self._entries]
        det = Fraction(1)
        for col in range(n):
            pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
            if pivot is None:
                return Fraction(0)
            if pivot != col:
                m[col], m[pivot] = m[pivot], m[col]
                det = -det
            det *= m[col][col]
            inv = 1 / m[col][col]
            for r in range(col + 1, n):
                factor = m[r][col] * inv
                if factor:
                    for c in range(col, n):
                        m[r][c] -= factor * m[col][c]
        return det

    def leading_minors(self) -> list:
        """Determinants of the k x k leading principal submatrices, k=1..n."""
        return [self.submatrix(range(k)).determinant() for k in range(1, self.rows + 1)]


def invert_matrix(m: RatMatrix) -> RatMatrix:
    """Exact inverse via Gauss-Jordan elimination with exact pivoting."""
    if not m.is_square:
        raise SingularMatrix("matrix is not square")
    n = m.rows
    a = [list(row) for row in (m.row(i) for i in range(n))]
    b = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            raise SingularMatrix("matrix is singular")
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            b[col], b[pivot] = b[pivot], b[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        b[col] = [x * inv for x in b[col]]
        for r in range(n):
            if r != col and a[r][col]:
                factor = a[r][col]
                a[r] = [x - factor * y for x, y in zip(a[r], a[col])]
                b[r] = [x - factor * y for x, y in zip(b[r], b[col])]
    return RatMatrix(b)


def is_negative_definite(m: RatMatrix) -> bool:
    """Sylvester test: (-1)^k times the k-th leading principal minor is > 0."""
    if not m.is_square:
        raise NotSymmetric("matrix is not square")
    if not m.is_symmetric():
        raise NotSymmetric("matrix is not symmetric")
    sign = 1
    for minor in m.leading_minors():
        sign = -sign
        if sign * minor <= 0:
            return False
    return True
