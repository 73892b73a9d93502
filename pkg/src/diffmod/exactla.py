"""Exact dense linear algebra over the rationals or a prime field.

Matrices are dense and small (at most a few hundred columns), so plain
Gaussian elimination is used throughout.  Rational matrices are reduced
with fraction-free (Bareiss) elimination on integers after clearing
denominators; prime-field matrices are eliminated with vectorized
int64 arithmetic, which is exact because the default modulus keeps all
intermediate products well below 2^63.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

import numpy as np

from .errors import DimensionMismatch, NotAComplexError

DEFAULT_PRIME = 32003


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class Rationals:
    """The field Q; elements are ``fractions.Fraction``."""

    name = "QQ"

    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)

    def of(self, x) -> Fraction:
        if isinstance(x, str):
            return Fraction(x)
        return Fraction(x)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(a)

    def show(self, a) -> str:
        return str(Fraction(a))

    def __str__(self):
        return "QQ"


@dataclass(frozen=True)
class PrimeField:
    """The field F_p; elements are ints in [0, p)."""

    p: int = DEFAULT_PRIME

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    def of(self, x) -> int:
        if isinstance(x, str):
            x = Fraction(x)
        if isinstance(x, Fraction):
            den = x.denominator % self.p
            if den == 0:
                raise ZeroDivisionError(f"denominator of {x} vanishes mod {self.p}")
            return x.numerator * pow(den, self.p - 2, self.p) % self.p
        return int(x) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, self.p - 2, self.p)

    def show(self, a) -> str:
        return str(a % self.p)

    def __str__(self):
        return f"Fp:{self.p}"


def parse_field(text: str):
    """Parse a field name: "QQ" or "Fp:<prime>" (bare "Fp" uses the default)."""
    text = text.strip()
    if text in ("QQ", "Q"):
        return Rationals()
    if text == "Fp":
        return PrimeField()
    if text.startswith("Fp:"):
        return PrimeField(int(text.split(":", 1)[1]))
    raise ValueError(f"unknown field {text!r}; expected QQ or Fp:<p>")


class Matrix:
    """A dense matrix over a fixed field, stored row-major."""

    __slots__ = ("field", "rows", "cols", "_e")

    def __init__(self, field, rows: int, cols: int, entries=None):
        self.field = field
        self.rows = rows
        self.cols = cols
        if entries is None:
            self._e = [field.zero] * (rows * cols)
        else:
            self._e = list(entries)
            if len(self._e) != rows * cols:
                raise ValueError("entry count does not match shape")

    @classmethod
    def zeros(cls, field, rows, cols):
        return cls(field, rows, cols)

    @classmethod
    def identity(cls, field, n):
        m = cls(field, n, n)
        for i in range(n):
            m._e[i * n + i] = field.one
        return m

    @classmethod
    def from_rows(cls, field, rows_data):
        rows = len(rows_data)
        cols = len(rows_data[0]) if rows else 0
        entries = [field.of(x) for row in rows_data for x in row]
        return cls(field, rows, cols, entries)

    def get(self, i, j):
        return self._e[i * self.cols + j]

    def set(self, i, j, value):
        self._e[i * self.cols + j] = value

    def row(self, i):
        return self._e[i * self.cols:(i + 1) * self.cols]

    def to_rows(self):
        return [self.row(i) for i in range(self.rows)]

    def copy(self):
        return Matrix(self.field, self.rows, self.cols, self._e)

    def transpose(self):
        out = Matrix(self.field, self.cols, self.rows)
        for i in range(self.rows):
            for j in range(self.cols):
                out._e[j * self.rows + i] = self._e[i * self.cols + j]
        return out

    def is_zero(self) -> bool:
        z = self.field.zero
        return all(x == z for x in self._e)

    def mul(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise DimensionMismatch(f"{self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        if self.field != other.field:
            raise DimensionMismatch("matrices over different fields")
        if isinstance(self.field, PrimeField) and self.rows * self.cols > 256:
            a = np.array(self._e, dtype=np.int64).reshape(self.rows, self.cols)
            b = np.array(other._e, dtype=np.int64).reshape(other.rows, other.cols)
            c = (a @ b) % self.field.p
            return Matrix(self.field, self.rows, other.cols, [int(x) for x in c.ravel()])
        field = self.field
        zero = field.zero
        out = Matrix(field, self.rows, other.cols)
        for k in range(self.cols):
            arow = [self._e[i * self.cols + k] for i in range(self.rows)]
            if all(x == zero for x in arow):
                continue
            brow = other.row(k)
            for j, b in enumerate(brow):
                if b == zero:
                    continue
                for i, a in enumerate(arow):
                    if a == zero:
                        continue
                    idx = i * other.cols + j
                    out._e[idx] = field.add(out._e[idx], field.mul(a, b))
        return out

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self.rows == other.rows
            and self.cols == other.cols
            and self._e == other._e
        )

    def __repr__(self):
        return f"Matrix({self.field}, {self.rows}x{self.cols})"

    # -- elimination ----------------------------------------------------

    def rank(self) -> int:
        if self.rows == 0 or self.cols == 0:
            return 0
        if isinstance(self.field, PrimeField):
            a = np.array(self._e, dtype=np.int64).reshape(self.rows, self.cols)
            return _rank_modp(a, self.field.p)
        return _rank_bareiss(_integer_rows(self.to_rows()), self.rows, self.cols)

    def rref(self):
        """Reduced row echelon form; returns (matrix, pivot column list)."""
        if isinstance(self.field, PrimeField):
            a = np.array(self._e, dtype=np.int64).reshape(self.rows, self.cols)
            red, pivots = _rref_modp(a, self.field.p)
            return Matrix(self.field, self.rows, self.cols, [int(x) for x in red.ravel()]), pivots
        rows = [[Fraction(x) for x in self.row(i)] for i in range(self.rows)]
        pivots = _rref_fraction(rows, self.cols)
        return Matrix(self.field, self.rows, self.cols, [x for row in rows for x in row]), pivots

    def kernel_basis(self) -> "Matrix":
        """A matrix whose columns form a basis of the kernel."""
        if self.cols == 0:
            return Matrix(self.field, 0, 0)
        if self.rows == 0:
            return Matrix.identity(self.field, self.cols)
        red, pivots = self.rref()
        free = [j for j in range(self.cols) if j not in pivots]
        out = Matrix(self.field, self.cols, len(free))
        for k, fcol in enumerate(free):
            out.set(fcol, k, self.field.one)
            for r, pcol in enumerate(pivots):
                out.set(pcol, k, self.field.neg(red.get(r, fcol)))
        return out

    def inverse(self) -> "Matrix":
        if self.rows != self.cols:
            raise DimensionMismatch("inverse of a non-square matrix")
        n = self.rows
        aug = Matrix(self.field, n, 2 * n)
        for i in range(n):
            for j in range(n):
                aug.set(i, j, self.get(i, j))
            aug.set(i, n + i, self.field.one)
        red, pivots = aug.rref()
        if pivots != list(range(n)):
            raise ZeroDivisionError("matrix is singular")
        out = Matrix(self.field, n, n)
        for i in range(n):
            for j in range(n):
                out.set(i, j, red.get(i, n + j))
        return out


def rank(m: Matrix) -> int:
    return m.rank()


def kernel_basis(m: Matrix) -> Matrix:
    return m.kernel_basis()


def homology_dim(into_mid: Matrix, out_of_mid: Matrix) -> int:
    """dim ker(out_of_mid) - rank(into_mid) for a composable pair.

    ``into_mid`` maps into the middle space and ``out_of_mid`` maps out
    of it, so rows(into_mid) = cols(out_of_mid).  The composition must
    vanish.
    """
    if into_mid.rows != out_of_mid.cols:
        raise DimensionMismatch(
            f"middle dimension mismatch: {into_mid.rows} vs {out_of_mid.cols}"
        )
    if not out_of_mid.mul(into_mid).is_zero():
        raise NotAComplexError("not a complex at this degree: composition is nonzero")
    return (out_of_mid.cols - out_of_mid.rank()) - into_mid.rank()


# -- low-level elimination routines -------------------------------------


def _integer_rows(rows):
    """Scale each row by the lcm of its denominators; preserves row space."""
    out = []
    for row in rows:
        fracs = [Fraction(x) for x in row]
        m = lcm(*(f.denominator for f in fracs)) if fracs else 1
        out.append([int(f * m) for f in fracs])
    return out


def _rank_bareiss(rows, nrows, ncols) -> int:
    """Fraction-free elimination on integer rows; all divisions are exact."""
    a = [row[:] for row in rows]
    r = 0
    prev = 1
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        pivot = a[r][c]
        for i in range(r + 1, nrows):
            ai = a[i]
            ar = a[r]
            f = ai[c]
            for j in range(c + 1, ncols):
                ai[j] = (ai[j] * pivot - f * ar[j]) // prev
            ai[c] = 0
        prev = pivot
        r += 1
        if r == nrows:
            break
    return r


def _rank_modp(a: np.ndarray, p: int) -> int:
    a = a % p
    m, n = a.shape
    r = 0
    for c in range(n):
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r, c:] = (a[r, c:] * inv) % p
        below = r + 1 + np.nonzero(a[r + 1:, c])[0]
        if below.size:
            a[below, c:] = (a[below, c:] - np.outer(a[below, c], a[r, c:])) % p
        r += 1
        if r == m:
            break
    return r


def _rref_modp(a: np.ndarray, p: int):
    a = a % p
    m, n = a.shape
    r = 0
    pivots = []
    for c in range(n):
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r] = (a[r] * inv) % p
        others = np.nonzero(a[:, c])[0]
        others = others[others != r]
        if others.size:
            a[others] = (a[others] - np.outer(a[others, c], a[r])) % p
        pivots.append(c)
        r += 1
        if r == m:
            break
    return a, pivots


def _rref_fraction(rows, ncols):
    nrows = len(rows)
    r = 0
    pivots = []
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return pivots
