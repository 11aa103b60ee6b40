"""Exact rational scalars and dense matrices.

Everything here works over :class:`fractions.Fraction`; no floating point
value is ever produced.  The matrix type is immutable and hashable so it can
be shared freely and used as a dictionary key.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt, lcm
from numbers import Rational
from typing import Iterable, Sequence

from .errors import DimensionMismatch, NoSolution, NonSquare

__all__ = [
    "Fraction",
    "as_rational",
    "RatMatrix",
    "LinearSolution",
    "solve_linear",
    "nullspace",
    "integer_roots",
    "IntegerSpectrum",
    "integer_spectrum",
]


def as_rational(x) -> Fraction:
    """Coerce ``x`` to a Fraction.  Accepts ints, Fractions and ``"p/q"`` strings.

    Floats are refused: they would smuggle rounding into exact computations.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip()
        if not _is_plain_fraction(s):
            raise ValueError(f"not an exact rational: {x!r}")
        try:
            return Fraction(s)
        except ZeroDivisionError:
            raise ValueError(f"zero denominator: {x!r}") from None
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def _is_plain_fraction(s: str) -> bool:
    num, _, den = s.partition("/")
    return num.lstrip("+-").isdigit() and (not den or den.isdigit())


class RatMatrix:
    """Dense matrix of Fractions, row-major, immutable.

    ``@`` is the matrix product; ``*`` and ``/`` are reserved for scalars.
    """

    __slots__ = ("rows", "cols", "_data", "_hash")

    def __init__(self, data: Iterable[Iterable], cols: int | None = None):
        rows = tuple(tuple(as_rational(e) for e in row) for row in data)
        if rows:
            ncols = len(rows[0])
            if any(len(r) != ncols for r in rows):
                raise DimensionMismatch("ragged rows")
        else:
            ncols = cols or 0
        self.rows = len(rows)
        self.cols = ncols
        self._data = rows
        self._hash = None

    @classmethod
    def _raw(cls, data: tuple, rows: int, cols: int) -> "RatMatrix":
        # trusted constructor: data is already a tuple of tuples of Fraction
        m = object.__new__(cls)
        m.rows, m.cols, m._data, m._hash = rows, cols, data, None
        return m

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> "RatMatrix":
        cols = rows if cols is None else cols
        z = Fraction(0)
        return cls._raw(tuple((z,) * cols for _ in range(rows)), rows, cols)

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls.scalar(n, 1)

    @classmethod
    def scalar(cls, n: int, c) -> "RatMatrix":
        c = as_rational(c)
        z = Fraction(0)
        return cls._raw(
            tuple(tuple(c if i == j else z for j in range(n)) for i in range(n)), n, n
        )

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int | None = None) -> "RatMatrix":
        if not columns:
            return cls.zeros(rows or 0, 0)
        return cls(zip(*columns))

    @classmethod
    def hstack(cls, *mats: "RatMatrix") -> "RatMatrix":
        if len({m.rows for m in mats}) > 1:
            raise DimensionMismatch("hstack needs equal row counts")
        data = tuple(sum((m._data[i] for m in mats), ()) for i in range(mats[0].rows))
        return cls._raw(data, mats[0].rows, sum(m.cols for m in mats))

    @classmethod
    def vstack(cls, *mats: "RatMatrix") -> "RatMatrix":
        if len({m.cols for m in mats}) > 1:
            raise DimensionMismatch("vstack needs equal column counts")
        data = sum((m._data for m in mats), ())
        return cls._raw(data, len(data), mats[0].cols)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self._data[i][j]

    def row(self, i: int) -> tuple:
        return self._data[i]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self._data)

    def columns(self) -> list["RatMatrix"]:
        return [RatMatrix._raw(tuple((r[j],) for r in self._data), self.rows, 1)
                for j in range(self.cols)]

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self._data]

    @property
    def T(self) -> "RatMatrix":
        return RatMatrix._raw(tuple(zip(*self._data)) if self.rows else (), self.cols, self.rows)

    def _check_same_shape(self, other: "RatMatrix"):
        if not isinstance(other, RatMatrix):
            return NotImplemented
        if self.shape != other.shape:
            raise DimensionMismatch(f"shapes {self.shape} and {other.shape} differ")

    def __add__(self, other):
        if self._check_same_shape(other) is NotImplemented:
            return NotImplemented
        data = tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self._data, other._data))
        return RatMatrix._raw(data, self.rows, self.cols)

    def __sub__(self, other):
        if self._check_same_shape(other) is NotImplemented:
            return NotImplemented
        data = tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self._data, other._data))
        return RatMatrix._raw(data, self.rows, self.cols)

    def __neg__(self):
        return RatMatrix._raw(tuple(tuple(-a for a in r) for r in self._data), self.rows, self.cols)

    def __mul__(self, c):
        if isinstance(c, RatMatrix):
            raise TypeError("use @ for the matrix product")
        c = as_rational(c)
        return RatMatrix._raw(tuple(tuple(a * c for a in r) for r in self._data), self.rows, self.cols)

    __rmul__ = __mul__

    def __truediv__(self, c):
        c = as_rational(c)
        return RatMatrix._raw(tuple(tuple(a / c for a in r) for r in self._data), self.rows, self.cols)

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        if not isinstance(other, RatMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        ocols = tuple(zip(*other._data)) if other.rows else ((),) * other.cols
        zero = Fraction(0)
        data = tuple(
            tuple(sum((a * b for a, b in zip(r, c) if a and b), zero) for c in ocols)
            for r in self._data
        )
        return RatMatrix._raw(data, self.rows, other.cols)

    def __eq__(self, other):
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, self._data))
        return self._hash

    def __repr__(self):
        return f"RatMatrix({[[str(e) for e in r] for r in self._data]})"

    def __str__(self):
        cells = [[str(e) for e in r] for r in self._data]
        w = max((len(c) for r in cells for c in r), default=1)
        return "\n".join("[" + " ".join(c.rjust(w) for c in r) + "]" for r in cells)

    def is_zero(self) -> bool:
        return not any(any(r) for r in self._data)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_symmetric(self) -> bool:
        return self.is_square and self == self.T

    def trace(self) -> Fraction:
        self._require_square()
        return sum((self._data[i][i] for i in range(self.rows)), Fraction(0))

    def _require_square(self):
        if not self.is_square:
            raise NonSquare(f"matrix of shape {self.shape} is not square")

    def det(self) -> Fraction:
        """Determinant by Gaussian elimination over the rationals."""
        self._require_square()
        m = [list(r) for r in self._data]
        n = self.rows
        det = Fraction(1)
        for c in range(n):
            piv = next((r for r in range(c, n) if m[r][c]), None)
            if piv is None:
                return Fraction(0)
            if piv != c:
                m[c], m[piv] = m[piv], m[c]
                det = -det
            p = m[c][c]
            det *= p
            for r in range(c + 1, n):
                f = m[r][c]
                if f:
                    f /= p
                    m[r] = [x - f * y for x, y in zip(m[r], m[c])]
        return det

    def rank(self) -> int:
        return len(_rref(self._data, self.cols)[1])

    def inverse(self) -> "RatMatrix":
        self._require_square()
        sol = solve_linear(self, RatMatrix.identity(self.rows))
        if sol.kernel_basis:
            raise ZeroDivisionError("matrix is singular")
        return sol.particular

    def charpoly(self) -> tuple[Fraction, ...]:
        """Coefficients of ``det(x I - A)``, lowest degree first (monic).

        Faddeev-LeVerrier recursion; exact over the rationals.
        """
        self._require_square()
        n = self.rows
        coeffs = [Fraction(0)] * (n + 1)
        coeffs[n] = Fraction(1)
        M = RatMatrix.zeros(n)
        I = RatMatrix.identity(n)
        for k in range(1, n + 1):
            M = self @ M + I * coeffs[n - k + 1]
            coeffs[n - k] = -(self @ M).trace() / k
        return tuple(coeffs)


def _rref(data, ncols: int, upto: int | None = None):
    """Reduced row echelon form.  Pivots are only sought in columns < ``upto``."""
    m = [list(r) for r in data]
    upto = ncols if upto is None else upto
    pivots = []
    r = 0
    nrows = len(m)
    for c in range(upto):
        piv = next((i for i in range(r, nrows) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        if p != 1:
            m[r] = [x / p for x in m[r]]
        pr = m[r]
        for i in range(nrows):
            if i != r:
                f = m[i][c]
                if f:
                    m[i] = [x - f * y for x, y in zip(m[i], pr)]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return m, pivots


@dataclass(frozen=True)
class LinearSolution:
    """One particular solution plus a kernel basis.

    Every solution of ``A X = B`` is ``particular + N C`` where ``N`` has the
    ``kernel_basis`` vectors as columns and ``C`` is arbitrary.
    """

    particular: RatMatrix
    kernel_basis: tuple[RatMatrix, ...]


def solve_linear(A: RatMatrix, B: RatMatrix) -> LinearSolution:
    """Solve ``A X = B`` exactly.

    The particular solution has every free variable set to zero, so it is a
    deterministic function of the input.  Raises :class:`NoSolution` when
    ``rank([A|B]) > rank(A)``.
    """
    if A.rows != B.rows:
        raise DimensionMismatch(f"A has {A.rows} rows but B has {B.rows}")
    aug = tuple(a + b for a, b in zip(A._data, B._data))
    m, pivots = _rref(aug, A.cols + B.cols, upto=A.cols)
    rank = len(pivots)
    for i in range(rank, A.rows):
        if any(m[i][A.cols:]):
            raise NoSolution("inconsistent linear system")
    zero = Fraction(0)
    part = [[zero] * B.cols for _ in range(A.cols)]
    for i, c in enumerate(pivots):
        part[c] = m[i][A.cols:]
    particular = RatMatrix(part) if A.cols else RatMatrix.zeros(0, B.cols)
    return LinearSolution(particular, tuple(_kernel_from_rref(m, pivots, A.cols)))


def _kernel_from_rref(m, pivots, ncols: int) -> list[RatMatrix]:
    pivset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -m[i][f]
        basis.append(RatMatrix._raw(tuple((x,) for x in v), ncols, 1))
    return basis


def nullspace(A: RatMatrix) -> list[RatMatrix]:
    """Basis of ``{x : A x = 0}`` as column matrices; ``cols - rank(A)`` of them."""
    m, pivots = _rref(A._data, A.cols)
    return _kernel_from_rref(m, pivots, A.cols)


def _poly_eval(coeffs: Sequence[int], x: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _deflate(coeffs: list[int], r: int) -> list[int]:
    # divide by (x - r); caller guarantees r is a root
    out = [0] * (len(coeffs) - 1)
    acc = 0
    for k in range(len(coeffs) - 1, 0, -1):
        acc = acc * r + coeffs[k]
        out[k - 1] = acc
    return out


def integer_roots(coeffs: Sequence) -> list[tuple[int, int]]:
    """Integer roots (with multiplicity) of a rational polynomial, lowest degree first.

    Candidates come from the rational root test on the integer-scaled
    polynomial, capped by the Cauchy bound.
    """
    coeffs = [as_rational(c) for c in coeffs]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if len(coeffs) < 2:
        return []
    scale = lcm(*(c.denominator for c in coeffs))
    poly = [int(c * scale) for c in coeffs]
    roots = []
    zero_mult = 0
    while poly[0] == 0:
        poly.pop(0)
        zero_mult += 1
    if zero_mult:
        roots.append((0, zero_mult))
    if len(poly) < 2:
        return roots
    c0 = abs(poly[0])
    lead = abs(poly[-1])
    bound = 1 + max(abs(c) for c in poly[:-1]) // lead + 1
    candidates = set()
    for d in range(1, min(isqrt(c0), bound) + 1):
        if c0 % d == 0:
            candidates.add(d)
            if c0 // d <= bound:
                candidates.add(c0 // d)
    for d in sorted(candidates):
        for r in (d, -d):
            mult = 0
            while len(poly) > 1 and _poly_eval(poly, r) == 0:
                poly = _deflate(poly, r)
                mult += 1
            if mult:
                roots.append((r, mult))
    roots.sort()
    return roots


@dataclass(frozen=True)
class IntegerSpectrum:
    """Integer eigenvalues of a square matrix.

    Non-integer eigenvalues are never approximated; they only show up as
    ``all_integer == False``.
    """

    integer_roots: tuple[tuple[int, int], ...]
    all_integer: bool
    characteristic_polynomial: tuple[Fraction, ...]

    @property
    def dimension(self) -> int:
        return len(self.characteristic_polynomial) - 1

    @property
    def eigenvalues(self) -> list[int]:
        """Integer eigenvalues repeated by multiplicity, ascending."""
        return [v for v, k in self.integer_roots for _ in range(k)]

    @property
    def min(self) -> int | None:
        return self.integer_roots[0][0] if self.integer_roots else None

    @property
    def max(self) -> int | None:
        return self.integer_roots[-1][0] if self.integer_roots else None

    def multiplicity(self, value: int) -> int:
        return dict(self.integer_roots).get(value, 0)


def integer_spectrum(A: RatMatrix) -> IntegerSpectrum:
    if not A.is_square:
        raise NonSquare(f"matrix of shape {A.shape} is not square")
    cp = A.charpoly()
    roots = tuple(integer_roots(cp))
    total = sum(k for _, k in roots)
    return IntegerSpectrum(roots, total == A.rows, cp)
