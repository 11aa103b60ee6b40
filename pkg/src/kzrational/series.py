"""Truncated matrix-valued Laurent series.

A :class:`MatLaurent` stores the coefficients for exponents
``min_order .. truncation_order``; everything above ``truncation_order`` is
unknown, and operations never pretend otherwise.  Series at infinity are
series in ``u = 1/z`` about ``u = 0``, tagged with :data:`AT_INFINITY`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import CenterMismatch, DimensionMismatch, EvaluationAtPole
from .exactalg import RatMatrix, as_rational
from .kzsystem import KZSystem


class _AtInfinity:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "AT_INFINITY"

    def __reduce__(self):
        return (_AtInfinity, ())


AT_INFINITY = _AtInfinity()


@dataclass(frozen=True)
class MatLaurent:
    center: Fraction | _AtInfinity
    min_order: int
    coeffs: tuple[RatMatrix, ...]
    truncation_order: int

    def __post_init__(self):
        coeffs = tuple(self.coeffs)
        if not coeffs:
            raise ValueError("a series needs at least one coefficient")
        if len(coeffs) != self.truncation_order - self.min_order + 1:
            raise ValueError(
                f"{len(coeffs)} coefficients do not cover exponents "
                f"{self.min_order}..{self.truncation_order}"
            )
        shape = coeffs[0].shape
        if any(c.shape != shape for c in coeffs):
            raise DimensionMismatch("coefficients of one series must share a shape")
        # leading zeros are dropped so that coeffs[0] is the true leading term
        lead = next((i for i, c in enumerate(coeffs) if not c.is_zero()), None)
        if lead:
            coeffs = coeffs[lead:]
            object.__setattr__(self, "min_order", self.min_order + lead)
        object.__setattr__(self, "coeffs", coeffs)
        if self.center is not AT_INFINITY:
            object.__setattr__(self, "center", as_rational(self.center))

    @classmethod
    def from_dict(cls, center, terms: dict[int, RatMatrix], truncation_order: int,
                  shape: tuple[int, int] | None = None) -> "MatLaurent":
        if shape is None:
            shape = next(iter(terms.values())).shape
        lo = min(terms, default=truncation_order)
        lo = min(lo, truncation_order)
        zero = RatMatrix.zeros(*shape)
        coeffs = tuple(terms.get(p, zero) for p in range(lo, truncation_order + 1))
        return cls(center, lo, coeffs, truncation_order)

    @property
    def shape(self) -> tuple[int, int]:
        return self.coeffs[0].shape

    @property
    def at_infinity(self) -> bool:
        return self.center is AT_INFINITY

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def coefficient(self, p: int) -> RatMatrix:
        if p > self.truncation_order:
            raise ValueError(f"exponent {p} is beyond the truncation order {self.truncation_order}")
        if p < self.min_order:
            return RatMatrix.zeros(*self.shape)
        return self.coeffs[p - self.min_order]

    def items(self):
        return zip(range(self.min_order, self.truncation_order + 1), self.coeffs)

    def truncate(self, order: int) -> "MatLaurent":
        if order > self.truncation_order:
            raise ValueError("cannot extend precision by truncation")
        if order < self.min_order:
            return MatLaurent(self.center, order, (RatMatrix.zeros(*self.shape),), order)
        return MatLaurent(self.center, self.min_order,
                          self.coeffs[: order - self.min_order + 1], order)

    def _binary(self, other: "MatLaurent", op) -> "MatLaurent":
        if self.center != other.center:
            raise CenterMismatch(f"centers {self.center} and {other.center} differ")
        if self.shape != other.shape:
            raise DimensionMismatch("series shapes differ")
        lo = min(self.min_order, other.min_order)
        hi = min(self.truncation_order, other.truncation_order)
        if hi < lo:
            return MatLaurent(self.center, hi, (RatMatrix.zeros(*self.shape),), hi)
        coeffs = tuple(op(self.coefficient(p), other.coefficient(p)) for p in range(lo, hi + 1))
        return MatLaurent(self.center, lo, coeffs, hi)

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    def __neg__(self):
        return MatLaurent(self.center, self.min_order, tuple(-c for c in self.coeffs),
                          self.truncation_order)

    def __mul__(self, c):
        return MatLaurent(self.center, self.min_order, tuple(x * c for x in self.coeffs),
                          self.truncation_order)

    __rmul__ = __mul__

    def __matmul__(self, other):
        return series_mul(self, other)

    @property
    def T(self) -> "MatLaurent":
        return MatLaurent(self.center, self.min_order, tuple(c.T for c in self.coeffs),
                          self.truncation_order)

    def derivative(self) -> "MatLaurent":
        """Derivative with respect to the local variable ``x = z - center``.

        The top known coefficient is lost: the result is truncated one order lower.
        """
        if self.at_infinity:
            raise NotImplementedError("differentiate in z via -u^2 d/du explicitly")
        terms = {p - 1: c * p for p, c in self.items() if p != 0}
        return MatLaurent.from_dict(self.center, terms, self.truncation_order - 1, self.shape)

    def evaluate(self, z) -> RatMatrix:
        """Partial sum of the known terms at the point ``z``."""
        z = as_rational(z)
        if self.at_infinity:
            if z == 0:
                raise EvaluationAtPole("u = 1/z is undefined at z = 0")
            x = 1 / z
        else:
            x = z - self.center
        if x == 0 and self.min_order < 0:
            raise EvaluationAtPole(f"series has a pole at {self.center}")
        out = RatMatrix.zeros(*self.shape)
        for p, c in self.items():
            if not c.is_zero():
                out = out + c * (x ** p)
        return out


def series_mul(f: MatLaurent, g: MatLaurent) -> MatLaurent:
    """Cauchy product, truncated where either factor's precision runs out."""
    if f.center != g.center:
        raise CenterMismatch(f"centers {f.center} and {g.center} differ")
    if f.shape[1] != g.shape[0]:
        raise DimensionMismatch(f"cannot multiply series of shapes {f.shape} and {g.shape}")
    lo = f.min_order + g.min_order
    hi = min(f.truncation_order + g.min_order, g.truncation_order + f.min_order)
    shape = (f.shape[0], g.shape[1])
    coeffs = []
    for e in range(lo, hi + 1):
        acc = RatMatrix.zeros(*shape)
        for p in range(max(f.min_order, e - g.truncation_order),
                       min(f.truncation_order, e - g.min_order) + 1):
            a, b = f.coefficient(p), g.coefficient(e - p)
            if not a.is_zero() and not b.is_zero():
                acc = acc + a @ b
        coeffs.append(acc)
    return MatLaurent(f.center, lo, tuple(coeffs), hi)


def local_coefficients(system: KZSystem, k: int, N: int) -> MatLaurent:
    """Expansion of ``A(z)`` about the pole ``z_k`` through exponent ``N``.

    The coefficient of ``(z - z_k)^-1`` is ``P_k``; for ``r >= 0`` it is
    ``(-1)^r sum_{j != k} P_j / (z_k - z_j)^(r+1)``.  The rho factor is not
    included.
    """
    if N < -1:
        raise ValueError("truncation order must be at least -1")
    Pk = system.residue(k)
    zk = system.pole(k)
    others = [(zk - zj, P) for zj, P in zip(system.poles, system.residues) if zj != zk]
    coeffs = [Pk]
    for r in range(N + 1):
        acc = RatMatrix.zeros(system.n)
        for d, P in others:
            acc = acc + P / d ** (r + 1)
        coeffs.append(acc if r % 2 == 0 else -acc)
    return MatLaurent(zk, -1, tuple(coeffs), N)


def infinity_coefficients(system: KZSystem, N: int) -> MatLaurent:
    """Expansion of ``A(z)`` in ``u = 1/z`` about ``u = 0`` through ``u^N``.

    ``1/(z - a) = u / (1 - a u)``, so the coefficient of ``u^(r+1)`` is
    ``sum_k P_k z_k^r``.
    """
    if N < 0:
        raise ValueError("truncation order must be non-negative")
    terms = {0: RatMatrix.zeros(system.n)}
    for r in range(N):
        acc = RatMatrix.zeros(system.n)
        for zk, P in zip(system.poles, system.residues):
            acc = acc + P * zk ** r
        terms[r + 1] = acc
    return MatLaurent.from_dict(AT_INFINITY, terms, N, (system.n, system.n))


def infinity_form(system: KZSystem) -> tuple[RatMatrix, bool]:
    """Return ``T = sum_k P_k`` and whether ``z A(z) -> T`` holds at infinity.

    The check expands ``A`` in ``u = 1/z`` to order 2 and compares the
    constant and linear coefficients against ``0`` and ``T``.
    """
    T = system.T()
    ser = infinity_coefficients(system, 2)
    ok = ser.coefficient(0).is_zero() and ser.coefficient(1) == T
    return T, ok


def constant_series(center, M: RatMatrix, truncation_order: int) -> MatLaurent:
    return MatLaurent.from_dict(center, {0: M}, truncation_order, M.shape)


def scalar_power_series(center, coeffs: Sequence, n: int) -> MatLaurent:
    """Series ``sum_p c_p x^p I`` from scalar coefficients starting at exponent 0."""
    mats = tuple(RatMatrix.scalar(n, c) for c in coeffs)
    return MatLaurent(center, 0, mats, len(mats) - 1)


__all__ = [
    "AT_INFINITY",
    "MatLaurent",
    "series_mul",
    "local_coefficients",
    "infinity_coefficients",
    "infinity_form",
    "constant_series",
    "scalar_power_series",
]
