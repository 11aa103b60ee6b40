"""Rational matrix functions in partial-fraction form.

A :class:`RatMatFunc` is

    F(z) = sum_a sum_{p>=1} C_{a,p} (z - a)^-p  +  sum_{j>=0} Q_j z^j

with rational poles ``a`` and rational matrix coefficients.  The form is
canonical once trailing zero coefficients are dropped, so equality of
functions is equality of the stored data.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Mapping, Sequence

from .errors import DimensionMismatch, EvaluationAtPole
from .exactalg import RatMatrix, as_rational
from .kzsystem import KZSystem
from .series import AT_INFINITY, MatLaurent


def _strip(coeffs) -> tuple[RatMatrix, ...]:
    coeffs = list(coeffs)
    while coeffs and coeffs[-1].is_zero():
        coeffs.pop()
    return tuple(coeffs)


class RatMatFunc:
    __slots__ = ("rows", "cols", "pole_parts", "poly_part")

    def __init__(self, shape: tuple[int, int],
                 pole_parts: Mapping[Fraction, Sequence[RatMatrix]] | None = None,
                 poly_part: Sequence[RatMatrix] = ()):
        self.rows, self.cols = shape
        parts = {}
        for a, coeffs in (pole_parts or {}).items():
            coeffs = _strip(coeffs)
            if coeffs:
                parts[as_rational(a)] = coeffs
        self.pole_parts = dict(sorted(parts.items()))
        self.poly_part = _strip(poly_part)
        for c in self._all_coeffs():
            if c.shape != shape:
                raise DimensionMismatch(f"coefficient of shape {c.shape} in a {shape} function")

    def _all_coeffs(self):
        for coeffs in self.pole_parts.values():
            yield from coeffs
        yield from self.poly_part

    @classmethod
    def zero(cls, rows: int, cols: int | None = None) -> "RatMatFunc":
        return cls((rows, rows if cols is None else cols))

    @classmethod
    def constant(cls, M: RatMatrix) -> "RatMatFunc":
        return cls(M.shape, {}, (M,))

    @classmethod
    def from_system(cls, system: KZSystem) -> "RatMatFunc":
        """``A(z) = sum_k P_k / (z - z_k)`` (without the rho factor)."""
        n = system.n
        return cls((n, n), {zk: (P,) for zk, P in zip(system.poles, system.residues)})

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def poles(self) -> list[Fraction]:
        return list(self.pole_parts)

    def pole_order(self, a) -> int:
        return len(self.pole_parts.get(as_rational(a), ()))

    @property
    def degree(self) -> int | None:
        """Degree of the polynomial part; ``None`` when it vanishes."""
        return len(self.poly_part) - 1 if self.poly_part else None

    def is_zero(self) -> bool:
        return not self.pole_parts and not self.poly_part

    def is_constant(self) -> bool:
        return not self.pole_parts and len(self.poly_part) <= 1

    def constant_value(self) -> RatMatrix:
        if not self.is_constant():
            raise ValueError("function is not constant")
        return self.poly_part[0] if self.poly_part else RatMatrix.zeros(self.rows, self.cols)

    def __eq__(self, other):
        if not isinstance(other, RatMatFunc):
            return NotImplemented
        return (self.shape == other.shape and self.pole_parts == other.pole_parts
                and self.poly_part == other.poly_part)

    def __repr__(self):
        parts = ", ".join(f"{a}: {len(c)} terms" for a, c in self.pole_parts.items())
        return f"RatMatFunc(shape={self.shape}, poles={{{parts}}}, degree={self.degree})"

    def _combine(self, other: "RatMatFunc", sign: int) -> "RatMatFunc":
        if self.shape != other.shape:
            raise DimensionMismatch(f"shapes {self.shape} and {other.shape} differ")
        zero = RatMatrix.zeros(*self.shape)
        parts = {}
        for a in set(self.pole_parts) | set(other.pole_parts):
            f = self.pole_parts.get(a, ())
            g = other.pole_parts.get(a, ())
            parts[a] = [
                (f[i] if i < len(f) else zero) + (g[i] if i < len(g) else zero) * sign
                for i in range(max(len(f), len(g)))
            ]
        f, g = self.poly_part, other.poly_part
        poly = [
            (f[i] if i < len(f) else zero) + (g[i] if i < len(g) else zero) * sign
            for i in range(max(len(f), len(g)))
        ]
        return RatMatFunc(self.shape, parts, poly)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return self * -1

    def __mul__(self, c):
        c = as_rational(c)
        return RatMatFunc(self.shape,
                          {a: [x * c for x in cs] for a, cs in self.pole_parts.items()},
                          [x * c for x in self.poly_part])

    __rmul__ = __mul__

    def __matmul__(self, other):
        return rmf_mul(self, other)

    @property
    def T(self) -> "RatMatFunc":
        return RatMatFunc((self.cols, self.rows),
                          {a: [x.T for x in cs] for a, cs in self.pole_parts.items()},
                          [x.T for x in self.poly_part])

    def left_multiply(self, M: RatMatrix) -> "RatMatFunc":
        """``M F(z)`` for a constant matrix ``M``."""
        return RatMatFunc((M.rows, self.cols),
                          {a: [M @ x for x in cs] for a, cs in self.pole_parts.items()},
                          [M @ x for x in self.poly_part])

    def right_multiply(self, M: RatMatrix) -> "RatMatFunc":
        return RatMatFunc((self.rows, M.cols),
                          {a: [x @ M for x in cs] for a, cs in self.pole_parts.items()},
                          [x @ M for x in self.poly_part])

    def terms(self):
        """Yield ``(term, coefficient)`` with term ``("pole", a, p)`` or ``("poly", j)``."""
        for a, cs in self.pole_parts.items():
            for p, c in enumerate(cs, 1):
                if not c.is_zero():
                    yield ("pole", a, p), c
        for j, c in enumerate(self.poly_part):
            if not c.is_zero():
                yield ("poly", j), c


def rmf_eval(F: RatMatFunc, z0) -> RatMatrix:
    z0 = as_rational(z0)
    if z0 in F.pole_parts:
        raise EvaluationAtPole(f"function has a pole at z={z0}")
    out = RatMatrix.zeros(*F.shape)
    for term, c in F.terms():
        if term[0] == "pole":
            out = out + c / (z0 - term[1]) ** term[2]
        else:
            out = out + c * z0 ** term[1]
    return out


def _shifted_power(a: Fraction, e: int) -> list[Fraction]:
    # coefficients of (z - a)^e in the monomial basis, e >= 0
    return [comb(e, u) * (-a) ** (e - u) for u in range(e + 1)]


@lru_cache(maxsize=4096)
def _scalar_product(t1: tuple, t2: tuple) -> tuple[tuple[tuple, Fraction], ...]:
    """Partial-fraction expansion of the product of two basis terms."""
    if t1[0] == "poly" and t2[0] == "poly":
        return ((("poly", t1[1] + t2[1]), Fraction(1)),)
    if t1[0] == "poly":
        t1, t2 = t2, t1
    if t2[0] == "poly":
        # (z-a)^-p z^j with z^j = sum_t C(j,t) a^(j-t) (z-a)^t
        _, a, p = t1
        j = t2[1]
        out: dict[tuple, Fraction] = {}
        for t in range(j + 1):
            c = comb(j, t) * a ** (j - t)
            if t < p:
                key = ("pole", a, p - t)
                out[key] = out.get(key, Fraction(0)) + c
            else:
                for u, cu in enumerate(_shifted_power(a, t - p)):
                    key = ("poly", u)
                    out[key] = out.get(key, Fraction(0)) + c * cu
        return tuple((k, v) for k, v in out.items() if v)
    _, a, p = t1
    _, b, q = t2
    if a == b:
        return ((("pole", a, p + q), Fraction(1)),)
    # 1/((z-a)^p (z-b)^q): Taylor-expand the other factor at each pole
    out = []
    for i in range(1, p + 1):
        out.append((("pole", a, i),
                    Fraction(comb(p + q - i - 1, p - i) * (-1) ** (p - i)) / (a - b) ** (q + p - i)))
    for i in range(1, q + 1):
        out.append((("pole", b, i),
                    Fraction(comb(p + q - i - 1, q - i) * (-1) ** (q - i)) / (b - a) ** (p + q - i)))
    return tuple(out)


def _assemble(shape, acc: dict[tuple, RatMatrix]) -> RatMatFunc:
    zero = RatMatrix.zeros(*shape)
    parts: dict[Fraction, list] = {}
    poly: list = []
    for term, c in acc.items():
        if term[0] == "pole":
            _, a, p = term
            lst = parts.setdefault(a, [])
            lst.extend([zero] * (p - len(lst)))
            lst[p - 1] = c
        else:
            j = term[1]
            poly.extend([zero] * (j + 1 - len(poly)))
            poly[j] = c
    return RatMatFunc(shape, parts, poly)


def rmf_mul(F: RatMatFunc, G: RatMatFunc) -> RatMatFunc:
    """Exact product, re-expressed in partial-fraction form."""
    if F.cols != G.rows:
        raise DimensionMismatch(f"cannot multiply {F.shape} by {G.shape}")
    shape = (F.rows, G.cols)
    acc: dict[tuple, RatMatrix] = {}
    for t1, c1 in F.terms():
        for t2, c2 in G.terms():
            prod = c1 @ c2
            if prod.is_zero():
                continue
            for term, s in _scalar_product(t1, t2):
                contrib = prod * s
                acc[term] = acc[term] + contrib if term in acc else contrib
    return _assemble(shape, acc)


def rmf_diff(F: RatMatFunc) -> RatMatFunc:
    parts = {}
    for a, cs in F.pole_parts.items():
        parts[a] = [RatMatrix.zeros(*F.shape)] + [c * (-p) for p, c in enumerate(cs, 1)]
    poly = [c * j for j, c in enumerate(F.poly_part) if j > 0]
    return RatMatFunc(F.shape, parts, poly)


def expand_at(F: RatMatFunc, a, N: int) -> MatLaurent:
    """Laurent expansion of ``F`` about the finite point ``a`` through ``(z-a)^N``."""
    a = as_rational(a)
    terms: dict[int, RatMatrix] = {}

    def add(e, M):
        if e <= N:
            terms[e] = terms[e] + M if e in terms else M

    for p, c in enumerate(F.pole_parts.get(a, ()), 1):
        add(-p, c)
    for b, cs in F.pole_parts.items():
        if b == a:
            continue
        d = a - b
        for p, c in enumerate(cs, 1):
            # (x + d)^-p = sum_t C(p+t-1, t) (-1)^t x^t / d^(p+t)
            for t in range(N + 1):
                add(t, c * (Fraction(comb(p + t - 1, t) * (-1) ** t) / d ** (p + t)))
    for j, c in enumerate(F.poly_part):
        for t in range(min(j, N) + 1):
            add(t, c * (comb(j, t) * a ** (j - t)))
    lo = min([-len(F.pole_parts.get(a, ()))] + [N])
    terms.setdefault(lo, RatMatrix.zeros(*F.shape))
    return MatLaurent.from_dict(a, terms, N, F.shape)


def expand_at_infinity(F: RatMatFunc, N: int) -> MatLaurent:
    """Expansion of ``F`` in ``u = 1/z`` through ``u^N``."""
    terms: dict[int, RatMatrix] = {}

    def add(e, M):
        if e <= N:
            terms[e] = terms[e] + M if e in terms else M

    for j, c in enumerate(F.poly_part):
        add(-j, c)
    for b, cs in F.pole_parts.items():
        # (z - b)^-p = u^p (1 - b u)^-p = sum_t C(p+t-1, t) b^t u^(p+t)
        for p, c in enumerate(cs, 1):
            for t in range(max(N - p, -1) + 1):
                add(p + t, c * (comb(p + t - 1, t) * b ** t))
    lo = min(-(len(F.poly_part) - 1) if F.poly_part else 0, N)
    terms.setdefault(lo, RatMatrix.zeros(*F.shape))
    return MatLaurent.from_dict(AT_INFINITY, terms, N, F.shape)


__all__ = [
    "RatMatFunc",
    "rmf_eval",
    "rmf_mul",
    "rmf_diff",
    "expand_at",
    "expand_at_infinity",
]
