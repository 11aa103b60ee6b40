"""Independent re-verification of candidate solutions.

Nothing here trusts solver output: the residual is recomputed with the
general partial-fraction calculus of :mod:`kzrational.ratfunc`, and
fundamentality is decided by exact determinant evaluation.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .exactalg import RatMatrix
from .frobenius import LEFT, RIGHT
from .kzsystem import KZSystem, degree_bounds
from .ratfunc import RatMatFunc, rmf_diff, rmf_eval, rmf_mul


def sample_points(rng: random.Random, avoid, count: int) -> list[Fraction]:
    """Distinct random rationals with small height, none of them in ``avoid``."""
    avoid = set(avoid)
    pts: list[Fraction] = []
    while len(pts) < count:
        z = Fraction(rng.randint(-60, 60), rng.randint(1, 12))
        if z not in avoid and z not in pts:
            pts.append(z)
    return pts


def residual(system: KZSystem, W: RatMatFunc, side: str = RIGHT) -> RatMatFunc:
    """``W' - rho A W`` (right) or ``W' + rho W A`` (left)."""
    A = RatMatFunc.from_system(system)
    if side == RIGHT:
        return rmf_diff(W) - rmf_mul(A, W) * system.rho
    return rmf_diff(W) + rmf_mul(W, A) * system.rho


@dataclass(frozen=True)
class VerificationRecord:
    residual_zero: bool
    det_samples: tuple[tuple[Fraction, Fraction], ...]
    det_nonzero: bool
    det_identically_zero: bool | None
    rank: int
    poly_degree: int | None
    pole_orders: dict = field(default_factory=dict)
    predicted_poly_degree: int | None = None
    degree_matches: bool | None = None
    side: str = RIGHT

    @property
    def fundamental(self) -> bool:
        return self.det_nonzero

    @property
    def ok(self) -> bool:
        return self.residual_zero and self.fundamental


def _det_bound(W: RatMatFunc) -> int:
    # det(W) * prod (z - a)^(n ord_a) is a polynomial of at most this degree
    n = W.rows
    return n * ((W.degree or 0) + sum(len(c) for c in W.pole_parts.values()))


def verify(system: KZSystem, W: RatMatFunc, side: str = RIGHT, seed: int = 0,
           points: int = 3) -> VerificationRecord:
    """Check that ``W`` solves the system exactly and is fundamental.

    ``side=LEFT`` checks the adjoint system ``Y' = -rho Y A`` instead.  The
    determinant is sampled at ``points`` random non-pole rationals; a
    nonzero sample proves ``det W`` is not identically zero.  When every
    sample vanishes, enough further points are taken to decide identically
    zero from the degree bound of the cleared determinant.
    """
    n = system.n
    res_zero = residual(system, W, side).is_zero()

    rng = random.Random(seed)
    avoid = set(system.poles) | set(W.poles)
    pts = sample_points(rng, avoid, points)
    square = W.rows == W.cols == n
    samples = []
    rank = 0
    for z in pts:
        val = rmf_eval(W, z)
        rank = max(rank, val.rank())
        if square:
            samples.append((z, val.det()))
    det_nonzero = any(d != 0 for _, d in samples)
    identically_zero = None
    if square and not det_nonzero:
        extra = sample_points(rng, avoid | set(pts), _det_bound(W) + 1)
        identically_zero = all(rmf_eval(W, z).det() == 0 for z in extra)
        det_nonzero = not identically_zero

    bounds = degree_bounds(system)
    predicted = bounds.deg_Q1 if side == RIGHT else bounds.deg_Q2
    matches = (W.degree == predicted) if bounds.all_integer else None
    return VerificationRecord(
        residual_zero=res_zero,
        det_samples=tuple(samples),
        det_nonzero=det_nonzero and square,
        det_identically_zero=identically_zero,
        rank=rank,
        poly_degree=W.degree,
        pole_orders={a: len(c) for a, c in W.pole_parts.items()},
        predicted_poly_degree=predicted,
        degree_matches=matches,
        side=side,
    )


def verify_adjoint_pair(W: RatMatFunc, Y: RatMatFunc) -> tuple[bool, RatMatrix | None]:
    """Whether ``W Y`` is a constant invertible matrix; returns the constant."""
    prod = rmf_mul(W, Y)
    if not prod.is_constant():
        return False, None
    C = prod.constant_value()
    return C.det() != 0, C


__all__ = ["VerificationRecord", "verify", "residual", "verify_adjoint_pair", "sample_points",
           "LEFT", "RIGHT"]
