"""Global rational fundamental solutions by coefficient matching.

The ansatz for one column ``w`` of ``W`` is

    w(z) = sum_k sum_{p=1}^{P} l_{k,p} (z - z_k)^-p + sum_{j=0}^{d} q_j z^j

with unknown vectors ``l_{k,p}``, ``q_j``.  Expanding ``w' - rho A w`` in
partial fractions gives one homogeneous linear equation per coefficient;
its kernel is the space of rational column solutions of that shape.  The
equations are identical for every column, so ``W`` is assembled from
``n`` kernel vectors chosen to make ``det W`` not identically zero.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import AdjointNotFound
from .exactalg import RatMatrix, integer_spectrum, nullspace
from .frobenius import LEFT, RIGHT
from .kzsystem import DegreeBounds, KZSystem, check_conditions, degree_bounds
from .ratfunc import RatMatFunc, rmf_eval, rmf_mul
from .verify import VerificationRecord, sample_points, verify

log = logging.getLogger(__name__)

FOUND = "Found"
NOT_FOUND = "NotFound"
CONDITIONS_UNKNOWN = "ConditionsUnknown"

MAX_ATTEMPTS = 64
AUTO = "auto"


@dataclass
class SolveOutcome:
    status: str
    W: RatMatFunc | None = None
    kernel_dimension: int = 0
    certificate: VerificationRecord | None = None
    reason: str = ""
    evidence: str = ""
    max_pole_order: int = 1
    max_poly_degree: int = -1
    required_pole_order: int | None = None
    predicted: DegreeBounds | None = None
    conditions_pass: bool = False
    exploratory: bool = False
    attempts: int = 0
    notes: list = field(default_factory=list)

    @property
    def found(self) -> bool:
        return self.status == FOUND


class _Layout:
    """Index bookkeeping for unknowns and equations of the column ansatz."""

    def __init__(self, n: int, s: int, P: int, d: int):
        self.n, self.s, self.P, self.d = n, s, P, d
        self.n_unknowns = n * (s * P + d + 1)
        self.n_equations = n * (s * (P + 1) + max(d, 0))

    def unk_pole(self, k, p, i):
        return (k * self.P + p - 1) * self.n + i

    def unk_poly(self, j, i):
        return (self.s * self.P + j) * self.n + i

    def eq_pole(self, k, p, i):
        return (k * (self.P + 1) + p - 1) * self.n + i

    def eq_poly(self, t, i):
        return (self.s * (self.P + 1) + t) * self.n + i


def column_operator(system: KZSystem, max_pole_order: int, max_poly_degree: int):
    """Matrix of ``w -> w' - rho A w`` on the column ansatz, plus its layout."""
    n, s, P, d = system.n, system.s, max_pole_order, max_poly_degree
    lay = _Layout(n, s, P, d)
    L = [[Fraction(0)] * lay.n_unknowns for _ in range(lay.n_equations)]
    rho = system.rho
    poles = system.poles
    cols = [[tuple(Pk[r, i] * rho for r in range(n)) for i in range(n)] for Pk in system.residues]

    def sub(row_of, coef, v, col):
        # subtract coef * v from the equations row_of(r), r = 0..n-1, in column col
        if coef:
            for r in range(n):
                if v[r]:
                    L[row_of(r)][col] -= coef * v[r]

    for k in range(s):
        a = poles[k]
        for p in range(1, P + 1):
            for i in range(n):
                col = lay.unk_pole(k, p, i)
                L[lay.eq_pole(k, p + 1, i)][col] += -p
                for b_idx in range(s):
                    v = cols[b_idx][i]
                    if b_idx == k:
                        sub(lambda r: lay.eq_pole(k, p + 1, r), 1, v, col)
                        continue
                    b = poles[b_idx]
                    # 1/((z-b)(z-a)^p)
                    sub(lambda r: lay.eq_pole(b_idx, 1, r), 1 / (b - a) ** p, v, col)
                    for q in range(1, p + 1):
                        c = Fraction((-1) ** (p - q)) / (a - b) ** (p - q + 1)
                        sub(lambda r, q=q: lay.eq_pole(k, q, r), c, v, col)
    for j in range(d + 1):
        for i in range(n):
            col = lay.unk_poly(j, i)
            if j:
                L[lay.eq_poly(j - 1, i)][col] += j
            for b_idx in range(s):
                v = cols[b_idx][i]
                b = poles[b_idx]
                # z^j/(z-b) = b^j/(z-b) + sum_t b^(j-1-t) z^t
                sub(lambda r: lay.eq_pole(b_idx, 1, r), b ** j, v, col)
                for t in range(j):
                    sub(lambda r, t=t: lay.eq_poly(t, r), b ** (j - 1 - t), v, col)
    op = RatMatrix(L) if L else RatMatrix.zeros(0, lay.n_unknowns)
    return op, lay


def _assemble_W(system: KZSystem, lay: _Layout, vectors: list[list[Fraction]]) -> RatMatFunc:
    n = system.n
    m = len(vectors)

    def block(idx_fn):
        return RatMatrix([[vectors[c][idx_fn(r)] for c in range(m)] for r in range(n)])

    parts = {
        system.poles[k]: [block(lambda r, k=k, p=p: lay.unk_pole(k, p, r))
                          for p in range(1, lay.P + 1)]
        for k in range(lay.s)
    }
    poly = [block(lambda r, j=j: lay.unk_poly(j, r)) for j in range(lay.d + 1)]
    return RatMatFunc((n, m), parts, poly)


def _candidates(k_dim: int, n: int, rng: random.Random):
    if k_dim == n:
        yield RatMatrix.identity(n)
    else:
        yield RatMatrix.vstack(RatMatrix.identity(n), RatMatrix.zeros(k_dim - n, n))
        yield RatMatrix.vstack(RatMatrix.zeros(k_dim - n, n), RatMatrix.identity(n))
    while True:
        yield RatMatrix([[rng.randint(-5, 5) for _ in range(n)] for _ in range(k_dim)])


def required_pole_orders(system: KZSystem) -> list[int | None]:
    """Pole order forced at each z_k by the least integer exponent of ``rho P_k``."""
    out = []
    for P in system.residues:
        spec = integer_spectrum(P * system.rho)
        out.append(max(0, -spec.min) if spec.all_integer else None)
    return out


def solve_rational(system: KZSystem, max_pole_order: int | str = 1,
                   max_poly_degree: int | str = AUTO, seed: int = 0) -> SolveOutcome:
    """Search for a rational fundamental solution of ``W' = rho A W``.

    ``max_poly_degree="auto"`` takes the degree predicted by the residue at
    infinity; ``max_pole_order="auto"`` takes the order forced by the least
    local exponent.  Mathematical failure is reported through ``status``.
    """
    n = system.n
    conditions = check_conditions(system)
    bounds = degree_bounds(system)
    out = SolveOutcome(NOT_FOUND, predicted=bounds, conditions_pass=conditions.all_pass,
                       exploratory=abs(system.rho) > 1)
    if out.exploratory:
        out.notes.append(f"|rho| = {abs(system.rho)} > 1: exploratory run, no rationality guarantee")

    for zk, P in zip(system.poles, system.residues):
        spec = integer_spectrum(P * system.rho)
        if not spec.integer_roots:
            out.reason = f"no integer local exponents at z={zk}"
            out.evidence = "NoIntegerEigenvalues"
            return out
        if not spec.all_integer:
            out.reason = f"non-integer local exponents at z={zk}"
            out.evidence = "NonIntegerEigenvalues"
            return out
    if not bounds.all_integer:
        out.reason = "residue at infinity has non-integer eigenvalues"
        out.evidence = "NonIntegerEigenvalues"
        return out

    required = max(required_pole_orders(system))
    out.required_pole_order = required
    if max_pole_order == AUTO:
        max_pole_order = max(required, 1)
    predicted_deg = bounds.deg_Q1 if bounds.deg_Q1 is not None else -1
    if max_poly_degree == AUTO:
        max_poly_degree = predicted_deg
    out.max_pole_order, out.max_poly_degree = int(max_pole_order), int(max_poly_degree)
    capped = out.max_pole_order < required or out.max_poly_degree < predicted_deg

    op, lay = column_operator(system, out.max_pole_order, out.max_poly_degree)
    kernel = nullspace(op)
    out.kernel_dimension = len(kernel)
    log.debug("column operator %s, kernel dimension %d", op.shape, len(kernel))
    if len(kernel) < n:
        out.status = CONDITIONS_UNKNOWN if capped else NOT_FOUND
        out.reason = f"column solution space has dimension {len(kernel)} < {n}"
        return out

    K = RatMatrix.hstack(*kernel)
    rng = random.Random(seed)
    pts = sample_points(rng, system.poles, 3)
    for attempt, C in enumerate(_candidates(len(kernel), n, rng), 1):
        if attempt > MAX_ATTEMPTS:
            break
        V = K @ C
        W = _assemble_W(system, lay, [list(V.column(c)) for c in range(n)])
        if any(rmf_eval(W, z).det() != 0 for z in pts):
            out.attempts = attempt
            cert = verify(system, W, RIGHT, seed=seed)
            out.certificate = cert
            if cert.ok:
                out.status, out.W = FOUND, W
                return out
            out.reason = "candidate failed independent verification"
            return out
    out.attempts = MAX_ATTEMPTS
    out.status = CONDITIONS_UNKNOWN if capped else NOT_FOUND
    out.reason = "no kernel combination with nonvanishing determinant"
    return out


def adjoint_solution(system: KZSystem, W: RatMatFunc, seed: int = 0) -> RatMatFunc:
    """Rational solution ``Y`` of ``Y' = -rho Y A`` normalised so that ``W Y = I``.

    The rows of ``Y`` are found by the same coefficient matching applied to
    the transposed system; the constant ``Y0 W`` is then divided out.
    """
    tsys = system.transposed()
    res = solve_rational(tsys, AUTO, AUTO, seed=seed)
    if not res.found:
        raise AdjointNotFound(f"adjoint system has no rational fundamental solution: {res.reason}")
    Y0 = res.W.T
    K = rmf_mul(Y0, W)
    if not K.is_constant() or K.constant_value().det() == 0:
        raise AdjointNotFound("Y0 W is not a constant invertible matrix; W is not fundamental")
    Y = Y0.left_multiply(K.constant_value().inverse())
    WY = rmf_mul(W, Y)
    if not WY.is_constant() or WY.constant_value().det() == 0:
        raise AdjointNotFound("W Y is not constant")
    return Y


__all__ = [
    "SolveOutcome",
    "solve_rational",
    "adjoint_solution",
    "column_operator",
    "required_pole_orders",
    "FOUND",
    "NOT_FOUND",
    "CONDITIONS_UNKNOWN",
    "AUTO",
    "LEFT",
]
