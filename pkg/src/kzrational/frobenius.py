"""Local Laurent solutions at a finite singular point.

Right solutions ``W = sum_p b_p x^p`` (``x = z - z_k``) of ``W' = rho A W``
obey, after collecting the coefficient of ``x^q``,

    ((q+1) I - rho P_k) b_{q+1} = rho * sum_{j >= 0, j + l = q} a_j b_l

and left solutions ``Y = sum_p c_p x^p`` of ``Y' = -rho Y A`` obey

    c_{q+1} ((q+1) I + rho P_k) = -rho * sum_{j >= 0, j + l = q} c_l a_j

where ``a_j`` are the Taylor coefficients of the regular part of ``A`` at
``z_k``.  The rho factor is folded into the operator on the left so that the
admissible leading exponents are the integer eigenvalues of ``rho P_k``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    BadSeed,
    ConditionsNotSatisfied,
    DimensionMismatch,
    InvariantViolated,
    NoIntegerEigenvalues,
    NoSolution,
)
from .exactalg import RatMatrix, integer_spectrum, nullspace, solve_linear
from .kzsystem import KZSystem, beta, check_conditions, projectors
from .series import MatLaurent, local_coefficients

RIGHT = "right"
LEFT = "left"
BETA_ZERO = "beta_zero"
BETA_NONZERO = "beta_nonzero"


def exponent_bounds(R: RatMatrix) -> tuple[int, int]:
    """Least and greatest integer eigenvalue of the effective residue ``R``."""
    spec = integer_spectrum(R)
    if not spec.integer_roots:
        raise NoIntegerEigenvalues("residue has no integer eigenvalue")
    return spec.min, spec.max


@dataclass(frozen=True)
class Resonance:
    exponent: int
    kernel_dimension: int
    compatible: bool


@dataclass(frozen=True)
class LocalSolution:
    center: Fraction
    side: str
    series: MatLaurent
    resonance_log: tuple[Resonance, ...] = ()

    @property
    def valid(self) -> bool:
        return all(r.compatible for r in self.resonance_log)

    @property
    def min_order(self) -> int:
        return self.series.min_order


def _project_off_kernel(X: RatMatrix, kernel: list[RatMatrix]) -> RatMatrix:
    # remove the component of each column lying in span(kernel), standard inner product
    K = RatMatrix.hstack(*kernel)
    gram = K.T @ K
    return X - K @ (gram.inverse() @ (K.T @ X))


def _check_seed(R: RatMatrix, seed: RatMatrix, m: int):
    if seed.rows != R.rows:
        raise DimensionMismatch(f"seed has {seed.rows} rows, residue is {R.rows}x{R.rows}")
    if seed.is_zero():
        raise BadSeed("leading coefficient must be nonzero")
    if not ((RatMatrix.identity(R.rows) * m - R) @ seed).is_zero():
        raise BadSeed(f"seed is not annihilated by ({m} I - rho P_k); "
                      f"{m} must be an eigenvalue of the effective residue")


def recurse_right(system: KZSystem, k: int, seed: RatMatrix, m: int,
                  N: int | None = None) -> LocalSolution:
    """Run the right recursion from the leading coefficient ``b_m = seed``.

    At resonant steps the particular solution orthogonal to the kernel is
    taken and the kernel dimension is logged.  An inconsistent resonant step
    (a logarithm would be forced) stops the recursion and marks the solution
    invalid.  ``N`` defaults to one past the greatest integer exponent.
    """
    R = system.residue(k) * system.rho
    _check_seed(R, seed, m)
    if N is None:
        N = exponent_bounds(R)[1] + 1
    if N < m:
        raise ValueError(f"target order {N} is below the leading exponent {m}")
    a = local_coefficients(system, k, max(N - m - 1, -1))
    rho = system.rho
    I = RatMatrix.identity(system.n)
    b = {m: seed}
    log = []
    last = m
    for e in range(m + 1, N + 1):
        rhs = RatMatrix.zeros(*seed.shape)
        for j in range(0, e - m):
            aj = a.coefficient(j)
            if not aj.is_zero():
                rhs = rhs + aj @ b[e - 1 - j]
        rhs = rhs * rho
        op = I * e - R
        try:
            sol = solve_linear(op, rhs)
        except NoSolution:
            log.append(Resonance(e, len(nullspace(op)), False))
            break
        x = sol.particular
        if sol.kernel_basis:
            x = _project_off_kernel(x, list(sol.kernel_basis))
            log.append(Resonance(e, len(sol.kernel_basis), True))
        b[e] = x
        last = e
    series = MatLaurent.from_dict(system.pole(k), b, last, seed.shape)
    return LocalSolution(system.pole(k), RIGHT, series, tuple(log))


def recurse_left(system: KZSystem, k: int, seed: RatMatrix, m: int,
                 N: int | None = None) -> LocalSolution:
    """Left-side counterpart of :func:`recurse_right`.

    ``Y`` solves ``Y' = -rho Y A`` exactly when ``Y^T`` solves the right
    system with transposed residues and ``-rho``; the recursion is run there
    and transposed back.
    """
    if seed.cols != system.n:
        raise DimensionMismatch(f"left seed has {seed.cols} columns, expected {system.n}")
    tsys = system.transposed()
    try:
        right = recurse_right(tsys, k, seed.T, m, N)
    except BadSeed:
        raise BadSeed(f"left seed is not annihilated by ({m} I + rho P_k) from the right") from None
    return LocalSolution(right.center, LEFT, right.series.T, right.resonance_log)


def recursion_residuals(system: KZSystem, k: int, coeffs: dict[int, RatMatrix],
                        side: str = RIGHT) -> dict[int, RatMatrix]:
    """Residual of the recursion at every exponent ``e`` present in ``coeffs``.

    For the right side this is ``(e I - rho P_k) b_e - rho sum_{j>=0} a_j b_{e-1-j}``
    with missing lower coefficients taken as zero; symmetric on the left.
    """
    m = min(coeffs)
    top = max(coeffs)
    a = local_coefficients(system, k, max(top - m - 1, -1))
    R = system.residue(k) * system.rho
    rho = system.rho
    I = RatMatrix.identity(system.n)
    shape = coeffs[m].shape
    out = {}
    for e in range(m, top + 1):
        ce = coeffs.get(e, RatMatrix.zeros(*shape))
        acc = RatMatrix.zeros(*shape)
        for j in range(0, e - m):
            lower = coeffs.get(e - 1 - j)
            if lower is None:
                continue
            aj = a.coefficient(j)
            acc = acc + (aj @ lower if side == RIGHT else lower @ aj)
        if side == RIGHT:
            out[e] = (I * e - R) @ ce - acc * rho
        else:
            out[e] = ce @ (I * e + R) + acc * rho
    return out


def eigenspace_seed(R: RatMatrix, m: int) -> RatMatrix:
    """Columns spanning the eigenspace of ``R`` for the eigenvalue ``m``."""
    basis = nullspace(RatMatrix.identity(R.rows) * m - R)
    if not basis:
        raise BadSeed(f"{m} is not an eigenvalue")
    return RatMatrix.hstack(*basis)


def local_basis(system: KZSystem, k: int, N: int | None = None) -> list[LocalSolution]:
    """One right local solution per integer eigenvalue of ``rho P_k``.

    Each is seeded with the whole eigenspace; together the columns give a
    local fundamental system when the residue is diagonalizable with integer
    spectrum.  Only the canonical seeds carry published guarantees.
    """
    R = system.residue(k) * system.rho
    spec = integer_spectrum(R)
    if not spec.integer_roots:
        raise NoIntegerEigenvalues("residue has no integer eigenvalue")
    if N is None:
        N = spec.max + 1
    return [recurse_right(system, k, eigenspace_seed(R, lam), lam, N)
            for lam, _ in spec.integer_roots]


@dataclass(frozen=True)
class CanonicalSeeds:
    """Closed-form leading coefficients of the right and left local solutions.

    ``right`` holds ``(b_-1, b_0, b_1)`` and ``left`` holds ``(c_-1, c_0, c_1)``.
    ``b1_published`` is the alternative ``b_1 = -beta I`` for ``beta != 0``;
    it solves the same recursion but makes the local product ``-2 beta P_k``
    instead of ``2 beta I``.
    """

    k: int
    beta: Fraction
    branch: str
    right: tuple[RatMatrix, RatMatrix, RatMatrix]
    left: tuple[RatMatrix, RatMatrix, RatMatrix]
    b1_published: RatMatrix | None = field(default=None)

    def right_dict(self) -> dict[int, RatMatrix]:
        return dict(zip((-1, 0, 1), self.right))

    def left_dict(self) -> dict[int, RatMatrix]:
        return dict(zip((-1, 0, 1), self.left))


def canonical_seeds(system: KZSystem, k: int) -> CanonicalSeeds:
    """Seeds ``b_-1 = I - P_k``, ``c_-1 = I + P_k`` and their next two coefficients.

    With ``a_0 = sum_{j!=k} P_j/(z_k - z_j)`` and
    ``X = a_0 P_k a_0 + sum_{j!=k} P_j/(z_k - z_j)^2``:

    * ``b_0 = -P_k a_0 b_-1`` and ``c_0 = -c_-1 a_0 P_k``;
    * ``beta_k != 0``: ``b_1 = beta_k P_k``, ``c_1 = X``;
    * ``beta_k == 0``: ``b_1 = I + P_k``, ``c_1 = X + I - P_k``.

    For ``rho = -1`` the roles swap under transposition: the right seeds are
    the transposed left seeds of the ``rho = 1`` system and vice versa.
    """
    if system.rho not in (1, -1):
        raise ConditionsNotSatisfied(f"closed-form seeds need rho = +-1, got {system.rho}")
    report = check_conditions(system)
    if not report.all_pass:
        raise ConditionsNotSatisfied("; ".join(report.failures()), report)
    n = system.n
    I = RatMatrix.identity(n)
    Pk = system.residue(k)
    zk = system.pole(k)
    bk = beta(system, k)
    a0 = RatMatrix.zeros(n)
    s2 = RatMatrix.zeros(n)
    for zj, Pj in zip(system.poles, system.residues):
        if zj != zk:
            a0 = a0 + Pj / (zk - zj)
            s2 = s2 + Pj / (zk - zj) ** 2
    plus, minus = projectors(Pk)
    X = a0 @ Pk @ a0 + s2

    b_m1, b_0 = plus, -(Pk @ a0 @ plus)
    c_m1, c_0 = minus, -(minus @ a0 @ Pk)
    if bk != 0:
        branch = BETA_NONZERO
        b_1, c_1 = Pk * bk, X
        published = I * (-bk)
    else:
        branch = BETA_ZERO
        b_1, c_1 = minus, X + plus
        published = None

    right = (b_m1, b_0, b_1)
    left = (c_m1, c_0, c_1)
    if system.rho == -1:
        right, left = tuple(c.T for c in left), tuple(b.T for b in right)
        published = None if published is None else published.T
    return CanonicalSeeds(k, bk, branch, right, left, published)


def product_invariant(system: KZSystem, k: int, seeds: CanonicalSeeds | None = None) -> RatMatrix:
    """``b_0 c_0 + b_-1 c_1 + b_1 c_-1`` from the canonical seeds.

    Must equal ``2 beta_k I`` (``beta_k != 0``) or ``4 I`` (``beta_k == 0``)
    and be invertible; otherwise :class:`InvariantViolated` carries the
    computed matrix.
    """
    if seeds is None:
        seeds = canonical_seeds(system, k)
    (b_m1, b_0, b_1), (c_m1, c_0, c_1) = seeds.right, seeds.left
    prod = b_0 @ c_0 + b_m1 @ c_1 + b_1 @ c_m1
    n = system.n
    expected = RatMatrix.scalar(n, 2 * seeds.beta if seeds.beta != 0 else 4)
    if prod != expected:
        raise InvariantViolated(f"local product at pole {k} is not {expected[0, 0]} I", prod)
    if prod.det() == 0:
        raise InvariantViolated(f"local product at pole {k} is singular", prod)
    return prod
