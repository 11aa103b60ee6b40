"""KZ-type Fuchsian systems ``dW/dz = rho * A(z) W`` with ``A(z) = sum_k P_k / (z - z_k)``.

Besides the system model this module checks the four hypotheses of the
rationality theorem, builds the projectors ``I -/+ P``, the scalars ``beta_k``
and the degree predictions coming from the residue at infinity.

Pole indices are 1-based in every public function.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

from .errors import (BadPoleIndex, DimensionMismatch, DuplicatePoles, EvaluationAtPole,
                     InvalidSystem, NonSquare)
from .exactalg import IntegerSpectrum, RatMatrix, as_rational, integer_spectrum

PASS = "pass"
FAIL = "fail"
VACUOUS = "vacuous"


@dataclass(frozen=True)
class KZSystem:
    poles: tuple[Fraction, ...]
    residues: tuple[RatMatrix, ...]
    rho: int = 1

    def __post_init__(self):
        poles = tuple(as_rational(z) for z in self.poles)
        residues = tuple(self.residues)
        object.__setattr__(self, "poles", poles)
        object.__setattr__(self, "residues", residues)
        if not poles:
            raise InvalidSystem("a system needs at least one pole")
        if len(poles) != len(residues):
            raise InvalidSystem(f"{len(poles)} poles but {len(residues)} residues")
        if len(set(poles)) != len(poles):
            raise DuplicatePoles(f"poles must be pairwise distinct, got {[str(z) for z in poles]}")
        n = residues[0].rows
        for k, P in enumerate(residues, 1):
            if not isinstance(P, RatMatrix):
                raise InvalidSystem(f"residue {k} is not a RatMatrix")
            if not P.is_square:
                raise NonSquare(f"residue {k} has shape {P.shape}")
            if P.shape != (n, n):
                raise DimensionMismatch(f"residue {k} has shape {P.shape}, expected {(n, n)}")
        if isinstance(self.rho, bool) or int(self.rho) != self.rho or self.rho == 0:
            raise InvalidSystem(f"rho must be a nonzero integer, got {self.rho!r}")
        object.__setattr__(self, "rho", int(self.rho))

    @property
    def n(self) -> int:
        return self.residues[0].rows

    @property
    def s(self) -> int:
        return len(self.poles)

    def pole(self, k: int) -> Fraction:
        return self.poles[self._index(k)]

    def residue(self, k: int) -> RatMatrix:
        return self.residues[self._index(k)]

    def _index(self, k: int) -> int:
        if not (isinstance(k, int) and 1 <= k <= self.s):
            raise BadPoleIndex(f"pole index {k!r} outside 1..{self.s}")
        return k - 1

    def with_rho(self, rho: int) -> "KZSystem":
        return KZSystem(self.poles, self.residues, rho)

    def transposed(self) -> "KZSystem":
        """System with every residue transposed and rho negated.

        Row solutions ``y`` of the adjoint system ``y' = -rho y A`` are exactly
        the transposes of column solutions of this one.
        """
        return KZSystem(self.poles, tuple(P.T for P in self.residues), -self.rho)

    def A(self, z) -> RatMatrix:
        """Value of ``A(z)`` (without the rho factor) at a non-pole point."""
        z = as_rational(z)
        if z in self.poles:
            raise EvaluationAtPole(f"A(z) has a pole at z={z}")
        out = RatMatrix.zeros(self.n)
        for zk, P in zip(self.poles, self.residues):
            out = out + P / (z - zk)
        return out

    def T(self) -> RatMatrix:
        """Sum of the residues; ``A(z) ~ T / z`` at infinity."""
        out = RatMatrix.zeros(self.n)
        for P in self.residues:
            out = out + P
        return out


def projectors(P: RatMatrix) -> tuple[RatMatrix, RatMatrix]:
    """Return ``(I - P, I + P)``.

    For an involution these are twice the projectors onto the -1 and +1
    eigenspaces and annihilate each other.
    """
    if not P.is_square:
        raise NonSquare(f"matrix of shape {P.shape} is not square")
    I = RatMatrix.identity(P.rows)
    return I - P, I + P


@dataclass(frozen=True)
class ConditionResult:
    status: str
    witnesses: tuple[tuple[int, ...], ...] = ()

    @property
    def passed(self) -> bool:
        return self.status != FAIL


@dataclass(frozen=True)
class ConditionReport:
    cond1_involution: ConditionResult
    cond2_triple: ConditionResult
    cond3_pair: ConditionResult
    cond4_symmetry: ConditionResult

    @property
    def all_pass(self) -> bool:
        return all(c.passed for c in self.conditions().values())

    def conditions(self) -> dict[str, ConditionResult]:
        return {
            "cond1_involution": self.cond1_involution,
            "cond2_triple": self.cond2_triple,
            "cond3_pair": self.cond3_pair,
            "cond4_symmetry": self.cond4_symmetry,
        }

    def failures(self) -> list[str]:
        lines = []
        for name, c in self.conditions().items():
            if c.status == FAIL:
                w = ", ".join("(" + ",".join(map(str, t)) + ")" for t in c.witnesses)
                lines.append(f"{name} fails at {w}")
        return lines


def _result(witnesses: list, vacuous: bool = False) -> ConditionResult:
    if vacuous:
        return ConditionResult(VACUOUS)
    return ConditionResult(FAIL, tuple(witnesses)) if witnesses else ConditionResult(PASS)


def check_conditions(system: KZSystem) -> ConditionReport:
    """Check the four sufficient conditions for a rational fundamental solution.

    1. every residue is an involution;
    2. ``(P_j P_k P_l + P_l P_k P_j)(I - P_k) = 0`` for pairwise distinct j, k, l;
    3. ``(P_j P_k P_j + P_j)(I - P_k) = I - P_k`` for j != k;
    4. every residue is symmetric.

    Conditions quantifying over index tuples that do not exist (s < 3 for the
    triple condition, s < 2 for the pair condition) are reported as vacuous.
    All ordered tuples are checked; every failing tuple is a witness.
    """
    Ps = system.residues
    s, n = system.s, system.n
    I = RatMatrix.identity(n)
    plus = [I - P for P in Ps]

    c1 = [(k + 1,) for k, P in enumerate(Ps) if P @ P != I]
    c4 = [(k + 1,) for k, P in enumerate(Ps) if not P.is_symmetric()]

    c2 = []
    for j, k, l in permutations(range(s), 3):
        lhs = (Ps[j] @ Ps[k] @ Ps[l] + Ps[l] @ Ps[k] @ Ps[j]) @ plus[k]
        if not lhs.is_zero():
            c2.append((j + 1, k + 1, l + 1))

    c3 = []
    for j, k in permutations(range(s), 2):
        lhs = (Ps[j] @ Ps[k] @ Ps[j] + Ps[j]) @ plus[k]
        if lhs != plus[k]:
            c3.append((j + 1, k + 1))

    return ConditionReport(
        _result(c1),
        _result(c2, vacuous=s < 3),
        _result(c3, vacuous=s < 2),
        _result(c4),
    )


def beta(system: KZSystem, k: int) -> Fraction:
    """``sum_{j != k} 1 / (z_k - z_j)^2``; zero for a single pole."""
    zk = system.pole(k)
    return sum((1 / (zk - zj) ** 2 for zj in system.poles if zj != zk), Fraction(0))


@dataclass(frozen=True)
class DegreeBounds:
    """Degree predictions from the effective residue at infinity.

    ``m_T``/``M_T`` are the least/greatest integer eigenvalues of ``rho * T``.
    ``deg_Q1 is None`` means the polynomial part of W vanishes, likewise
    ``deg_Q2`` for the adjoint solution.
    """

    T: RatMatrix
    spectrum: IntegerSpectrum
    m_T: int | None
    M_T: int | None
    all_integer: bool
    deg_Q1: int | None
    deg_Q2: int | None


def degree_bounds(system: KZSystem) -> DegreeBounds:
    T = system.T()
    spec = integer_spectrum(T * system.rho)
    if not spec.all_integer:
        return DegreeBounds(T, spec, spec.min, spec.max, False, None, None)
    m_T, M_T = spec.min, spec.max
    deg_Q1 = M_T if M_T >= 0 else None
    deg_Q2 = -m_T if m_T <= 0 else None
    return DegreeBounds(T, spec, m_T, M_T, True, deg_Q1, deg_Q2)
