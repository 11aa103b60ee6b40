"""Natural representation of the symmetric group S_n.

Indices are 1-based, matching the ``(i; j)`` transposition notation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import BadIndices, DuplicatePoles, PoleCountMismatch
from .exactalg import IntegerSpectrum, RatMatrix, as_rational, integer_spectrum
from .kzsystem import KZSystem

NOTE_T_SPECTRUM = (
    "published spectrum of T lists n-1 twice; exact computation gives "
    "n-1 (simple), n-2 (multiplicity n-2), -1 (simple); m_T and M_T agree"
)
NOTE_DEG_Q2 = (
    "published deg Q2 = -1; the degree rule at infinity with m_T = -1 gives "
    "deg Q2 = 1, which is what is asserted"
)


def transposition_matrix(n: int, i: int, j: int) -> RatMatrix:
    """Permutation matrix of the transposition swapping coordinates ``i`` and ``j``."""
    if not (1 <= i <= n and 1 <= j <= n) or i == j:
        raise BadIndices(f"need distinct indices in 1..{n}, got ({i}, {j})")
    i, j = i - 1, j - 1
    rows = []
    for k in range(n):
        row = [0] * n
        if k == i:
            row[j] = 1
        elif k == j:
            row[i] = 1
        else:
            row[k] = 1
        rows.append(row)
    return RatMatrix(rows)


def natural_residues(n: int) -> list[RatMatrix]:
    """``P_k = P(1, k+1)`` for ``k = 1 .. n-1``."""
    return [transposition_matrix(n, 1, k + 1) for k in range(1, n)]


def natural_kz_system(n: int, poles: Sequence, rho: int = 1) -> KZSystem:
    if n < 2:
        raise BadIndices("the natural representation needs n >= 2")
    poles = [as_rational(z) for z in poles]
    if len(poles) != n - 1:
        raise PoleCountMismatch(f"S_{n} system needs {n - 1} poles, got {len(poles)}")
    if len(set(poles)) != len(poles):
        raise DuplicatePoles(f"poles must be pairwise distinct, got {[str(z) for z in poles]}")
    return KZSystem(tuple(poles), tuple(natural_residues(n)), rho)


def is_natural_system(system: KZSystem) -> bool:
    return system.n >= 2 and list(system.residues) == natural_residues(system.n)


def discrepancy_notes(system: KZSystem) -> list[str]:
    """Notes on published values that differ from what is computed for this system."""
    if not is_natural_system(system):
        return []
    notes = []
    if system.n >= 3:
        notes.append(NOTE_T_SPECTRUM)
    notes.append(NOTE_DEG_Q2)
    return notes


def t1_matrix(n: int) -> RatMatrix:
    """Bordered matrix with corner ``2 - n``, all-ones border and zero block."""
    rows = [[2 - n] + [1] * (n - 1)]
    rows += [[1] + [0] * (n - 1) for _ in range(n - 1)]
    return RatMatrix(rows)


@dataclass(frozen=True)
class T1Decomposition:
    T1: RatMatrix
    identity_shift: int
    spectrum: IntegerSpectrum
    all_ones_eigenvalue: int | None


def t1_decomposition(n: int) -> T1Decomposition:
    """Split ``T = sum P_k`` as ``(n-2) I + T1`` and return the spectrum of ``T``.

    ``all_ones_eigenvalue`` is the eigenvalue of ``T`` on the all-ones vector
    (the trivial summand of the representation), or ``None`` if that vector
    is not an eigenvector.
    """
    if n < 2:
        raise BadIndices("need n >= 2")
    T1 = t1_matrix(n)
    T = sum(natural_residues(n), RatMatrix.zeros(n))
    if T != RatMatrix.scalar(n, n - 2) + T1:
        raise AssertionError(f"T != (n-2) I + T1 for n={n}")
    ones = RatMatrix([[1]] * n)
    image = T @ ones
    lam = image[0, 0]
    eig = int(lam) if image == ones * lam else None
    return T1Decomposition(T1, n - 2, integer_spectrum(T), eig)
