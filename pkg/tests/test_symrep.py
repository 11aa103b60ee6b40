import itertools

import pytest

from kzrational.errors import BadIndices, DuplicatePoles, PoleCountMismatch
from kzrational.exactalg import RatMatrix
from kzrational.kzsystem import check_conditions, degree_bounds
from kzrational.symrep import (
    NOTE_DEG_Q2,
    NOTE_T_SPECTRUM,
    discrepancy_notes,
    is_natural_system,
    natural_kz_system,
    natural_residues,
    t1_decomposition,
    t1_matrix,
    transposition_matrix,
)

from conftest import sympy_eigen_profile


def test_transposition_examples():
    assert transposition_matrix(3, 1, 2) == RatMatrix([[0, 1, 0], [1, 0, 0], [0, 0, 1]])
    assert transposition_matrix(3, 1, 3) == RatMatrix([[0, 0, 1], [0, 1, 0], [1, 0, 0]])
    assert transposition_matrix(2, 1, 2) == RatMatrix([[0, 1], [1, 0]])


@pytest.mark.parametrize("args", [(3, 1, 1), (3, 0, 2), (3, 1, 4), (2, 2, 3)])
def test_transposition_bad_indices(args):
    with pytest.raises(BadIndices):
        transposition_matrix(*args)


def test_transpositions_symmetric_involutive():
    for n in range(2, 9):
        I = RatMatrix.identity(n)
        for i, j in itertools.combinations(range(1, n + 1), 2):
            P = transposition_matrix(n, i, j)
            assert P == P.T and P @ P == I
            assert P == transposition_matrix(n, j, i)


def test_conjugation_law():
    for n in range(3, 7):
        for i, j, k in itertools.permutations(range(1, n + 1), 3):
            Pij = transposition_matrix(n, i, j)
            assert Pij @ transposition_matrix(n, j, k) @ Pij == transposition_matrix(n, i, k)


def test_natural_system_examples():
    s2 = natural_kz_system(2, [0])
    assert s2.s == 1 and s2.residue(1) == RatMatrix([[0, 1], [1, 0]])
    s3 = natural_kz_system(3, [0, 1])
    assert list(s3.residues) == [transposition_matrix(3, 1, 2), transposition_matrix(3, 1, 3)]
    s4 = natural_kz_system(4, [0, 1, 2])
    assert s4.s == 3 and check_conditions(s4).cond2_triple.passed
    assert is_natural_system(s4)


def test_natural_system_errors():
    with pytest.raises(PoleCountMismatch):
        natural_kz_system(3, [0])
    with pytest.raises(DuplicatePoles):
        natural_kz_system(3, [0, 0])
    with pytest.raises(BadIndices):
        natural_kz_system(1, [])


@pytest.mark.parametrize("n", range(2, 7))
def test_natural_passes_conditions(n):
    assert check_conditions(natural_kz_system(n, [k * k for k in range(n - 1)])).all_pass


def test_t1_examples():
    d = t1_decomposition(3)
    assert d.T1 == RatMatrix([[-1, 1, 1], [1, 0, 0], [1, 0, 0]])
    assert dict(d.spectrum.integer_roots) == {2: 1, 1: 1, -1: 1}

    d = t1_decomposition(2)
    assert d.T1 == RatMatrix([[0, 1], [1, 0]]) and d.identity_shift == 0
    assert dict(d.spectrum.integer_roots) == {1: 1, -1: 1}

    d = t1_decomposition(5)
    assert dict(d.spectrum.integer_roots) == {4: 1, 3: 3, -1: 1}


@pytest.mark.parametrize("n", range(2, 9))
def test_eq_decomposition_and_spectrum(n):
    T = sum(natural_residues(n), RatMatrix.zeros(n))
    assert T == RatMatrix.scalar(n, n - 2) + t1_matrix(n)
    d = t1_decomposition(n)
    assert d.all_ones_eigenvalue == n - 1
    expected = {n - 1: 1, -1: 1}
    if n > 2:
        expected[n - 2] = n - 2
    assert dict(d.spectrum.integer_roots) == expected
    assert sympy_eigen_profile(T) == expected


def test_discrepancy_notes():
    assert discrepancy_notes(natural_kz_system(2, [0])) == [NOTE_DEG_Q2]
    assert discrepancy_notes(natural_kz_system(3, [0, 1])) == [NOTE_T_SPECTRUM, NOTE_DEG_Q2]
    assert discrepancy_notes(natural_kz_system(4, [0, 1, 2])) == [NOTE_T_SPECTRUM, NOTE_DEG_Q2]
    s3 = natural_kz_system(3, [0, 1])
    other = type(s3)(s3.poles, (s3.residues[1], s3.residues[0]))
    assert discrepancy_notes(other) == []
    # the asserted value behind the note
    assert degree_bounds(s3).deg_Q2 == 1
