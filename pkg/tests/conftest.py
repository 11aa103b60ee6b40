import random
from fractions import Fraction

import pytest
import sympy

from kzrational import RatMatrix
from kzrational.symrep import natural_kz_system

ACCEPTANCE_LINES: list[str] = []


def record(criterion: int, ok: bool, detail: str) -> None:
    """Store a one-line verdict for the end-of-session summary and echo it."""
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def random_poles(rng: random.Random, count: int) -> list[Fraction]:
    poles: list[Fraction] = []
    while len(poles) < count:
        z = Fraction(rng.randint(-9, 9), rng.randint(1, 4))
        if z not in poles:
            poles.append(z)
    return poles


def random_matrix(rng: random.Random, rows: int, cols: int, lo=-4, hi=4, den=3) -> RatMatrix:
    return RatMatrix([[Fraction(rng.randint(lo, hi), rng.randint(1, den)) for _ in range(cols)]
                      for _ in range(rows)])


def to_sympy(M: RatMatrix) -> sympy.Matrix:
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row]
                         for row in M.tolist()])


def sympy_eigen_profile(M: RatMatrix) -> dict:
    """Eigenvalue multiplicities from sympy, as an independent oracle."""
    return {int(k) if k.is_integer else k: v for k, v in to_sympy(M).eigenvals().items()}


@pytest.fixture
def s2():
    return natural_kz_system(2, [0])


@pytest.fixture
def s3():
    return natural_kz_system(3, [0, 1])
