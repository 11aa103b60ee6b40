"""Exact rational solutions of KZ-type Fuchsian systems ``dW/dz = rho A(z) W``."""

__version__ = "0.1.0"

from .exactalg import (
    Fraction,
    IntegerSpectrum,
    RatMatrix,
    integer_spectrum,
    nullspace,
    solve_linear,
)
from .kzsystem import (
    ConditionReport,
    DegreeBounds,
    KZSystem,
    beta,
    check_conditions,
    degree_bounds,
    projectors,
)
from .series import AT_INFINITY, MatLaurent, infinity_form, local_coefficients, series_mul
from .frobenius import (
    CanonicalSeeds,
    LocalSolution,
    canonical_seeds,
    exponent_bounds,
    product_invariant,
    recurse_left,
    recurse_right,
)
from .ratfunc import RatMatFunc, rmf_diff, rmf_eval, rmf_mul
from .solver import SolveOutcome, adjoint_solution, solve_rational
from .verify import VerificationRecord, verify
from .symrep import natural_kz_system, t1_decomposition, transposition_matrix
