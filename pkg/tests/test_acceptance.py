"""Exit criteria 1-8.  Each test records a one-line PASS/FAIL verdict that is
echoed at the end of the session; assertions use exact equality throughout."""

import json
import os
import random
import subprocess
import sys
import time
from fractions import Fraction
from pathlib import Path

import pytest

from kzrational.cli import EXIT_NEGATIVE, EXIT_OK, main
from kzrational.errors import NoIntegerEigenvalues
from kzrational.exactalg import RatMatrix, integer_spectrum
from kzrational.frobenius import LEFT, RIGHT, canonical_seeds, exponent_bounds, product_invariant, recursion_residuals
from kzrational.kzsystem import KZSystem, check_conditions
from kzrational.ratfunc import RatMatFunc
from kzrational.serialize import dumps, solution_to_doc, system_to_doc
from kzrational.solver import NOT_FOUND, adjoint_solution, solve_rational
from kzrational.symrep import (
    NOTE_DEG_Q2,
    discrepancy_notes,
    natural_kz_system,
    natural_residues,
    t1_matrix,
)
from kzrational.verify import verify, verify_adjoint_pair

from conftest import random_poles, record, sympy_eigen_profile

pytestmark = pytest.mark.acceptance

SEED = 2024
INSTANCE_BUDGET = 60.0  # seconds per instance


class Instance:
    def __init__(self, n, rho, poles):
        self.n, self.rho, self.poles = n, rho, poles
        self.system = natural_kz_system(n, poles, rho)
        t0 = time.perf_counter()
        self.outcome = solve_rational(self.system, seed=SEED)
        self.record = verify(self.system, self.outcome.W, seed=SEED) if self.outcome.found else None
        self.Y = adjoint_solution(self.system, self.outcome.W, seed=SEED) if self.outcome.found else None
        self.seconds = time.perf_counter() - t0

    def label(self):
        return f"n={self.n} rho={self.rho:+d} poles={[str(z) for z in self.poles]}"


@pytest.fixture(scope="module")
def instances():
    rng = random.Random(SEED)
    out = []
    for n in (2, 3, 4, 5):
        pole_sets = [random_poles(rng, n - 1) for _ in range(3)]
        for rho in (1, -1):
            for poles in pole_sets:
                out.append(Instance(n, rho, poles))
    return out


def test_criterion_1_conditions():
    t0 = time.perf_counter()
    ok = all(check_conditions(natural_kz_system(n, list(range(n - 1)))).all_pass for n in range(2, 7))

    P1, P2 = natural_residues(3)
    plus2 = RatMatrix.identity(3) - P2
    eq_n3 = (P1 @ P2 @ P1 + P1) @ plus2 == plus2

    Q1, Q2, Q3 = natural_residues(4)
    plus2 = RatMatrix.identity(4) - Q2
    eq_n4 = ((Q1 @ Q2 @ Q3 + Q3 @ Q2 @ Q1) @ plus2).is_zero()
    elapsed = time.perf_counter() - t0

    passed = ok and eq_n3 and eq_n4 and elapsed < 1.0
    record(1, passed, f"conditions pass n=2..6, n=3 pair and n=4 triple identities exact, {elapsed:.3f}s")
    assert ok and eq_n3 and eq_n4
    assert elapsed < 1.0


def test_criterion_2_construction(instances):
    bad = [i.label() for i in instances
           if not (i.outcome.found and i.record.residual_zero and i.record.det_nonzero)]
    slow = max(i.seconds for i in instances if i.n == 5)
    passed = not bad and slow < INSTANCE_BUDGET
    record(2, passed, f"{len(instances) - len(bad)}/{len(instances)} instances Found and verified, "
                      f"slowest n=5 instance {slow:.2f}s")
    assert not bad, bad
    assert slow < INSTANCE_BUDGET


def test_criterion_3_degrees(instances):
    wrong = []
    for i in instances:
        if i.rho != 1 or not i.outcome.found:
            continue
        if i.outcome.W.degree != i.n - 1 or i.Y.degree != 1:
            wrong.append((i.label(), i.outcome.W.degree, i.Y.degree))
        if NOTE_DEG_Q2 not in discrepancy_notes(i.system):
            wrong.append((i.label(), "missing deg Q2 note"))
    count = sum(1 for i in instances if i.rho == 1)
    record(3, not wrong, f"deg W = n-1 and deg Y = 1 on {count - len(wrong)}/{count} rho=+1 instances")
    assert not wrong, wrong


def test_criterion_4_spectrum():
    problems = []
    for n in range(2, 9):
        T = sum(natural_residues(n), RatMatrix.zeros(n))
        if T != RatMatrix.scalar(n, n - 2) + t1_matrix(n):
            problems.append((n, "decomposition"))
        sp = integer_spectrum(T)
        expected = {n - 1: 1, -1: 1}
        if n > 2:
            expected[n - 2] = n - 2
        if not (sp.all_integer and sp.min == -1 and sp.max == n - 1):
            problems.append((n, "bounds"))
        if dict(sp.integer_roots) != expected or sympy_eigen_profile(T) != expected:
            problems.append((n, "multiplicities"))
    record(4, not problems, "T = (n-2)I + T1 and spectrum {n-1:1, n-2:n-2, -1:1} for n=2..8")
    assert not problems, problems


def test_criterion_5_local_invariants(instances):
    problems = []
    checked = 0
    for i in instances:
        for k in range(1, i.system.s + 1):
            seeds = canonical_seeds(i.system, k)
            for side, coeffs in ((RIGHT, seeds.right_dict()), (LEFT, seeds.left_dict())):
                if not all(r.is_zero() for r in recursion_residuals(i.system, k, coeffs, side).values()):
                    problems.append((i.label(), k, side))
            prod = product_invariant(i.system, k, seeds)
            expected = 2 * seeds.beta if seeds.beta != 0 else 4
            if prod != RatMatrix.scalar(i.n, expected) or prod.det() == 0:
                problems.append((i.label(), k, "product"))
            checked += 1
    record(5, not problems, f"seed recursions and local products exact at {checked} poles")
    assert not problems, problems


def test_criterion_6_duality(instances):
    problems = []
    pairs = [i for i in instances if i.rho == 1]
    for i in pairs:
        ok, C = verify_adjoint_pair(i.outcome.W, i.Y)
        if not ok:
            problems.append((i.label(), "W Y not constant invertible"))
        dual = natural_kz_system(i.n, i.poles, -1)
        if not verify(dual, i.Y.T, seed=SEED).ok:
            problems.append((i.label(), "Y^T does not solve the rho=-1 system"))
    record(6, not problems, f"W Y constant invertible and Y^T solves rho=-1 on {len(pairs)} pairs")
    assert not problems, problems


def _cli(argv):
    return main([str(a) for a in argv])


def test_criterion_7_negative_controls(tmp_path, capsys):
    problems = []

    # (a) non-integer spectra
    half = KZSystem((0,), (RatMatrix([["1/2", 0], [0, "1/2"]]),))
    out = solve_rational(half)
    if out.status != NOT_FOUND or out.evidence != "NoIntegerEigenvalues":
        problems.append("solver on half-integer residue")
    try:
        exponent_bounds(half.residue(1))
        problems.append("exponent_bounds accepted half-integer residue")
    except NoIntegerEigenvalues:
        pass
    path = tmp_path / "half.json"
    path.write_text(dumps(system_to_doc(half)))
    if _cli(["solve", path]) != EXIT_NEGATIVE:
        problems.append("cli solve exit status on half-integer residue")
    capsys.readouterr()

    # (b) every single-entry perturbation of every residue, several sizes
    perturbations = 0
    for n in (2, 3, 4, 5):
        base = natural_kz_system(n, list(range(n - 1)))
        for k in range(base.s):
            for r in range(n):
                for c in range(n):
                    for eps in (1, -1, 2, -2, Fraction(1, 2)):
                        rows = base.residues[k].tolist()
                        rows[r][c] += eps
                        res = list(base.residues)
                        res[k] = RatMatrix(rows)
                        rep = check_conditions(KZSystem(base.poles, tuple(res)))
                        perturbations += 1
                        failing = [x for x in rep.conditions().values() if x.status == "fail"]
                        if rep.all_pass or not all(x.witnesses for x in failing):
                            problems.append(("perturbation", n, k + 1, r, c, eps))
    # the CLI prints the witness and exits 1
    doc = system_to_doc(natural_kz_system(4, [0, 1, 2]))
    doc["residues"][1][0][0] = "2"
    path = tmp_path / "tampered.json"
    path.write_text(dumps(doc))
    code = _cli(["check", path])
    text = capsys.readouterr().out
    if code != EXIT_NEGATIVE or "witnesses: [[2]]" not in text:
        problems.append("cli check on tampered residue")

    # (c) perturbed solution files fail verification
    perturbed_files = 0
    for n in (2, 3, 4):
        system = natural_kz_system(n, list(range(n - 1)))
        sys_path = tmp_path / f"s{n}.json"
        sys_path.write_text(dumps(system_to_doc(system)))
        W = solve_rational(system).W
        slots = [("pole", a, p) for a, cs in W.pole_parts.items() for p in range(len(cs))]
        slots += [("poly", None, j) for j in range(len(W.poly_part))]
        for kind, a, p in slots:
            parts = {b: list(cs) for b, cs in W.pole_parts.items()}
            poly = list(W.poly_part)
            target = parts[a] if kind == "pole" else poly
            M = target[p].tolist()
            M[0][0] += 1
            target[p] = RatMatrix(M)
            sol_path = tmp_path / f"bad{n}_{kind}_{p}.json"
            sol_path.write_text(dumps(solution_to_doc(RatMatFunc(W.shape, parts, poly))))
            code = _cli(["verify", sys_path, sol_path, "--json"])
            cert = json.loads(capsys.readouterr().out)["certificate"]
            perturbed_files += 1
            if code != EXIT_NEGATIVE or cert["residual_zero"]:
                problems.append(("perturbed solution", n, kind, p))
        good = tmp_path / f"good{n}.json"
        good.write_text(dumps(solution_to_doc(W)))
        if _cli(["verify", sys_path, good]) != EXIT_OK:
            problems.append(("unperturbed solution rejected", n))
        capsys.readouterr()

    record(7, not problems, f"non-integer spectrum NotFound; {perturbations} residue perturbations "
                            f"and {perturbed_files} perturbed solution files rejected")
    assert not problems, problems


def test_criterion_8_property_suites_standalone():
    tests_dir = Path(__file__).parent
    env = dict(os.environ)
    cmd = [sys.executable, "-m", "pytest", "-m", "property", "-q", "-p", "no:cacheprovider",
           str(tests_dir)]
    proc = subprocess.run(cmd, capture_output=True, text=True, env=env, cwd=tests_dir.parent)
    listing = subprocess.run(cmd + ["--collect-only"], capture_output=True, text=True,
                             env=env, cwd=tests_dir.parent).stdout
    required = ["test_exactalg.py", "test_series.py::test_local_evaluation_consistency",
                "test_ratfunc.py::test_eval_homomorphism", "test_ratfunc.py::test_leibniz_and_linearity"]
    present = all(name in listing for name in required)
    summary = proc.stdout.strip().splitlines()[-1] if proc.stdout.strip() else proc.stderr[-200:]
    passed = proc.returncode == 0 and present
    record(8, passed, f"pytest -m property: {summary}")
    assert present, listing
    assert proc.returncode == 0, proc.stdout + proc.stderr
