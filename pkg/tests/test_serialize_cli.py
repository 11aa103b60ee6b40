import json
import random
from fractions import Fraction

import pytest

from kzrational.cli import EXIT_NEGATIVE, EXIT_OK, EXIT_USAGE, main
from kzrational.errors import ParseError
from kzrational.exactalg import RatMatrix
from kzrational.kzsystem import KZSystem
from kzrational.ratfunc import RatMatFunc
from kzrational.serialize import (
    dumps,
    load_solution,
    loads,
    parse_rational,
    rational_to_str,
    solution_from_doc,
    solution_to_doc,
    system_from_doc,
    system_to_doc,
)
from kzrational.symrep import natural_kz_system

from conftest import random_matrix


# --- documents --------------------------------------------------------------------

def test_rational_strings():
    assert rational_to_str(Fraction(-3, 4)) == "-3/4"
    assert rational_to_str(Fraction(7)) == "7"
    big = Fraction(10 ** 40 + 1, 3 ** 30)
    assert parse_rational(rational_to_str(big), "x") == big
    assert parse_rational(5, "x") == 5
    for bad in (0.5, True, "1/0", [1], "x"):
        with pytest.raises(ParseError):
            parse_rational(bad, "x")


def test_system_round_trip():
    rng = random.Random(7)
    for _ in range(20):
        n = rng.randint(1, 4)
        s = rng.randint(1, 3)
        poles = []
        while len(poles) < s:
            z = Fraction(rng.randint(-10 ** 12, 10 ** 12), rng.randint(1, 10 ** 9))
            if z not in poles:
                poles.append(z)
        system = KZSystem(tuple(poles), tuple(random_matrix(rng, n, n, -10 ** 6, 10 ** 6, 97)
                                              for _ in range(s)), rng.choice([1, -1, 3]))
        doc = system_to_doc(system, {"label": "x"})
        back, meta = system_from_doc(loads(dumps(doc)))
        assert back == system and meta == {"label": "x"}
        assert system_to_doc(back, meta) == doc


def test_solution_round_trip():
    rng = random.Random(8)
    for _ in range(10):
        F = RatMatFunc((2, 3), {Fraction(rng.randint(-9, 9), 7): [random_matrix(rng, 2, 3)]},
                       [random_matrix(rng, 2, 3) for _ in range(rng.randint(0, 3))])
        doc = solution_to_doc(F, "left")
        G, side = solution_from_doc(loads(dumps(doc)))
        assert G == F and side == "left"


@pytest.mark.parametrize("mutate, path", [
    (lambda d: d["residues"][0][1].__setitem__(0, 0.5), "residues[0][1][0]"),
    (lambda d: d["poles"].__setitem__(0, "a/b"), "poles[0]"),
    (lambda d: d.pop("rho"), "rho"),
    (lambda d: d["residues"][1].pop(), "residues[1]"),
    (lambda d: d.__setitem__("poles", ["0", "0"]), "poles"),
    (lambda d: d.__setitem__("format", "other"), "format"),
])
def test_system_parse_errors_carry_path(mutate, path):
    doc = json.loads(dumps(system_to_doc(natural_kz_system(3, [0, 1]))))
    mutate(doc)
    with pytest.raises(ParseError) as exc:
        system_from_doc(doc)
    assert exc.value.path == path


def test_json_error_has_position():
    with pytest.raises(ParseError) as exc:
        loads('{\n  "n": 2,\n  oops\n}')
    assert exc.value.path.startswith("line 3")


def test_solution_parse_errors():
    doc = solution_to_doc(RatMatFunc.constant(RatMatrix.identity(2)))
    doc["poly_part"][0][0] = ["1", "2", "3"]
    with pytest.raises(ParseError) as exc:
        solution_from_doc(doc)
    assert exc.value.path == "poly_part[0][0]"


# --- CLI ---------------------------------------------------------------------------

def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_gen_sn(tmp_path, capsys):
    path = tmp_path / "s3.json"
    assert run(capsys, "gen-sn", "--n", 3, "--poles", "0,1", "-o", path)[0] == EXIT_OK
    system, meta = system_from_doc(json.loads(path.read_text()))
    assert system == natural_kz_system(3, [0, 1]) and "label" in meta

    code, out, _ = run(capsys, "gen-sn", "--n", 2, "--poles", "0", "--rho", -1)
    assert code == EXIT_OK
    system, _ = system_from_doc(json.loads(out))
    assert system.s == 1 and system.rho == -1

    code, _, err = run(capsys, "gen-sn", "--n", 3, "--poles", "0,0")
    assert code != EXIT_OK and "distinct" in err


def test_usage_errors(capsys):
    assert run(capsys, "solve")[0] == EXIT_USAGE
    assert run(capsys, "frobnicate")[0] == EXIT_USAGE
    assert run(capsys, "check", "/nonexistent/file.json")[0] == EXIT_USAGE


def _write_system(tmp_path, system, name="sys.json"):
    path = tmp_path / name
    path.write_text(dumps(system_to_doc(system)))
    return path


def test_check(tmp_path, capsys):
    path = _write_system(tmp_path, natural_kz_system(3, [0, 1]))
    code, out, _ = run(capsys, "check", path, "--json")
    assert code == EXIT_OK
    rep = json.loads(out)
    assert rep["conditions"]["all_pass"]
    assert (rep["degree_bounds"]["m_T"], rep["degree_bounds"]["M_T"]) == (-1, 2)
    assert rep["beta"] == {"1": "1", "2": "1"}
    assert rep["local"][0]["product_invariant"] == [["2", "0", "0"], ["0", "2", "0"], ["0", "0", "2"]]

    # human-readable output shows the same numbers
    code, text, _ = run(capsys, "check", path)
    assert code == EXIT_OK and "m_T: -1" in text and "M_T: 2" in text


def test_check_tampered(tmp_path, capsys):
    doc = system_to_doc(natural_kz_system(3, [0, 1]))
    doc["residues"][0][0][1] = "2"
    path = tmp_path / "bad.json"
    path.write_text(dumps(doc))
    code, out, _ = run(capsys, "check", path)
    assert code == EXIT_NEGATIVE
    assert "status: fail" in out and "witnesses: [[1]]" in out


def test_check_single_pole_vacuous(tmp_path, capsys):
    path = _write_system(tmp_path, natural_kz_system(2, [0]))
    rep = json.loads(run(capsys, "check", path, "--json")[1])
    assert rep["conditions"]["cond2_triple"]["status"] == "vacuous"
    assert rep["conditions"]["cond3_pair"]["status"] == "vacuous"


def test_solve_and_verify(tmp_path, capsys):
    sys_path = _write_system(tmp_path, natural_kz_system(2, [0]))
    sol = tmp_path / "w.json"
    adj = tmp_path / "y.json"
    code, out, _ = run(capsys, "solve", sys_path, "--json", "--emit-solution", sol,
                       "--adjoint", "--emit-adjoint", adj)
    assert code == EXIT_OK
    rep = json.loads(out)
    assert rep["solve"]["status"] == "Found" and rep["solve"]["deg_Q1"] == 1
    assert rep["adjoint"]["W_times_Y"] == [["1", "0"], ["0", "1"]]
    W, side = load_solution(sol)
    assert side == "right" and W.degree == 1 and W.pole_order(0) == 1

    assert run(capsys, "verify", sys_path, sol)[0] == EXIT_OK
    assert run(capsys, "verify", sys_path, adj)[0] == EXIT_OK


def test_solve_s3_reports_degree(tmp_path, capsys):
    path = _write_system(tmp_path, natural_kz_system(3, [0, 1]))
    code, out, _ = run(capsys, "solve", path, "--json")
    assert code == EXIT_OK and json.loads(out)["solve"]["deg_Q1"] == 2


def test_solve_half_integer(tmp_path, capsys):
    path = _write_system(tmp_path, KZSystem((0,), (RatMatrix([["1/2", 0], [0, "1/2"]]),)))
    code, out, _ = run(capsys, "solve", path, "--json")
    assert code == EXIT_NEGATIVE
    rep = json.loads(out)["solve"]
    assert rep["status"] == "NotFound" and "no integer local exponents" in rep["reason"]


def test_verify_perturbed_and_zero(tmp_path, capsys):
    sys_path = _write_system(tmp_path, natural_kz_system(3, [0, 1]))
    sol = tmp_path / "w.json"
    assert run(capsys, "solve", sys_path, "--emit-solution", sol)[0] == EXIT_OK
    doc = json.loads(sol.read_text())
    doc["poly_part"][0][0][0] = rational_to_str(parse_rational(doc["poly_part"][0][0][0], "") + 1)
    bad = tmp_path / "bad.json"
    bad.write_text(dumps(doc))
    code, out, _ = run(capsys, "verify", sys_path, bad, "--json")
    assert code == EXIT_NEGATIVE and json.loads(out)["certificate"]["residual_zero"] is False

    zero = tmp_path / "zero.json"
    zero.write_text(dumps(solution_to_doc(RatMatFunc.zero(3))))
    code, out, _ = run(capsys, "verify", sys_path, zero, "--json")
    cert = json.loads(out)["certificate"]
    assert code == EXIT_NEGATIVE and cert["residual_zero"] and not cert["fundamental"]


def test_verify_dimension_mismatch(tmp_path, capsys):
    sys_path = _write_system(tmp_path, natural_kz_system(3, [0, 1]))
    sol = tmp_path / "w2.json"
    sol.write_text(dumps(solution_to_doc(RatMatFunc.constant(RatMatrix.identity(2)))))
    assert run(capsys, "verify", sys_path, sol)[0] == EXIT_USAGE


def test_local_command(tmp_path, capsys):
    path = _write_system(tmp_path, natural_kz_system(4, [0, 1, -1]))
    code, out, _ = run(capsys, "local", path, "--pole", 1, "--json")
    assert code == EXIT_OK
    entry = json.loads(out)["poles"][0]
    assert entry["exponents"] == {"m": -1, "M": 1}
    assert entry["beta"] == "2" and entry["seeds"]["branch"] == "beta_nonzero"
    assert entry["product_invariant"][0] == ["4", "0", "0", "0"]


def test_exploratory_warning(tmp_path, capsys, caplog):
    path = _write_system(tmp_path, natural_kz_system(2, [0], rho=2))
    code, out, _ = run(capsys, "solve", path, "--max-pole-order", "auto", "--json")
    assert code == EXIT_OK and "exploratory" in caplog.text
    rep = json.loads(out)
    assert rep["solve"]["exploratory"] is True
    assert any("exploratory" in note for note in rep["notes"])
