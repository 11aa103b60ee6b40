"""Command-line interface.

Subcommands: ``gen-sn``, ``check``, ``solve``, ``verify``, ``local``.

Exit status: 0 success, 1 mathematical negative (conditions fail, no
solution, verification fails), 2 usage or parse error.  ``--json`` prints a
single report document on standard output; otherwise the same report is
rendered as indented text.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import __version__
from .errors import KZError, ParseError
from .exactalg import as_rational
from .frobenius import (
    LEFT,
    RIGHT,
    canonical_seeds,
    exponent_bounds,
    product_invariant,
    eigenspace_seed,
    recurse_right,
)
from .kzsystem import KZSystem, beta, check_conditions, degree_bounds
from .serialize import (
    dumps,
    load_solution,
    load_system,
    matrix_to_json,
    rational_to_str,
    solution_to_doc,
    system_to_doc,
)
from .solver import AUTO, adjoint_solution, solve_rational
from .symrep import discrepancy_notes, natural_kz_system
from .verify import verify, verify_adjoint_pair

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2

log = logging.getLogger("kzrational")


def _r(x):
    return None if x is None else rational_to_str(x)


def condition_section(system: KZSystem) -> tuple[dict, bool]:
    report = check_conditions(system)
    out = {
        name: {"status": c.status, "witnesses": [list(w) for w in c.witnesses]}
        for name, c in report.conditions().items()
    }
    out["all_pass"] = report.all_pass
    return out, report.all_pass


def degree_section(system: KZSystem) -> dict:
    b = degree_bounds(system)
    return {
        "T": matrix_to_json(b.T),
        "rho_T_integer_eigenvalues": [[v, k] for v, k in b.spectrum.integer_roots],
        "rho_T_characteristic_polynomial": [_r(c) for c in b.spectrum.characteristic_polynomial],
        "all_integer": b.all_integer,
        "m_T": b.m_T,
        "M_T": b.M_T,
        "deg_Q1": b.deg_Q1,
        "deg_Q2": b.deg_Q2,
    }


def local_section(system: KZSystem, k: int) -> dict:
    R = system.residue(k) * system.rho
    entry = {"k": k, "pole": _r(system.pole(k)), "beta": _r(beta(system, k))}
    try:
        m, M = exponent_bounds(R)
    except KZError as exc:
        entry["exponents"] = {"error": type(exc).__name__, "message": str(exc)}
        return entry
    entry["exponents"] = {"m": m, "M": M}
    sol = recurse_right(system, k, eigenspace_seed(R, m), m)
    entry["recursion"] = {
        "seed_exponent": m,
        "target_order": sol.series.truncation_order,
        "valid": sol.valid,
        "resonances": [
            {"exponent": r.exponent, "kernel_dimension": r.kernel_dimension,
             "compatible": r.compatible}
            for r in sol.resonance_log
        ],
    }
    try:
        seeds = canonical_seeds(system, k)
    except KZError as exc:
        entry["seeds"] = {"error": type(exc).__name__, "message": str(exc)}
        return entry
    entry["seeds"] = {
        "branch": seeds.branch,
        "b": {str(p): matrix_to_json(c) for p, c in seeds.right_dict().items()},
        "c": {str(p): matrix_to_json(c) for p, c in seeds.left_dict().items()},
    }
    if seeds.b1_published is not None:
        entry["seeds"]["b1_published"] = matrix_to_json(seeds.b1_published)
    try:
        entry["product_invariant"] = matrix_to_json(product_invariant(system, k, seeds))
    except KZError as exc:
        entry["product_invariant"] = {"error": type(exc).__name__, "message": str(exc),
                                      "matrix": matrix_to_json(exc.matrix)
                                      if getattr(exc, "matrix", None) is not None else None}
    return entry


def certificate_section(cert) -> dict:
    return {
        "side": cert.side,
        "residual_zero": cert.residual_zero,
        "fundamental": cert.fundamental,
        "det_samples": [[_r(z), _r(d)] for z, d in cert.det_samples],
        "det_identically_zero": cert.det_identically_zero,
        "rank": cert.rank,
        "poly_degree": cert.poly_degree,
        "pole_orders": {_r(a): o for a, o in cert.pole_orders.items()},
        "predicted_poly_degree": cert.predicted_poly_degree,
        "degree_matches": cert.degree_matches,
    }


def _write(path, text: str):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _render(obj, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for key, val in obj.items():
            if isinstance(val, (dict, list)) and val and not _is_flat(val):
                lines.append(f"{pad}{key}:")
                lines.extend(_render(val, indent + 1))
            else:
                lines.append(f"{pad}{key}: {_inline(val)}")
    elif isinstance(obj, list):
        for val in obj:
            if isinstance(val, (dict, list)) and not _is_flat(val):
                lines.append(f"{pad}-")
                lines.extend(_render(val, indent + 1))
            else:
                lines.append(f"{pad}- {_inline(val)}")
    else:
        lines.append(f"{pad}{_inline(obj)}")
    return lines


def _is_flat(val) -> bool:
    if isinstance(val, dict):
        return False
    return all(not isinstance(v, dict) for v in val) and all(
        not isinstance(v, list) or all(not isinstance(x, (list, dict)) for x in v) for v in val
    )


def _inline(val) -> str:
    if isinstance(val, list):
        return "[" + ", ".join(_inline(v) for v in val) + "]"
    if val is None:
        return "-"
    return str(val).lower() if isinstance(val, bool) else str(val)


def emit_report(report: dict, as_json: bool):
    if as_json:
        sys.stdout.write(dumps(report))
    else:
        sys.stdout.write("\n".join(_render(report)) + "\n")


def cmd_gen_sn(args) -> int:
    poles = [as_rational(p) for p in args.poles.split(",") if p.strip()]
    system = natural_kz_system(args.n, poles, args.rho)
    meta = {"label": f"natural representation of S_{args.n}",
            "provenance": f"kzrational {__version__} gen-sn"}
    _write(args.output, dumps(system_to_doc(system, meta)))
    return EXIT_OK


def cmd_check(args) -> int:
    system, meta = load_system(args.input)
    conditions, ok = condition_section(system)
    report = {
        "command": "check",
        "n": system.n,
        "s": system.s,
        "rho": system.rho,
        "conditions": conditions,
        "degree_bounds": degree_section(system),
        "beta": {str(k): _r(beta(system, k)) for k in range(1, system.s + 1)},
        "local": [local_section(system, k) for k in range(1, system.s + 1)],
        "notes": discrepancy_notes(system),
    }
    if meta:
        report["metadata"] = meta
    emit_report(report, args.json)
    return EXIT_OK if ok else EXIT_NEGATIVE


def _order_arg(value):
    return AUTO if value == AUTO else int(value)


def cmd_solve(args) -> int:
    system, _ = load_system(args.input)
    if abs(system.rho) > 1:
        log.warning("|rho| > 1: exploratory run; rationality is only guaranteed for rho = +-1")
    out = solve_rational(system, _order_arg(args.max_pole_order),
                         _order_arg(args.max_poly_degree), seed=args.seed)
    conditions, _ = condition_section(system)
    summary = {
        "status": out.status,
        "reason": out.reason,
        "evidence": out.evidence,
        "kernel_dimension": out.kernel_dimension,
        "max_pole_order": out.max_pole_order,
        "max_poly_degree": out.max_poly_degree,
        "required_pole_order": out.required_pole_order,
        "exploratory": out.exploratory,
        "attempts": out.attempts,
        "deg_Q1": out.W.degree if out.found else None,
    }
    report = {
        "command": "solve",
        "n": system.n,
        "s": system.s,
        "rho": system.rho,
        "conditions": conditions,
        "degree_bounds": degree_section(system),
        "beta": {str(k): _r(beta(system, k)) for k in range(1, system.s + 1)},
        "local": [local_section(system, k) for k in range(1, system.s + 1)],
        "solve": summary,
        "notes": discrepancy_notes(system) + out.notes,
    }
    if out.certificate is not None:
        summary["certificate"] = certificate_section(out.certificate)
    ok = out.found
    if out.found and args.emit_solution:
        _write(args.emit_solution, dumps(solution_to_doc(out.W, RIGHT)))
    if out.found and args.adjoint:
        try:
            Y = adjoint_solution(system, out.W, seed=args.seed)
        except KZError as exc:
            report["adjoint"] = {"status": "NotFound", "reason": str(exc)}
            ok = False
        else:
            pair_ok, C = verify_adjoint_pair(out.W, Y)
            cert = verify(system, Y, LEFT, seed=args.seed)
            report["adjoint"] = {
                "status": "Found" if pair_ok and cert.ok else "Failed",
                "deg_Q2": Y.degree,
                "W_times_Y": matrix_to_json(C) if C is not None else None,
                "certificate": certificate_section(cert),
            }
            summary["deg_Q2"] = Y.degree
            ok = ok and pair_ok and cert.ok
            if args.emit_adjoint:
                _write(args.emit_adjoint, dumps(solution_to_doc(Y, LEFT)))
    emit_report(report, args.json)
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_verify(args) -> int:
    system, _ = load_system(args.system)
    W, side = load_solution(args.solution)
    if W.rows != system.n:
        raise ParseError(f"solution has {W.rows} rows but the system is {system.n}x{system.n}",
                         "shape")
    if side == LEFT and W.cols != system.n:
        raise ParseError("left solution must have n columns", "shape")
    cert = verify(system, W, side, seed=args.seed)
    report = {"command": "verify", "certificate": certificate_section(cert), "ok": cert.ok}
    emit_report(report, args.json)
    return EXIT_OK if cert.ok else EXIT_NEGATIVE


def cmd_local(args) -> int:
    system, _ = load_system(args.input)
    ks = [args.pole] if args.pole else range(1, system.s + 1)
    entries = [local_section(system, k) for k in ks]
    report = {"command": "local", "n": system.n, "rho": system.rho, "poles": entries}
    emit_report(report, args.json)
    ok = all("error" not in e.get("exponents", {}) for e in entries)
    return EXIT_OK if ok else EXIT_NEGATIVE


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print a JSON report")
    common.add_argument("--seed", type=int, default=0,
                        help="seed for kernel search and random evaluation points")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="kzrational",
                                description="Rational solutions of KZ-type Fuchsian systems")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen-sn", parents=[common],
                       help="write the natural-representation system of S_n")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--poles", required=True, help="comma-separated rationals, e.g. 0,1/2,-3")
    g.add_argument("--rho", type=int, default=1)
    g.add_argument("-o", "--output", default=None, help="output path (default: stdout)")
    g.set_defaults(func=cmd_gen_sn)

    c = sub.add_parser("check", parents=[common], help="check hypotheses and degree bounds")
    c.add_argument("input")
    c.set_defaults(func=cmd_check)

    s = sub.add_parser("solve", parents=[common], help="construct a rational fundamental solution")
    s.add_argument("input")
    s.add_argument("--max-pole-order", default="1")
    s.add_argument("--max-poly-degree", default=AUTO)
    s.add_argument("--emit-solution", metavar="PATH")
    s.add_argument("--adjoint", action="store_true", help="also construct Y with W Y = I")
    s.add_argument("--emit-adjoint", metavar="PATH")
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", parents=[common], help="independently verify a solution file")
    v.add_argument("system")
    v.add_argument("solution")
    v.set_defaults(func=cmd_verify)

    loc = sub.add_parser("local", parents=[common], help="per-pole local data")
    loc.add_argument("input")
    loc.add_argument("--pole", type=int, default=None, help="1-based pole index")
    loc.set_defaults(func=cmd_local)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # --help and --version exit 0; argparse usage errors exit 2
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (KZError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
