"""Command-line front end.

Every command except ``verlinde`` reads a trivector file and prints one JSON
report to stdout. Diagnostics go to stderr. Exit codes: 0 success, 2 parse or
input error, 3 degenerate trivector, 4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path

from .coble import (
    DegenerateTrivectorError,
    InvariantViolation,
    certificate_sweep,
    char2_dual_cubic,
    char2_equivalence,
    comul_rank,
    extract_cubic,
    scan_loci,
)
from .exterior import Multivector, TrivectorParseError, change_field, parse_trivector
from .mpoly import format_poly
from .scalars import FieldError, FieldSpec, parse_field, prime_field
from .verlinde import SU3_RING, verlinde_table
from .w38 import annihilator, hyperdisc2, is_unstable_bruteforce, min_1ps_weight, stabilizer_dim

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_DEGENERATE = 3
EXIT_INVARIANT = 4


class InputError(ValueError):
    pass


def _load(path: str, field: str | None) -> tuple[Multivector, str]:
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    g = parse_trivector(data.decode())
    if field is not None:
        g = _to_field(g, parse_field(field))
    return g, hashlib.sha256(data).hexdigest()


def _to_field(g: Multivector, spec: FieldSpec, args=None) -> Multivector:
    if args is not None:
        args.work_field = spec.token
    if g.spec == spec:
        return g
    try:
        return change_field(g, spec)
    except FieldError as exc:
        raise InputError(str(exc)) from None


def _require(g: Multivector, n: int) -> None:
    if g.n != n:
        raise InputError(f"this command needs a trivector on k^{n}, got dim {g.n}")


# ---------------------------------------------------------------------------
# commands; each returns a JSON-ready results dict


def cmd_coble_cubic(args, g):
    _require(g, 9)
    ext = extract_cubic(g)
    if not all(ext.identities):
        raise InvariantViolation("sub-Pfaffian identities failed")
    return {
        "cubic": format_poly(ext.cubic),
        "pivot": ext.pivot,
        "identities": list(ext.identities),
        "terms": len(ext.cubic.terms),
    }


def cmd_scan(args, g):
    _require(g, 9)
    if args.p == 7 and not args.allow_p7:
        raise InputError("p = 7 scans 6.7M points; pass --allow-p7 to run it")
    g = _to_field(g, prime_field(args.p), args)
    rep = scan_loci(g, args.p, threads=args.threads)
    out = rep.as_dict()
    out["counts"] = {k: out.pop(k) for k in
                     ("total_points", "points_Y", "points_X", "rank2_count", "cubic_zero_count", "singular_count")}
    out["mismatches"] = len(rep.sing_mismatches) + len(rep.cubic_mismatches)
    return out


def cmd_duality(args, g):
    _require(g, 9)
    g = _to_field(g, prime_field(args.p), args)
    certs = certificate_sweep(g, args.p, args.count)
    return {
        "p": args.p,
        "requested": args.count,
        "found": len(certs),
        "valid": sum(c.valid for c in certs),
        "certificates": [c.as_dict() for c in certs],
    }


def cmd_instability(args, g):
    _require(g, 8)
    g = _to_field(g, prime_field(args.q), args)
    verdict = is_unstable_bruteforce(g, args.q)
    out = verdict.as_dict()
    out["min_weight"] = None
    if verdict.unstable:
        U = annihilator(verdict.witness, g.spec)
        out["min_weight"] = min_1ps_weight(g, U)
    out["hyperdisc2"] = int(hyperdisc2(g)) if args.q == 2 else None
    return out


def cmd_hyperdisc2(args, g):
    _require(g, 8)
    g = _to_field(g, prime_field(2), args)
    return {"hyperdisc2": int(hyperdisc2(g))}


def cmd_stabdim(args, g):
    return {"n": g.n, "stabilizer_dim": stabilizer_dim(g)}


def cmd_comul_rank(args, g):
    _require(g, 9)
    return {"comul_rank": comul_rank(g)}


def cmd_char2(args, g):
    _require(g, 9)
    g = _to_field(g, prime_field(2), args)
    cubic = char2_dual_cubic(g)
    rows = char2_equivalence(g, cubic)
    return {
        "cubic": format_poly(cubic),
        "points": len(rows),
        "agree": sum(r["agree"] for r in rows),
        "zeros": sum(r["cubic"] == 0 for r in rows),
        "mismatches": [r["u"] for r in rows if not r["agree"]],
        "_rows": rows,
    }


COMMANDS = {
    "coble-cubic": cmd_coble_cubic,
    "scan": cmd_scan,
    "duality": cmd_duality,
    "instability": cmd_instability,
    "hyperdisc2": cmd_hyperdisc2,
    "stabdim": cmd_stabdim,
    "comul-rank": cmd_comul_rank,
    "char2-dual": cmd_char2,
}


def _figure(command: str, results: dict, path: str) -> None:
    from . import plotting

    if command == "scan":
        plotting.rank_histogram({**results, **results["counts"]}, path)
    elif command == "char2-dual":
        plotting.char2_agreement(results["_rows"], path)
    else:
        raise InputError(f"no figure is defined for {command}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="recorded in the report; reserved for sampling")
    common.add_argument("--no-timing", action="store_true", help="omit the timing field")
    common.add_argument("--figure", metavar="PATH", help="also render a figure to PATH")

    parser = argparse.ArgumentParser(prog="trivector", description="Trivector constructions over Q and F_p.")
    sub = parser.add_subparsers(dest="command", required=True)

    def file_cmd(name, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.add_argument("file")
        sp.add_argument("--field", help="Q or Fp:<prime>; rational input is reduced")
        return sp

    file_cmd("coble-cubic", "extract the cubic from a trivector on k^9")
    sp = file_cmd("scan", "classify every point of P^8(F_p) by rank")
    sp.add_argument("--p", type=int, default=5, choices=(2, 3, 5, 7))
    sp.add_argument("--threads", type=int, default=1)
    sp.add_argument("--allow-p7", action="store_true", help="permit the 6.7M-point scan at p = 7")
    sp = file_cmd("duality", "tangent-hyperplane certificates at smooth points")
    sp.add_argument("--p", type=int, default=5, choices=(2, 3, 5, 7))
    sp.add_argument("--count", type=int, default=20)
    sp = file_cmd("instability", "exhaustive search for a destabilizing 3-space")
    sp.add_argument("--q", type=int, default=2, choices=(2, 3))
    file_cmd("hyperdisc2", "Pfaffian of the squaring map over F_2")
    file_cmd("stabdim", "dimension of the infinitesimal stabilizer in gl_n")
    file_cmd("comul-rank", "rank of x -> contraction of the trivector")
    file_cmd("char2-dual", "dual cubic over F_2 against quotient hyperdiscriminants")

    sp = sub.add_parser("verlinde", parents=[common], help="series coefficients against the closed form")
    sp.add_argument("--max-d", type=int, default=60)
    sp.add_argument("--json", action="store_true", help="emit a JSON report instead of the table")
    return parser


def render(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2)


def _fail(code: int, reason: str, message: str) -> int:
    print(json.dumps({"error": reason, "message": message}, sort_keys=True), file=sys.stderr)
    return code


def _verlinde(args) -> int:
    rows = verlinde_table(args.max_d)
    ok = all(a == b for _, a, b in rows)
    if args.figure:
        from .plotting import verlinde_plot

        verlinde_plot(rows, args.figure)
    if args.json:
        report = {
            "schema_version": SCHEMA_VERSION,
            "command": "verlinde",
            "input_digest": None,
            "field": None,
            "seed": args.seed,
            "results": {
                "weights": list(SU3_RING.weights),
                "relation_degree": SU3_RING.relation_degree,
                "rows": [list(r) for r in rows],
                "pass": ok,
            },
        }
        print(render(report))
    else:
        width = max(len(str(r[1])) for r in rows)
        print(f"{'d':>3}  {'chi(d)':>{width}}")
        for d, series, closed in rows:
            print(f"{d:>3}  {series:>{width}}" + ("" if series == closed else f"  != {closed}"))
        print("PASS" if ok else "FAIL")
    return EXIT_OK if ok else EXIT_INVARIANT


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "verlinde":
        return _verlinde(args)
    start = time.perf_counter()
    try:
        g, digest = _load(args.file, args.field)
        results = COMMANDS[args.command](args, g)
        rows = results.pop("_rows", None)
        if args.figure:
            _figure(args.command, {**results, "_rows": rows}, args.figure)
    except (TrivectorParseError, FieldError) as exc:
        return _fail(EXIT_PARSE, "parse-error", str(exc))
    except DegenerateTrivectorError as exc:
        return _fail(EXIT_DEGENERATE, "degenerate-trivector", str(exc))
    except InvariantViolation as exc:
        return _fail(EXIT_INVARIANT, "invariant-violation", str(exc))
    except (InputError, ValueError) as exc:
        return _fail(EXIT_PARSE, "invalid-input", str(exc))
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": args.command,
        "input_digest": digest,
        "field": getattr(args, "work_field", g.spec.token),
        "seed": args.seed,
        "results": results,
    }
    if not args.no_timing:
        report["timing"] = {"seconds": round(time.perf_counter() - start, 3)}
    print(render(report))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
