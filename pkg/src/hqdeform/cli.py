"""Command-line entry point.  Every subcommand prints one JSON document.

Exit status: 0 pass, 1 verified failure, 2 usage or configuration error.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from typing import List, Optional

from . import __version__
from .cohomology import nontriviality_verdict
from .config import ConfigError, load, read_config, validation_report
from .crossed_product import format_element
from .deformation import DeformationError, deformation_suite, deformed_product
from .fixtures import fixture_path, list_fixtures
from .hopf_hq import HopfError, hopf_check
from .hq_structure import StructureError
from .parsing import ParseError, parse_element
from .resolution import resolution_check
from .scalars import FieldError, FieldSpec

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

# (field, q) pairs covering q = +-1 and primitive cube and fourth roots
HOPF_MATRIX = [("Q", "1"), ("Q", "-1"), ("fp:7", "2"), ("fp:13", "3"), ("fp:13", "5")]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _status(ok: bool) -> int:
    return EXIT_PASS if ok else EXIT_FAIL


def cmd_validate(args) -> tuple:
    rep = validation_report(args.config, args.mode, args.seed)
    out = rep.to_dict()
    out["mode"] = args.mode
    return out, _status(rep.ok)


def cmd_deform(args) -> tuple:
    L = load(args.config)
    try:
        a = parse_element(args.a, L.ctx)
        b = parse_element(args.b, L.ctx)
    except ParseError as exc:
        raise ConfigError("element", str(exc)) from None
    ab = deformed_product(L.structure, a, b)
    out = {"a": format_element(a), "b": format_element(b), "product": str(ab), "coefficients": ab.to_list()}
    return out, EXIT_PASS


def cmd_assoc(args) -> tuple:
    L = load(args.config)
    t = time.perf_counter()
    rep = deformation_suite(L.structure, samples=args.samples, seed=args.seed, max_degree=args.max_degree)
    out = rep.to_dict()
    out.update(samples=args.samples, seed=args.seed, max_degree=args.max_degree)
    if args.timing:
        out["seconds"] = round(time.perf_counter() - t, 3)
    return out, _status(rep.ok)


def cmd_nontrivial(args) -> tuple:
    L = load(args.config)
    out = nontriviality_verdict(L.structure, D=args.degree_bound, samples=args.samples, seed=args.seed)
    return out, _status(out["status"] == "pass")


def cmd_hopf(args) -> tuple:
    pairs = HOPF_MATRIX if args.all else [(args.field, args.q)]
    runs = []
    ok = True
    for fname, qtxt in pairs:
        try:
            fld = FieldSpec.parse(fname)
            q = fld.parse_scalar(qtxt)
        except (FieldError, ValueError, ZeroDivisionError) as exc:
            raise ConfigError("q", str(exc)) from None
        t = time.perf_counter()
        rep = hopf_check(fld, q, bound=args.pbw_bound, order=args.series_order)
        d = rep.to_dict()
        d.update(field=fname, q=qtxt)
        if args.timing:
            d["seconds"] = round(time.perf_counter() - t, 3)
        runs.append(d)
        ok = ok and rep.ok
    return {"status": "pass" if ok else "fail", "runs": runs, "pbw_bound": args.pbw_bound,
            "series_order": args.series_order}, _status(ok)


def cmd_resolution(args) -> tuple:
    L = load(args.config)
    rep = resolution_check(L.ctx, max_total=args.max_total_degree, y_weight=args.y_weight, seed=args.seed)
    out = rep.to_dict()
    out.update(max_total_degree=args.max_total_degree, y_weight=args.y_weight, seed=args.seed)
    return out, _status(rep.ok)


def run_fixture(name: str) -> dict:
    """validate -> assoc-check -> nontrivial -> resolution-check, compared with the recorded verdicts."""
    raw = read_config(fixture_path(name))
    expected = raw.get("expected", {})
    L = load(raw)
    st = L.structure
    got = {
        "validate": validation_report(raw).to_dict()["status"],
        "validate_general": validation_report(raw, "general").to_dict()["status"],
        "q": st.ctx.field.format(st.q),
        "l": st.l,
        "assoc": deformation_suite(st).to_dict()["status"],
    }
    v = nontriviality_verdict(st)
    got["nontrivial"] = {"verdict": v["verdict"], "basis": v["basis"], "obstruction": v["direct_obstruction"]["status"],
                         "coboundary": v["coboundary"]["status"]}
    got["theta_bar"] = v["theta_bar_phi"]
    got["resolution"] = resolution_check(L.ctx).to_dict()["status"]
    mism = {k: {"expected": expected[k], "got": got.get(k)} for k in sorted(expected) if got.get(k) != expected[k]}
    return {"name": name, "status": "pass" if not mism else "fail", "got": got, "mismatches": mism}


def cmd_examples(args) -> tuple:
    if args.action == "list":
        return {"fixtures": list_fixtures()}, EXIT_PASS
    names = list_fixtures() if args.name in (None, "all") else [args.name]
    for n in names:
        if fixture_path(n) is None:
            raise ConfigError("<fixture>", f"unknown fixture {n!r}")
    if args.action == "show":
        return {n: read_config(fixture_path(n)) for n in names}, EXIT_PASS
    results = [run_fixture(n) for n in names]
    ok = all(r["status"] == "pass" for r in results)
    return {"status": "pass" if ok else "fail", "results": results}, _status(ok)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hqdeform", description="Exact checks for H_q-module algebra structures and their deformations.")
    p.add_argument("--version", action="version", version=f"hqdeform {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("validate", help="check a structure config")
    v.add_argument("config", help="config path or fixture name")
    v.add_argument("--mode", choices=["second-case", "general"], default="second-case")
    v.add_argument("--seed", type=int, default=0)
    v.set_defaults(fn=cmd_validate)

    d = sub.add_parser("deform", help="deformed product of two elements")
    d.add_argument("config")
    d.add_argument("--a", required=True)
    d.add_argument("--b", required=True)
    d.set_defaults(fn=cmd_deform)

    a = sub.add_parser("assoc-check", help="seeded associativity and unit checks")
    a.add_argument("config")
    a.add_argument("--samples", type=int, default=100)
    a.add_argument("--seed", type=int, default=42)
    a.add_argument("--max-degree", type=int, default=3)
    a.add_argument("--timing", action="store_true", help="include wall time (breaks byte-for-byte output)")
    a.set_defaults(fn=cmd_assoc)

    n = sub.add_parser("nontrivial", help="cocycle, coboundary search and obstruction for the infinitesimal")
    n.add_argument("config")
    n.add_argument("--degree-bound", type=int, default=4)
    n.add_argument("--samples", type=int, default=100)
    n.add_argument("--seed", type=int, default=7)
    n.set_defaults(fn=cmd_nontrivial)

    h = sub.add_parser("hopf-check", help="Hopf axioms and twisting element")
    h.add_argument("--field", default="Q")
    h.add_argument("--q", default="1")
    h.add_argument("--pbw-bound", type=int, default=3)
    h.add_argument("--series-order", type=int, default=6)
    h.add_argument("--all", action="store_true", help="run the standard (field, q) matrix")
    h.add_argument("--timing", action="store_true")
    h.set_defaults(fn=cmd_hopf)

    r = sub.add_parser("resolution-check", help="identities of the resolution and comparison maps")
    r.add_argument("config")
    r.add_argument("--max-total-degree", type=int, default=3)
    r.add_argument("--y-weight", type=int, default=4)
    r.add_argument("--seed", type=int, default=0)
    r.set_defaults(fn=cmd_resolution)

    e = sub.add_parser("examples", help="shipped fixtures")
    e.add_argument("action", choices=["list", "run", "show"])
    e.add_argument("name", nargs="?")
    e.set_defaults(fn=cmd_examples)
    return p


def run_command(argv: Optional[List[str]] = None) -> tuple:
    """Returns (exit status, JSON-able report)."""
    try:
        args = build_parser().parse_args(argv)
        out, code = args.fn(args)
    except UsageError as exc:
        return EXIT_USAGE, {"status": "error", "error": "usage", "message": str(exc)}
    except ConfigError as exc:
        return EXIT_USAGE, {"status": "error", "error": "config", "field": exc.field, "message": str(exc)}
    except StructureError as exc:
        return EXIT_FAIL, {"status": "fail", "checks": [{"id": exc.condition, "status": "fail",
                                                         "witness": {"message": exc.message}}]}
    except (HopfError, DeformationError) as exc:
        return EXIT_FAIL, {"status": "fail", "error": type(exc).__name__, "message": str(exc)}
    return code, out


def main(argv: Optional[List[str]] = None) -> int:
    try:
        code, out = run_command(argv)
    except SystemExit as exc:
        # --help / --version
        return int(exc.code or 0)
    sys.stdout.write(dump(out) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
