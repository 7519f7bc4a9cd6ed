"""Command-line interface: ``hyperpos {certify,fracint,emit-region,verify}``.

Results go to stdout as JSON (or CSV for emit-region), diagnostics to stderr.
Exit codes: 0 verdict reached, 1 indeterminate or unsupported case,
2 bad input, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict

from . import regions as R
from .certify import Verdict, certify, numeric_sign_scan
from .errors import (CaseUnsupported, HyperposError, InvalidParameter, OrderViolation, PrecisionLoss,
                     QuadratureFailure)
from .fracint import FracIntParams, FracVerdict, fracint_quadrature, fracint_value, map_params, theorem_b_classify
from .verify import SUITES, run_suite

SCHEMA = "hyperpos/1"
EXIT_OK, EXIT_INDETERMINATE, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _decimal(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a decimal number: {text!r}")
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"not a finite number: {text!r}")
    return v


def _positive(text: str) -> float:
    v = _decimal(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return v


def _slice(text: str) -> float:
    key, sep, val = text.partition("=")
    if key.strip() != "b3" or not sep:
        raise argparse.ArgumentTypeError("slice must look like b3=VALUE")
    return _decimal(val)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if hasattr(x, "value") and hasattr(x, "name"):
        return x.value
    if isinstance(x, float) and not math.isfinite(x):
        return None if math.isnan(x) else ("inf" if x > 0 else "-inf")
    return x


def _dump(payload) -> str:
    return json.dumps(_jsonable({"schema": SCHEMA, **payload}), indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------- commands

def cmd_certify(args):
    a = (args.a1, args.a2)
    b = (args.b1, args.b2, args.b3)
    cert = certify(a, b, evidence_n=args.evidence)
    out = {"command": "certify", "a": cert.a, "b": cert.b, "verdict": cert.verdict,
           "theorem": cert.theorem, "active_constraints": cert.active_constraints, "notes": cert.notes}
    if cert.evidence is not None:
        ev = cert.evidence
        out["evidence"] = {"kind": ev.kind, "nu": ev.nu, "min_coefficient": ev.min_value, "argmin": ev.argmin}
    if args.scan is not None:
        rep = numeric_sign_scan(cert.a, cert.b, args.scan, max(1000, int(100 * args.scan)))
        out["scan"] = asdict(rep)
    code = EXIT_INDETERMINATE if cert.verdict is Verdict.INDETERMINATE else EXIT_OK
    return code, _dump(out)


def cmd_fracint(args):
    p = FracIntParams(args.alpha, args.lam, args.mu)
    v = theorem_b_classify(p)
    out = {"command": "fracint", "alpha": p.alpha, "lambda": p.lam, "mu": p.mu,
           "verdict": v.verdict, "source": v.source, "notes": v.notes}
    if args.x is not None:
        val = fracint_value(p, args.x).value
        quad, scale = fracint_quadrature(p, args.x, full_output=True)
        out.update(x=args.x, value_at_x=val, quadrature_at_x=quad, relative_gap=abs(val - quad) / scale)
    if args.scan is not None:
        m = map_params(p)
        # the integral has the sign of the 2F3 at x/2
        rep = numeric_sign_scan(m.a, m.b, args.scan / 2, max(1000, int(100 * args.scan)))
        scan = asdict(rep)
        scan["argmin_x"] *= 2
        scan["x_max"] = args.scan
        if scan["first_sign_change"] is not None:
            scan["first_sign_change"] *= 2
        scan["empirical"] = True
        out["scan"] = scan
    code = EXIT_INDETERMINATE if v.verdict is FracVerdict.OUT_OF_THEOREM else EXIT_OK
    return code, _dump(out)


_POLYHEDRA = {
    "gammaA": R.gamma_A_constraints,
    "gammaB": R.gamma_B_constraints,
    "gammaAB": R.gamma_ab_constraints,
    "necessity": R.necessity_constraints,
}


def _hexagon(a, which):
    a1, a2 = a
    if which == "B" and not a1 < a2:
        raise OrderViolation("the hexagon H_B needs a1 < a2")
    verts = R.vertices_A(a) if which == "A" else R.vertices_B(a)
    seen = {}
    for name, v in verts.items():
        if not any(all(abs(x - y) <= R.tol(y) for x, y in zip(v, w)) for w in seen.values()):
            seen[name] = v
    s = sum(R.xi(a) if which == "A" else R.eta(a))
    cons = (R.gamma_A_constraints(a) if which == "A" else R.gamma_B_constraints(a))
    return seen, s, cons


def cmd_emit_region(args):
    a = (args.a1, args.a2)
    region = args.region
    doc = {"command": "emit-region", "a": a, "region": region}
    if region in _POLYHEDRA:
        cons = _POLYHEDRA[region](a)
        doc["kind"] = "polyhedron"
        if region == "gammaAB":
            doc["case"] = R.gamma_ab_case(a)
        doc["halfspaces"] = [{"name": c.name, "coeffs": c.coeffs, "rhs": c.rhs} for c in cons]
        if args.slice is None:
            verts, rays = R.polyhedron_vertices(cons)
            doc["vertices"] = verts
            doc["rays"] = rays
        else:
            verts, rays = R.polyhedron_vertices(cons, fixed={2: args.slice})
            doc["slice"] = {"b3": args.slice, "vertices": verts, "rays": rays}
    else:
        which = "A" if region == "hexA" else "B"
        verts, plane, cons = _hexagon(a, which)
        doc["kind"] = "polygon"
        doc["plane"] = {"coeffs": (1.0, 1.0, 1.0), "rhs": plane}
        if args.slice is None:
            doc["vertices"] = [{"label": k, "point": v} for k, v in verts.items()]
        else:
            pts, _ = R.polyhedron_vertices(cons, equalities=[((1.0, 1.0, 1.0), plane)], fixed={2: args.slice})
            doc["slice"] = {"b3": args.slice, "vertices": pts}
    if args.format == "json":
        return EXIT_OK, _dump(doc)
    return EXIT_OK, _region_csv(doc)


def _region_csv(doc) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["record", "name", "c1", "c2", "c3", "rhs"])
    for h in doc.get("halfspaces", []):
        w.writerow(["halfspace", h["name"], *map(repr, h["coeffs"]), repr(h["rhs"])])
    if "plane" in doc:
        w.writerow(["plane", "sum", *map(repr, doc["plane"]["coeffs"]), repr(doc["plane"]["rhs"])])
    for v in doc.get("vertices", []):
        if isinstance(v, dict):
            w.writerow(["vertex", v["label"], *map(repr, v["point"]), ""])
        else:
            w.writerow(["vertex", "", *map(repr, v), ""])
    for r in doc.get("rays", []):
        w.writerow(["ray", "", *map(repr, r), ""])
    if "slice" in doc:
        sl = doc["slice"]
        for v in sl["vertices"]:
            w.writerow(["slice_vertex", "", *map(repr, v), repr(sl["b3"]), ""])
        for r in sl.get("rays", []):
            w.writerow(["slice_ray", "", *map(repr, r), "0.0", ""])
    return buf.getvalue()


def cmd_verify(args):
    summary = run_suite(args.suite, args.seed, args.trials)
    summary["command"] = "verify"
    return (EXIT_OK if summary["ok"] else EXIT_NUMERIC), _dump(summary)


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="hyperpos", description="Positivity certificates for 2F3(a1, a2; b1, b2, b3; -x^2).")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("certify", help="certify the sign of Phi at (a, b)")
    for name in ("a1", "a2", "b1", "b2", "b3"):
        c.add_argument(f"--{name}", type=_positive, required=True)
    c.add_argument("--evidence", type=int, metavar="N", help="include expansion coefficients up to N")
    c.add_argument("--scan", type=_positive, metavar="XMAX", help="add a numerical sign scan on (0, XMAX]")
    c.set_defaults(func=cmd_certify)

    f = sub.add_parser("fracint", help="classify int_0^x (x-t)^lambda t^mu J_alpha(t) dt")
    f.add_argument("--alpha", type=_decimal, required=True)
    f.add_argument("--lambda", dest="lam", type=_decimal, required=True)
    f.add_argument("--mu", type=_decimal, required=True)
    f.add_argument("--x", type=_positive, help="also evaluate the integral both ways at x")
    f.add_argument("--scan", type=_positive, metavar="XMAX", help="add an empirical sign scan")
    f.set_defaults(func=cmd_fracint)

    e = sub.add_parser("emit-region", help="emit a region as half-spaces or vertices")
    e.add_argument("--a1", type=_positive, required=True)
    e.add_argument("--a2", type=_positive, required=True)
    e.add_argument("--region", choices=("gammaA", "gammaB", "gammaAB", "hexA", "hexB", "necessity"),
                   required=True)
    e.add_argument("--format", choices=("json", "csv"), default="json")
    e.add_argument("--slice", type=_slice, metavar="b3=V", help="cut at a fixed b3")
    e.set_defaults(func=cmd_emit_region)

    v = sub.add_parser("verify", help="run a randomized self-check suite")
    v.add_argument("--suite", choices=SUITES, required=True)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--trials", type=int, default=20)
    v.set_defaults(func=cmd_verify)
    return ap


def run(argv=None):
    """Parse and execute; returns (exit_code, stdout_text, stderr_text)."""
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        return EXIT_INPUT, "", f"hyperpos: {exc}\n"
    except SystemExit as exc:  # --help
        return int(exc.code or 0), "", ""
    try:
        code, text = args.func(args)
        return code, text, ""
    except (CaseUnsupported, OrderViolation) as exc:
        return EXIT_INDETERMINATE, _dump({"command": args.command, "error": type(exc).__name__,
                                          "message": str(exc)}), f"hyperpos: {exc}\n"
    except InvalidParameter as exc:
        return EXIT_INPUT, "", f"hyperpos: {exc}\n"
    except (PrecisionLoss, QuadratureFailure, HyperposError) as exc:
        return EXIT_NUMERIC, "", f"hyperpos: {type(exc).__name__}: {exc}\n"


def main(argv=None) -> int:
    code, out, err = run(argv)
    if out:
        sys.stdout.write(out)
    if err:
        sys.stderr.write(err)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
