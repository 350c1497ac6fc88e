"""Command-line front end: coeffs, asympt, oracle, verify, table.

Exit codes: 0 ok, 1 verification failure, 2 unsupported class or feature,
3 budget exceeded, 64 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction
from typing import Optional, Sequence

from .inversion import (HypothesisError, ProfileError, compute_profile, convergence_report,
                        counts_from_series, interval_json, lagrange_coefficients,
                        matching_roundings, reference_matches, verify_hypotheses)
from .netclass import REGISTRY, derive_phi, lookup, reference_table, tree_child_equation
from .numerics import Interval, decimal_round
from .oracle import BudgetExceeded, count_class, to_arclist
from .series import fixed_point_solve

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_UNSUPPORTED = 2
EXIT_BUDGET = 3
EXIT_USAGE = 64

THREADS_ENV = "LVL2NET_THREADS"
DEFAULT_CLASS = "level2-tree-child"


class UsageError(Exception):
    pass


class Unsupported(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on bad usage; this contract reserves 2 for unsupported classes."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def thread_count(environ=None) -> int:
    """Threads requested through the environment. Work is serial; the value is validated and reported."""
    environ = os.environ if environ is None else environ
    raw = environ.get(THREADS_ENV, "1")
    try:
        value = int(raw)
    except ValueError:
        raise UsageError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None
    if value < 1:
        raise UsageError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return value


def _spec(name: str):
    try:
        return lookup(name)
    except KeyError as exc:
        raise Unsupported(exc.args[0]) from None


def _equation_spec(name: str):
    spec = _spec(name)
    if not spec.has_equation:
        raise Unsupported(f"class {name}: no functional equation available")
    return spec


# ---------------------------------------------------------------------------
# Output helpers
# ---------------------------------------------------------------------------


def _csv(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _interval_text(iv: Interval, digits: int) -> str:
    d = interval_json(iv, digits)
    return f"[{d['lo']}, {d['hi']}]"


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_coeffs(args, out) -> int:
    if args.order < 1:
        raise UsageError("--order must be >= 1")
    spec = _equation_spec(args.class_name)
    series = fixed_point_solve(spec.equation, args.order, method=args.method)
    counts = counts_from_series(series)
    rows = [(n, series.coeffs[n], counts[n - 1]) for n in range(1, args.order + 1)]
    if args.format == "json":
        out.write(_json({
            "class": spec.name,
            "order": args.order,
            "rows": [{"n": n, "coefficient": str(c), "count": t} for n, c, t in rows],
        }))
    elif args.format == "csv":
        out.write(_csv(["n", "coefficient", "count"], [(n, str(c), t) for n, c, t in rows]))
    else:
        out.write(f"# {spec.name}: n, [x^n]T, t_n = n! [x^n]T\n")
        for n, c, t in rows:
            out.write(f"{n}\t{c}\t{t}\n")
    return EXIT_OK


def _verdicts(spec, profile) -> dict:
    out = {}
    for name, ref in (("c", spec.reference_c), ("gamma", spec.reference_gamma)):
        if ref is not None:
            iv = getattr(profile, name)
            out[name] = {"reference": ref,
                         "verdict": "MATCH" if reference_matches(iv, ref) else "MISMATCH"}
    return out


def cmd_asympt(args, out) -> int:
    if args.digits < 1:
        raise UsageError("--digits must be >= 1")
    spec = _equation_spec(args.class_name)
    phi = derive_phi(spec.equation)
    try:
        profile = compute_profile(phi, args.digits)
    except HypothesisError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_VERIFY
    except ProfileError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_VERIFY
    verdicts = _verdicts(spec, profile)
    names = ("tau", "rho", "gamma", "c")
    roundings = {k: matching_roundings(getattr(profile, k), args.digits) for k in names}
    shown = args.digits + 3
    failed = any(v["verdict"] == "MISMATCH" for v in verdicts.values())
    if args.format == "json":
        doc = profile.to_dict()
        doc["class"] = spec.name
        doc["phi"] = {"num": str(phi.num), "den": str(phi.den)}
        doc["roundings"] = roundings
        doc["references"] = verdicts
        out.write(_json(doc))
    elif args.format == "csv":
        rows = []
        for k in names:
            iv = interval_json(getattr(profile, k), shown)
            v = verdicts.get(k, {})
            rows.append((k, iv["lo"], iv["hi"], " ".join(roundings[k]),
                         v.get("reference", ""), v.get("verdict", "")))
        out.write(_csv(["quantity", "lo", "hi", "rounding", "reference", "verdict"], rows))
    else:
        out.write(f"class {spec.name}\n")
        out.write(f"phi(z) = ({phi.num}) / ({phi.den})\n")
        out.write("hypotheses: " + ("all pass" if profile.report.ok else
                                    ", ".join(profile.report.failures())) + "\n")
        for k in names:
            iv = getattr(profile, k)
            line = f"{k:<6}in {_interval_text(iv, shown)}  rounds to {' or '.join(roundings[k])}"
            if k in verdicts:
                line += f"  reference {verdicts[k]['reference']}: {verdicts[k]['verdict']}"
            out.write(line + "\n")
    return EXIT_VERIFY if failed else EXIT_OK


def cmd_oracle(args, out) -> int:
    if args.n < 1:
        raise UsageError("--n must be >= 1")
    if args.r_max is not None and args.r_max < 0:
        raise UsageError("--r-max must be >= 0")
    spec = _spec(args.class_name)
    if spec.name == "catalan":
        raise Unsupported("class catalan is a control equation with no network predicate")
    try:
        result = count_class(args.n, spec, r_max=args.r_max, saturated=args.saturate,
                             budget=args.budget, keep_networks=args.stream,
                             allow_parallel=args.allow_parallel)
    except BudgetExceeded as exc:
        sys.stderr.write(f"budget exceeded; partial progress: {json.dumps(exc.progress)}\n")
        return EXIT_BUDGET
    unstable = args.saturate and not result.saturated
    summary = {
        "class": spec.name,
        "n": result.n,
        "r_max": result.r_max,
        "count": result.count,
        "by_reticulations": result.by_reticulations,
        "saturated": result.saturated,
        "extra_at_r_max_plus_1": result.extra_at_r_max_plus_1,
    }
    if args.stream:
        # records go to stdout for piping; the summary goes to stderr
        for net in result.networks:
            out.write(to_arclist(net) + "\n")
        sys.stderr.write(json.dumps(summary) + "\n")
    elif args.format == "json":
        out.write(_json(summary))
    elif args.format == "csv":
        out.write(_csv(["class", "n", "r_max", "count", "saturated", "extra_at_r_max_plus_1"],
                       [(spec.name, result.n, result.r_max, result.count,
                         "" if result.saturated is None else str(result.saturated).lower(),
                         "" if result.extra_at_r_max_plus_1 is None
                         else result.extra_at_r_max_plus_1)]))
    else:
        out.write(f"{result.count}\n")
        out.write(f"# {spec.name} n={result.n} r_max={result.r_max} "
                  f"by reticulations {result.by_reticulations}\n")
        if args.saturate:
            state = "stable" if result.saturated else "NOT stable"
            out.write(f"# saturation at r_max+1: {result.extra_at_r_max_plus_1} extra, {state}\n")
    return EXIT_VERIFY if unstable else EXIT_OK


def _convergence_points(order: int) -> list[int]:
    pts = [n for n in (1, 2, 5, 10, 20, 50, 100, 200, 500) if n < order]
    return pts + [order]


def run_verify(order: int, n_max: int, budget: Optional[int] = None) -> dict:
    """Fixed point vs Lagrange, series vs oracle, hypotheses, convergence. Stops at nothing; collects all."""
    spec = REGISTRY[DEFAULT_CLASS]
    phi = derive_phi(tree_child_equation())
    checks: list[dict] = []

    series = fixed_point_solve(spec.equation, order)
    lagrange = lagrange_coefficients(phi, order)
    bad = next((n for n in range(1, order + 1) if series.coeffs[n] != lagrange[n - 1]), None)
    checks.append({"name": "fixed point = Lagrange", "through": order, "pass": bad is None,
                   "detail": "" if bad is None else f"first difference at n={bad}"})
    counts = counts_from_series(series)

    oracle_counts = []
    oracle_ok = True
    detail = ""
    for n in range(1, n_max + 1):
        res = count_class(n, spec, saturated=True, budget=budget)
        oracle_counts.append({"n": n, "oracle": res.count, "series": counts[n - 1],
                              "extra_at_r_max_plus_1": res.extra_at_r_max_plus_1})
        if oracle_ok and (res.count != counts[n - 1] or not res.saturated):
            oracle_ok = False
            detail = (f"n={n}: oracle {res.count} (extra {res.extra_at_r_max_plus_1}) "
                      f"vs series {counts[n - 1]}")
    checks.append({"name": "oracle = series", "through": n_max, "pass": oracle_ok,
                   "detail": detail})

    report = verify_hypotheses(phi, check_order=max(order, 200))
    checks.append({"name": "hypotheses", "pass": report.ok,
                   "detail": ", ".join(report.failures())})

    profile = compute_profile(phi, 10)
    ratios = dict(convergence_report(counts, profile, 1, order))
    err = {n: abs(iv - 1) for n, iv in ratios.items()}
    table = [{"n": n, "ratio": interval_json(ratios[n], 8)} for n in _convergence_points(order)]
    if order >= 5:
        ok = err[order].hi < Fraction(1, 10)
        checks.append({"name": "convergence |ratio-1| < 0.1", "at": order, "pass": ok,
                       "detail": "" if ok else f"error {decimal_round(err[order].hi, 6)}"})
    if order > 20:
        ok = err[order].hi < err[20].lo
        checks.append({"name": "convergence error shrinks", "from": 20, "to": order, "pass": ok,
                       "detail": ""})
    failing = next((c for c in checks if not c["pass"]), None)
    return {
        "order": order,
        "n_max": n_max,
        "counts": counts[:max(n_max, min(order, 8))],
        "oracle": oracle_counts,
        "checks": checks,
        "convergence": table,
        "status": "PASS" if failing is None else "FAIL",
        "first_failure": None if failing is None else failing["name"],
    }


def cmd_verify(args, out) -> int:
    if args.order < 1 or args.n_max < 1:
        raise UsageError("--order and --n-max must be >= 1")
    if args.order < args.n_max:
        raise UsageError("--order must be >= --n-max")
    try:
        report = run_verify(args.order, args.n_max, args.budget)
    except BudgetExceeded as exc:
        sys.stderr.write(f"budget exceeded; partial progress: {json.dumps(exc.progress)}\n")
        return EXIT_BUDGET
    if args.format == "json":
        out.write(_json(report))
    elif args.format == "csv":
        out.write(_csv(["check", "pass", "detail"],
                       [(c["name"], str(c["pass"]).lower(), c["detail"]) for c in report["checks"]]))
    else:
        for c in report["checks"]:
            out.write(f"{'PASS' if c['pass'] else 'FAIL'}  {c['name']}"
                      + (f"  ({c['detail']})" if c["detail"] else "") + "\n")
        out.write("oracle vs series: " + ", ".join(
            f"t{o['n']}={o['oracle']}/{o['series']}" for o in report["oracle"]) + "\n")
        out.write("convergence t_n / (c n^(n-1) gamma^n):\n")
        for row in report["convergence"]:
            out.write(f"  n={row['n']:<5} [{row['ratio']['lo']}, {row['ratio']['hi']}]\n")
        out.write(report["status"] + "\n")
    if report["status"] != "PASS":
        sys.stderr.write(f"first failing item: {report['first_failure']}\n")
        return EXIT_VERIFY
    return EXIT_OK


def cmd_table(args, out) -> int:
    if args.digits < 1:
        raise UsageError("--digits must be >= 1")
    records = []
    for spec in reference_table():
        rec = spec.to_dict()
        rec["computable"] = spec.has_equation
        rec["computed_c"] = rec["computed_gamma"] = None
        rec["verdict_c"] = rec["verdict_gamma"] = None
        if spec.has_equation:
            profile = compute_profile(derive_phi(spec.equation), args.digits)
            for k in ("c", "gamma"):
                iv = getattr(profile, k)
                rec[f"computed_{k}"] = {**interval_json(iv, args.digits + 3),
                                        "rounding": matching_roundings(iv, args.digits)}
            for k, v in _verdicts(spec, profile).items():
                rec[f"verdict_{k}"] = v["verdict"]
        records.append(rec)
    if args.format == "json":
        out.write(_json(records))
        return EXIT_OK
    if args.format == "csv":
        rows = []
        for r in records:
            rows.append((r["name"], str(r["outer_planar"]).lower(), r["reference_c"],
                         r["reference_gamma"], str(r["computable"]).lower(),
                         " ".join(r["computed_c"]["rounding"]) if r["computed_c"] else "",
                         " ".join(r["computed_gamma"]["rounding"]) if r["computed_gamma"] else "",
                         r["verdict_c"] or "", r["verdict_gamma"] or ""))
        out.write(_csv(["class", "outer_planar", "reference_c", "reference_gamma", "computable",
                        "computed_c", "computed_gamma", "verdict_c", "verdict_gamma"], rows))
        return EXIT_OK
    by_name = {r["name"]: r for r in records}
    kinds = ["general", "tree-child", "galled", "gtc"]
    width = 26
    out.write(" " * 14 + "".join(f"{k:<{width}}" for k in kinds) + "\n")
    for label, suffix in (("arbitrary", ""), ("outer planar", "-outerplanar")):
        cells = [by_name[f"level2-{k}{suffix}"] for k in kinds]
        out.write(f"{label:<14}" + "".join(
            f"{'c=' + c['reference_c']:<{width}}" for c in cells) + "\n")
        out.write(" " * 14 + "".join(
            f"{'gamma=' + c['reference_gamma']:<{width}}" for c in cells) + "\n")
    out.write("\ncomputed:\n")
    for r in records:
        if r["computable"]:
            out.write(f"  {r['name']}: c={' or '.join(r['computed_c']['rounding'])} "
                      f"({r['verdict_c']} vs {r['reference_c']}), "
                      f"gamma={' or '.join(r['computed_gamma']['rounding'])} "
                      f"({r['verdict_gamma']} vs {r['reference_gamma']})\n")
        else:
            out.write(f"  {r['name']}: not computable (no functional equation)\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lvl2net", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, with_class=True):
        if with_class:
            p.add_argument("--class", dest="class_name", default=DEFAULT_CLASS,
                           help=f"network class (default {DEFAULT_CLASS})")
        p.add_argument("--format", choices=("json", "csv", "text"), default="text")

    p = sub.add_parser("coeffs", help="exact EGF coefficients and counts")
    common(p)
    p.add_argument("--order", type=int, default=8)
    p.add_argument("--method", choices=("newton", "iterate"), default="newton")
    p.set_defaults(func=cmd_coeffs)

    p = sub.add_parser("asympt", help="certified asymptotic constants")
    common(p)
    p.add_argument("--digits", type=int, default=10)
    p.set_defaults(func=cmd_asympt)

    p = sub.add_parser("oracle", help="brute-force isomorphism-class count")
    common(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r-max", dest="r_max", type=int, default=None,
                   help="reticulation bound (default: class-specific)")
    p.add_argument("--saturate", action="store_true",
                   help="re-run at r_max+1 and report whether the count is stable")
    p.add_argument("--stream", action="store_true",
                   help="write arc-list records to stdout, summary to stderr")
    p.add_argument("--budget", type=int, default=None,
                   help="maximum number of candidate networks to examine")
    p.add_argument("--allow-parallel", action="store_true",
                   help="keep networks with doubled arcs")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("verify", help="cross-check series, Lagrange, oracle and asymptotics")
    common(p, with_class=False)
    p.add_argument("--order", type=int, default=30)
    p.add_argument("--n-max", dest="n_max", type=int, default=3)
    p.add_argument("--budget", type=int, default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("table", help="reference constants with computed values")
    common(p, with_class=False)
    p.add_argument("--digits", type=int, default=10)
    p.set_defaults(func=cmd_table)
    return parser


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        thread_count()
        return args.func(args, out)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except Unsupported as exc:
        sys.stderr.write(f"unsupported: {exc}\n")
        return EXIT_UNSUPPORTED


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
