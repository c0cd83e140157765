"""Command-line front end.

Subcommands:

* identity   — evaluate the Ursell coefficient of a seeded random matrix by
               every applicable route and check pairwise agreement;
* criterion  — find the largest certified cut radius for a potential and a
               mu-bound method;
* bounds     — compute the full convergence-radius bound report at one
               (potential, beta, a);
* reproduce  — recompute the published Lennard-Jones reference constants and
               emit a computed-vs-published table.

Exit codes: 0 success, 1 check failure, 2 usage error, 3 numeric failure.
Output in json/csv mode is byte-identical across runs for fixed arguments.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from .combinatorics import SizeLimitError
from .bounds import compare_report
from .potentials import (
    LennardJones,
    NotBasuevAtCutError,
    PotentialDomainError,
    potential_from_config,
)
from .quadrature import (
    QuadratureConvergenceError,
    QuadratureSpec,
    TemperednessError,
)
from .reference import reproduction_rows
from .stability import (
    MethodDomainError,
    MethodMismatchError,
    NoValidCutError,
    StabilityData,
    find_max_a,
    lj_stability_registry,
    mu_bound_function,
)
from .ursell import (
    merge_sequence_expansion,
    random_interaction_matrix,
    ursell_graph_sum,
    ursell_partition_sum,
    ursell_tree_integral,
)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_NUMERIC = 3

MAX_IDENTITY_N = 7
MAX_IDENTITY_INTEGRAL_N = 5

TABLE_FLOAT = "{:.6g}"


def rel_diff(x: float, y: float) -> float:
    scale = max(abs(x), abs(y))
    if scale < 1e-12:
        return 0.0
    return abs(x - y) / scale


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _json_dumps(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _load_potential(name_or_path: str):
    if name_or_path in ("lennard-jones", "lj"):
        return LennardJones()
    path = Path(name_or_path)
    if name_or_path.endswith(".json") or path.exists():
        return potential_from_config(json.loads(path.read_text()))
    raise argparse.ArgumentTypeError(
        f"unknown potential {name_or_path!r}: use 'lennard-jones' or a config file path"
    )


def _parse_interval(text: str) -> tuple[float, float]:
    try:
        lo_text, hi_text = text.split(":")
        lo, hi = float(lo_text), float(hi_text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"interval must be 'lo:hi', got {text!r}")
    if not lo < hi:
        raise argparse.ArgumentTypeError(f"interval needs lo < hi, got {text!r}")
    return lo, hi


# ---------------------------------------------------------------------------
# identity
# ---------------------------------------------------------------------------

def cmd_identity(args) -> int:
    matrix = random_interaction_matrix(args.n, args.seed)
    routes = {
        "graph_sum": ursell_graph_sum(matrix, args.beta),
        "partition_sum": ursell_partition_sum(matrix, args.beta),
    }
    if args.n <= MAX_IDENTITY_INTEGRAL_N:
        routes["tree_integral"] = ursell_tree_integral(matrix, args.beta)
        routes["merge_expansion"] = merge_sequence_expansion(matrix, args.beta)

    names = sorted(routes)
    diffs = {}
    worst_pair, worst = None, -1.0
    for i, x in enumerate(names):
        for y in names[i + 1 :]:
            d = rel_diff(routes[x], routes[y])
            diffs[f"{x}_vs_{y}"] = d
            if d > worst:
                worst_pair, worst = (x, y), d
    agree = worst <= args.tol

    payload = {
        "n": args.n,
        "beta": args.beta,
        "seed": args.seed,
        "tol": args.tol,
        "routes": routes,
        "pairwise_rel_diff": diffs,
        "worst_pair": list(worst_pair),
        "worst_rel_diff": worst,
        "agree": agree,
    }
    if args.format == "json":
        _emit(_json_dumps(payload), args.out)
    else:
        lines = [f"Ursell identity check: n={args.n} beta={args.beta:g} seed={args.seed}"]
        for name in names:
            lines.append(f"  {name:<16} = {routes[name]!r}")
        for pair, d in sorted(diffs.items()):
            lines.append(f"  {pair:<34} rel diff {TABLE_FLOAT.format(d)}")
        verdict = "AGREE" if agree else "DISAGREE"
        lines.append(
            f"{verdict} (worst pair {worst_pair[0]} vs {worst_pair[1]}: "
            f"{TABLE_FLOAT.format(worst)}, tol {args.tol:g})"
        )
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if agree else EXIT_CHECK_FAILED


# ---------------------------------------------------------------------------
# criterion
# ---------------------------------------------------------------------------

def cmd_criterion(args) -> int:
    potential = args.potential
    lo, hi = args.interval
    try:
        best = find_max_a(
            potential, args.method, (lo, hi), tol=args.tol, mu_value=args.mu_value
        )
    except NoValidCutError as exc:
        bound_at = mu_bound_function(args.method, potential, mu_value=args.mu_value)
        mu_lo = bound_at(lo)
        message = (
            f"no certified cut radius: {exc}\n"
            f"  at a = {lo:g}: V(a) = {potential(lo):.6g}, "
            f"2*mu_bound = {2 * mu_lo.value:.6g} ({mu_lo.method})\n"
        )
        _emit(message, args.out)
        return EXIT_CHECK_FAILED
    bound_at = mu_bound_function(args.method, potential, mu_value=args.mu_value)
    mu = bound_at(best)
    payload = {
        "potential": potential.config(),
        "method": args.method,
        "interval": [lo, hi],
        "tol": args.tol,
        "max_certified_a": best,
        "mu_bound": mu.value,
        "mu_method": mu.method,
        "v_at_a": potential(best),
        "certified": True,
    }
    if args.format == "json":
        _emit(_json_dumps(payload), args.out)
    else:
        _emit(
            (
                f"largest certified cut radius a = {best:.6f} "
                f"(interval [{lo:g}, {hi:g}], tol {args.tol:g})\n"
                f"  mu bound ({mu.method}) = {mu.value:.6g}\n"
                f"  V(a) = {potential(best):.6g} > 2*mu = {2 * mu.value:.6g}: certified\n"
            ),
            args.out,
        )
    return EXIT_OK


# ---------------------------------------------------------------------------
# bounds
# ---------------------------------------------------------------------------

def _stability_from_args(args, parser: argparse.ArgumentParser) -> StabilityData:
    registry = lj_stability_registry()
    is_lj = args.potential.kind == "lennard-jones"
    b_upper = args.b_upper
    if b_upper is None:
        if not is_lj:
            parser.error("--b-upper is required for potentials other than lennard-jones")
        b_upper = registry.b_upper
    b_lower = args.b_lower
    if b_lower is None:
        b_lower = registry.b_lower if is_lj else 0.0
    factor = args.bbar_factor
    if factor is None:
        factor = registry.bbar_factor if is_lj else 1.0
    sources = registry.sources if is_lj and b_upper == registry.b_upper else {}
    return StabilityData(
        b_lower=min(b_lower, b_upper), b_upper=b_upper, bbar_factor=factor, sources=sources
    )


def cmd_bounds(args, parser) -> int:
    stability = _stability_from_args(args, parser)
    spec = QuadratureSpec(rel_tol=args.rel_tol) if args.rel_tol else None
    try:
        report = compare_report(args.potential, args.beta, args.a, stability, spec)
    except NotBasuevAtCutError as exc:
        _emit(
            f"bound computation rejected: the cut precondition "
            f"V(r) >= V(a) > 0 on (0, a] failed: {exc}\n",
            args.out,
        )
        return EXIT_CHECK_FAILED
    if args.format == "json":
        _emit(report.to_json() + "\n", args.out)
    elif args.format == "csv":
        _emit(report.csv_text(), args.out)
    else:
        _emit(report.table_text(), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# reproduce
# ---------------------------------------------------------------------------

def cmd_reproduce(args) -> int:
    rows = reproduction_rows(args.section)
    if args.format == "json":
        _emit(_json_dumps(rows), args.out)
    elif args.format == "csv":
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["section", "name", "computed", "published", "rel_diff", "status"])
        for row in rows:
            writer.writerow(
                [row["section"], row["name"], repr(row["computed"]),
                 repr(row["published"]), repr(row["rel_diff"]), row["status"]]
            )
        _emit(out.getvalue(), args.out)
    else:
        lines = [
            f"{'section':<8} {'name':<28} {'computed':>14} {'published':>12} "
            f"{'rel_diff':>10} {'status':<6}"
        ]
        for row in rows:
            lines.append(
                f"{row['section']:<8} {row['name']:<28} "
                f"{TABLE_FLOAT.format(row['computed']):>14} "
                f"{TABLE_FLOAT.format(row['published']):>12} "
                f"{TABLE_FLOAT.format(row['rel_diff']):>10} {row['status']:<6}"
            )
        for row in rows:
            if row["note"]:
                lines.append(f"[{row['section']} {row['name']}] {row['note']}")
        _emit("\n".join(lines) + "\n", args.out)
    failed = [row for row in rows if row["status"] == "FAIL"]
    return EXIT_CHECK_FAILED if failed else EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mayerbounds",
        description="Tree-graph identity checks and Mayer-series convergence-radius bounds.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--format", choices=("table", "json", "csv"), default="table")
        p.add_argument("--out", default=None, help="write output to this path")

    p_id = sub.add_parser("identity", help="multi-route Ursell coefficient check")
    p_id.add_argument("--n", type=int, required=True)
    p_id.add_argument("--beta", type=float, default=1.0)
    p_id.add_argument("--seed", type=int, default=0)
    p_id.add_argument("--tol", type=float, default=1e-5)
    add_common(p_id)

    p_cr = sub.add_parser("criterion", help="largest certified cut radius")
    p_cr.add_argument("--potential", type=_load_potential, default="lennard-jones")
    p_cr.add_argument("--method", choices=("cube", "yuhjtman", "user"), default="yuhjtman")
    p_cr.add_argument("--interval", type=_parse_interval, default=(0.6, 0.7))
    p_cr.add_argument("--tol", type=float, default=1e-6)
    p_cr.add_argument("--mu-value", type=float, default=None,
                      help="constant certified mu bound (method=user)")
    add_common(p_cr)

    p_bd = sub.add_parser("bounds", help="convergence-radius bound report")
    p_bd.add_argument("--potential", type=_load_potential, default="lennard-jones")
    p_bd.add_argument("--beta", type=float, default=1.0)
    p_bd.add_argument("--a", type=float, required=True)
    p_bd.add_argument("--b-lower", type=float, default=None)
    p_bd.add_argument("--b-upper", type=float, default=None)
    p_bd.add_argument("--bbar-factor", type=float, default=None)
    p_bd.add_argument("--rel-tol", type=float, default=None)
    add_common(p_bd)

    p_rp = sub.add_parser("reproduce", help="recompute the published reference constants")
    p_rp.add_argument("--section", choices=("5.2", "5.3", "all"), default="all")
    add_common(p_rp)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "identity" and not 2 <= args.n <= MAX_IDENTITY_N:
        parser.error(f"identity check supports 2 <= n <= {MAX_IDENTITY_N}, got n={args.n}")
    if args.command == "identity" and args.beta < 0:
        parser.error("beta must be non-negative")
    try:
        if args.command == "identity":
            return cmd_identity(args)
        if args.command == "criterion":
            return cmd_criterion(args)
        if args.command == "bounds":
            return cmd_bounds(args, parser)
        if args.command == "reproduce":
            return cmd_reproduce(args)
    except (MethodDomainError, MethodMismatchError, PotentialDomainError, SizeLimitError) as exc:
        parser.exit(EXIT_USAGE, f"usage error: {exc}\n")
    except (QuadratureConvergenceError, TemperednessError, ArithmeticError) as exc:
        sys.stderr.write(f"numeric failure: {exc}\n")
        return EXIT_NUMERIC
    raise AssertionError("unreachable")


if __name__ == "__main__":
    raise SystemExit(main())
