"""Command line interface: ``graphlift {estimate,exact,validate,stats,fetch}``."""

from __future__ import annotations

import argparse
import csv
import datetime as _dt
import json
import logging
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__
from .catalog import get_type, graphlet_types, InducedSubgraph, pi_u_direct, pi_u_recursive
from .datasets import DatasetError, REGISTRY, fetch, load_dataset, load_graph
from .exceptions import EmptyGraphError, GraphFormatError, TooLargeError
from .lifting import estimate, samples_for_budget
from .oracle import enumerate_pi, exact_count, exact_count_subsets
from .start import StartDistribution
from .stats import CSV_COLUMNS, CSV_VERSION, summary_row, theory_bounds, write_csv

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_INFEASIBLE, EXIT_FAILED = 0, 1, 2, 3, 4

logger = logging.getLogger("graphlift")


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def _graph_args(p):
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--graph", help="edge list file (.txt, .mtx, optionally .gz)")
    src.add_argument("--dataset", help=f"cached dataset name ({', '.join(sorted(REGISTRY))})")
    p.add_argument("--format", choices=("auto", "plain", "mtx"), default="auto")
    p.add_argument("--cache-dir", help="dataset cache directory (default $GRAPHLIFT_DATA)")


def _output_args(p):
    p.add_argument("--out", help="write results here instead of stdout")
    p.add_argument("--output-format", choices=("csv", "json"), default="csv")
    p.add_argument("--manifest", help="run manifest path (default <out>.manifest.json, else stderr)")


def _sampling_args(p):
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--target", action="append", default=None,
                   help="graphlet name or k-m key; repeatable; default all")
    p.add_argument("--estimator", choices=("ordered", "shotgun", "unordered"), default="unordered")
    p.add_argument("--start", default="rw", help="uniform | rw | degree-poly:<expr in d>")
    p.add_argument("--spacing", type=int, default=3, help="walk steps between samples (rw)")
    p.add_argument("--burn-in", type=int, default=100, help="one-time walk burn-in (rw)")
    p.add_argument("--lazy", action="store_true", help="lazy random walk")
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="graphlift", description="Graphlet counting by lifting.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("estimate", help="estimate graphlet counts by lifting")
    _graph_args(p)
    _sampling_args(p)
    size = p.add_mutually_exclusive_group(required=True)
    size.add_argument("--n", type=int, help="number of samples")
    size.add_argument("--budget", type=int, help="neighborhood-query budget")
    p.add_argument("--workers", type=int, default=1, help="independent chains")
    p.add_argument("--bounds", action="store_true", help="add variance/covariance bounds (uses the estimate as N)")
    _output_args(p)

    p = sub.add_parser("exact", help="exact counts by exhaustive enumeration")
    _graph_args(p)
    p.add_argument("--k", type=int, action="append", required=True)
    p.add_argument("--cap", type=int, default=10**8, help="abort above this many subgraphs")
    _output_args(p)

    p = sub.add_parser("validate", help="normalization and cross-checks on a small graph")
    _graph_args(p)
    p.add_argument("--k", type=int, action="append", required=True)
    p.add_argument("--poly", default="d*(d-1)", help="degree polynomial for the third start")
    _output_args(p)

    p = sub.add_parser("stats", help="variance, lag correlation and bounds across spacings")
    _graph_args(p)
    _sampling_args(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--h", type=int, action="append", default=None, help="spacing; repeatable")
    p.add_argument("--cap", type=int, default=10**7, help="exact-count cap for the bounds")
    _output_args(p)

    p = sub.add_parser("fetch", help="download named datasets into the cache")
    p.add_argument("names", nargs="+")
    p.add_argument("--cache-dir")
    p.add_argument("--sha256", help="expected archive checksum (single dataset)")
    p.add_argument("--force", action="store_true")
    return parser


def _load(args):
    try:
        if args.dataset:
            return args.dataset, load_dataset(args.dataset, args.cache_dir)
        return Path(args.graph).name, load_graph(args.graph, args.format)
    except DatasetError as exc:
        raise CliError(str(exc), EXIT_DATA) from exc
    except (OSError, GraphFormatError, EmptyGraphError) as exc:
        raise CliError(f"cannot read graph: {exc}", EXIT_DATA) from exc


def _start(g, args, spacing=None):
    try:
        return StartDistribution.from_spec(
            g, args.start, burn_in=args.burn_in,
            spacing=args.spacing if spacing is None else spacing, lazy=args.lazy,
        )
    except ValueError as exc:
        raise CliError(str(exc), EXIT_USAGE) from exc


def _targets(args):
    if args.target is None or args.target == ["all"]:
        return list(graphlet_types(args.k))
    try:
        return [get_type(t, args.k) for t in args.target]
    except ValueError as exc:
        raise CliError(str(exc), EXIT_USAGE) from exc


def _check_k(k, low=2):
    if not low <= k <= 7:
        raise CliError(f"k must be in {low}..7, got {k}", EXIT_USAGE)


def cmd_estimate(args, manifest):
    _check_k(args.k, 3 if args.estimator == "shotgun" else 2)
    name, g = _load(args)
    targets = _targets(args)
    start = _start(g, args)
    if args.workers < 1:
        raise CliError("--workers must be >= 1", EXIT_USAGE)
    if args.budget is not None:
        try:
            n = samples_for_budget(args.k, args.estimator, start, args.budget)
        except ValueError as exc:
            raise CliError(str(exc), EXIT_INFEASIBLE) from exc
    else:
        n = args.n
        if n < 1:
            raise CliError("--n must be >= 1", EXIT_USAGE)
    try:
        runs = estimate(g, args.k, args.estimator, start, n, seed=args.seed, targets=targets,
                        n_chains=args.workers, n_jobs=args.workers)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_INFEASIBLE) from exc
    rows = []
    for t in targets:
        run = runs[t]
        bounds = theory_bounds(g, t, max(run.estimate, 0.0), lazy=args.lazy) if args.bounds else None
        rows.append(summary_row(name, run, bounds))
    manifest["graph"] = {"name": name, "vertices": g.n, "edges": g.m}
    manifest["samples"] = n
    manifest["queries_total"] = runs[targets[0]].queries
    return rows, CSV_COLUMNS


EXACT_COLUMNS = ("graph", "k", "type", "name", "count", "total_cis")


def cmd_exact(args, manifest):
    for k in args.k:
        _check_k(k, 1)
    name, g = _load(args)
    rows = []
    for k in args.k:
        try:
            counts = exact_count(g, k, cap=args.cap)
        except TooLargeError as exc:
            raise CliError(str(exc), EXIT_INFEASIBLE) from exc
        for t, c in counts.counts.items():
            rows.append({"graph": name, "k": k, "type": t.key, "name": t.name, "count": c,
                         "total_cis": counts.total_cis})
    manifest["graph"] = {"name": name, "vertices": g.n, "edges": g.m}
    return rows, EXACT_COLUMNS


VALIDATE_COLUMNS = ("graph", "k", "check", "start", "status", "detail")


def cmd_validate(args, manifest):
    name, g = _load(args)
    for k in args.k:
        _check_k(k, 2)
    if g.n > 12:
        raise CliError(f"validate needs at most 12 vertices, graph has {g.n}", EXIT_INFEASIBLE)
    exact = g.n <= 8
    starts = [StartDistribution.uniform(g), StartDistribution.rw(g)]
    try:
        starts.append(StartDistribution.degree_polynomial(g, args.poly))
    except ValueError as exc:
        raise CliError(str(exc), EXIT_USAGE) from exc
    rows = []

    def add(k, check, start, ok, detail=""):
        rows.append({"graph": name, "k": k, "check": check, "start": start,
                     "status": "pass" if ok else "FAIL", "detail": detail})

    for k in args.k:
        a, b = exact_count(g, k), exact_count_subsets(g, k)
        add(k, "exact_count_vs_subsets", "", a.counts == b.counts, f"total={a.total_cis}")
        for start in starts:
            try:
                table = enumerate_pi(g, k, start, exact=exact)
                add(k, "normalization", start.label, True,
                    f"sequences={len(table.sequences)} subgraphs={len(table.cis)}")
            except AssertionError as exc:
                add(k, "normalization", start.label, False, str(exc))
                continue
            worst = 0.0
            for vs, p in table.cis.items():
                s = InducedSubgraph.from_graph(g, sorted(vs))
                direct = pi_u_direct(s, start, exact=exact)
                rec = pi_u_recursive(s, start, exact=exact)
                worst = max(worst, abs(float(direct - rec)), abs(float(direct - p)))
            tol = 0.0 if exact else 1e-12
            add(k, "direct_vs_recursive", start.label, worst <= tol, f"max_abs_diff={worst:.3g}")
    manifest["graph"] = {"name": name, "vertices": g.n, "edges": g.m}
    manifest["all_passed"] = all(r["status"] == "pass" for r in rows)
    return rows, VALIDATE_COLUMNS


def cmd_stats(args, manifest):
    _check_k(args.k, 3 if args.estimator == "shotgun" else 2)
    name, g = _load(args)
    targets = _targets(args)
    if args.n < 2:
        raise CliError("--n must be >= 2", EXIT_USAGE)
    print("stats: correlation diagnostics run on a single chain (workers=1)", file=sys.stderr)
    try:
        exact = exact_count(g, args.k, cap=args.cap).counts
    except TooLargeError:
        exact = None
    spacings = args.h or [args.spacing]
    rows = []
    total = 0
    for h in spacings:
        start = _start(g, args, spacing=h)
        try:
            runs = estimate(g, args.k, args.estimator, start, args.n, seed=args.seed, targets=targets)
        except ValueError as exc:
            raise CliError(str(exc), EXIT_INFEASIBLE) from exc
        total += runs[targets[0]].queries
        for t in targets:
            run = runs[t]
            count = exact[t] if exact is not None else max(run.estimate, 0.0)
            rows.append(summary_row(name, run, theory_bounds(g, t, count, lazy=args.lazy)))
    manifest["graph"] = {"name": name, "vertices": g.n, "edges": g.m}
    manifest["queries_total"] = total
    manifest["bounds_use_exact_counts"] = exact is not None
    return rows, CSV_COLUMNS


def cmd_fetch(args, manifest):
    if args.sha256 and len(args.names) > 1:
        raise CliError("--sha256 applies to a single dataset", EXIT_USAGE)
    rows = []
    for name in args.names:
        try:
            path = fetch(name, args.cache_dir, sha256=args.sha256, force=args.force)
        except DatasetError as exc:
            raise CliError(str(exc), EXIT_DATA) from exc
        rows.append({"name": name, "path": str(path)})
    return rows, ("name", "path")


COMMANDS = {
    "estimate": cmd_estimate,
    "exact": cmd_exact,
    "validate": cmd_validate,
    "stats": cmd_stats,
    "fetch": cmd_fetch,
}


def _jsonable(x):
    if isinstance(x, Fraction):
        return float(x)
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _emit(rows, columns, fmt, fh):
    if fmt == "json":
        payload = {"version": CSV_VERSION, "columns": list(columns),
                   "rows": [{c: _jsonable(r.get(c)) for c in columns} for r in rows]}
        fh.write(json.dumps(payload, indent=2) + "\n")
    elif columns is CSV_COLUMNS:
        write_csv(rows, fh)
    else:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for r in rows:
            writer.writerow([r.get(c, "") for c in columns])


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    config = {k: _jsonable(v) for k, v in vars(args).items()}
    manifest = {"tool": "graphlift", "version": __version__, "command": args.command,
                "config": config, "seed": getattr(args, "seed", None)}
    t0 = time.perf_counter()
    try:
        rows, columns = COMMANDS[args.command](args, manifest)
    except CliError as exc:
        print(f"graphlift {args.command}: {exc}", file=sys.stderr)
        return exc.code
    manifest["wall_time_s"] = round(time.perf_counter() - t0, 6)
    manifest["timestamp"] = _dt.datetime.now(_dt.timezone.utc).isoformat()

    out_path = getattr(args, "out", None)
    fmt = getattr(args, "output_format", "csv")
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            _emit(rows, columns, fmt, fh)
    else:
        _emit(rows, columns, fmt, sys.stdout)
    manifest_path = getattr(args, "manifest", None) or (f"{out_path}.manifest.json" if out_path else None)
    text = json.dumps(manifest, indent=2, sort_keys=True) + "\n"
    if manifest_path:
        Path(manifest_path).write_text(text, encoding="utf-8")
    else:
        sys.stderr.write(text)
    if manifest.get("all_passed") is False:
        return EXIT_FAILED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
