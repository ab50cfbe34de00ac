"""Command-line entry point: ``kdnn {gen,build,query,verify,bench}``.

Machine-readable JSON goes to stdout, human-readable notes to stderr.
Exit codes: 0 success, 1 I/O failure, 2 bad input or config, 3 corrupt tree
file. ``verify`` exits 1 when any check fails.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import persist, pointfile
from .bench import DISTRIBUTIONS, ConfigError, ExperimentConfig, generate_points, run_experiment
from .core import KdError
from .search import knn
from .tree import build, build_bucket, depth, leaf_census
from .verify import SUITES, run_suites

EXIT_IO = 1
EXIT_INPUT = 2
EXIT_CORRUPT = 3

# Smallest positive double: a distance is <= this only if it is exactly 0.
_EXACT_MATCH_EPS = 5e-324


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True) + "\n")


def _note(msg: str) -> None:
    print(msg, file=sys.stderr)


def _parse_eps(text: str) -> float:
    v = float(text)
    if math.isnan(v) or v < 0:
        raise argparse.ArgumentTypeError(f"eps must be >= 0, got {text}")
    return v


def _parse_ints(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _parse_point(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated coordinates, got {text!r}") from None


def cmd_gen(args) -> int:
    ps = generate_points(args.dist, args.n if args.n is not None else 1000, args.d, args.seed)
    pointfile.write(ps, args.out)
    _note(f"wrote {len(ps)} {ps.dim}-d points to {args.out}")
    return 0


def _tree_summary(tree) -> dict:
    out = {"variant": tree.variant, "n": tree.n, "d": tree.dim, "depth": depth(tree), "nodes": tree.num_nodes}
    if tree.variant == "bucket":
        out["b"] = tree.b
        out["leaves"] = len(leaf_census(tree))
    return out


def cmd_build(args) -> int:
    ps = pointfile.read(args.inp)
    tree = build_bucket(ps, args.b) if args.variant == "bucket" else build(ps)
    persist.save(tree, args.out)
    _emit(_tree_summary(tree))
    return 0


def cmd_query(args) -> int:
    tree = persist.load(args.inp)
    eps = _EXACT_MATCH_EPS if args.eps == 0 else args.eps
    res, stats = knn(tree, args.point, args.k, eps)
    items = res.items()
    _emit({
        "ids": [pid for _, pid in items],
        "distances": [dist for dist, _ in items],
        "stats": stats.as_dict(),
    })
    return 0


def cmd_verify(args) -> int:
    names = list(SUITES) if args.suite == "all" else args.suite.split(",")
    unknown = [s for s in names if s not in SUITES]
    if unknown:
        raise ConfigError(f"unknown suite(s) {unknown}; choose from {sorted(SUITES)} or 'all'")
    kw = {"n": args.n[0] if args.n else None, "k": args.k, "b": args.b, "d": args.d}
    if args.queries is not None:
        kw["queries"] = args.queries
        kw["sweep_queries"] = args.queries
    if args.draws is not None:
        kw["draws"] = args.draws
    ok = True
    for rec in run_suites(names, args.seed, **kw):
        ok &= rec["pass"]
        _emit(rec)
        sys.stdout.flush()
    _note("all checks passed" if ok else "some checks FAILED")
    return 0 if ok else 1


def _bench_config(args) -> ExperimentConfig:
    if args.config:
        try:
            data = json.loads(Path(args.config).read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        return ExperimentConfig.from_dict(data)
    overrides = {
        "distribution": args.dist,
        "n_grid": args.n,
        "d": args.d,
        "k": args.k,
        "b": args.b,
        "queries_per_n": args.queries,
        "variant": args.variant,
        "eps": args.eps,
    }
    overrides = {k: v for k, v in overrides.items() if v is not None}
    return ExperimentConfig.from_dict({**overrides, "seed": args.seed})


def cmd_bench(args) -> int:
    config = _bench_config(args)
    report = run_experiment(config)
    out = Path(args.out)
    csv_path = Path(args.csv) if args.csv else out.with_suffix(".csv")
    out.write_text(report.to_json())
    csv_path.write_text(report.to_csv())
    fits = report.fits
    if fits["log_model"]:
        _note(f"nodes_visited ~ {fits['log_model']['alpha']:.3f} log2(n) + {fits['log_model']['beta']:.3f}"
              f"  (R^2 {fits['log_model']['r2']:.4f})")
    _emit({"json": str(out), "csv": str(csv_path), "rows": len(report.rows), "fits": fits})
    return 0


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kdnn", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="sample a point file")
    p.add_argument("--dist", choices=DISTRIBUTIONS, default="uniform-cube")
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("build", help="build a tree from a point file and save it")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--variant", choices=("interior", "bucket"), default="interior")
    p.add_argument("--b", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("query", help="k nearest neighbors of one point")
    p.add_argument("--in", dest="inp", required=True, help="tree file")
    p.add_argument("--point", type=_parse_point, required=True, help="comma-separated coordinates")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--eps", type=_parse_eps, default=math.inf)
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("verify", help="run the numeric checks of the analysis")
    p.add_argument("--suite", default="all", help=f"comma list of {sorted(SUITES)} or 'all'")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=_parse_ints)
    p.add_argument("--k", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--queries", type=int, help="repetitions for the content and sweep suites")
    p.add_argument("--draws", type=int, help="Monte Carlo draws for the beta suite")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="run a query-cost experiment")
    p.add_argument("--config", help="JSON file with ExperimentConfig fields")
    p.add_argument("--dist", choices=DISTRIBUTIONS)
    p.add_argument("--n", type=_parse_ints, help="comma-separated point counts")
    p.add_argument("--d", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--eps", type=_parse_eps)
    p.add_argument("--queries", type=int)
    p.add_argument("--variant", choices=("interior", "bucket"))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="JSON report path")
    p.add_argument("--csv", help="CSV path (default: JSON path with .csv suffix)")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except persist.CorruptTreeError as exc:
        _note(f"error: {exc}")
        return EXIT_CORRUPT
    except KdError as exc:
        _note(f"error: {exc}")
        return EXIT_INPUT
    except OSError as exc:
        _note(f"error: {exc}")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
