"""Command-line interface: ``curvsel {rank,select,bench,summary}``.

Exit codes: 0 success, 2 configuration/usage error, 3 parse error,
4 data error (including an empty threshold selection).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from curvsel import __version__
from curvsel._backend import BACKEND
from curvsel.baselines import ALL_SELECTORS, SelectorKind, SelTag, rank_with, select_with
from curvsel.cfs import rank_features, select_by_threshold, select_top_k
from curvsel.classifiers import ClassifierKind, available_classifiers
from curvsel.dataset_io import Dataset, load_dataset, summarize, to_csv
from curvsel.errors import ConfigError, CurvselError
from curvsel.harness import GridSpec, report_to_csv, report_to_json, render_matrix, run_grid
from curvsel.normalize import ALL_NORMALIZERS, DEFAULT_PN_ALPHA, NormalizerKind

EPILOG = "exit codes: 0 ok, 2 configuration error, 3 parse error, 4 data error"

_BOOL_KEYS = {"no_header", "sort_planes", "timings"}


def read_config(path) -> dict:
    """``key = value`` lines; ``#`` starts a comment. Dashes in keys become underscores."""
    out = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from None
    for n, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{n}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key in _BOOL_KEYS:
            out[key] = value.lower() in ("1", "true", "yes", "on")
        else:
            out[key] = value
    return out


def _common(p: argparse.ArgumentParser):
    p.add_argument("--config", help="key = value file; command-line flags take precedence")
    p.add_argument("--data", help="input table (delimited text)")
    p.add_argument("--label-col", dest="label_col", default="-1", help="label column name or index (default: last)")
    p.add_argument("--missing", default="?", help="missing-value marker (default: ?)")
    p.add_argument("--delimiter", default=",")
    p.add_argument("--no-header", dest="no_header", action="store_true", help="first row is data")
    p.add_argument("--out", help="output path (default: stdout)")


def _selection(p: argparse.ArgumentParser, multi: bool = False):
    p.add_argument(
        "--selector",
        default="all" if multi else "cfs",
        help=("comma list or 'all' of " if multi else "one of ") + ", ".join(ALL_SELECTORS),
    )
    p.add_argument("--bins", type=int, default=10, help="bins for IG/MI/CST (default: 10)")
    p.add_argument("--sort-planes", dest="sort_planes", action="store_true",
                   help="order each CFS plane by feature value instead of row order")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="curvsel", description=__doc__.splitlines()[0], epilog=EPILOG)
    parser.add_argument("--version", action="version", version=f"curvsel {__version__} ({BACKEND} kernels)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rank", help="rank features by selector weight", epilog=EPILOG)
    _common(p)
    _selection(p)
    p.add_argument("--format", default="csv", choices=("csv", "json"))

    p = sub.add_parser("select", help="write the selected raw columns", epilog=EPILOG)
    _common(p)
    _selection(p)
    p.add_argument("--top-k", dest="top_k", type=int)
    p.add_argument("--threshold", type=float)

    p = sub.add_parser("bench", help="cross-validated accuracy grid", epilog=EPILOG)
    _common(p)
    _selection(p, multi=True)
    p.add_argument("--top-k", dest="top_k", type=int, help="features kept (default: round(0.8 * n))")
    p.add_argument("--normalizers", default="all", help="comma list or 'all' of " + ", ".join(ALL_NORMALIZERS))
    p.add_argument("--classifiers", default="all", help="comma list or 'all' of registered classifiers")
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--scope", default="global", choices=("global", "per_fold"))
    p.add_argument("--pn-alpha", dest="pn_alpha", type=float, default=DEFAULT_PN_ALPHA)
    p.add_argument("--format", default="csv",
                   help="comma list of csv, json, matrix; with several, --out is a file stem")
    p.add_argument("--jobs", type=int, default=1, help="cells evaluated concurrently")
    p.add_argument("--timings", action="store_true", help="include wall times (breaks byte-identical reruns)")
    p.add_argument("--dataset-id", dest="dataset_id")

    p = sub.add_parser("summary", help="dataset structure and class percentages (JSON)", epilog=EPILOG)
    _common(p)
    return parser


def parse_args(argv=None) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        cfg = read_config(args.config)
        subparser = parser._subparsers._group_actions[0].choices[args.command]
        known = {a.dest for a in subparser._actions}
        unknown = sorted(set(cfg) - known)
        if unknown:
            raise ConfigError(f"unknown config key(s): {', '.join(unknown)}")
        subparser.set_defaults(**cfg)
        args = parser.parse_args(argv)
    if not args.data:
        raise ConfigError("no input table given (--data)")
    return args


def _load(args) -> Dataset:
    return load_dataset(
        args.data, label_column=args.label_col, missing_marker=args.missing,
        delimiter=args.delimiter, header=not args.no_header,
    )


def _emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _split(value: str, universe) -> list[str]:
    if value.strip().lower() == "all":
        return list(universe)
    return [v.strip() for v in value.split(",") if v.strip()]


def cmd_rank(args) -> int:
    ds = _load(args)
    kind = SelectorKind.parse(args.selector, bin_count=args.bins, sort_planes=args.sort_planes)
    if kind.tag is SelTag.PCA:
        raise ConfigError("pca produces projections, not a feature ranking")
    ranks = rank_features(ds, sort_planes=kind.sort_planes) if kind.tag is SelTag.CFS else rank_with(kind, ds)
    _emit(ranks.to_json() if args.format == "json" else ranks.to_csv(), args.out)
    return 0


def cmd_select(args) -> int:
    if (args.top_k is None) == (args.threshold is None):
        raise ConfigError("give exactly one of --top-k and --threshold")
    ds = _load(args)
    kind = SelectorKind.parse(args.selector, bin_count=args.bins, sort_planes=args.sort_planes)
    if kind.tag is SelTag.PCA:
        if args.top_k is None:
            raise ConfigError("pca supports --top-k only")
        Z = select_with(kind, ds, args.top_k)
        reduced = ds.with_features(Z, [f"pc{i + 1}" for i in range(Z.shape[1])], f"pca {args.top_k}")
    else:
        ranks = rank_features(ds, sort_planes=kind.sort_planes) if kind.tag is SelTag.CFS else rank_with(kind, ds)
        if args.top_k is not None:
            reduced = select_top_k(ds, ranks, args.top_k)
        else:
            reduced = select_by_threshold(ds, ranks, args.threshold)
    _emit(to_csv(reduced), args.out)
    return 0


def cmd_bench(args) -> int:
    ds = _load(args)
    k = args.top_k if args.top_k is not None else max(1, int(round(0.8 * ds.n_features)))
    selectors = [SelectorKind.parse(s, bin_count=args.bins, sort_planes=args.sort_planes)
                 for s in _split(args.selector, ALL_SELECTORS)]
    normalizers = [NormalizerKind.parse(n, args.pn_alpha) for n in _split(args.normalizers, ALL_NORMALIZERS)]
    classifiers = [ClassifierKind.parse(c, seed=args.seed) for c in _split(args.classifiers, available_classifiers())]
    formats = _split(args.format, ("csv", "json", "matrix"))
    bad = [f for f in formats if f not in ("csv", "json", "matrix")]
    if bad:
        raise ConfigError(f"unknown format(s) {bad}; valid: csv, json, matrix")
    spec = GridSpec(
        dataset_id=args.dataset_id or Path(args.data).stem,
        selectors=selectors, k_features=k, normalizers=normalizers, classifiers=classifiers,
        n_folds=args.folds, seed=args.seed, selection_scope=args.scope,
    )
    report = run_grid(spec, ds, n_jobs=args.jobs)
    report.metadata["config"] = {
        "data": Path(args.data).name, "label_col": args.label_col, "missing": args.missing,
        "selector": args.selector, "top_k": k, "normalizers": args.normalizers,
        "classifiers": args.classifiers, "folds": args.folds, "seed": args.seed,
        "scope": args.scope, "pn_alpha": args.pn_alpha, "bins": args.bins,
        "sort_planes": args.sort_planes,
    }
    render = {
        "csv": lambda: report_to_csv(report, timings=args.timings),
        "json": lambda: report_to_json(report, timings=args.timings),
        "matrix": lambda: render_matrix(report),
    }
    if len(formats) == 1:
        _emit(render[formats[0]](), args.out)
    else:
        if not args.out:
            raise ConfigError("several formats need --out as a file stem")
        for f in formats:
            _emit(render[f](), f"{args.out}.{'txt' if f == 'matrix' else f}")
    return 0


def cmd_summary(args) -> int:
    ds = _load(args)
    doc = summarize(ds).to_dict()
    doc["provenance"] = ds.provenance
    _emit(json.dumps(doc, indent=2) + "\n", args.out)
    return 0


COMMANDS = {"rank": cmd_rank, "select": cmd_select, "bench": cmd_bench, "summary": cmd_summary}


def main(argv=None) -> int:
    try:
        args = parse_args(argv)
        return COMMANDS[args.command](args)
    except CurvselError as exc:
        print(f"curvsel: error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
