"""Command-line interface.

Subcommands: select, stats, loss, bench. Results go to stdout or to the
requested output files; diagnostics go to stderr. Exit codes: 0 success,
1 usage error, 2 data error.

The SEQSEL_OUT_DIR environment variable, when set, is prepended to relative
output paths.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from .boxloss import LossParams, iou_loss, tversky_loss
from .distance import distance_matrix, nn_stats
from .errors import SeqselError
from .fileio import load_pool, load_pool_csv, save_selection
from .fusion import multi_frame_reps
from .selection import run_selection
from .synthbench import SynthConfig, run_bench, write_bench_report
from .types import BBox, Metric, SelectionConfig, Strategy

OUT_DIR_ENV = "SEQSEL_OUT_DIR"


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; the CLI contract reserves 2 for
    # data errors, so remap to 1.
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(1)


def _resolve_out(path_str: str) -> Path:
    path = Path(path_str)
    out_dir = os.environ.get(OUT_DIR_ENV)
    if out_dir and not path.is_absolute():
        path = Path(out_dir) / path
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def _load_any_pool(path_str: str):
    if path_str.endswith(".csv"):
        return load_pool_csv(path_str)
    return load_pool(path_str)


def _parse_box(text: str, parser: _Parser, flag: str) -> BBox:
    parts = text.split(",")
    if len(parts) != 4:
        parser.error(f"{flag} must be 'x1,y1,x2,y2', got {text!r}")
    try:
        coords = [float(p) for p in parts]
    except ValueError:
        parser.error(f"{flag} must hold four numbers, got {text!r}")
    return BBox(*coords)


def _cmd_select(args, parser: _Parser) -> int:
    pool = _load_any_pool(args.manifest)
    config = SelectionConfig(
        strategy=Strategy(args.strategy),
        budget=args.budget,
        interval=args.interval,
        frames_per_sequence=args.frames,
        seed=args.seed,
        metric=Metric(args.metric),
    )
    result = run_selection(pool, config)
    out = _resolve_out(args.out)
    save_selection(result, config, pool.ids, out)
    print(f"wrote {out}", file=sys.stderr)
    return 0


def _cmd_stats(args, parser: _Parser) -> int:
    pool = _load_any_pool(args.manifest)
    reps = multi_frame_reps(pool, interval=args.interval, count=args.frames)
    stats = nn_stats(distance_matrix(reps.reps, Metric(args.metric)))
    print(f"n\t{pool.n}")
    print(f"dim\t{pool.dim}")
    print(f"ave_d\t{stats.ave_d!r}")
    counts, edges = np.histogram(stats.d, bins=args.bins)
    for i, c in enumerate(counts):
        print(f"hist\t{float(edges[i])!r}\t{float(edges[i + 1])!r}\t{int(c)}")
    if args.fig:
        from .plots import render_distance_histogram

        fig_path = _resolve_out(args.fig)
        render_distance_histogram(stats.d, stats.ave_d, fig_path, bins=args.bins)
        print(f"wrote {fig_path}", file=sys.stderr)
    return 0


def _cmd_loss(args, parser: _Parser) -> int:
    pred = _parse_box(args.pred, parser, "--pred")
    gt = _parse_box(args.gt, parser, "--gt")
    if args.kind != "tversky" and (args.alpha is not None or args.beta is not None):
        parser.error("--alpha/--beta only apply to --kind tversky")
    fixed = {"dice": (0.5, 0.5), "jaccard": (1.0, 1.0), "iou": (1.0, 1.0)}
    if args.kind == "tversky":
        alpha = 0.4 if args.alpha is None else args.alpha
        beta = 0.6 if args.beta is None else args.beta
    else:
        alpha, beta = fixed[args.kind]
    if args.kind == "iou" and not args.grad:
        value = iou_loss(pred, gt)
        print(repr(value.value))
        return 0
    loss = tversky_loss(pred, gt, LossParams(alpha=alpha, beta=beta), with_grad=args.grad)
    print(repr(loss.value))
    if args.grad:
        print("grad\t" + "\t".join(repr(float(g)) for g in loss.grad))
    return 0


def _cmd_bench(args, parser: _Parser) -> int:
    config = SynthConfig(
        clusters=args.clusters,
        samples_per_cluster=args.samples_per_cluster,
        dim=args.dim,
        frames_per_sequence=args.frames,
        cluster_spread=args.spread,
        outliers=args.outliers,
        seed=args.base_seed,
    )
    try:
        strategies = tuple(Strategy(s) for s in args.strategies.split(","))
    except ValueError:
        parser.error(f"unknown strategy in {args.strategies!r}")
    seeds = range(args.base_seed, args.base_seed + args.seeds)
    report = run_bench(config, budgets=args.budget, strategies=strategies, seeds=seeds)
    out = _resolve_out(args.out)
    write_bench_report(report, out)
    print(f"wrote {out}", file=sys.stderr)
    if not args.no_figure:
        from .plots import render_bench_figure

        fig_path = out.with_suffix(".png")
        render_bench_figure(report, fig_path)
        print(f"wrote {fig_path}", file=sys.stderr)
    for s in report.summaries:
        print(
            f"summary\t{s.strategy.value}\t{s.budget}\t"
            f"{s.mean_clusters_covered!r}\t{s.coverage_rate!r}\t{s.outliers_selected}"
        )
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="seqsel", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_select = sub.add_parser("select", help="select a subset of a pool under a budget")
    p_select.add_argument("--manifest", required=True, help="pool manifest (or .csv fixture)")
    p_select.add_argument(
        "--strategy", required=True, choices=[s.value for s in Strategy]
    )
    p_select.add_argument("--budget", required=True, type=int)
    p_select.add_argument("--interval", type=int, default=10, help="frame sampling stride")
    p_select.add_argument("--frames", type=int, default=5, help="frames fused per sequence")
    p_select.add_argument("--metric", choices=[m.value for m in Metric], default="cosine")
    p_select.add_argument("--seed", type=int, default=0)
    p_select.add_argument("--out", required=True, help="selection output file")
    p_select.set_defaults(func=_cmd_select)

    p_stats = sub.add_parser("stats", help="print pool size and nearest-neighbor statistics")
    p_stats.add_argument("--manifest", required=True)
    p_stats.add_argument("--interval", type=int, default=10)
    p_stats.add_argument("--frames", type=int, default=5)
    p_stats.add_argument("--metric", choices=[m.value for m in Metric], default="cosine")
    p_stats.add_argument("--bins", type=int, default=16)
    p_stats.add_argument("--fig", help="also render the distance histogram to this file")
    p_stats.set_defaults(func=_cmd_stats)

    p_loss = sub.add_parser("loss", help="evaluate a box-overlap loss")
    p_loss.add_argument("--pred", required=True, help="predicted box x1,y1,x2,y2")
    p_loss.add_argument("--gt", required=True, help="ground-truth box x1,y1,x2,y2")
    p_loss.add_argument(
        "--kind", choices=["iou", "tversky", "dice", "jaccard"], default="tversky"
    )
    p_loss.add_argument("--alpha", type=float, default=None)
    p_loss.add_argument("--beta", type=float, default=None)
    p_loss.add_argument("--grad", action="store_true", help="also print the gradient")
    p_loss.set_defaults(func=_cmd_loss)

    p_bench = sub.add_parser("bench", help="run the synthetic coverage benchmark")
    p_bench.add_argument("--clusters", required=True, type=int)
    p_bench.add_argument(
        "--budget", required=True, type=int, action="append",
        help="selection budget (repeatable)",
    )
    p_bench.add_argument("--seeds", required=True, type=int, help="number of seeds to run")
    p_bench.add_argument("--out", required=True, help="report output file")
    p_bench.add_argument("--samples-per-cluster", type=int, default=40)
    p_bench.add_argument("--dim", type=int, default=16)
    p_bench.add_argument("--frames", type=int, default=5)
    p_bench.add_argument("--spread", type=float, default=0.08)
    p_bench.add_argument("--outliers", type=int, default=2)
    p_bench.add_argument(
        "--strategies", default="random,sal,mal,kmal", help="comma-separated strategies"
    )
    p_bench.add_argument("--base-seed", type=int, default=0)
    p_bench.add_argument("--no-figure", action="store_true", help="skip figure rendering")
    p_bench.set_defaults(func=_cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, parser)
    except SeqselError as exc:
        print(f"seqsel: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"seqsel: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"seqsel: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
