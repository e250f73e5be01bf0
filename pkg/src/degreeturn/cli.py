"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 input error, 3 simulation stopped
before reaching the target average degree.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import json
import logging
import os
import sys
from pathlib import Path

from . import __version__, _kernels
from .attributes import AttributeTable, CoverageError, homophily_curve
from .bashift import ModelParams, Simulation, generate_ba, params_dict
from .curves import BinSpec, read_curve, write_curve
from .graph import EdgeListError, average_degree, build_graph, write_edge_list, write_id_map
from .interactions import ExchangeLedger, WallLedger, activity_curve, reciprocation_curve
from .metrics import degree_ccdf, node_metrics, tie_strengths
from .turnpoint import (
    DEFAULT_RANGE,
    DEFAULT_THRESHOLD,
    DEFAULT_TRANSFORMS,
    DetectionError,
    break_consensus,
    detect_break,
    write_breaks,
)

log = logging.getLogger("degreeturn")

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_NONCONVERGED = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _range(text):
    lo, sep, hi = text.partition(":")
    if not sep:
        raise argparse.ArgumentTypeError("expected K_LO:K_HI")
    return float(lo), float(hi)


def _bins(text):
    try:
        return BinSpec.parse(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def build_parser():
    p = _Parser(prog="degreeturn", description="Degree-curve analytics and constrained network growth.",
                epilog="degreeturn --replay MANIFEST re-runs a recorded command.")
    p.add_argument("--version", action="version", version=f"degreeturn {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", type=Path, default=Path("."), help="output directory")
    common.add_argument("--threads", type=int, default=None)
    common.add_argument("--bins", type=_bins, default=BinSpec(), help="exact | log:RATIO")
    common.add_argument("-v", "--verbose", action="count", default=0)
    detect_opts = argparse.ArgumentParser(add_help=False)
    detect_opts.add_argument("--range", type=_range, default=DEFAULT_RANGE, metavar="K_LO:K_HI")
    detect_opts.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD)
    graph_in = argparse.ArgumentParser(add_help=False)
    graph_in.add_argument("--edges", type=Path, required=True)
    graph_in.add_argument("--streaming", action="store_true",
                          help="large-graph mode: no per-edge output")
    graph_in.add_argument("--header", choices=("auto", "yes", "no"), default="auto",
                          help="whether the edge list starts with a header line")

    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    m = sub.add_parser("metrics", help="structural curves and summary for an edge list", parents=[common, graph_in])
    m.add_argument("--plot-script", action="store_true",
                   help="also write a matplotlib script for the curve files")

    h = sub.add_parser("homophily", help="homophily curve H(k) from a profile attribute CSV", parents=[common, graph_in])
    h.add_argument("--attrs", type=Path, required=True)
    h.add_argument("--skip-missing", action="store_true")

    i = sub.add_parser("interactions", help="wall activity L(k) and reciprocation r(k)", parents=[common, graph_in])
    i.add_argument("--wall", type=Path)
    i.add_argument("--exchange", type=Path)
    i.add_argument("--poster-side", action="store_true")
    i.add_argument("--exclude-self-posts", action="store_true")

    d = sub.add_parser("detect", help="turning-point detection on curve CSV files", parents=[common, detect_opts])
    d.add_argument("curves", nargs="+", type=Path, help="curve CSV files; name = file stem")
    d.add_argument("--transform", choices=["log-x", "log-log"],
                   help="override the per-curve default")

    s = sub.add_parser("simulate", help="evolve a degree-constrained network and analyse the result", parents=[common, detect_opts])
    s.add_argument("--params", required=True, metavar="n,kavg,c,d,r,beta,kT")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--max-units", type=int, default=1_000_000)
    s.add_argument("--m", type=int, default=2, help="BA seed attachment count")
    s.add_argument("--live-weights", action="store_true")

    b = sub.add_parser("ba", help="write a preferential-attachment seed graph", parents=[common])
    b.add_argument("--nodes", type=int, required=True)
    b.add_argument("--m", type=int, default=2)
    b.add_argument("--seed", type=int, default=0)
    return p


# -- helpers ---------------------------------------------------------------------


def _sha256(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()


def _write_manifest(out, argv, args, inputs, extra=None):
    record = {
        "tool": "degreeturn",
        "version": __version__,
        "command": args.command,
        "argv": list(argv),
        "cwd": os.getcwd(),
        "inputs": {str(p): _sha256(p) for p in inputs if p is not None},
    }
    if extra:
        record.update(extra)
    with open(out / "manifest.json", "w", encoding="utf-8") as fh:
        json.dump(record, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _load_graph(path, header="auto"):
    g, report = build_graph(path, header={"auto": None, "yes": True, "no": False}[header])
    log.info("%s: |V|=%d |E|=%d (dropped %d self-loops, %d duplicates)",
             path, g.n, g.num_edges, report.self_loops, report.duplicates)
    return g, report


def _write_summary(g, metrics, path):
    deg = metrics.degree
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["nodes", "edges", "avg_degree", "clustering", "k_max", "k_min"])
        w.writerow([
            g.n, g.num_edges, repr(average_degree(g)), repr(float(metrics.clustering.mean())),
            int(deg.max()), int(deg.min()),
        ])


def _metric_suite(g, out, binning, per_edge=True):
    metrics = node_metrics(g)
    curves = metrics.curves(binning)
    curves["ccdf"] = degree_ccdf(g)
    write_curve(curves["ccdf"], out / "ccdf.csv")
    for name in ("ck", "knn", "knn_norm", "ks", "wk"):
        write_curve(curves[name], out / f"{name}.csv")
    _write_summary(g, metrics, out / "summary.csv")
    if per_edge:
        w = tie_strengths(g)
        src, dst = g.arcs()
        keep = src < dst
        with open(out / "tie_strength.csv", "w", encoding="utf-8", newline="") as fh:
            fh.write("i,j,w\n")
            for a, b, x in zip(src[keep].tolist(), dst[keep].tolist(), w[keep].tolist()):
                fh.write(f"{a},{b},{x!r}\n")
    return curves


_PLOT_TEMPLATE = '''"""Plot the curve files in this directory on log axes."""
import csv
import matplotlib.pyplot as plt

names = {names!r}
fig, axes = plt.subplots(1, len(names), figsize=(4 * len(names), 3.5))
for ax, name in zip(axes, names):
    with open(name + ".csv") as fh:
        rows = list(csv.DictReader(fh))
    key = "k" if "k" in rows[0] else "k_lo"
    ax.loglog([float(r[key]) for r in rows], [float(r["mean"]) for r in rows], ".", ms=3)
    ax.set_xlabel("k")
    ax.set_title(name)
fig.tight_layout()
fig.savefig("curves.png", dpi=150)
'''


def _detect_all(curves, args, names=None):
    reports = []
    for name, curve in curves.items():
        if names is not None and name not in names:
            continue
        transform = getattr(args, "transform", None) or DEFAULT_TRANSFORMS.get(name, "log-x")
        try:
            reports.append(detect_break(curve, transform, args.range, args.threshold, name=name))
        except DetectionError as e:
            log.warning("%s: %s", name, e)
    return reports, break_consensus(reports)


# -- subcommands -----------------------------------------------------------------


def cmd_metrics(args):
    g, report = _load_graph(args.edges, args.header)
    write_id_map(report, args.out / "id_map.csv")
    _metric_suite(g, args.out, args.bins, per_edge=not args.streaming)
    if args.plot_script:
        (args.out / "plot_curves.py").write_text(
            _PLOT_TEMPLATE.format(names=["ccdf", "ck", "knn", "wk"]), encoding="utf-8"
        )
    return EXIT_OK, [args.edges], {}


def cmd_homophily(args):
    g, report = _load_graph(args.edges, args.header)
    table = AttributeTable.read_csv(args.attrs, report.id_map(), g.n)
    try:
        curve = homophily_curve(g, table, args.bins, skip_missing=args.skip_missing)
    except CoverageError as e:
        ext = [report.external_ids[i] for i in e.missing[:10]]
        raise CoverageError(ext + e.missing[10:]) from None
    write_curve(curve, args.out / "hk.csv")
    return EXIT_OK, [args.edges, args.attrs], {}


def cmd_interactions(args):
    if args.wall is None and args.exchange is None:
        raise UsageError("interactions needs --wall and/or --exchange")
    g, report = _load_graph(args.edges, args.header)
    ids = report.id_map()
    extra = {}
    if args.wall is not None:
        wall = WallLedger.read(args.wall, ids)
        curve = activity_curve(g, wall, args.bins, poster_side=args.poster_side,
                               include_self=not args.exclude_self_posts)
        write_curve(curve, args.out / "lk.csv")
        extra["wall_records_skipped"] = wall.skipped
    if args.exchange is not None:
        ex = ExchangeLedger.read(args.exchange, ids, g.n)
        write_curve(reciprocation_curve(g, ex, args.bins), args.out / "rk.csv")
        extra["exchange_rows_skipped"] = ex.skipped
    return EXIT_OK, [args.edges, args.wall, args.exchange], extra


def cmd_detect(args):
    curves = {}
    for path in args.curves:
        curves[path.stem] = read_curve(path)
    reports, consensus = _detect_all(curves, args)
    write_breaks(reports, args.out / "breaks.csv", consensus)
    return EXIT_OK, list(args.curves), {}


def cmd_simulate(args):
    try:
        params = ModelParams.parse(
            args.params, seed=args.seed, max_units=args.max_units, m=args.m,
            live_weights=args.live_weights,
        )
    except ValueError as e:
        raise UsageError(f"--params: {e}") from None
    sim = Simulation(params)
    g, evo = sim.run()
    write_edge_list(g, args.out / "edges.txt")
    evo.write_csv(args.out / "evolution_log.csv")
    curves = _metric_suite(g, args.out, args.bins, per_edge=False)
    reports, consensus = _detect_all(curves, args, names=("ccdf", "ck", "knn", "wk"))
    write_breaks(reports, args.out / "breaks.csv", consensus)
    extra = {
        "params": params_dict(params),
        "stop_reason": evo.stop_reason,
        "units": len(evo.unit),
    }
    # a stalled run (c = d = r = 0) is a deliberate identity evolution
    code = EXIT_NONCONVERGED if evo.stop_reason == "max_units" else EXIT_OK
    return code, [], extra


def cmd_ba(args):
    g = generate_ba(args.nodes, args.m, args.seed)
    write_edge_list(g, args.out / "edges.txt")
    return EXIT_OK, [], {"nodes": args.nodes, "m": args.m, "seed": args.seed}


COMMANDS = {
    "metrics": cmd_metrics,
    "homophily": cmd_homophily,
    "interactions": cmd_interactions,
    "detect": cmd_detect,
    "simulate": cmd_simulate,
    "ba": cmd_ba,
}


def replay(manifest_path):
    """Re-run the command recorded in a manifest."""
    with open(manifest_path, encoding="utf-8") as fh:
        record = json.load(fh)
    prev = os.getcwd()
    os.chdir(record.get("cwd", prev))
    try:
        return main(record["argv"])
    finally:
        os.chdir(prev)


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    if argv[:1] == ["--replay"]:
        if len(argv) != 2:
            print("usage: degreeturn --replay MANIFEST", file=sys.stderr)
            return EXIT_USAGE
        return replay(argv[1])
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(levelname)s %(name)s: %(message)s",
    )
    _kernels.set_threads(args.threads)
    try:
        args.out.mkdir(parents=True, exist_ok=True)
        code, inputs, extra = COMMANDS[args.command](args)
    except UsageError as e:
        print(f"degreeturn: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (EdgeListError, CoverageError, DetectionError, OSError, ValueError, KeyError) as e:
        print(f"degreeturn: input error: {e}", file=sys.stderr)
        return EXIT_INPUT
    _write_manifest(args.out, argv, args, inputs, extra)
    return code


if __name__ == "__main__":
    sys.exit(main())
