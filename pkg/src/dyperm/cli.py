"""``dyperm`` command-line entry point.

Exit codes: 0 success, 2 usage or configuration error, 3 input-format
error, 4 audit failure (maintained permanence drifted from recomputation).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time

from . import FORMAT_VERSION, __version__
from .bench import bench
from .engine import DyPermEngine
from .errors import AuditFailure, ConfigInvalid, DyPermError
from .evaluation import score_against_truth
from .graph import Partition
from .io import (
    parse_communities,
    parse_edgelist,
    parse_events,
    format_events,
    truth_path,
    write_communities,
)
from .permanence import graph_perm
from .runner import run_timeline
from .static import InitConfig, static_maximize
from .workload import GenConfig, gen_dynamic, snapshot_diff

EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_AUDIT = 4

NMI_NOTE = "NMI is normalized by the arithmetic mean of the two entropies (natural log)."


def _sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def _write_manifest(out_path, command, args, inputs, wall_s) -> None:
    manifest = {
        "tool": "dyperm",
        "version": __version__,
        "format_version": FORMAT_VERSION,
        "command": command,
        "args": {k: v for k, v in sorted(vars(args).items()) if k != "func"},
        "inputs": {p: _sha256(p) for p in inputs if p and os.path.isfile(p)},
        "output": os.path.basename(out_path),
        "output_sha256": _sha256(out_path),
        "wall_clock_s": round(wall_s, 6),
    }
    with open(str(out_path) + ".manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _init_config(args) -> InitConfig:
    return InitConfig(
        max_sweeps=args.max_sweeps, seed=args.seed, min_gain=args.min_gain, restarts=args.restarts
    )


def _base_partition(args, graph) -> Partition:
    if args.static_init:
        return static_maximize(graph, _init_config(args))
    labels = parse_communities(args.base_communities)
    if labels.keys() != graph.adj.keys():
        extra = sorted(set(labels) - set(graph.adj))[:3]
        missing = sorted(set(graph.adj) - set(labels))[:3]
        raise DyPermError(
            f"{args.base_communities}: base communities do not match the snapshot's nodes"
            f" (missing e.g. {missing}, unknown e.g. {extra})"
        )
    return Partition.from_labels(labels)


def cmd_init(args) -> int:
    g = parse_edgelist(args.graph)
    p = static_maximize(g, _init_config(args))
    write_communities(p, args.out)
    return 0


def cmd_perm(args) -> int:
    g = parse_edgelist(args.graph)
    labels = parse_communities(args.communities)
    if labels.keys() != g.adj.keys():
        raise DyPermError("community file does not cover exactly the graph's nodes")
    report = graph_perm(g, Partition.from_labels(labels))
    print(f"graph_perm={report.graph_perm:.6f}")
    if args.per_vertex == "-":
        sys.stdout.write(report.tsv())
    elif args.per_vertex:
        with open(args.per_vertex, "w", encoding="utf-8") as fh:
            fh.write(report.tsv())
    return 0


def cmd_eval(args) -> int:
    detected = parse_communities(args.detected)
    truth = parse_communities(args.truth)
    rec = score_against_truth(detected, truth)
    print(f"nmi={rec.nmi:.6f} ari={rec.ari:.6f}")
    if rec.skipped:
        print(f"skipped={rec.skipped}", file=sys.stderr)
    return 0


def _truth_lookup(truth_dir):
    def lookup(t):
        path = truth_path(truth_dir, t)
        return parse_communities(path) if os.path.isfile(path) else None

    return lookup


def _truth_stamps(truth_dir) -> list[int]:
    stamps = []
    for name in os.listdir(truth_dir):
        stem, ext = os.path.splitext(name)
        if ext == ".comms" and stem.startswith("t") and stem[1:].isdigit():
            stamps.append(int(stem[1:]))
    return sorted(stamps)


def cmd_run(args) -> int:
    started = time.perf_counter()
    metrics = [m.strip() for m in args.metrics.split(",") if m.strip()]
    if not set(metrics) <= {"nmi", "ari"}:
        raise ConfigInvalid(f"unknown metric(s) in --metrics {args.metrics!r}")
    graph = parse_edgelist(args.base_snapshot)
    events = parse_events(args.events)
    engine = DyPermEngine(graph, _base_partition(args, graph), audit=args.audit)
    truth, extra = None, ()
    if args.truth_dir:
        if not os.path.isdir(args.truth_dir):
            raise FileNotFoundError(f"{args.truth_dir}: no such directory")
        truth, extra = _truth_lookup(args.truth_dir), _truth_stamps(args.truth_dir)
    result = run_timeline(engine, events, truth, extra)
    text = result.to_csv(timing=not args.no_timing, metrics=metrics)
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    if args.final_communities:
        write_communities(engine.partition, args.final_communities)
    inputs = [args.base_snapshot, args.events, args.base_communities]
    _write_manifest(args.out, "run", args, inputs, time.perf_counter() - started)
    return 0


def cmd_gen(args) -> int:
    cfg = GenConfig(
        n=args.n, k=args.k, mu=args.mu, avg_degree=args.avg_degree, steps=args.steps,
        churn=args.churn, seed=args.seed, switch=args.switch,
    )
    gen_dynamic(cfg).write(args.out_dir)
    return 0


def cmd_diff(args) -> int:
    a, b = parse_edgelist(args.a), parse_edgelist(args.b)
    sys.stdout.write(format_events(snapshot_diff(a, b, timestamp=args.timestamp)))
    return 0


def cmd_bench(args) -> int:
    started = time.perf_counter()
    if args.static_every < 1:
        raise ConfigInvalid("--static-every must be >= 1")
    graph = parse_edgelist(args.base_snapshot)
    events = parse_events(args.events)
    if args.max_events is not None:
        events = events[: args.max_events]
    report = bench(graph, _base_partition(args, graph), events, _init_config(args), args.static_every)
    sys.stdout.write(report.summary())
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(report.per_event_csv())
        _write_manifest(
            args.out, "bench", args, [args.base_snapshot, args.events, args.base_communities],
            time.perf_counter() - started,
        )
    return 0


def _add_init_flags(p, seed_default=0):
    p.add_argument("--seed", type=int, default=seed_default, help="shuffle seed for the static sweeps")
    p.add_argument("--max-sweeps", type=int, default=20)
    p.add_argument("--min-gain", type=float, default=1e-9)
    p.add_argument("--restarts", type=int, default=1, help="best-of-k seeds by graph permanence")


def _add_base_flags(p):
    p.add_argument("--base-snapshot", required=True, metavar="EDGES")
    base = p.add_mutually_exclusive_group(required=True)
    base.add_argument("--base-communities", metavar="COMMS")
    base.add_argument("--static-init", action="store_true", help="build C0 with the static maximizer")
    p.add_argument("--events", required=True, metavar="STREAM")
    _add_init_flags(p)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dyperm",
        description="Incremental permanence-maximizing community detection on dynamic graphs.",
        epilog=NMI_NOTE,
    )
    parser.add_argument(
        "--version", action="version", version=f"dyperm {__version__} (format {FORMAT_VERSION})"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("init", help="static permanence maximization of a snapshot")
    p.add_argument("--graph", required=True)
    p.add_argument("--out", required=True)
    _add_init_flags(p)
    p.set_defaults(func=cmd_init)

    p = sub.add_parser("run", help="replay an event stream incrementally", epilog=NMI_NOTE)
    _add_base_flags(p)
    p.add_argument("--truth-dir", help="directory of t<k>.comms ground-truth files")
    p.add_argument("--metrics", default="nmi,ari", help="comma list from {nmi, ari}")
    p.add_argument("--out", required=True, help="results CSV")
    p.add_argument("--audit", action="store_true", help="verify permanence after every event (slow)")
    p.add_argument("--no-timing", action="store_true", help="omit the elapsed_us column")
    p.add_argument("--final-communities", help="write the final partition here")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("perm", help="permanence of a graph under a partition")
    p.add_argument("--graph", required=True)
    p.add_argument("--communities", required=True)
    p.add_argument("--per-vertex", metavar="TSV", help="per-vertex breakdown file ('-' for stdout)")
    p.set_defaults(func=cmd_perm)

    p = sub.add_parser("eval", help="NMI/ARI of detected vs. truth communities", epilog=NMI_NOTE)
    p.add_argument("--detected", required=True)
    p.add_argument("--truth", required=True)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("gen", help="generate a planted-partition dynamic workload")
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--k", type=int, default=20)
    p.add_argument("--mu", type=float, default=0.2)
    p.add_argument("--avg-degree", type=float, default=15.0)
    p.add_argument("--steps", type=int, default=20)
    p.add_argument("--churn", type=float, default=0.02)
    p.add_argument("--switch", type=float, default=None, help="block-switch fraction per step (default churn/2)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("diff", help="event stream turning snapshot A into B")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--timestamp", type=int, default=1)
    p.set_defaults(func=cmd_diff)

    p = sub.add_parser("bench", help="incremental vs. static recomputation timing")
    _add_base_flags(p)
    p.add_argument("--max-events", type=int, default=None)
    p.add_argument(
        "--static-every", type=int, default=1,
        help="re-run the static arm every k-th event and extrapolate (default 1: every event)",
    )
    p.add_argument("--out", help="per-event timing CSV")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except AuditFailure as err:
        print(f"dyperm: audit failure: {err}", file=sys.stderr)
        return EXIT_AUDIT
    except ConfigInvalid as err:
        print(f"dyperm: error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except (DyPermError, OSError) as err:
        print(f"dyperm: error: {err}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
