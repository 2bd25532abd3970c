"""Command line: ``slimsell {run,storage,dump,selftest}``.

Exit codes: 0 ok, 1 I/O or configuration error, 2 verification failure.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import bench
from .readers import GraphFormatError
from .selftest import selftest


def _csv_list(text):
    return [t.strip() for t in text.split(",") if t.strip()]


def _int_list(text):
    return [int(t) for t in _csv_list(text)]


def _on_off(text):
    if text not in ("on", "off"):
        raise argparse.ArgumentTypeError("expected 'on' or 'off'")
    return text == "on"


def _slimchunk(text):
    if text == "off":
        return None
    val = int(text)
    if val < 1:
        raise argparse.ArgumentTypeError("L must be >= 1")
    return val


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="slimsell", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def graph_args(p):
        p.add_argument("--graph", required=True,
                       help="edge-list/.mtx path or generator spec, e.g. kron:scale=14,ef=16,seed=1")
        p.add_argument("--chunk-height", "-C", type=_int_list, default=[8], help="C, comma list allowed")

    run = sub.add_parser("run", help="BFS sweeps with per-iteration CSV output")
    graph_args(run)
    run.add_argument("--sigma", type=_csv_list, default=["n"], help="int, n, sqrt_n or C; comma list")
    run.add_argument("--semiring", type=_csv_list, default=["tropical"],
                     help="tropical,real,boolean,selmax")
    run.add_argument("--layout", type=_csv_list, default=["slimsell"], help="slimsell,sell")
    run.add_argument("--root", default="0", help="vertex id or random:k")
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--slimwork", type=_on_off, default=False, metavar="on|off")
    run.add_argument("--slimchunk", type=_slimchunk, default=None, metavar="off|L")
    run.add_argument("--schedule", choices=["static", "dynamic"], default="static")
    run.add_argument("--workers", type=int, default=1)
    run.add_argument("--repeat", type=int, default=1)
    run.add_argument("--verify", type=_on_off, default=True, metavar="on|off")
    run.add_argument("--out", type=Path, default=Path("results"))
    run.add_argument("--inject-fault", choices=["layout", "pad"], default=None, help=argparse.SUPPRESS)

    st = sub.add_parser("storage", help="cell counts per representation")
    graph_args(st)
    st.add_argument("--sigma", type=_csv_list, default=["1", "C", "sqrt_n", "n"])
    st.add_argument("--out", type=Path, default=None)

    dp = sub.add_parser("dump", help="print the chunk layout")
    dp.add_argument("--graph", required=True)
    dp.add_argument("--chunk-height", "-C", type=int, default=4)
    dp.add_argument("--sigma", default="1")
    dp.add_argument("--layout", choices=["slimsell", "sell"], default="slimsell")
    dp.add_argument("--semiring", default="tropical")

    sf = sub.add_parser("selftest", help="run the embedded invariant checks")
    sf.add_argument("--inject-fault", choices=["pad"], default=None, help=argparse.SUPPRESS)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            cfg = bench.RunConfig(
                graph=args.graph, chunk_heights=args.chunk_height, sigmas=args.sigma,
                semirings=args.semiring, layouts=args.layout, root=args.root, seed=args.seed,
                slimwork=args.slimwork, slimchunk=args.slimchunk, schedule=args.schedule,
                workers=args.workers, repeat=args.repeat, verify=args.verify, out=args.out,
                inject_fault=args.inject_fault,
            )
            outcome = bench.run(cfg)
            for line in outcome.failures:
                print(f"verification failed {line}", file=sys.stderr)
            print(f"{len(outcome.summary_rows)} run groups, {len(outcome.iteration_rows)} iteration records "
                  f"-> {args.out}")
            return outcome.exit_code
        if args.command == "storage":
            bench.storage(args.graph, args.chunk_height, args.sigma, args.out)
            return 0
        if args.command == "dump":
            sys.stdout.write(bench.dump_layout(args.graph, args.chunk_height, args.sigma,
                                               args.layout, args.semiring))
            return 0
        return selftest(args.inject_fault)
    except (bench.ConfigError, GraphFormatError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return bench.EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
