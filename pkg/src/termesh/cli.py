"""Command-line driver.

    termesh run --node F.node --ele F.ele --neigh F.neigh [--trivertex F.trivertex]
    termesh run --random N [--bbox x0,y0,x1,y1] [--seed S]

plus, for either input source:

    --backend seq|par|mixed --workers W --reps R
    --out mesh.polymesh --svg out.svg --stats stats.json --figures DIR
"""

import argparse
import os
import sys
from pathlib import Path

from .backend import SEQUENTIAL, parallel
from .errors import TermeshError
from .io_formats import TriangleFileSet
from .pipeline import PipelineConfig, RandomInput, bench, run_pipeline


def _bbox(text):
    parts = text.split(",")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("bbox must be x0,y0,x1,y1")
    try:
        return tuple(float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad bbox value in {text!r}") from None


def build_parser():
    p = argparse.ArgumentParser(
        prog="termesh",
        description="Turn a triangulation into a polygonal mesh of "
                    "terminal-edge regions.")
    sub = p.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run the label/traversal/reparation pipeline")
    src = run.add_argument_group("input (file set or random points)")
    src.add_argument("--node", type=Path, help=".node point file")
    src.add_argument("--ele", type=Path, help=".ele triangle file")
    src.add_argument("--neigh", type=Path, help=".neigh neighbor file")
    src.add_argument("--trivertex", type=Path, help="optional .trivertex file")
    src.add_argument("--random", type=int, metavar="N",
                     help="triangulate N uniform random points instead of reading files")
    src.add_argument("--bbox", type=_bbox, default=(0.0, 0.0, 10000.0, 10000.0),
                     metavar="X0,Y0,X1,Y1", help="random-point box (default 0,0,10000,10000)")
    src.add_argument("--seed", type=int, default=0, help="random-point seed")
    exe = run.add_argument_group("execution")
    exe.add_argument("--backend", choices=("seq", "par", "mixed"), default="seq",
                     help="seq, par, or mixed (parallel label+traversal, "
                          "sequential reparation)")
    exe.add_argument("--workers", type=int, default=max(1, os.cpu_count() or 1),
                     help="worker count for parallel phases")
    exe.add_argument("--reps", type=int, default=1,
                     help="repetitions; above 1, report mean phase times")
    out = run.add_argument_group("outputs")
    out.add_argument("--out", type=Path, help="polygon mesh file to write")
    out.add_argument("--svg", type=Path, help="SVG rendering to write")
    out.add_argument("--stats", type=Path, help="stats JSON to write")
    out.add_argument("--figures", type=Path, help="directory for report figures (PNG)")
    return p


def _backends(name, workers):
    par = parallel(workers)
    if name == "seq":
        return SEQUENTIAL, SEQUENTIAL, SEQUENTIAL
    if name == "par":
        return par, par, par
    return par, par, SEQUENTIAL  # mixed: parallel label+traversal, sequential repair


def _config(args) -> PipelineConfig:
    file_args = (args.node, args.ele, args.neigh)
    if args.random is not None:
        if any(a is not None for a in file_args):
            raise TermeshError("choose either --random or the --node/--ele/--neigh set")
        source = {"random": RandomInput(args.random, args.bbox, args.seed)}
    else:
        if any(a is None for a in file_args):
            raise TermeshError("file input needs --node, --ele and --neigh together")
        source = {"files": TriangleFileSet(args.node, args.ele, args.neigh, args.trivertex)}
    label_b, trav_b, rep_b = _backends(args.backend, args.workers)
    return PipelineConfig(
        **source,
        label_backend=label_b,
        traversal_backend=trav_b,
        reparation_backend=rep_b,
        out_polymesh=args.out,
        out_svg=args.svg,
        out_stats=args.stats,
        out_figures=args.figures,
        reps=args.reps,
    )


def _report(stats, args):
    print(f"input: {stats.input_vertices} vertices, {stats.input_triangles} triangles")
    reps = f" (mean of {stats.reps} reps)" if stats.reps > 1 else ""
    print(f"label {stats.label_seconds:.4f} s | traversal {stats.traversal_seconds:.4f} s"
          f" | reparation {stats.reparation_seconds:.4f} s"
          f" | total {stats.total_seconds:.4f} s{reps}")
    print(f"polygons after traversal: {stats.polygons_after_traversal} "
          f"({stats.nonsimple_after_traversal} non-simple, repaired in "
          f"{stats.reparation_rounds} round(s))")
    print(f"final mesh: {stats.final_polygons} polygons, "
          f"{stats.final_vertices} vertices, {stats.final_edges} edges")
    for label, path in (("mesh", args.out), ("svg", args.svg),
                        ("stats", args.stats), ("figures", args.figures)):
        if path is not None:
            print(f"wrote {label}: {path}")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _config(args)
        if config.reps > 1:
            stats = bench(config)
        else:
            _, stats = run_pipeline(config)
        _report(stats, args)
    except TermeshError as e:
        print(f"termesh: error: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
