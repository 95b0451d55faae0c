"""End-to-end pipeline driver, phase statistics, and the benchmark loop.

The pipeline is: validate, label, traverse, repair. Each of the three
phases is wall-timed (validation and input loading are preparation, not
phases, and file output is never timed); the total is the sum of the three
phase times by definition. The benchmark loop repeats the pipeline on the
same in-memory input and reports per-phase and per-kernel means.
"""

import json
import time
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .backend import SEQUENTIAL, Backend
from .errors import StructuralError, ValidationError
from .io_formats import (TriangleFileSet, generate_random_delaunay,
                         read_triangulation, write_polymesh, write_svg)
from .labeling import label_all
from .mesh_core import Triangulation, compute_trivertex, validate
from .oracle import canonicalize
from .reparation import repair_all
from .traversal import (PolygonMesh, boundary_edge_count, build_polygon_mesh,
                        repeated_vertex_flags, unique_vertices)

STATS_SCHEMA_VERSION = 1


@dataclass
class RandomInput:
    """Self-contained input: n uniform points in bbox, triangulated."""

    n: int
    bbox: tuple = (0.0, 0.0, 10000.0, 10000.0)
    seed: int = 0


@dataclass
class PipelineConfig:
    """What to run and where to write it. Exactly one of files/random."""

    files: TriangleFileSet | None = None
    random: RandomInput | None = None
    label_backend: Backend = SEQUENTIAL
    traversal_backend: Backend = SEQUENTIAL
    reparation_backend: Backend = SEQUENTIAL
    out_polymesh: Path | None = None
    out_svg: Path | None = None
    out_stats: Path | None = None
    out_figures: Path | None = None
    reps: int = 1

    def __post_init__(self):
        if (self.files is None) == (self.random is None):
            raise ValueError("configure exactly one input source (files or random)")
        if self.reps < 1:
            raise ValueError("repetitions must be at least 1")


@dataclass
class PhaseStats:
    """Flat, versioned record of one pipeline run (or a mean over reps)."""

    input_vertices: int
    input_triangles: int
    label_seconds: float
    traversal_seconds: float
    reparation_seconds: float
    total_seconds: float
    label_max_seconds: float
    label_seed_seconds: float
    label_frontier_seconds: float
    polygons_after_traversal: int
    simple_after_traversal: int
    nonsimple_after_traversal: int
    reparation_rounds: int
    final_polygons: int
    final_vertices: int
    final_edges: int
    label_backend: str
    traversal_backend: str
    reparation_backend: str
    reps: int = 1

    _TIME_FIELDS = ("label_seconds", "traversal_seconds", "reparation_seconds",
                    "total_seconds", "label_max_seconds", "label_seed_seconds",
                    "label_frontier_seconds")

    def to_record(self) -> dict:
        return {"schema_version": STATS_SCHEMA_VERSION, **asdict(self)}

    @classmethod
    def mean(cls, runs: list) -> "PhaseStats":
        """Average the timings of several runs; counts must agree."""
        if not runs:
            raise ValueError("no runs to aggregate")
        base = asdict(runs[-1])
        for name in cls._TIME_FIELDS:
            base[name] = float(np.mean([getattr(r, name) for r in runs]))
        base["reps"] = len(runs)
        return cls(**base)


def load_input(config: PipelineConfig) -> Triangulation:
    if config.files is not None:
        return read_triangulation(config.files)
    r = config.random
    return generate_random_delaunay(r.n, r.bbox, r.seed)


@contextmanager
def _phase(name):
    try:
        yield
    except StructuralError as e:
        if e.phase is None:
            raise StructuralError(str(e), phase=name) from e
        raise


def execute(tri: Triangulation, config: PipelineConfig):
    """Run the three phases on an in-memory triangulation.

    Returns (final PolygonMesh, PhaseStats). The mesh is the raw phase
    output; callers wanting the order-independent form canonicalize it.
    """
    report = validate(tri)
    if not report.ok:
        raise ValidationError(
            "refusing to run on an invalid triangulation: " + report.summary(), report)
    if tri.trivertex is None:
        tri.trivertex = compute_trivertex(tri)

    kernel_seconds = {}
    with _phase("label"):
        t0 = time.perf_counter()
        labels = label_all(tri, config.label_backend, kernel_seconds, check=False)
        t1 = time.perf_counter()
    with _phase("traversal"):
        mesh0 = build_polygon_mesh(tri, labels, config.traversal_backend)
        t2 = time.perf_counter()
    repair_info = {}
    with _phase("reparation"):
        final = repair_all(tri, labels, mesh0, config.reparation_backend, repair_info)
        t3 = time.perf_counter()

    nonsimple = int(repeated_vertex_flags(mesh0).sum())
    stats = PhaseStats(
        input_vertices=tri.n_vertices,
        input_triangles=tri.n_triangles,
        label_seconds=t1 - t0,
        traversal_seconds=t2 - t1,
        reparation_seconds=t3 - t2,
        total_seconds=t3 - t0,
        label_max_seconds=kernel_seconds["label_max"],
        label_seed_seconds=kernel_seconds["label_seed"],
        label_frontier_seconds=kernel_seconds["label_frontier"],
        polygons_after_traversal=mesh0.count,
        simple_after_traversal=mesh0.count - nonsimple,
        nonsimple_after_traversal=nonsimple,
        reparation_rounds=repair_info["rounds"],
        final_polygons=final.count,
        final_vertices=int(unique_vertices(final).size),
        final_edges=boundary_edge_count(final),
        label_backend=str(config.label_backend),
        traversal_backend=str(config.traversal_backend),
        reparation_backend=str(config.reparation_backend),
    )
    return final, stats


def _write_outputs(mesh: PolygonMesh, stats: PhaseStats, tri: Triangulation,
                   config: PipelineConfig) -> None:
    if config.out_polymesh is not None:
        write_polymesh(mesh, tri.vertices, config.out_polymesh)
    if config.out_svg is not None:
        write_svg(mesh, tri.vertices, config.out_svg)
    if config.out_stats is not None:
        Path(config.out_stats).write_text(
            json.dumps(stats.to_record(), indent=2, sort_keys=True) + "\n")
    if config.out_figures is not None:
        from .plots import render_phase_report
        render_phase_report(stats, config.out_figures)


def run_pipeline(config: PipelineConfig):
    """Load the input, run the pipeline once, write requested outputs.

    Returns (canonical PolygonMesh, PhaseStats).
    """
    tri = load_input(config)
    mesh, stats = execute(tri, config)
    mesh = canonicalize(mesh)
    _write_outputs(mesh, stats, tri, config)
    return mesh, stats


def bench(config: PipelineConfig) -> PhaseStats:
    """Run the pipeline config.reps times on one loaded input and report
    mean phase and kernel times; outputs come from the last repetition."""
    tri = load_input(config)
    runs = []
    mesh = None
    for _ in range(config.reps):
        mesh, stats = execute(tri, config)
        runs.append(stats)
    aggregate = PhaseStats.mean(runs)
    _write_outputs(canonicalize(mesh), aggregate, tri, config)
    return aggregate
