"""Edge classification kernels: longest-edge slots, seed triangles, frontier flags.

Terminology used throughout the package:

- longest edge of a triangle: edge of maximal squared length; equal lengths
  resolve to the lowest local slot, so "is the longest edge of t" always
  means "max_edge[t] points at it".
- terminal edge: longest edge of both triangles sharing it, or a border
  edge that is the longest edge of its single triangle.
- frontier edge: longest edge of neither adjacent triangle, or any border
  edge. Frontier edges delimit the regions the traversal walks.
- internal edge: a non-frontier interior edge; lies inside a region.
- seed triangle: for an interior terminal edge, the lower-indexed of the two
  triangles; for a border terminal edge, its triangle. One seed per
  terminal edge.
"""

import time
from dataclasses import dataclass

import numpy as np

from . import mesh_core
from .backend import SEQUENTIAL, Backend, for_each_chunk
from .errors import ValidationError
from .mesh_core import BORDER, Triangulation

_MIN_CHUNK = 2048


@dataclass
class EdgeLabels:
    """Labels produced by the three classification kernels.

    max_edge: int8 per triangle, the local slot (0|1|2) of its longest edge.
    frontier: bool per half-edge; the two directed copies of an undirected
        edge always agree, and every border half-edge is frontier.
    seed: bool per triangle; exactly one true entry per terminal edge.
    """

    max_edge: np.ndarray
    frontier: np.ndarray
    seed: np.ndarray


def label_max(tri: Triangulation, backend: Backend = SEQUENTIAL) -> np.ndarray:
    """Longest-edge slot per triangle (lowest slot wins ties)."""
    out = np.empty(tri.n_triangles, dtype=np.int8)
    pts = tri.points()
    t3 = tri.triangles.reshape(-1, 3)

    def body(lo, hi):
        a = pts[t3[lo:hi, 0]]
        b = pts[t3[lo:hi, 1]]
        c = pts[t3[lo:hi, 2]]
        l0 = ((b - c) ** 2).sum(axis=1)  # edge 0 joins corners 1 and 2
        l1 = ((c - a) ** 2).sum(axis=1)
        l2 = ((a - b) ** 2).sum(axis=1)
        out[lo:hi] = np.argmax(np.stack([l0, l1, l2], axis=1), axis=1)

    for_each_chunk(backend, tri.n_triangles, body, min_chunk=_MIN_CHUNK)
    return out


def label_seeds(tri: Triangulation, max_edge: np.ndarray,
                backend: Backend = SEQUENTIAL) -> np.ndarray:
    """Seed flag per triangle.

    A triangle is a seed when its longest edge is terminal and it is the
    designated side: the only side for a border edge, the lower-indexed
    side for an interior edge. Any terminal edge of a triangle is
    necessarily its longest edge, so checking the max_edge slot alone
    covers every case.
    """
    out = np.zeros(tri.n_triangles, dtype=bool)
    nb3 = tri.neighbors.reshape(-1, 3)

    def body(lo, hi):
        t = np.arange(lo, hi, dtype=np.int64)
        e = max_edge[lo:hi].astype(np.int64)
        n = nb3[t, e]
        border = n == BORDER
        safe = np.where(border, 0, n)
        k = np.argmax(nb3[safe] == t[:, None], axis=1)
        mutual = max_edge[safe] == k
        out[lo:hi] = border | (~border & mutual & (t < n))

    for_each_chunk(backend, tri.n_triangles, body, min_chunk=_MIN_CHUNK)
    return out


def label_frontiers(tri: Triangulation, max_edge: np.ndarray,
                    backend: Backend = SEQUENTIAL) -> np.ndarray:
    """Frontier flag per half-edge: border, or longest edge of neither side.

    Each half-edge computes its own flag; the predicate is symmetric under
    twinning, so both directed copies agree without mirrored writes (which
    would cross chunk boundaries under the parallel backend).
    """
    out = np.empty(tri.n_halfedges, dtype=bool)
    nb3 = tri.neighbors.reshape(-1, 3)

    def body(lo, hi):
        n = tri.neighbors[3 * lo:3 * hi]
        t = np.repeat(np.arange(lo, hi, dtype=np.int64), 3)
        j = np.tile(np.arange(3, dtype=np.int8), hi - lo)
        own = max_edge[t] == j
        border = n == BORDER
        safe = np.where(border, 0, n)
        k = np.argmax(nb3[safe] == t[:, None], axis=1)
        other = max_edge[safe] == k
        out[3 * lo:3 * hi] = border | (~own & ~other)

    for_each_chunk(backend, tri.n_triangles, body, min_chunk=_MIN_CHUNK)
    return out


def label_all(tri: Triangulation, backend: Backend = SEQUENTIAL,
              kernel_seconds: dict | None = None, check: bool = True) -> EdgeLabels:
    """Run the three kernels in order, with a barrier between each.

    kernel_seconds, when given, receives the wall time of each kernel under
    the keys "label_max", "label_seed", "label_frontier". With check=True
    the triangulation is validated first and a failing report raises
    ValidationError.
    """
    if check:
        report = mesh_core.validate(tri)
        if not report.ok:
            raise ValidationError(
                "refusing to label an invalid triangulation: " + report.summary(),
                report,
            )
    t0 = time.perf_counter()
    max_edge = label_max(tri, backend)
    t1 = time.perf_counter()
    seed = label_seeds(tri, max_edge, backend)
    t2 = time.perf_counter()
    frontier = label_frontiers(tri, max_edge, backend)
    t3 = time.perf_counter()
    if kernel_seconds is not None:
        kernel_seconds["label_max"] = t1 - t0
        kernel_seconds["label_seed"] = t2 - t1
        kernel_seconds["label_frontier"] = t3 - t2
    return EdgeLabels(max_edge=max_edge, frontier=frontier, seed=seed)
