"""Region boundary walks: one polygon per seed triangle.

Each seed triangle generates one polygon by walking the frontier-edge
boundary of the region the seed belongs to. The walk advances with a fixed
rotation rule: from the current boundary half-edge, rotate around its
target vertex across internal edges until the next frontier half-edge.
Polygons are packed into a single mesh array via atomic reservation, so
parallel workers append without coordination; the resulting polygon order
is unspecified and canonicalization removes it for comparisons.

The walk itself exists twice: as plain-Python operations (the reference,
also used by the repair phase), and as numba-compiled kernels that release
the GIL so the worker-pool backend gets real parallelism.
"""

from collections import deque
from dataclasses import dataclass

import numpy as np
from numba import njit

from .backend import SEQUENTIAL, Backend, ReservationCounter, for_each_chunk
from .errors import StructuralError
from .labeling import EdgeLabels
from .mesh_core import BORDER, Triangulation, next_halfedge, origin, target, twin

_MIN_CHUNK = 64


@dataclass(eq=False)
class PolygonMesh:
    """Packed polygon storage.

    mesh: int64 runs of [length, v0, ..., v_{length-1}], vertices CCW.
    positions: int64 offset of each polygon's length slot in mesh.
    count: number of polygons.
    """

    mesh: np.ndarray
    positions: np.ndarray
    count: int

    def polygon(self, i: int) -> np.ndarray:
        p = self.positions[i]
        return self.mesh[p + 1: p + 1 + self.mesh[p]]

    def polygons(self):
        for i in range(self.count):
            yield self.polygon(i)

    def lengths(self) -> np.ndarray:
        if self.count == 0:
            return np.empty(0, dtype=np.int64)
        return self.mesh[self.positions]

    def same_as(self, other: "PolygonMesh") -> bool:
        return (self.count == other.count
                and np.array_equal(self.mesh, other.mesh)
                and np.array_equal(self.positions, other.positions))

    @classmethod
    def from_polygons(cls, polys) -> "PolygonMesh":
        count = len(polys)
        total = sum(len(p) + 1 for p in polys)
        mesh = np.empty(total, dtype=np.int64)
        positions = np.empty(count, dtype=np.int64)
        off = 0
        for i, p in enumerate(polys):
            positions[i] = off
            mesh[off] = len(p)
            mesh[off + 1: off + 1 + len(p)] = p
            off += 1 + len(p)
        return cls(mesh, positions, count)


# ---------------------------------------------------------------------------
# flat per-slot views and polygon analytics

def _flat_slots(pm: PolygonMesh):
    """Per vertex-slot arrays: (values, polygon id, offset in polygon,
    lengths, flat start of each polygon)."""
    lens = pm.lengths()
    if pm.count == 0 or int(lens.sum()) == 0:
        z = np.empty(0, dtype=np.int64)
        return z, z, z, lens, np.zeros(pm.count, dtype=np.int64)
    total = int(lens.sum())
    pid = np.repeat(np.arange(pm.count, dtype=np.int64), lens)
    starts = np.concatenate(([0], np.cumsum(lens)[:-1]))
    intra = np.arange(total, dtype=np.int64) - starts[pid]
    slots = pm.positions[pid] + 1 + intra
    return pm.mesh[slots], pid, intra, lens, starts


def enclosed_signed_areas(pm: PolygonMesh, vertices: np.ndarray) -> np.ndarray:
    """Shoelace area of each polygon walk.

    Works on non-simple walks too: a dangling edge traversed in both
    directions contributes zero net area.
    """
    vals, pid, intra, lens, starts = _flat_slots(pm)
    if vals.size == 0:
        return np.zeros(pm.count, dtype=np.float64)
    pts = np.asarray(vertices, dtype=np.float64).reshape(-1, 2)
    nxt = np.where(intra == lens[pid] - 1, 0, intra + 1)
    nvals = vals[starts[pid] + nxt]
    p = pts[vals]
    q = pts[nvals]
    cross = p[:, 0] * q[:, 1] - q[:, 0] * p[:, 1]
    return 0.5 * np.add.reduceat(cross, starts)


def tip_flags(pm: PolygonMesh) -> np.ndarray:
    """Per polygon: does any cyclic triple (a, b, c) have a == c?"""
    vals, pid, intra, lens, starts = _flat_slots(pm)
    flags = np.zeros(pm.count, dtype=bool)
    if vals.size == 0:
        return flags
    l = lens[pid]
    prv = np.where(intra == 0, l - 1, intra - 1)
    nxt = np.where(intra == l - 1, 0, intra + 1)
    base = starts[pid]
    hit = vals[base + prv] == vals[base + nxt]
    flags[pid[hit]] = True
    return flags


def repeated_vertex_flags(pm: PolygonMesh) -> np.ndarray:
    """Per polygon: does any vertex appear more than once?"""
    vals, pid, _, _, _ = _flat_slots(pm)
    flags = np.zeros(pm.count, dtype=bool)
    if vals.size == 0:
        return flags
    width = int(vals.max()) + 1
    keys = np.sort(pid * width + vals)
    dup = keys[1:] == keys[:-1]
    flags[keys[1:][dup] // width] = True
    return flags


def extra_vertex_visits(pm: PolygonMesh) -> int:
    """Total repeated-vertex occurrences: sum over polygons of
    (walk length - distinct vertex count)."""
    vals, pid, _, _, _ = _flat_slots(pm)
    if vals.size == 0:
        return 0
    width = int(vals.max()) + 1
    return int(vals.size - np.unique(pid * width + vals).size)


def unique_vertices(pm: PolygonMesh) -> np.ndarray:
    """Sorted distinct vertex indices used by the mesh."""
    vals, _, _, _, _ = _flat_slots(pm)
    return np.unique(vals)


def boundary_edge_count(pm: PolygonMesh) -> int:
    """Number of distinct undirected edges on polygon boundaries."""
    vals, pid, intra, lens, starts = _flat_slots(pm)
    if vals.size == 0:
        return 0
    nxt = np.where(intra == lens[pid] - 1, 0, intra + 1)
    nvals = vals[starts[pid] + nxt]
    lo = np.minimum(vals, nvals)
    hi = np.maximum(vals, nvals)
    width = int(hi.max()) + 1
    return int(np.unique(lo * width + hi).size)


# ---------------------------------------------------------------------------
# reference walk operations

def find_start_frontier(tri: Triangulation, labels: EdgeLabels, seed_t: int) -> int:
    """Deterministic frontier half-edge within seed_t's region.

    If seed_t itself has a frontier edge, the smallest local slot wins.
    Otherwise a breadth-first search across internal (non-frontier) edges,
    expanding slots in local order, finds the first triangle that has one.
    """
    fr = labels.frontier
    seen = {seed_t}
    queue = deque([seed_t])
    while queue:
        t = queue.popleft()
        for j in range(3):
            h = 3 * t + j
            if fr[h]:
                return h
            n = int(tri.neighbors[h])
            if n != BORDER and n not in seen:
                seen.add(n)
                queue.append(n)
    raise StructuralError(f"no frontier edge reachable from triangle {seed_t}")


def next_frontier(tri: Triangulation, labels: EdgeLabels, h: int) -> int:
    """Next boundary half-edge after h, rotating around target(h).

    Starting from the edge after h in its triangle, internal edges are
    crossed one by one until a frontier half-edge with origin target(h)
    appears. Valid labels guarantee termination: the rotation can only
    cross interior edges (border edges are always frontier).
    """
    if not labels.frontier[h]:
        raise ValueError(f"half-edge {h} is not a frontier edge")
    c = next_halfedge(h)
    spins = 0
    limit = tri.n_halfedges
    while not labels.frontier[c]:
        w = twin(tri, c)
        if w == BORDER:
            raise StructuralError(
                f"rotation around vertex {target(tri, h)} crossed an unlabeled border edge")
        c = next_halfedge(w)
        spins += 1
        if spins > limit:
            raise StructuralError(f"vertex {target(tri, h)} has no frontier edge")
    return c


def poly_construction(tri: Triangulation, labels: EdgeLabels, seed_t: int) -> list:
    """Vertex walk of the region containing seed_t, counter-clockwise.

    Appends the origin of every boundary half-edge until the walk closes.
    The result may be non-simple: a dangling frontier edge inside the
    region is traversed in both directions and repeats its endpoints.
    """
    h0 = find_start_frontier(tri, labels, seed_t)
    out = [origin(tri, h0)]
    h = next_frontier(tri, labels, h0)
    guard = 2 * tri.n_halfedges + 3
    while h != h0:
        out.append(origin(tri, h))
        if len(out) > guard:
            raise StructuralError(f"boundary walk from triangle {seed_t} failed to close")
        h = next_frontier(tri, labels, h)
    return out


# ---------------------------------------------------------------------------
# compiled walk kernels (GIL released; used by both backends)

@njit(cache=True, nogil=True)
def _advance(h, neighbors, frontier, limit):
    c = 3 * (h // 3) + (h % 3 + 1) % 3
    spins = 0
    while not frontier[c]:
        n = neighbors[c]
        if n < 0:
            return -1
        t = c // 3
        if neighbors[3 * n] == t:
            k = 0
        elif neighbors[3 * n + 1] == t:
            k = 1
        else:
            k = 2
        c = 3 * n + (k + 1) % 3
        spins += 1
        if spins > limit:
            return -1
    return c


@njit(cache=True, nogil=True)
def _walk_lengths(starts, neighbors, frontier, limit, out):
    for i in range(starts.shape[0]):
        h0 = starts[i]
        h = h0
        n = 0
        while True:
            n += 1
            if n > limit:
                n = -1
                break
            h = _advance(h, neighbors, frontier, limit)
            if h < 0:
                n = -1
                break
            if h == h0:
                break
        out[i] = n


@njit(cache=True, nogil=True)
def _walk_write(starts, lengths, triangles, neighbors, frontier,
                mesh, positions, mesh_base, pos_base, limit):
    off = mesh_base
    for i in range(starts.shape[0]):
        positions[pos_base + i] = off
        mesh[off] = lengths[i]
        w = off + 1
        h0 = starts[i]
        h = h0
        while True:
            mesh[w] = triangles[3 * (h // 3) + (h % 3 + 1) % 3]
            w += 1
            h = _advance(h, neighbors, frontier, limit)
            if h == h0:
                break
        off = w


def build_polygon_mesh(tri: Triangulation, labels: EdgeLabels,
                       backend: Backend = SEQUENTIAL) -> PolygonMesh:
    """One polygon per seed triangle, packed via atomic reservation.

    Every frontier half-edge bounds exactly one region walk, so the output
    needs exactly (number of frontier half-edges) vertex slots plus one
    length slot per polygon; that capacity is preallocated and each worker
    chunk atomically reserves the ranges it fills. Polygon order across
    chunks is unspecified; the polygon multiset is deterministic.
    """
    seeds = np.flatnonzero(labels.seed).astype(np.int64)
    n_seeds = int(seeds.size)
    capacity = int(labels.frontier.sum()) + n_seeds
    mesh = np.empty(capacity, dtype=np.int64)
    positions = np.empty(n_seeds, dtype=np.int64)
    mesh_cursor = ReservationCounter()
    pos_cursor = ReservationCounter()
    limit = tri.n_halfedges + 3
    fr3 = labels.frontier.reshape(-1, 3)

    def body(lo, hi):
        chunk = seeds[lo:hi]
        local = fr3[chunk]
        starts = 3 * chunk + np.argmax(local, axis=1)
        missing = ~local.any(axis=1)
        if missing.any():
            for idx in np.flatnonzero(missing):
                starts[idx] = find_start_frontier(tri, labels, int(chunk[idx]))
        lengths = np.empty(chunk.size, dtype=np.int64)
        _walk_lengths(starts, tri.neighbors, labels.frontier, limit, lengths)
        bad = lengths < 0
        if bad.any():
            t = int(chunk[int(np.argmax(bad))])
            raise StructuralError(f"boundary walk from seed triangle {t} did not terminate")
        total = int(lengths.sum()) + int(chunk.size)
        base = mesh_cursor.fetch_add(total)
        pbase = pos_cursor.fetch_add(int(chunk.size))
        if base + total > capacity:
            raise StructuralError("polygon storage capacity exceeded; labels are inconsistent")
        _walk_write(starts, lengths, tri.triangles, tri.neighbors, labels.frontier,
                    mesh, positions, base, pbase, limit)

    for_each_chunk(backend, n_seeds, body, min_chunk=_MIN_CHUNK)
    used = mesh_cursor.value
    return PolygonMesh(mesh[:used], positions, n_seeds)
