"""Independent brute-force reference: region partition, boundary extraction,
canonical mesh form, and simplicity checks.

Nothing here calls the traversal walk. Regions come from union-find over
non-frontier edges; boundaries are chained from the collected frontier
half-edges by matching endpoints, resolving junction vertices with a purely
geometric angle rule. This is the verification route the pipeline is tested
against; it is unoptimized and meant for desk-scale instances.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import StructuralError
from .labeling import EdgeLabels
from .mesh_core import BORDER, Triangulation, edge_endpoints
from .traversal import PolygonMesh


@dataclass
class RegionPartition:
    """Per-triangle region ids; two triangles share an id exactly when they
    are connected through non-frontier edges. Ids are numbered by each
    region's smallest triangle index."""

    region_id: np.ndarray
    count: int


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def regions_by_union_find(tri: Triangulation, labels: EdgeLabels) -> RegionPartition:
    """Union triangles across every interior non-frontier edge."""
    T = tri.n_triangles
    uf = _UnionFind(T)
    for h in range(3 * T):
        n = int(tri.neighbors[h])
        if n != BORDER and not labels.frontier[h]:
            uf.union(h // 3, n)
    roots = np.fromiter((uf.find(t) for t in range(T)), dtype=np.int64, count=T)
    uniq = np.unique(roots)
    remap = {int(r): i for i, r in enumerate(uniq)}
    ids = np.fromiter((remap[int(r)] for r in roots), dtype=np.int64, count=T)
    return RegionPartition(ids, len(uniq))


def _cw_angle(ref, vec):
    """Clockwise angle from ref to vec in (0, 2*pi]; the reversal of ref
    itself maps to 2*pi so a dead-end return edge is chosen last."""
    a = (math.atan2(ref[1], ref[0]) - math.atan2(vec[1], vec[0])) % (2 * math.pi)
    return 2 * math.pi if a == 0.0 else a


def boundary_polygon_of_region(tri: Triangulation, labels: EdgeLabels,
                               partition: RegionPartition, region_id: int) -> list:
    """Counter-clockwise boundary walk of one region, extracted by chaining
    the region's frontier half-edges on shared endpoints.

    At a vertex with several outgoing boundary edges the successor is the
    clockwise-closest direction from the reversed incoming edge, which is
    the unique choice that keeps the region interior on the left. The
    chaining never rotates through the mesh adjacency, so it is independent
    of the traversal-phase walk it is used to verify.
    """
    tris = np.flatnonzero(partition.region_id == region_id)
    if tris.size == 0:
        raise ValueError(f"region {region_id} has no triangles")
    collected = [int(3 * t + j) for t in tris for j in range(3) if labels.frontier[3 * t + j]]
    if not collected:
        raise StructuralError(f"region {region_id} has no frontier edges")
    pts = tri.points()
    ends = {h: edge_endpoints(tri, h) for h in collected}
    by_origin = {}
    for h in collected:
        by_origin.setdefault(ends[h][0], []).append(h)

    start = min(collected)
    walk = []
    used = set()
    h = start
    while True:
        walk.append(ends[h][0])
        used.add(h)
        if len(walk) > len(collected):
            raise StructuralError(f"boundary of region {region_id} does not close")
        o, tg = ends[h]
        candidates = [g for g in by_origin.get(tg, []) if g not in used or g == start]
        if not candidates:
            raise StructuralError(f"region {region_id} boundary breaks at vertex {tg}")
        if len(candidates) == 1:
            nxt = candidates[0]
        else:
            ref = pts[o] - pts[tg]
            nxt = min(candidates,
                      key=lambda g: _cw_angle(ref, pts[ends[g][1]] - pts[tg]))
        if nxt == start:
            break
        h = nxt
    if len(used) != len(collected):
        raise StructuralError(
            f"region {region_id} boundary is disconnected: "
            f"{len(collected) - len(used)} frontier half-edges unreached")
    return walk


def _min_rotation(seq: tuple) -> tuple:
    m = min(seq)
    best = None
    for i, v in enumerate(seq):
        if v == m:
            rot = seq[i:] + seq[:i]
            if best is None or rot < best:
                best = rot
    return best


def canonicalize(pm: PolygonMesh) -> PolygonMesh:
    """Order-independent form: each polygon rotated to its lexicographically
    smallest rotation (orientation preserved), polygons sorted. Idempotent;
    removes the append-order nondeterminism of parallel construction."""
    polys = [_min_rotation(tuple(int(v) for v in pm.polygon(i))) for i in range(pm.count)]
    polys.sort()
    return PolygonMesh.from_polygons(polys)


def _orient(a, b, c) -> int:
    d = float((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))
    return (d > 0) - (d < 0)


def _on_segment(a, b, p) -> bool:
    return (min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]))


def _segments_cross(a, b, c, d) -> bool:
    o1 = _orient(a, b, c)
    o2 = _orient(a, b, d)
    o3 = _orient(c, d, a)
    o4 = _orient(c, d, b)
    if o1 != o2 and o3 != o4:
        return True
    # collinear overlap counts as a crossing for non-adjacent edges
    if o1 == 0 and _on_segment(a, b, c):
        return True
    if o2 == 0 and _on_segment(a, b, d):
        return True
    if o3 == 0 and _on_segment(c, d, a):
        return True
    if o4 == 0 and _on_segment(c, d, b):
        return True
    return False


def check_simple(polygon, vertices) -> bool:
    """True when the polygon has no repeated vertices and no two
    non-adjacent edges intersect. O(n^2); test-scale only."""
    poly = [int(v) for v in polygon]
    n = len(poly)
    if n < 3 or len(set(poly)) != n:
        return False
    pts = np.asarray(vertices, dtype=np.float64).reshape(-1, 2)
    segs = [(pts[poly[i]], pts[poly[(i + 1) % n]]) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if j == i + 1 or (i == 0 and j == n - 1):
                continue  # adjacent edges share a vertex by construction
            if _segments_cross(*segs[i], *segs[j]):
                return False
    return True
