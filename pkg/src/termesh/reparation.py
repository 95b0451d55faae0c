"""Barrier-edge tip removal: split non-simple polygons until all are simple.

A barrier-edge tip is a dead-end vertex of a polygon walk -- the walk
enters and leaves through the same dangling frontier edge, producing a
cyclic triple (a, b, a). A round scans every polygon, and each polygon
with a tip is split in two: the middle internal edge around the tip vertex
is promoted to frontier, and the two triangles flanking it seed fresh
boundary walks. Rounds repeat until no tip remains.

Splitting can occasionally leave a polygon whose boundary pinches at a
vertex it visits twice without any dangling edge; such polygons carry a
repeated vertex but no tip triple. A final pass resolves them with the
same promotion mechanism applied to the pinch vertex's boundary wedge, so
the finished mesh contains simple polygons only.

Promotion only touches edges strictly interior to the polygon being
repaired, and distinct polygons have disjoint interiors, so the per-polygon
work of one round is safe to run on any backend.
"""

from dataclasses import dataclass

import numpy as np

from .backend import SEQUENTIAL, Backend, for_each_index
from .errors import StructuralError
from .labeling import EdgeLabels
from .mesh_core import (BORDER, Triangulation, compute_trivertex, next_halfedge,
                        origin, prev_halfedge, target, twin)
from .traversal import (PolygonMesh, extra_vertex_visits, poly_construction,
                        repeated_vertex_flags, tip_flags)


@dataclass
class TipRecord:
    """One detected tip: polygon[position] is the tip vertex and its two
    cyclic neighbors both equal barrier_vertex."""

    polygon: int
    position: int
    tip_vertex: int
    barrier_vertex: int


@dataclass
class RoundResult:
    """Outcome of one repair round.

    tips_found counts output polygons that still contain a tip triple, so
    zero means no further tip round can change the mesh. splits counts the
    input polygons split this round.
    """

    mesh: PolygonMesh
    tips_found: int
    splits: int


def find_barrier_tip(polygon, polygon_index: int = 0) -> TipRecord | None:
    """First tip of the polygon, scanning triples centered on position 0, 1, ...

    Returns None for a polygon without any (a, b, a) triple.
    """
    seq = np.asarray(polygon, dtype=np.int64)
    n = seq.size
    if n < 3:
        raise ValueError("a polygon needs at least 3 vertices")
    for pos in range(n):
        if seq[pos - 1] == seq[(pos + 1) % n]:
            return TipRecord(polygon_index, pos, int(seq[pos]), int(seq[pos - 1]))
    return None


def _halfedge_with_origin(tri: Triangulation, t: int, v: int) -> int:
    for j in range(3):
        h = 3 * t + j
        if origin(tri, h) == v:
            return h
    raise StructuralError(f"triangle {t} does not contain vertex {v}")


def _rot_ccw(tri, h):
    # next half-edge out of origin(h), one step counter-clockwise
    return twin(tri, prev_halfedge(h))


def _rot_cw(tri, h):
    w = twin(tri, h)
    return BORDER if w == BORDER else next_halfedge(w)


def _fan_around(tri: Triangulation, v: int, g0: int) -> list:
    """Half-edges with origin v in counter-clockwise order starting at g0.

    A fan cut open by the border comes back as a linear run; for ordering
    purposes it is treated as cyclic across the gap.
    """
    cap = tri.n_halfedges
    ring = [g0]
    g = _rot_ccw(tri, g0)
    while g != BORDER and g != g0:
        ring.append(g)
        if len(ring) > cap:
            raise StructuralError(f"rotation around vertex {v} does not close")
        g = _rot_ccw(tri, g)
    if g == g0:
        return ring
    back = []
    g = _rot_cw(tri, g0)
    while g != BORDER:
        back.append(g)
        if len(back) > cap:
            raise StructuralError(f"rotation around vertex {v} does not close")
        g = _rot_cw(tri, g)
    return ring + back[::-1]


def _fan_at_vertex(tri: Triangulation, v: int) -> list:
    if tri.trivertex is None:
        raise ValueError("trivertex data required; run compute_trivertex first")
    t0 = int(tri.trivertex[v])
    if t0 < 0:
        raise StructuralError(f"vertex {v} has no incident triangle")
    return _fan_around(tri, v, _halfedge_with_origin(tri, t0, v))


def middle_internal_edge(tri: Triangulation, labels: EdgeLabels, tip: TipRecord) -> int:
    """The internal edge to promote for a tip: of the k internal edges
    incident to the tip vertex, counted counter-clockwise from the barrier
    edge, the one at 1-based index ceil(k/2)."""
    v = tip.tip_vertex
    fan = _fan_at_vertex(tri, v)
    barrier_at = None
    for i, g in enumerate(fan):
        if target(tri, g) == tip.barrier_vertex and labels.frontier[g]:
            barrier_at = i
            break
    if barrier_at is None:
        raise StructuralError(
            f"barrier edge ({v}, {tip.barrier_vertex}) not found around tip vertex {v}")
    ordered = fan[barrier_at:] + fan[:barrier_at]
    internal = [g for g in ordered if not labels.frontier[g]]
    if not internal:
        raise StructuralError(f"tip vertex {v} has no internal edge to split on")
    return internal[(len(internal) - 1) // 2]


def _wedge_internal_edges(tri, labels, fan, v, out_vertex):
    """Internal edges of one boundary-visit wedge at v, counter-clockwise
    from the outgoing boundary edge (v, out_vertex). The wedge ends at the
    next frontier edge, which is the visit's reversed incoming edge."""
    out_at = None
    for i, g in enumerate(fan):
        if target(tri, g) == out_vertex and labels.frontier[g]:
            out_at = i
            break
    if out_at is None:
        raise StructuralError(
            f"boundary edge ({v}, {out_vertex}) not found around vertex {v}")
    internal = []
    for step in range(1, len(fan)):
        g = fan[(out_at + step) % len(fan)]
        if labels.frontier[g]:
            break
        internal.append(g)
    return internal


def _pinch_candidates(tri: Triangulation, labels: EdgeLabels, poly):
    """Candidate edges whose promotion may separate the first pinch.

    A pinch vertex is visited twice without a dangling edge. The natural
    cuts are the internal edges of the two visits' interior wedges (middle
    one first, mirroring the tip rule). When both wedges are bare corners,
    the boundary loop between the two visits seals a hole against the rest
    of the region, and a cut must run from that inner loop outward: the
    internal edges around each inner-loop vertex are offered in turn. Each
    candidate is verified by the caller via the split length law.
    """
    seen = {}
    v = None
    p1 = p2 = 0
    n = len(poly)
    for idx, val in enumerate(poly):
        val = int(val)
        if val in seen:
            v, p1, p2 = val, seen[val], idx
            break
        seen[val] = idx
    if v is None:
        return
    fan = _fan_at_vertex(tri, v)
    for pos in (p2, p1):
        wedge = _wedge_internal_edges(tri, labels, fan, v, int(poly[(pos + 1) % n]))
        if wedge:
            mid = (len(wedge) - 1) // 2
            yield wedge[mid]
            for i, g in enumerate(wedge):
                if i != mid:
                    yield g
    for idx in range(p1 + 1, p2):
        x = int(poly[idx])
        for g in _fan_at_vertex(tri, x):
            if not labels.frontier[g]:
                yield g


def _split_polygon(tri, labels, e, polygon_length, strict, what):
    """Promote edge e and rebuild the two polygons seeded by its flanks.

    Returns (pa, pb), or None after reverting the promotion when the split
    does not obey the length law and strict is off.
    """
    w = twin(tri, e)
    if w == BORDER:
        raise StructuralError(f"{what}: promoted edge lies on the border")
    labels.frontier[e] = True
    labels.frontier[w] = True
    pa = poly_construction(tri, labels, e // 3)
    pb = poly_construction(tri, labels, w // 3)
    if len(pa) + len(pb) != polygon_length + 2:
        if strict:
            raise StructuralError(
                f"{what}: split produced lengths {len(pa)} + {len(pb)}, "
                f"expected {polygon_length} + 2")
        labels.frontier[e] = False
        labels.frontier[w] = False
        return None
    return pa, pb


def _execute_round(tri, labels, mesh_in, flagged, splitter, backend):
    """Copy-or-split pass over the mesh.

    splitter(i) returns (pa, pb) to replace polygon i, or None to pass it
    through unchanged. Output slots are reserved up front (a split needs
    its input run plus 3), so the per-polygon work writes disjoint ranges
    on any backend; unused reservations are compacted away at the end.
    Returns (output mesh, number of polygons actually split).
    """
    if tri.trivertex is None:
        tri.trivertex = compute_trivertex(tri)
    lens = mesh_in.lengths()
    sizes = 1 + lens + np.where(flagged, 3, 0)
    out_offsets = np.concatenate(([0], np.cumsum(sizes)))
    pos_offsets = np.concatenate(([0], np.cumsum(1 + flagged.astype(np.int64))))
    mesh_out = np.empty(int(out_offsets[-1]), dtype=np.int64)
    positions_out = np.full(int(pos_offsets[-1]), -1, dtype=np.int64)

    _bulk_copy(mesh_in, mesh_out, positions_out, ~flagged, lens, out_offsets, pos_offsets)
    flagged_ids = np.flatnonzero(flagged)
    split_ok = np.zeros(flagged_ids.size, dtype=bool)

    def body(k):
        i = int(flagged_ids[k])
        o = int(out_offsets[i])
        po = int(pos_offsets[i])
        ln = int(lens[i])
        parts = splitter(i)
        if parts is None:
            p = int(mesh_in.positions[i])
            mesh_out[o: o + 1 + ln] = mesh_in.mesh[p: p + 1 + ln]
            positions_out[po] = o
            return
        pa, pb = parts
        mesh_out[o] = len(pa)
        mesh_out[o + 1: o + 1 + len(pa)] = pa
        o2 = o + 1 + len(pa)
        mesh_out[o2] = len(pb)
        mesh_out[o2 + 1: o2 + 1 + len(pb)] = pb
        positions_out[po] = o
        positions_out[po + 1] = o2
        split_ok[k] = True

    for_each_index(backend, int(flagged_ids.size), body)
    positions = positions_out[positions_out >= 0]
    return PolygonMesh(mesh_out, positions, int(positions.size)), int(split_ok.sum())


def _bulk_copy(mesh_in, mesh_out, positions_out, keep, lens, out_offsets, pos_offsets):
    """Copy every unflagged polygon run in one gather/scatter."""
    ids = np.flatnonzero(keep)
    if ids.size == 0:
        return
    runs = 1 + lens[ids]
    src = np.repeat(mesh_in.positions[ids], runs)
    dst = np.repeat(out_offsets[ids], runs)
    ramp = np.arange(int(runs.sum()), dtype=np.int64)
    ramp -= np.repeat(np.cumsum(runs) - runs, runs)
    mesh_out[dst + ramp] = mesh_in.mesh[src + ramp]
    positions_out[pos_offsets[ids]] = out_offsets[ids]


def repair_round(tri: Triangulation, labels: EdgeLabels, mesh_in: PolygonMesh,
                 backend: Backend = SEQUENTIAL) -> RoundResult:
    """One pass over the mesh: split each polygon at its first tip, copy the
    rest. Splitting promotes the middle internal edge (both directed
    copies), then rebuilds the two polygons seeded by the edge's flanking
    triangles; their combined length always equals the original plus two.
    Mutates labels.frontier in place."""
    tipped = tip_flags(mesh_in)

    def splitter(i):
        tip = find_barrier_tip(mesh_in.polygon(i), i)
        if tip is None:
            raise StructuralError(f"polygon {i} lost its tip between scans")
        e = middle_internal_edge(tri, labels, tip)
        return _split_polygon(tri, labels, e, int(mesh_in.mesh[mesh_in.positions[i]]),
                              strict=True, what=f"polygon {i}")

    out, splits = _execute_round(tri, labels, mesh_in, tipped, splitter, backend)
    return RoundResult(out, int(tip_flags(out).sum()), splits)


def _pinch_pass(tri, labels, mesh, backend):
    """Split polygons that pinch at a repeated vertex without a tip triple.

    Runs rounds while progress is made; a polygon whose pinch has no
    internal edge to promote is passed through and reported as leftover.
    """
    current = mesh
    guard = extra_vertex_visits(mesh) + 1
    for _ in range(guard):
        pinched = repeated_vertex_flags(current) & ~tip_flags(current)
        if not pinched.any():
            break

        def splitter(i):
            poly = current.polygon(i)
            for e in _pinch_candidates(tri, labels, poly):
                parts = _split_polygon(tri, labels, e, int(poly.size),
                                       strict=False, what=f"polygon {i}")
                if parts is not None:
                    return parts
            return None

        current, splits = _execute_round(tri, labels, current, pinched, splitter, backend)
        if splits == 0:
            break
    return current


def repair_all(tri: Triangulation, labels: EdgeLabels, mesh: PolygonMesh,
               backend: Backend = SEQUENTIAL, stats_out: dict | None = None) -> PolygonMesh:
    """Run tip rounds until no tip triple remains, then resolve pinches.

    Each split strictly reduces the remaining work, so the tip rounds are
    bounded by the initial number of repeated-vertex occurrences plus one
    (a tip-free mesh still takes its single identity round); exceeding the
    bound raises StructuralError. The pinch pass afterwards terminates on
    progress; stats_out reports any polygon it could not make simple under
    "unrepaired" (none on meshes where promotion always separates).
    """
    initial = extra_vertex_visits(mesh)
    max_rounds = initial + 1
    rounds = 0
    splits = 0
    current = mesh
    while True:
        rounds += 1
        if rounds > max_rounds:
            raise StructuralError(
                f"tip removal did not converge after {rounds - 1} rounds "
                f"(initial repeated-vertex count {initial})")
        result = repair_round(tri, labels, current, backend)
        current = result.mesh
        splits += result.splits
        if result.tips_found == 0:
            break
    before = current.count
    current = _pinch_pass(tri, labels, current, backend)
    if stats_out is not None:
        stats_out["rounds"] = rounds
        stats_out["splits"] = splits + (current.count - before)
        stats_out["initial_tips"] = initial
        stats_out["unrepaired"] = int(repeated_vertex_flags(current).sum())
    return current
