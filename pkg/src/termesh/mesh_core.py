"""Indexed triangulation storage and half-edge index algebra.

A triangulation is held in four flat arrays: vertex coordinates in pairs,
triangle corner indices in triples, neighbor triangle indices in triples,
and (optionally) one incident triangle per vertex. Slot ``3*t + j`` of the
neighbor array names the triangle across edge ``j`` of triangle ``t``, where
edge ``j`` is the edge opposite corner ``j``.

The integer ``h = 3*t + j`` doubles as a directed half-edge: its origin is
the vertex at corner ``(j+1) % 3`` and its target the vertex at corner
``(j+2) % 3``. Triangles are stored counter-clockwise, so walking from
origin to target keeps the triangle interior on the left. All traversal in
the package relies on that orientation.
"""

from dataclasses import dataclass

import numpy as np

from .errors import StructuralError

BORDER = -1

_MAX_DEFECTS = 1000


@dataclass
class ValidationReport:
    """Outcome of validate(); ok is true exactly when defects is empty.

    Each defect is a (kind, element index, message) triple. Kinds:
    index_range, orientation, degenerate, duplicate, reciprocity,
    edge_count, trivertex.
    """

    ok: bool
    defects: list

    def summary(self, limit: int = 5) -> str:
        if self.ok:
            return "ok"
        head = "; ".join(f"{kind}[{idx}]: {msg}" for kind, idx, msg in self.defects[:limit])
        extra = len(self.defects) - limit
        return head + (f"; ... {extra} more" if extra > 0 else "")


@dataclass
class Triangulation:
    """Flat-array triangle mesh with neighbor adjacency.

    vertices: float64, length 2n; vertex i is (vertices[2i], vertices[2i+1]).
    triangles: int64, length 3T; triangle t is triangles[3t:3t+3], CCW.
    neighbors: int64, length 3T; neighbors[3t+j] is the triangle across the
        edge opposite corner j, or BORDER.
    trivertex: optional int64, length n; one triangle incident to each
        vertex, -1 for vertices no triangle references.
    """

    vertices: np.ndarray
    triangles: np.ndarray
    neighbors: np.ndarray
    trivertex: np.ndarray | None = None

    def __post_init__(self):
        self.vertices = np.ascontiguousarray(self.vertices, dtype=np.float64).ravel()
        self.triangles = np.ascontiguousarray(self.triangles, dtype=np.int64).ravel()
        self.neighbors = np.ascontiguousarray(self.neighbors, dtype=np.int64).ravel()
        if self.trivertex is not None:
            self.trivertex = np.ascontiguousarray(self.trivertex, dtype=np.int64).ravel()
        if self.vertices.size % 2:
            raise ValueError("vertex array length must be a multiple of 2")
        if self.triangles.size % 3:
            raise ValueError("triangle array length must be a multiple of 3")
        if self.neighbors.size != self.triangles.size:
            raise ValueError("neighbor array must match the triangle array length")
        if self.trivertex is not None and self.trivertex.size != self.n_vertices:
            raise ValueError("trivertex array must hold one entry per vertex")

    @property
    def n_vertices(self) -> int:
        return self.vertices.size // 2

    @property
    def n_triangles(self) -> int:
        return self.triangles.size // 3

    @property
    def n_halfedges(self) -> int:
        return self.triangles.size

    def points(self) -> np.ndarray:
        """(n, 2) view of the vertex coordinates."""
        return self.vertices.reshape(-1, 2)


def triangle_of(h: int) -> int:
    return h // 3


def local_edge(h: int) -> int:
    return h % 3


def next_halfedge(h: int) -> int:
    """Half-edge of the same triangle whose origin is target(h)."""
    t, j = divmod(h, 3)
    return 3 * t + (j + 1) % 3


def prev_halfedge(h: int) -> int:
    """Half-edge of the same triangle whose target is origin(h)."""
    t, j = divmod(h, 3)
    return 3 * t + (j + 2) % 3


def edge_endpoints(tri: Triangulation, h: int) -> tuple[int, int]:
    """(origin, target) vertex indices of half-edge h."""
    t, j = divmod(h, 3)
    return int(tri.triangles[3 * t + (j + 1) % 3]), int(tri.triangles[3 * t + (j + 2) % 3])


def origin(tri: Triangulation, h: int) -> int:
    t, j = divmod(h, 3)
    return int(tri.triangles[3 * t + (j + 1) % 3])


def target(tri: Triangulation, h: int) -> int:
    t, j = divmod(h, 3)
    return int(tri.triangles[3 * t + (j + 2) % 3])


def twin(tri: Triangulation, h: int) -> int:
    """Opposite half-edge in the neighboring triangle, or BORDER.

    The twin has the same endpoint set with origin and target swapped.
    Raises StructuralError if the recorded neighbor shares no such edge.
    """
    n = int(tri.neighbors[h])
    if n == BORDER:
        return BORDER
    o, tg = edge_endpoints(tri, h)
    base = 3 * n
    for k in range(3):
        if tri.triangles[base + (k + 1) % 3] == tg and tri.triangles[base + (k + 2) % 3] == o:
            return base + k
    raise StructuralError(
        f"triangle {n} is recorded as neighbor of half-edge {h} "
        f"but shares no edge with endpoints ({o}, {tg})"
    )


def squared_length(tri: Triangulation, h: int) -> float:
    """Squared Euclidean distance between the endpoints of h."""
    o, tg = edge_endpoints(tri, h)
    dx = tri.vertices[2 * o] - tri.vertices[2 * tg]
    dy = tri.vertices[2 * o + 1] - tri.vertices[2 * tg + 1]
    return float(dx * dx + dy * dy)


def signed_areas(tri: Triangulation) -> np.ndarray:
    """Signed area of every triangle (positive = counter-clockwise)."""
    pts = tri.points()
    t3 = tri.triangles.reshape(-1, 3)
    a = pts[t3[:, 0]]
    b = pts[t3[:, 1]]
    c = pts[t3[:, 2]]
    return 0.5 * ((b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1])
                  - (b[:, 1] - a[:, 1]) * (c[:, 0] - a[:, 0]))


def compute_trivertex(tri: Triangulation) -> np.ndarray:
    """One incident triangle per vertex: the lowest triangle index containing
    it, or -1 for vertices referenced by no triangle."""
    out = np.full(tri.n_vertices, -1, dtype=np.int64)
    t_ids = np.repeat(np.arange(tri.n_triangles, dtype=np.int64), 3)
    # reversed writes make the lowest triangle index land last
    out[tri.triangles[::-1]] = t_ids[::-1]
    return out


def validate(tri: Triangulation) -> ValidationReport:
    """Check every structural invariant of the triangulation.

    Reports (rather than raises) all violations found: index ranges,
    orientation, degenerate and duplicate triangles, neighbor reciprocity
    with endpoint agreement, per-edge sharing counts, and trivertex
    containment. Mutates nothing.
    """
    defects = []
    T = tri.n_triangles
    nv = tri.n_vertices
    tr = tri.triangles
    nb = tri.neighbors

    for s in np.flatnonzero((tr < 0) | (tr >= nv))[:_MAX_DEFECTS]:
        defects.append(("index_range", int(s) // 3,
                        f"corner slot {int(s)} references vertex {int(tr[s])} outside [0, {nv})"))
    for s in np.flatnonzero((nb < BORDER) | (nb >= T))[:_MAX_DEFECTS]:
        defects.append(("index_range", int(s) // 3,
                        f"neighbor slot {int(s)} references triangle {int(nb[s])} outside [0, {T})"))
    if defects:
        # out-of-range indices poison every later gather
        return ValidationReport(False, defects)

    t_of = np.repeat(np.arange(T, dtype=np.int64), 3)
    for s in np.flatnonzero(nb == t_of)[:_MAX_DEFECTS]:
        defects.append(("reciprocity", int(s) // 3, "triangle lists itself as a neighbor"))

    areas = signed_areas(tri)
    for t in np.flatnonzero(areas < 0)[:_MAX_DEFECTS]:
        defects.append(("orientation", int(t), f"negative signed area {areas[t]:.6g}"))
    for t in np.flatnonzero(areas == 0)[:_MAX_DEFECTS]:
        defects.append(("degenerate", int(t), "zero signed area"))

    if T:
        rows = np.sort(tr.reshape(-1, 3), axis=1)
        codes = (rows[:, 0] * nv + rows[:, 1]) * nv + rows[:, 2]
        _, inverse, counts = np.unique(codes, return_inverse=True, return_counts=True)
        for t in np.flatnonzero(counts[inverse] > 1)[:_MAX_DEFECTS]:
            defects.append(("duplicate", int(t), "vertex set shared with another triangle"))

    # reciprocity: every interior half-edge must be mirrored, endpoints swapped
    h_all = np.arange(3 * T, dtype=np.int64)
    j_all = h_all % 3
    o_all = tr[3 * t_of + (j_all + 1) % 3]
    g_all = tr[3 * t_of + (j_all + 2) % 3]
    interior = nb >= 0
    n_i = nb[interior]
    t_i = t_of[interior]
    back = nb.reshape(-1, 3)[n_i] == t_i[:, None]
    cnt = back.sum(axis=1)
    ids = np.flatnonzero(interior)
    for s in ids[cnt == 0][:_MAX_DEFECTS]:
        defects.append(("reciprocity", int(s) // 3,
                        f"neighbor {int(nb[s])} does not point back across slot {int(s)}"))
    for s in ids[cnt > 1][:_MAX_DEFECTS]:
        defects.append(("reciprocity", int(s) // 3,
                        f"neighbor {int(nb[s])} points back across more than one edge"))
    good = cnt == 1
    k = np.argmax(back, axis=1)
    tw = 3 * n_i + k
    jw = tw % 3
    tw_o = tr[3 * n_i + (jw + 1) % 3]
    tw_g = tr[3 * n_i + (jw + 2) % 3]
    mism = good & ((o_all[interior] != tw_g) | (g_all[interior] != tw_o))
    for s in ids[mism][:_MAX_DEFECTS]:
        defects.append(("reciprocity", int(s) // 3,
                        f"shared edge with neighbor {int(nb[s])} has mismatched endpoints"))

    # per-edge sharing: an undirected edge may appear in at most two triangles,
    # and a twice-shared edge may not be marked border on either side
    if T:
        lo = np.minimum(o_all, g_all)
        hi = np.maximum(o_all, g_all)
        pair = lo * nv + hi
        _, pinv, pcnt = np.unique(pair, return_inverse=True, return_counts=True)
        per_slot = pcnt[pinv]
        for s in np.flatnonzero(per_slot > 2)[:_MAX_DEFECTS]:
            defects.append(("edge_count", int(s) // 3,
                            f"edge ({int(lo[s])}, {int(hi[s])}) appears in more than two triangles"))
        shared_border = (per_slot == 2) & ~interior
        for s in np.flatnonzero(shared_border)[:_MAX_DEFECTS]:
            defects.append(("edge_count", int(s) // 3,
                            f"edge ({int(lo[s])}, {int(hi[s])}) is shared but marked border"))
        n_border = int((~interior).sum())
        if (3 * T - n_border) % 2:
            defects.append(("edge_count", -1, "odd number of interior half-edge slots"))

    if tri.trivertex is not None:
        tv = tri.trivertex
        referenced = np.zeros(nv, dtype=bool)
        referenced[tr] = True
        bad_range = (tv < -1) | (tv >= T) | ((tv == -1) & referenced)
        for v in np.flatnonzero(bad_range)[:_MAX_DEFECTS]:
            defects.append(("trivertex", int(v),
                            f"entry {int(tv[v])} is not a valid incident triangle"))
        check = (tv >= 0)
        vs = np.flatnonzero(check)
        if vs.size:
            contains = (tr.reshape(-1, 3)[tv[vs]] == vs[:, None]).any(axis=1)
            for v in vs[~contains][:_MAX_DEFECTS]:
                defects.append(("trivertex", int(v),
                                f"triangle {int(tv[v])} does not contain vertex {int(v)}"))

    return ValidationReport(not defects, defects)
