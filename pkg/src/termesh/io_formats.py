"""File formats and input generation.

Triangle-style file sets (.node/.ele/.neigh, optional .trivertex) are the
input format; all four are whitespace-separated text with `#` comments.

  .node      header `<#points> <dim> <#attrs> <#markers>`,
             rows `index x y [attrs...] [marker]`
  .ele       header `<#triangles> <3> <#attrs>`, rows `index v1 v2 v3 [attrs...]`
  .neigh     header `<#triangles> <3>`, rows `index n1 n2 n3` with -1 = border
  .trivertex header `<#vertices>`, rows `index t`

Files may be zero- or one-based; one-based sets are detected (a vertex
reference equal to the point count) and normalized to zero-based, with the
-1 border sentinel preserved. Clockwise triangles are reoriented on read.

The polygon mesh format is `<#vertices> <#polygons>` on line one, then one
`x y` line per vertex, then one `<len> v0 v1 ...` line per polygon
(zero-based, counter-clockwise, canonically ordered so output bytes are
stable).
"""

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.spatial import Delaunay, QhullError

from .errors import ParseError, ValidationError
from .mesh_core import BORDER, Triangulation, compute_trivertex, signed_areas, validate
from .oracle import canonicalize
from .traversal import PolygonMesh


@dataclass
class TriangleFileSet:
    """Paths of one triangulation: .node, .ele, .neigh, optional .trivertex."""

    node: Path
    ele: Path
    neigh: Path
    trivertex: Path | None = None


def _fmt(x: float) -> str:
    # repr of a Python float is the shortest exact round-trip form
    return repr(float(x))


def _data_lines(path):
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ParseError(path, 0, f"cannot read file: {e.strerror}") from e
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def _parse_int(path, lineno, token, what):
    try:
        return int(token)
    except ValueError:
        raise ParseError(path, lineno, f"expected integer {what}, got {token!r}") from None


def _parse_float(path, lineno, token, what):
    try:
        return float(token)
    except ValueError:
        raise ParseError(path, lineno, f"expected number {what}, got {token!r}") from None


def _read_node(path):
    lines = _data_lines(path)
    try:
        lineno, tokens = next(lines)
    except StopIteration:
        raise ParseError(path, 0, "empty file") from None
    if len(tokens) < 2:
        raise ParseError(path, lineno, "node header needs at least <#points> <dim>")
    n = _parse_int(path, lineno, tokens[0], "point count")
    dim = _parse_int(path, lineno, tokens[1], "dimension")
    attrs = _parse_int(path, lineno, tokens[2], "attribute count") if len(tokens) > 2 else 0
    markers = _parse_int(path, lineno, tokens[3], "marker count") if len(tokens) > 3 else 0
    if dim != 2:
        raise ParseError(path, lineno, f"only 2-d points are supported, got dimension {dim}")
    if n < 0 or attrs < 0 or markers not in (0, 1):
        raise ParseError(path, lineno, "malformed node header")
    want = 1 + 2 + attrs + markers
    coords = np.empty(2 * n, dtype=np.float64)
    rows = 0
    for lineno, tokens in lines:
        if rows >= n:
            raise ParseError(path, lineno, f"more than {n} point rows")
        if len(tokens) != want:
            raise ParseError(path, lineno, f"expected {want} columns, got {len(tokens)}")
        coords[2 * rows] = _parse_float(path, lineno, tokens[1], "x coordinate")
        coords[2 * rows + 1] = _parse_float(path, lineno, tokens[2], "y coordinate")
        rows += 1
    if rows != n:
        raise ParseError(path, 0, f"header promises {n} points but file has {rows}")
    return coords


def _read_indexed_rows(path, kind, per_row_min):
    """Shared reader for .ele / .neigh: header `<count> <3> [...]`, rows
    `index a b c [...]`. Returns an (count, 3) int array, unnormalized."""
    lines = _data_lines(path)
    try:
        lineno, tokens = next(lines)
    except StopIteration:
        raise ParseError(path, 0, "empty file") from None
    if len(tokens) < 2:
        raise ParseError(path, lineno, f"{kind} header needs <#rows> <3>")
    count = _parse_int(path, lineno, tokens[0], "row count")
    width = _parse_int(path, lineno, tokens[1], "entries per row")
    if count < 0 or width != 3:
        raise ParseError(path, lineno, f"malformed {kind} header (width must be 3)")
    out = np.empty((count, 3), dtype=np.int64)
    rows = 0
    for lineno, tokens in lines:
        if rows >= count:
            raise ParseError(path, lineno, f"more than {count} {kind} rows")
        if len(tokens) < per_row_min:
            raise ParseError(path, lineno, f"expected at least {per_row_min} columns")
        for k in range(3):
            out[rows, k] = _parse_int(path, lineno, tokens[1 + k], f"{kind} reference")
        rows += 1
    if rows != count:
        raise ParseError(path, 0, f"header promises {count} rows but file has {rows}")
    return out


def _read_trivertex(path, n_vertices):
    lines = _data_lines(path)
    try:
        lineno, tokens = next(lines)
    except StopIteration:
        raise ParseError(path, 0, "empty file") from None
    count = _parse_int(path, lineno, tokens[0], "vertex count")
    if count != n_vertices:
        raise ParseError(path, lineno,
                         f"trivertex file covers {count} vertices, expected {n_vertices}")
    out = np.full(count, -1, dtype=np.int64)
    rows = 0
    for lineno, tokens in lines:
        if rows >= count:
            raise ParseError(path, lineno, f"more than {count} trivertex rows")
        if len(tokens) != 2:
            raise ParseError(path, lineno, f"expected 2 columns, got {len(tokens)}")
        out[rows] = _parse_int(path, lineno, tokens[1], "triangle reference")
        rows += 1
    if rows != count:
        raise ParseError(path, 0, f"header promises {count} rows but file has {rows}")
    return out


def read_triangulation(files: TriangleFileSet) -> Triangulation:
    """Read and normalize a Triangle file set into a valid Triangulation.

    One-based index files are shifted to zero-based, clockwise triangles
    are reoriented (vertex slots 1,2 and neighbor slots 1,2 swapped), the
    trivertex array is computed when no file provides it, and the result
    must pass validate().
    """
    coords = _read_node(files.node)
    n = coords.size // 2
    tris = _read_indexed_rows(files.ele, "triangle", 4)
    neigh = _read_indexed_rows(files.neigh, "neighbor", 4)
    if neigh.shape[0] != tris.shape[0]:
        raise ParseError(files.neigh, 0,
                         f"{neigh.shape[0]} neighbor rows for {tris.shape[0]} triangles")

    # one-based sets reference vertex n (zero-based tops out at n-1)
    one_based = bool((tris == n).any())
    if one_based:
        tris = tris - 1
        neigh = np.where(neigh >= 0, neigh - 1, neigh)

    if tris.size and ((tris < 0) | (tris >= n)).any():
        bad = int(np.argwhere((tris < 0) | (tris >= n))[0][0])
        raise ParseError(files.ele, 0,
                         f"triangle row {bad} references a vertex outside [0, {n})")
    T = tris.shape[0]
    if neigh.size and ((neigh < -1) | (neigh >= T)).any():
        bad = int(np.argwhere((neigh < -1) | (neigh >= T))[0][0])
        raise ParseError(files.neigh, 0,
                         f"neighbor row {bad} references a triangle outside [0, {T})")

    trivertex = None
    if files.trivertex is not None:
        trivertex = _read_trivertex(files.trivertex, n)
        if one_based:
            trivertex = np.where(trivertex >= 0, trivertex - 1, trivertex)

    tri = Triangulation(coords, tris.ravel(), neigh.ravel(), trivertex)
    cw = signed_areas(tri) < 0
    if cw.any():
        t3 = tri.triangles.reshape(-1, 3)
        n3 = tri.neighbors.reshape(-1, 3)
        t3[cw] = t3[cw][:, [0, 2, 1]]
        n3[cw] = n3[cw][:, [0, 2, 1]]
    if tri.trivertex is None:
        tri.trivertex = compute_trivertex(tri)

    report = validate(tri)
    if not report.ok:
        raise ValidationError(
            f"{files.node}: triangulation is invalid: {report.summary()}", report)
    return tri


def write_triangulation(tri: Triangulation, basepath) -> TriangleFileSet:
    """Write .node/.ele/.neigh (and .trivertex when present) next to basepath.

    Zero-based, no attributes or markers; coordinates keep full precision so
    a read of the written set reproduces the triangulation exactly.
    """
    base = Path(basepath)
    node = base.with_suffix(".node")
    ele = base.with_suffix(".ele")
    neigh = base.with_suffix(".neigh")
    n = tri.n_vertices
    T = tri.n_triangles
    pts = tri.points()
    with open(node, "w") as f:
        f.write(f"{n} 2 0 0\n")
        for i in range(n):
            f.write(f"{i} {_fmt(pts[i, 0])} {_fmt(pts[i, 1])}\n")
    t3 = tri.triangles.reshape(-1, 3)
    with open(ele, "w") as f:
        f.write(f"{T} 3 0\n")
        for i in range(T):
            f.write(f"{i} {t3[i, 0]} {t3[i, 1]} {t3[i, 2]}\n")
    n3 = tri.neighbors.reshape(-1, 3)
    with open(neigh, "w") as f:
        f.write(f"{T} 3\n")
        for i in range(T):
            f.write(f"{i} {n3[i, 0]} {n3[i, 1]} {n3[i, 2]}\n")
    trivertex = None
    if tri.trivertex is not None:
        trivertex = base.with_suffix(".trivertex")
        with open(trivertex, "w") as f:
            f.write(f"{n}\n")
            for i in range(n):
                f.write(f"{i} {tri.trivertex[i]}\n")
    return TriangleFileSet(node, ele, neigh, trivertex)


def write_polymesh(mesh: PolygonMesh, vertices, path) -> None:
    """Write the canonical text form of a polygon mesh (byte-stable)."""
    verts = np.asarray(vertices, dtype=np.float64).ravel()
    cm = canonicalize(mesh)
    n = verts.size // 2
    with open(path, "w") as f:
        f.write(f"{n} {cm.count}\n")
        for i in range(n):
            f.write(f"{_fmt(verts[2 * i])} {_fmt(verts[2 * i + 1])}\n")
        for i in range(cm.count):
            poly = cm.polygon(i)
            f.write(f"{poly.size} " + " ".join(str(int(v)) for v in poly) + "\n")


def read_polymesh(path):
    """Parse a polygon mesh file back into (flat vertex array, PolygonMesh)."""
    lines = _data_lines(path)
    try:
        lineno, tokens = next(lines)
    except StopIteration:
        raise ParseError(path, 0, "empty file") from None
    if len(tokens) != 2:
        raise ParseError(path, lineno, "header must be <#vertices> <#polygons>")
    n = _parse_int(path, lineno, tokens[0], "vertex count")
    count = _parse_int(path, lineno, tokens[1], "polygon count")
    if n < 0 or count < 0:
        raise ParseError(path, lineno, "negative counts in header")
    verts = np.empty(2 * n, dtype=np.float64)
    polys = []
    rows = 0
    for lineno, tokens in lines:
        if rows < n:
            if len(tokens) != 2:
                raise ParseError(path, lineno, f"expected 2 coordinates, got {len(tokens)}")
            verts[2 * rows] = _parse_float(path, lineno, tokens[0], "x coordinate")
            verts[2 * rows + 1] = _parse_float(path, lineno, tokens[1], "y coordinate")
        else:
            ln = _parse_int(path, lineno, tokens[0], "polygon length")
            if ln < 3:
                raise ParseError(path, lineno, f"polygon length {ln} is below 3")
            if len(tokens) != 1 + ln:
                raise ParseError(path, lineno,
                                 f"polygon row promises {ln} vertices, has {len(tokens) - 1}")
            poly = [_parse_int(path, lineno, tok, "vertex reference") for tok in tokens[1:]]
            if any(v < 0 or v >= n for v in poly):
                raise ParseError(path, lineno, f"vertex reference outside [0, {n})")
            polys.append(poly)
        rows += 1
    if rows != n + count:
        raise ParseError(path, 0,
                         f"header promises {n} vertex and {count} polygon rows, file has {rows}")
    return verts, PolygonMesh.from_polygons(polys)


def write_svg(mesh: PolygonMesh, vertices, path, *, stroke: str = "#222222",
              stroke_width: float | None = None, fill_by_size: bool = False) -> None:
    """Render each polygon as one closed SVG path.

    The viewBox is fitted to the vertex bounding box (y flipped so the mesh
    is not upside down); fill_by_size colors polygons by vertex count.
    """
    verts = np.asarray(vertices, dtype=np.float64).reshape(-1, 2)
    if verts.size:
        xmin, ymin = verts.min(axis=0)
        xmax, ymax = verts.max(axis=0)
    else:
        xmin = ymin = 0.0
        xmax = ymax = 1.0
    w = max(xmax - xmin, 1e-12)
    h = max(ymax - ymin, 1e-12)
    pad = 0.02 * max(w, h)
    if stroke_width is None:
        stroke_width = max(w, h) / 500.0
    flip = ymin + ymax

    def fill(size):
        if not fill_by_size:
            return "none"
        hue = (size * 47) % 360
        return f"hsl({hue}, 65%, 78%)"

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="{xmin - pad} {ymin - pad} {w + 2 * pad} {h + 2 * pad}">',
        f'<g stroke="{stroke}" stroke-width="{stroke_width}" '
        f'stroke-linejoin="round" fill="none">',
    ]
    for i in range(mesh.count):
        poly = mesh.polygon(i)
        pieces = []
        for k, v in enumerate(poly):
            x = verts[v, 0]
            y = flip - verts[v, 1]
            pieces.append(f"{'M' if k == 0 else 'L'}{x:.6g} {y:.6g}")
        parts.append(f'<path d="{" ".join(pieces)} Z" fill="{fill(poly.size)}"/>')
    parts.append("</g>")
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n")


def generate_random_delaunay(n: int, bbox=(0.0, 0.0, 10000.0, 10000.0),
                             seed: int = 0) -> Triangulation:
    """Delaunay triangulation of n uniform random points in bbox.

    Deterministic per (n, bbox, seed). Degenerate draws (all collinear)
    re-draw with the same stream, a bounded number of times. The result
    always passes validate().
    """
    if n < 3:
        raise ValueError("need at least 3 points to triangulate")
    x0, y0, x1, y1 = map(float, bbox)
    rng = np.random.default_rng(seed)
    last_error = None
    for _ in range(5):
        pts = rng.uniform((x0, y0), (x1, y1), (n, 2))
        try:
            d = Delaunay(pts)
        except QhullError as e:
            last_error = e
            continue
        if d.coplanar.size:
            continue  # a point was dropped; re-draw
        t3 = d.simplices.astype(np.int64)
        n3 = d.neighbors.astype(np.int64)
        tri = Triangulation(pts.ravel(), t3.ravel(), n3.ravel())
        cw = signed_areas(tri) < 0
        if cw.any():
            t3v = tri.triangles.reshape(-1, 3)
            n3v = tri.neighbors.reshape(-1, 3)
            t3v[cw] = t3v[cw][:, [0, 2, 1]]
            n3v[cw] = n3v[cw][:, [0, 2, 1]]
        tri.trivertex = compute_trivertex(tri)
        report = validate(tri)
        if not report.ok:
            raise ValidationError(
                f"generated triangulation is invalid: {report.summary()}", report)
        return tri
    raise ValueError(f"could not triangulate a degenerate point draw: {last_error}")
