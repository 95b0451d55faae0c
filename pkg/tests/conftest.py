"""Shared fixtures: tiny hand-built meshes and a triangulation assembler."""

import math

import numpy as np
import pytest

from termesh import Triangulation, compute_trivertex
from termesh.mesh_core import signed_areas


def build_triangulation(points, triangles):
    """Assemble a Triangulation from loose data: orients every triangle
    counter-clockwise and derives the neighbor array from shared edges."""
    pts = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    tris = [list(t) for t in triangles]
    for t in tris:
        a, b, c = (pts[v] for v in t)
        area2 = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
        if area2 < 0:
            t[1], t[2] = t[2], t[1]
    edge_owner = {}
    neighbors = [[-1, -1, -1] for _ in tris]
    for ti, t in enumerate(tris):
        for j in range(3):
            key = frozenset((t[(j + 1) % 3], t[(j + 2) % 3]))
            if key in edge_owner:
                oi, oj = edge_owner.pop(key)
                neighbors[ti][j] = oi
                neighbors[oi][oj] = ti
            else:
                edge_owner[key] = (ti, j)
    tri = Triangulation(pts.ravel(), np.asarray(tris).ravel(),
                        np.asarray(neighbors).ravel())
    tri.trivertex = compute_trivertex(tri)
    return tri


@pytest.fixture
def single_triangle():
    # legs 3 and 4; the hypotenuse is edge 0 (opposite corner 0)
    return build_triangulation([(0, 0), (3, 0), (0, 4)], [(0, 1, 2)])


@pytest.fixture
def square_two_triangles():
    # unit square split by the (0,0)-(1,1) diagonal; the diagonal is the
    # longest edge of both triangles
    return build_triangulation(
        [(0, 0), (1, 0), (1, 1), (0, 1)],
        [(0, 1, 2), (0, 2, 3)],
    )


def make_sun():
    """Six-triangle wheel around a hub whose spoke radii grow 1,3,4,5,6,7.

    Consequences of the radii (all verifiable by hand): every rim edge is
    shorter than the larger spoke of its triangle, so each triangle's
    longest edge is a spoke; spoke 5 is the longest edge of both its
    triangles (the only terminal edge, seed = triangle 4); spokes 1-5 are
    each the longest edge of one triangle (internal); spoke 0 is the
    longest edge of neither (an interior frontier edge dangling inside one
    region). The region's walk revisits the hub: vertex 0 is a tip.
    """
    radii = [1.0, 3.0, 4.0, 5.0, 6.0, 7.0]
    points = [(0.0, 0.0)]
    for k, r in enumerate(radii):
        ang = math.radians(60.0 * k)
        points.append((r * math.cos(ang), r * math.sin(ang)))
    triangles = [(0, 1 + k, 1 + (k + 1) % 6) for k in range(6)]
    return build_triangulation(points, triangles)


@pytest.fixture
def sun_mesh():
    return make_sun()


def make_grid(nx, ny):
    """(nx x ny)-cell square grid, each cell split along its up diagonal.
    Full of exactly-equal edge lengths, so it exercises tie-breaking."""
    points = [(x, y) for y in range(ny + 1) for x in range(nx + 1)]

    def vid(x, y):
        return y * (nx + 1) + x

    triangles = []
    for y in range(ny):
        for x in range(nx):
            a, b = vid(x, y), vid(x + 1, y)
            c, d = vid(x + 1, y + 1), vid(x, y + 1)
            triangles.append((a, b, c))
            triangles.append((a, c, d))
    return build_triangulation(points, triangles)


@pytest.fixture
def grid_mesh():
    return make_grid(2, 2)


def make_tie_strip(cells=4):
    """Strip of isoceles triangles whose two slanted edges tie exactly for
    longest (squared lengths 26 vs 16). Exercises the lowest-slot rule on
    edges whose lengths are equal in exact arithmetic."""
    bottom = [(2.0 * i, 0.0) for i in range(cells + 1)]
    top = [(2.0 * i + 1.0, 5.0) for i in range(cells)]
    points = bottom + top

    def b(i):
        return i

    def t(i):
        return cells + 1 + i

    triangles = []
    for i in range(cells):
        triangles.append((b(i), b(i + 1), t(i)))
        if i + 1 < cells:
            triangles.append((t(i), b(i + 1), t(i + 1)))
    return build_triangulation(points, triangles)
