"""Half-edge algebra, trivertex derivation, and validation."""

import numpy as np
import pytest

from termesh import (BORDER, Triangulation, compute_trivertex, edge_endpoints,
                     generate_random_delaunay, next_halfedge, prev_halfedge,
                     squared_length, twin, validate)
from termesh.mesh_core import origin, signed_areas, target


def test_validate_minimal_triangle():
    tri = Triangulation([0, 0, 1, 0, 0, 1], [0, 1, 2], [-1, -1, -1])
    report = validate(tri)
    assert report.ok
    assert report.defects == []


def test_validate_flags_clockwise_triangle():
    tri = Triangulation([0, 0, 1, 0, 0, 1], [0, 2, 1], [-1, -1, -1])
    report = validate(tri)
    assert not report.ok
    assert any(kind == "orientation" for kind, _, _ in report.defects)


def test_validate_flags_one_way_adjacency(square_two_triangles):
    tri = square_two_triangles
    nbr = tri.neighbors.copy()
    nbr[tri.neighbors.tolist().index(0)] = BORDER  # drop one back-link
    broken = Triangulation(tri.vertices, tri.triangles, nbr)
    report = validate(broken)
    assert not report.ok
    kinds = {kind for kind, _, _ in report.defects}
    assert "reciprocity" in kinds or "edge_count" in kinds


def test_validate_flags_degenerate_and_duplicate():
    flat = Triangulation([0, 0, 1, 0, 2, 0], [0, 1, 2], [-1, -1, -1])
    assert any(k == "degenerate" for k, _, _ in validate(flat).defects)
    dup = Triangulation([0, 0, 1, 0, 0, 1], [0, 1, 2, 0, 1, 2],
                        [-1, -1, -1, -1, -1, -1])
    assert any(k == "duplicate" for k, _, _ in validate(dup).defects)


def test_validate_flags_bad_trivertex(single_triangle):
    tri = single_triangle
    tv = tri.trivertex.copy()
    tv[0] = 5
    report = validate(Triangulation(tri.vertices, tri.triangles, tri.neighbors, tv))
    assert any(k in ("trivertex", "index_range") for k, _, _ in report.defects)


def test_next_prev_cycle():
    h = 3 * 7 + 0
    assert next_halfedge(h) == 3 * 7 + 1
    assert next_halfedge(next_halfedge(next_halfedge(h))) == h
    assert prev_halfedge(next_halfedge(h)) == h


def test_edge_endpoints_convention(single_triangle):
    # edge j is opposite corner j
    assert edge_endpoints(single_triangle, 0) == (1, 2)
    assert edge_endpoints(single_triangle, 1) == (2, 0)
    assert edge_endpoints(single_triangle, 2) == (0, 1)


def test_twin_square(square_two_triangles):
    tri = square_two_triangles
    # the diagonal is the only interior edge
    interior = [h for h in range(6) if tri.neighbors[h] != BORDER]
    assert len(interior) == 2
    a, b = interior
    assert twin(tri, a) == b and twin(tri, b) == a
    assert edge_endpoints(tri, a) == edge_endpoints(tri, b)[::-1]
    border = [h for h in range(6) if tri.neighbors[h] == BORDER]
    assert all(twin(tri, h) == BORDER for h in border)


def test_squared_length_345(single_triangle):
    assert squared_length(single_triangle, 0) == 25.0  # hypotenuse
    assert squared_length(single_triangle, 1) == 16.0
    assert squared_length(single_triangle, 2) == 9.0


def test_twin_involution_random():
    tri = generate_random_delaunay(1000, seed=11)
    for h in range(tri.n_halfedges):
        w = twin(tri, h)
        if w == BORDER:
            continue
        assert twin(tri, w) == h
        assert edge_endpoints(tri, h) == edge_endpoints(tri, w)[::-1]
        assert squared_length(tri, h) == squared_length(tri, w)


def test_next_origin_matches_target_random():
    tri = generate_random_delaunay(300, seed=5)
    for h in range(tri.n_halfedges):
        assert origin(tri, next_halfedge(h)) == target(tri, h)


def test_squared_length_matches_recomputation():
    tri = generate_random_delaunay(200, seed=9)
    pts = tri.points()
    for h in range(tri.n_halfedges):
        o, t = edge_endpoints(tri, h)
        expect = float(((pts[o] - pts[t]) ** 2).sum())
        assert squared_length(tri, h) == pytest.approx(expect, rel=0, abs=0)


def test_compute_trivertex_single(single_triangle):
    tv = compute_trivertex(single_triangle)
    assert tv.tolist() == [0, 0, 0]


def test_compute_trivertex_lowest_triangle_wins(square_two_triangles):
    tv = compute_trivertex(square_two_triangles)
    # diagonal vertices 0 and 2 belong to both triangles; triangle 0 wins
    assert tv[0] == 0 and tv[2] == 0
    assert tv.tolist() == [0, 0, 0, 1]


def test_compute_trivertex_flags_isolated_vertex():
    tri = Triangulation([0, 0, 1, 0, 0, 1, 9, 9], [0, 1, 2], [-1, -1, -1])
    tv = compute_trivertex(tri)
    assert tv[3] == -1


def test_compute_trivertex_containment_random():
    tri = generate_random_delaunay(500, seed=3)
    tv = compute_trivertex(tri)
    t3 = tri.triangles.reshape(-1, 3)
    for v in range(tri.n_vertices):
        assert v in t3[tv[v]]


def test_generated_meshes_validate():
    for seed in (0, 1, 2):
        tri = generate_random_delaunay(400, seed=seed)
        assert validate(tri).ok
        assert (signed_areas(tri) > 0).all()
