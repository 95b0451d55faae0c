"""Label kernels against a brute-force edge classifier."""

import numpy as np
import pytest

from termesh import (BORDER, EdgeLabels, generate_random_delaunay, label_all,
                     label_frontiers, label_max, label_seeds, twin)
from termesh.backend import SEQUENTIAL, parallel
from termesh.errors import ValidationError
from termesh.mesh_core import Triangulation, edge_endpoints, squared_length

from conftest import make_grid, make_tie_strip


def brute_force_classify(tri):
    """Independent per-edge classification from raw coordinates.

    Recomputes each triangle's longest-edge slot directly (first slot wins
    ties), then sorts every undirected edge into exactly one of terminal,
    frontier, or internal. Border edges are frontier, and also terminal
    when they are their triangle's longest edge.
    """
    pts = tri.points()
    T = tri.n_triangles

    def longest_slot(t):
        best, best_len = 0, -1.0
        for j in range(3):
            a = tri.triangles[3 * t + (j + 1) % 3]
            b = tri.triangles[3 * t + (j + 2) % 3]
            d = pts[a] - pts[b]
            ln = float(d @ d)
            if ln > best_len:
                best, best_len = j, ln
        return best

    longest = [longest_slot(t) for t in range(T)]
    edges = {}
    for t in range(T):
        for j in range(3):
            key = frozenset(edge_endpoints(tri, 3 * t + j))
            edges.setdefault(key, []).append((t, j))
    classes = {}
    for key, sides in edges.items():
        own = [longest[t] == j for t, j in sides]
        if len(sides) == 1:
            classes[key] = "terminal+frontier" if own[0] else "frontier"
        elif all(own):
            classes[key] = "terminal"
        elif not any(own):
            classes[key] = "frontier"
        else:
            classes[key] = "internal"
    return longest, classes


def check_against_brute_force(tri, labels):
    longest, classes = brute_force_classify(tri)
    assert labels.max_edge.tolist() == longest
    for t in range(tri.n_triangles):
        for j in range(3):
            h = 3 * t + j
            key = frozenset(edge_endpoints(tri, h))
            expect_frontier = "frontier" in classes[key]
            assert bool(labels.frontier[h]) == expect_frontier, (t, j, classes[key])
    n_terminal = sum(1 for c in classes.values() if "terminal" in c)
    assert int(labels.seed.sum()) == n_terminal
    return classes


def test_label_max_345(single_triangle):
    assert label_max(single_triangle).tolist() == [0]


def test_label_max_tie_breaks_to_lowest_slot():
    # slots 0 and 1 tie exactly at squared length 26; lowest slot wins
    tri = Triangulation([0, 0, 2, 0, 1, 5], [0, 1, 2], [-1, -1, -1])
    assert label_max(tri).tolist() == [0]


def test_label_max_is_maximal_random():
    tri = generate_random_delaunay(800, seed=21)
    max_edge = label_max(tri)
    for t in range(tri.n_triangles):
        lens = [squared_length(tri, 3 * t + j) for j in range(3)]
        assert lens[max_edge[t]] == max(lens)


def test_square_seed_on_lower_triangle(square_two_triangles):
    tri = square_two_triangles
    max_edge = label_max(tri)
    seeds = label_seeds(tri, max_edge)
    assert seeds.tolist() == [True, False]


def test_single_triangle_border_terminal_seed(single_triangle):
    labels = label_all(single_triangle)
    assert labels.seed.tolist() == [True]
    assert labels.frontier.all()
    assert labels.max_edge.tolist() == [0]


def test_square_frontiers(square_two_triangles):
    tri = square_two_triangles
    labels = label_all(tri)
    for h in range(6):
        expect = tri.neighbors[h] == BORDER  # diagonal is max of both: not frontier
        assert bool(labels.frontier[h]) == expect


def test_frontier_flag_agrees_across_twins():
    tri = generate_random_delaunay(600, seed=2)
    labels = label_all(tri)
    for h in range(tri.n_halfedges):
        w = twin(tri, h)
        if w != BORDER:
            assert labels.frontier[h] == labels.frontier[w]


@pytest.mark.parametrize("seed", [0, 4, 17])
def test_trichotomy_random(seed):
    tri = generate_random_delaunay(500, seed=seed)
    check_against_brute_force(tri, label_all(tri))


def test_trichotomy_on_tie_heavy_grid():
    tri = make_grid(6, 5)
    labels = label_all(tri)
    classes = check_against_brute_force(tri, labels)
    # every up diagonal is the longest edge of both its triangles
    assert sum(1 for c in classes.values() if c == "terminal") == 30


def test_trichotomy_with_exactly_tied_longest_edges():
    tri = make_tie_strip(5)
    labels = label_all(tri)
    classes = check_against_brute_force(tri, labels)
    # a shared slant edge ties for longest on both sides, but each side's
    # max slot points at its own slot-0 slant, so none is terminal
    assert not any(c == "terminal" for c in classes.values())


def test_seed_count_equals_terminal_count_random():
    for seed in range(5):
        tri = generate_random_delaunay(1000, seed=100 + seed)
        labels = label_all(tri, check=False)
        _, classes = brute_force_classify(tri)
        n_terminal = sum(1 for c in classes.values() if "terminal" in c)
        assert int(labels.seed.sum()) == n_terminal


def test_sun_labels(sun_mesh):
    labels = label_all(sun_mesh)
    assert labels.max_edge.tolist() == [1, 1, 1, 1, 1, 2]
    assert labels.seed.tolist() == [False, False, False, False, True, False]
    # spoke 0 (hub-to-vertex-1 edge) is frontier despite being interior
    frontier_interior = [h for h in range(18)
                         if labels.frontier[h] and sun_mesh.neighbors[h] != BORDER]
    assert {frozenset(edge_endpoints(sun_mesh, h)) for h in frontier_interior} \
        == {frozenset((0, 1))}


def test_region_boundaries_are_frontier_and_one_seed_each(grid_mesh):
    # 8-triangle grid: region boundaries all frontier, one seed per region
    from termesh import regions_by_union_find
    labels = label_all(grid_mesh)
    part = regions_by_union_find(grid_mesh, labels)
    for h in range(grid_mesh.n_halfedges):
        w = twin(grid_mesh, h)
        crosses = w == BORDER or part.region_id[h // 3] != part.region_id[w // 3]
        if crosses:
            assert labels.frontier[h]
    seeds_per_region = np.zeros(part.count, dtype=int)
    for t in np.flatnonzero(labels.seed):
        seeds_per_region[part.region_id[t]] += 1
    assert (seeds_per_region == 1).all()


def test_label_all_rejects_invalid_mesh():
    bad = Triangulation([0, 0, 1, 0, 0, 1], [0, 2, 1], [-1, -1, -1])
    with pytest.raises(ValidationError):
        label_all(bad)


@pytest.mark.parametrize("workers", [1, 2, 4, 8])
def test_backends_produce_identical_labels(workers):
    tri = generate_random_delaunay(1200, seed=33)
    ref = label_all(tri, SEQUENTIAL, check=False)
    par = label_all(tri, parallel(workers), check=False)
    assert np.array_equal(ref.max_edge, par.max_edge)
    assert np.array_equal(ref.frontier, par.frontier)
    assert np.array_equal(ref.seed, par.seed)


def test_kernel_timings_recorded(single_triangle):
    times = {}
    label_all(single_triangle, kernel_seconds=times)
    assert set(times) == {"label_max", "label_seed", "label_frontier"}
    assert all(v >= 0 for v in times.values())
