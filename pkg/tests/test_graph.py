from __future__ import annotations

import itertools
import json

import numpy as np
import pytest

from conftest import index_of, space_of
from matgeom.field import field_make
from matgeom.graph import (
    UNREACHABLE,
    IndexTooLarge,
    bfs_from,
    build_index,
    common_neighbors,
    degree_stats,
    distance_distribution,
    distance_report_json,
    to_dot,
    verify_distance_formula,
)
from matgeom.matrix import Matrix
from matgeom.spaces import SyntheticGraph

F3 = field_make(3)
SPACES = ["rect:2x2:GF(2)", "rect:2x2:GF(3)", "sym:2:GF(2)", "sym:2:GF(3)", "herm:2:GF(4):frob", "grass:2:4:GF(2)", "sym:3:GF(2)"]


@pytest.mark.parametrize("desc", SPACES)
def test_bfs_rows_match_index(desc):
    space, index = space_of(desc), index_of(desc)
    for src in range(0, space.size, max(1, space.size // 10)):
        row = bfs_from(space, src)
        assert row[src] == 0
        assert (row == index.dist[src]).all()


@pytest.mark.parametrize("desc", SPACES)
def test_metric_properties(desc):
    d = index_of(desc).dist.astype(np.int64)
    assert (d == d.T).all() and not d.diagonal().any()
    assert (d.max() == index_of(desc).diameter)
    if len(d) <= 256:
        # d[i, k] <= d[i, j] + d[j, k] for all triples
        assert (d[:, None, :] <= d[:, :, None] + d[None, :, :]).all()


@pytest.mark.parametrize("desc", SPACES)
def test_distance_one_is_adjacency(desc):
    space, index = space_of(desc), index_of(desc)
    assert ((index.dist == 1) == space.adjacency_matrix).all()


def test_s2f2_shells_from_zero():
    row = bfs_from(space_of("sym:2:GF(2)"), 0)
    assert np.bincount(row).tolist() == [1, 3, 3, 1]


def test_rank_distance_example():
    space = space_of("rect:2x2:GF(3)")
    index = index_of("rect:2x2:GF(3)")
    assert index.d(space.index_of(Matrix.zeros(F3, 2)), space.index_of(Matrix.identity(F3, 2))) == 2


@pytest.mark.parametrize("desc,diam", [("sym:2:GF(3)", 2), ("sym:2:GF(2)", 3), ("grass:2:4:GF(2)", 2), ("sym:3:GF(2)", 3)])
def test_diameters(desc, diam):
    index = index_of(desc)
    assert index.connected and index.diameter == diam


def test_disconnected_sentinel():
    g = SyntheticGraph(3, [(0, 1)])
    index = build_index(g)
    assert not index.connected
    assert index.dist[0, 2] == UNREACHABLE
    assert index.diameter == 1
    assert bfs_from(g, 2).tolist() == [UNREACHABLE, UNREACHABLE, 0]


def test_index_cap():
    with pytest.raises(IndexTooLarge):
        build_index(space_of("rect:2x2:GF(3)"), cap=50)


def test_common_neighbors_square():
    space, index = space_of("sym:2:GF(3)"), index_of("sym:2:GF(3)")
    x = space.index_of(Matrix.parse(F3, "1,0;0,2"))
    u = space.index_of(Matrix.parse(F3, "1,0;0,0"))
    v = space.index_of(Matrix.parse(F3, "0,0;0,2"))
    assert common_neighbors(index, x, 0) == {u, v}
    assert common_neighbors(index, x, x) == set(space.neighbors[x].tolist())


def test_cube_is_triangle_free():
    space, index = space_of("sym:2:GF(2)"), index_of("sym:2:GF(2)")
    for a, b in space.edge_list():
        assert common_neighbors(index, a, b) == set()


@pytest.mark.parametrize("desc", ["rect:2x2:GF(3)", "rect:2x3:GF(2)", "herm:2:GF(4):frob", "sym:2:GF(5)", "grass:2:4:GF(2)", "grass:2:5:GF(2)", "sym:4:GF(2)", "sym:2:GF(2)"])
def test_distance_formulas(desc):
    report = verify_distance_formula(space_of(desc), index_of(desc))
    assert report.passed, report.first_violation


def test_s4f2_formula_details():
    report = verify_distance_formula(space_of("sym:4:GF(2)"), index_of("sym:4:GF(2)"))
    assert report.details["diameter"] == 5


def test_distribution_and_degrees():
    index = index_of("sym:2:GF(3)")
    dist = distance_distribution(index)
    assert dist[0] == 27 and dist[1] + dist[2] == 27 * 26
    assert degree_stats(space_of("sym:2:GF(2)")) == {"min": 3, "max": 3, "mean": 3.0}


def test_dot_export():
    text = to_dot(space_of("sym:2:GF(2)"))
    assert text.count(" -- ") == 12
    assert text.count("[label=") == 8
    assert text == to_dot(space_of("sym:2:GF(2)"))


def test_json_report_stable():
    a = distance_report_json(index_of("grass:2:4:GF(2)"))
    b = distance_report_json(build_index(space_of("grass:2:4:GF(2)")))
    assert a == b
    data = json.loads(a)
    assert data["points"] == 35 and data["diameter"] == 2


def test_s2f2_edges_between_rank_classes():
    space = space_of("sym:2:GF(2)")
    for a, b in itertools.combinations(range(space.size), 2):
        if space.adjacent(a, b):
            assert (space.point(a) - space.point(b)).rank() == 1
