from __future__ import annotations

import numpy as np
import pytest

from conftest import space_of
from matgeom.field import field_make, make_involution
from matgeom.matrix import Matrix, array_rank, is_hermitian, rref_array
from matgeom.spaces import (
    GrassmannPoint,
    SpaceDescriptor,
    SpaceError,
    SyntheticGraph,
    adjacency,
    enumerate_rref,
    enumerate_space,
    gaussian_binomial,
    grass_intersection_dim,
    parse_descriptor,
)

F2, F3 = field_make(2), field_make(3)

SMALL_SPACES = [
    "rect:2x2:GF(2)",
    "rect:2x2:GF(3)",
    "rect:2x3:GF(2)",
    "rect:3x2:GF(2)",
    "sym:2:GF(2)",
    "sym:2:GF(3)",
    "sym:3:GF(2)",
    "sym:2:GF(5)",
    "herm:2:GF(4):frob",
    "herm:2:GF(9):frob",
    "grass:2:4:GF(2)",
    "grass:2:5:GF(2)",
    "grass:2:4:GF(3)",
]


def test_gaussian_binomial():
    assert gaussian_binomial(4, 2, 2) == 35
    assert gaussian_binomial(5, 2, 2) == 155
    assert gaussian_binomial(4, 2, 3) == 130
    assert gaussian_binomial(3, 0, 7) == 1


@pytest.mark.parametrize("desc", SMALL_SPACES)
def test_counts_match_closed_form(desc):
    space = space_of(desc)
    assert space.size == space.descriptor.expected_size


def test_paper_counts():
    assert space_of("sym:2:GF(3)").size == 27
    assert space_of("sym:2:GF(2)").size == 8
    assert space_of("grass:2:4:GF(2)").size == 35
    assert enumerate_space("herm:2:GF(16):frob").size == 256


@pytest.mark.parametrize("desc", SMALL_SPACES)
def test_points_unique_and_lexicographic(desc):
    space = space_of(desc)
    keys = [tuple(np.asarray(space.points[i]).ravel()) for i in range(space.size)]
    assert keys == sorted(keys)
    assert len(set(keys)) == len(keys)


@pytest.mark.parametrize("desc", SMALL_SPACES)
def test_neighbors_match_pairwise_oracle(desc):
    space = space_of(desc)
    adj = space.adjacency_matrix
    assert not adj.diagonal().any()
    assert (adj == adj.T).all()
    rng = np.random.default_rng(0)
    for _ in range(300):
        i, j = (int(v) for v in rng.integers(0, space.size, 2))
        assert space.adjacent(i, j) == adj[i, j]


@pytest.mark.parametrize("desc", ["sym:2:GF(3)", "herm:2:GF(4):frob", "herm:2:GF(9):frob", "sym:3:GF(2)"])
def test_hermitian_points(desc):
    space = space_of(desc)
    sigma = space.descriptor.involution
    for i in range(space.size):
        assert is_hermitian(space.point(i), sigma)


@pytest.mark.parametrize("desc", ["grass:2:4:GF(2)", "grass:2:5:GF(2)", "grass:2:4:GF(3)"])
def test_grassmann_points_rref(desc):
    space = space_of(desc)
    m = space.descriptor.m
    for i in range(space.size):
        basis = np.asarray(space.points[i])
        reduced, pivots = rref_array(space.field, basis)
        assert len(pivots) == m
        assert (reduced == basis).all()


def test_enumerate_rref_count():
    assert len(enumerate_rref(F2, 2, 4)) == 35
    assert len(enumerate_rref(F3, 1, 3)) == 13


def test_matrix_adjacency_examples():
    space = space_of("rect:2x2:GF(3)")
    zero = Matrix.zeros(F3, 2)
    assert adjacency(space, zero, Matrix.unit(F3, 2, 2, 1, 1))
    assert not adjacency(space, zero, zero)
    assert not adjacency(space, zero, Matrix.identity(F3, 2))


def e(*idx, n=4):
    v = [0] * n
    for i in idx:
        v[i - 1] = 1
    return v


def test_grassmann_examples():
    space = space_of("grass:2:4:GF(2)")
    w12 = GrassmannPoint(F2, [e(1), e(2)])
    w13 = GrassmannPoint(F2, [e(1), e(3)])
    w34 = GrassmannPoint(F2, [e(3), e(4)])
    assert adjacency(space, w12, w13)
    assert not adjacency(space, w12, w34)
    assert grass_intersection_dim(w12, w12) == 2
    assert grass_intersection_dim(w12, w34) == 0
    assert grass_intersection_dim(w12, w13) == 1
    assert GrassmannPoint(F2, [e(1, 2), e(2)]) == w12


def test_dependent_rows_span_smaller_subspace():
    line = GrassmannPoint(F2, [e(1), e(1)])
    assert line.dim == 1
    with pytest.raises(SpaceError):
        space_of("grass:2:4:GF(2)").index_of(line)


@pytest.mark.parametrize(
    "text",
    ["rect:2x3:GF(3)", "rect:2×2:GF(4)", "sym:2:GF(5)", "herm:2:GF(16):frob", "grass:2:5:GF(2)"],
)
def test_descriptor_round_trip(text):
    d = parse_descriptor(text)
    assert parse_descriptor(str(d)) == d


def test_descriptor_errors():
    for bad in ("rect:1x3:GF(3)", "rect:2x2:GF(6)", "blob:2:GF(2)", "grass:2:3:GF(2)", "herm:2:GF(3):frob", "sym:x:GF(2)"):
        with pytest.raises((SpaceError, ValueError)):
            parse_descriptor(bad)


def test_point_cap():
    with pytest.raises(SpaceError):
        enumerate_space("rect:3x3:GF(3)", cap=1000)


def test_herm_default_involution():
    d = parse_descriptor("herm:2:GF(4)")
    assert d.involution.short_name == "frob"
    assert SpaceDescriptor.herm(2, field_make(2, 2), "frob") == d
    assert d.involution == make_involution(field_make(2, 2), "frob") or d.involution.kind == "frobenius"


def test_synthetic_graphs():
    path = SyntheticGraph.path(3)
    assert path.edge_list() == [(0, 1), (1, 2)]
    cyc = SyntheticGraph.cycle(4)
    assert cyc.edge_count == 4 and cyc.adjacent(3, 0)


def test_rank_difference_matrix_matches_array_rank():
    space = space_of("rect:2x2:GF(2)")
    ranks = space.rank_difference_matrix()
    for i in range(space.size):
        for j in range(space.size):
            assert ranks[i, j] == array_rank(space.field, np.asarray(space.points[i]) ^ np.asarray(space.points[j]))
