from __future__ import annotations

import numpy as np
import pytest

from conftest import index_of, space_of
from matgeom.field import field_make
from matgeom.maps import (
    MapError,
    PointMap,
    alternate_shift,
    antipodal_swap,
    check_dm_treu,
    dm_treu_violation,
    falsify_theorem,
    identity_map,
    is_isomorphism,
    load_map,
    make_grass_transform,
    make_herm_transform,
    make_rect_transform,
    map_verdict,
    perturbed_maps,
    permutation_map,
    random_group_transform,
    save_map,
    shell_twin_pairs,
    translation_on,
)
from matgeom.matrix import Matrix, batch_is_alternate, random_invertible
from matgeom.spaces import SpaceError

F2, F3, F5 = field_make(2), field_make(3), field_make(5)


def test_rect_transform_examples():
    space = space_of("rect:2x2:GF(3)")
    ident, zero = Matrix.identity(F3, 2), Matrix.zeros(F3, 2)
    assert (make_rect_transform(ident, ident, zero, space).table == np.arange(81)).all()
    shift = make_rect_transform(ident, ident, Matrix.unit(F3, 2, 2, 1, 1), space)
    assert shift.bijective and not (shift.table == np.arange(81)).any()
    phi = make_rect_transform(Matrix.diag(F3, [2, 1]), ident, zero, space)
    assert phi.bijective and is_isomorphism(phi, space, space)


def test_herm_transform_examples():
    space = space_of("sym:2:GF(5)")
    sigma = space.descriptor.involution
    ident = Matrix.identity(F5, 2)
    assert (make_herm_transform(ident, Matrix.zeros(F5, 2), sigma, space).table == np.arange(125)).all()
    assert make_herm_transform(ident, Matrix.unit(F5, 2, 2, 1, 1), sigma, space).bijective


def test_herm_transform_rejects_non_hermitian_shift():
    space = space_of("sym:2:GF(5)")
    with pytest.raises(ValueError):
        make_herm_transform(Matrix.identity(F5, 2), Matrix.unit(F5, 2, 2, 1, 2), space.descriptor.involution, space)


@pytest.mark.parametrize("desc", ["rect:2x2:GF(3)", "rect:2x3:GF(2)", "sym:2:GF(5)", "herm:2:GF(4):frob", "grass:2:4:GF(2)", "grass:2:5:GF(2)"])
def test_group_transforms_are_automorphisms(desc):
    space, index = space_of(desc), index_of(desc)
    rng = np.random.default_rng(11)
    for _ in range(25):
        phi = random_group_transform(space, rng)
        assert phi.bijective
        assert check_dm_treu(phi, index, index)
        assert is_isomorphism(phi, space, space)


def test_grass_transform_needs_invertible():
    space = space_of("grass:2:4:GF(2)")
    with pytest.raises(ValueError):
        make_grass_transform(Matrix.zeros(F2, 4), space)
    phi = make_grass_transform(random_invertible(F2, 4, np.random.default_rng(0)), space)
    assert is_isomorphism(phi, space, space)


def test_identity_passes():
    space, index = space_of("rect:2x2:GF(3)"), index_of("rect:2x2:GF(3)")
    phi = identity_map(space)
    assert check_dm_treu(phi, index, index) and is_isomorphism(phi, space, space)


def test_adjacent_transposition_breaks_dm_treu():
    space, index = space_of("rect:2x2:GF(3)"), index_of("rect:2x2:GF(3)")
    phi = permutation_map(space, (0, int(space.neighbors[0][0])))
    assert not check_dm_treu(phi, index, index)
    v = dm_treu_violation(phi, index, index)
    assert (v["d_src"] == 2) != (v["d_tgt"] == 2)


def test_antipodal_swap_s2f2():
    space, index = space_of("sym:2:GF(2)"), index_of("sym:2:GF(2)")
    phi = antipodal_swap(index, 0)
    assert phi(0) == space.index_of(Matrix.parse(F2, "0,1;1,0"))
    assert check_dm_treu(phi, index, index)
    assert not is_isomorphism(phi, space, space)
    e11 = space.index_of(Matrix.unit(F2, 2, 2, 1, 1))
    psi = antipodal_swap(index, e11)
    assert index.d(e11, psi(e11)) == 3


def test_antipodal_swap_needs_unique_antipode():
    with pytest.raises(MapError):
        antipodal_swap(index_of("sym:2:GF(3)"), 0)


def test_alternate_shift_s2f2():
    space, index = space_of("sym:2:GF(2)"), index_of("sym:2:GF(2)")
    k = Matrix.parse(F2, "0,1;1,0")
    phi = alternate_shift(space, k)
    kk = space.index_of(k)
    assert phi(0) == kk and phi(kk) == 0
    alt = batch_is_alternate(F2, space.points)
    assert int((phi.table == np.arange(8)).sum()) == 6 == int((~alt).sum())
    assert check_dm_treu(phi, index, index) and not is_isomorphism(phi, space, space)
    with pytest.raises(MapError):
        alternate_shift(space, Matrix.zeros(F2, 2))


def test_alternate_shift_matches_translation_on_alternates():
    space = space_of("sym:4:GF(2)")
    k = Matrix.unit(F2, 4, 4, 1, 2) + Matrix.unit(F2, 4, 4, 2, 1)
    phi, tr = alternate_shift(space, k), translation_on(space, k)
    alt = batch_is_alternate(F2, space.points)
    assert (phi.table[alt] == tr.table[alt]).all()
    assert (phi.table[~alt] == np.nonzero(~alt)[0]).all()
    with pytest.raises(SpaceError):
        translation_on(space, Matrix.unit(F2, 4, 4, 1, 2))


def test_save_load_round_trip(tmp_path):
    space, index = space_of("sym:2:GF(2)"), index_of("sym:2:GF(2)")
    phi = antipodal_swap(index, 0)
    path = tmp_path / "swap.map"
    save_map(phi, path)
    back = load_map(path, space, space)
    assert (back.table == phi.table).all()
    save_map(back, tmp_path / "again.map")
    assert (tmp_path / "again.map").read_bytes() == path.read_bytes()


def test_load_identity(tmp_path):
    space = space_of("rect:2x2:GF(3)")
    path = tmp_path / "id.map"
    path.write_text("".join(f"{i},{i}\n" for i in range(81)))
    assert (load_map(path, space, space).table == np.arange(81)).all()


def test_load_non_injective(tmp_path):
    space = space_of("sym:2:GF(2)")
    path = tmp_path / "bad.map"
    path.write_text("0,1\n1,1\n" + "".join(f"{i},{i}\n" for i in range(2, 8)))
    phi = load_map(path, space, space)
    assert not phi.injective and not phi.surjective
    verdict = map_verdict(phi, index_of("sym:2:GF(2)"), index_of("sym:2:GF(2)"))
    assert verdict["bijective"] is False


@pytest.mark.parametrize(
    "body",
    ["0,0\n", "0;1\n" + "".join(f"{i},{i}\n" for i in range(1, 8)), "0,9\n", "0,0\n0,1\n", "# source: sym:2:GF(3)\n0,0\n"],
)
def test_load_errors(tmp_path, body):
    space = space_of("sym:2:GF(2)")
    path = tmp_path / "x.map"
    path.write_text(body)
    with pytest.raises(MapError):
        load_map(path, space, space)


def test_point_map_checks_range():
    space = space_of("sym:2:GF(2)")
    with pytest.raises(MapError):
        PointMap(space, space, np.arange(1, 9))


def test_perturbed_maps_deterministic():
    space, index = space_of("grass:2:4:GF(2)"), index_of("grass:2:4:GF(2)")
    a = [m.table.tolist() for m in perturbed_maps(space, index, 12, seed=5)]
    b = [m.table.tolist() for m in perturbed_maps(space, index, 12, seed=5)]
    assert a == b


@pytest.mark.parametrize("desc", ["rect:2x2:GF(3)", "grass:2:4:GF(2)", "sym:2:GF(5)"])
def test_falsification_small(desc):
    report = falsify_theorem(index_of(desc), perturbed=200, group=20, seed=2)
    assert report.passed, report.counterexamples[:1]


@pytest.mark.parametrize("desc", ["sym:2:GF(3)", "rect:2x2:GF(2)", "herm:2:GF(4):frob", "grass:2:4:GF(2)"])
def test_diameter_two_corollary(desc):
    # on a finite graph of diameter 2 a dm-treu surjection is an automorphism,
    # whether or not the axioms hold
    import itertools

    space, index = space_of(desc), index_of(desc)
    assert index.diameter == 2
    rng = np.random.default_rng(9)
    population = list(perturbed_maps(space, index, 100, seed=9))
    population += [random_group_transform(space, rng) for _ in range(20)]
    population += [permutation_map(space, pair) for pair in itertools.combinations(range(min(space.size, 40)), 2)]
    seen = 0
    for phi in population:
        if phi.surjective and check_dm_treu(phi, index, index):
            seen += 1
            assert is_isomorphism(phi, space, space)
    assert seen >= 20


def test_shell_twins_match_transposition_scan():
    space, index = space_of("sym:2:GF(2)"), index_of("sym:2:GF(2)")
    twins = {tuple(p) for p in shell_twin_pairs(index).tolist()}
    scan = {
        (u, v)
        for u in range(space.size)
        for v in range(u + 1, space.size)
        if check_dm_treu(permutation_map(space, (u, v)), index, index)
    }
    assert twins == scan and len(twins) == 4


def test_no_shell_twins_on_axiom_spaces():
    for desc in ("rect:2x2:GF(3)", "sym:2:GF(5)", "grass:2:4:GF(2)"):
        assert len(shell_twin_pairs(index_of(desc))) == 0
