"""Vertex maps between point sets.

A ``PointMap`` is a plain lookup table ``table[i] = image of vertex i``.  The
module builds the standard transformation groups (used as positive
examples), the two known non-isomorphisms that still preserve diameter pairs,
and perturbed group maps for falsification runs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterator

import numpy as np

from .field import Involution
from .graph import DistanceIndex
from .matrix import (
    Matrix,
    MatrixError,
    batch_add,
    batch_conj_transpose,
    batch_is_alternate,
    batch_matmul,
    is_alternate,
    is_hermitian,
    random_invertible,
    rref_array,
)
from .spaces import GrassmannSpace, MatrixSpace, PointSet, SpaceError

MAP_FORMAT_TAG = "# matgeom point map v1"


class MapError(ValueError):
    pass


@dataclass(eq=False)
class PointMap:
    source: PointSet
    target: PointSet
    table: np.ndarray
    origin: str = "table"

    def __post_init__(self):
        table = np.asarray(self.table, dtype=np.int64)
        if table.shape != (self.source.size,):
            raise MapError(f"map table has {table.shape} entries, expected {self.source.size}")
        if len(table) and (table.min() < 0 or table.max() >= self.target.size):
            raise MapError("map table points outside the target")
        table.setflags(write=False)
        self.table = table

    @property
    def injective(self) -> bool:
        return len(np.unique(self.table)) == len(self.table)

    @property
    def surjective(self) -> bool:
        return len(np.unique(self.table)) == self.target.size

    @property
    def bijective(self) -> bool:
        return self.injective and self.surjective

    def __call__(self, i: int) -> int:
        return int(self.table[i])

    def then(self, other: PointMap) -> PointMap:
        """Apply ``self`` first, then ``other``."""
        if other.source is not self.target and other.source.size != self.target.size:
            raise MapError("maps do not compose")
        return PointMap(self.source, other.target, other.table[self.table], f"{self.origin} ; {other.origin}")


def identity_map(space: PointSet) -> PointMap:
    return PointMap(space, space, np.arange(space.size), "identity")


def permutation_map(space: PointSet, cycle: tuple[int, ...], origin: str | None = None) -> PointMap:
    """The cyclic permutation c0 -> c1 -> ... -> c0; fixes everything else."""
    table = np.arange(space.size)
    for a, b in zip(cycle, cycle[1:] + cycle[:1]):
        table[a] = b
    return PointMap(space, space, table, origin or f"cycle{tuple(int(c) for c in cycle)}")


def _require_kind(space: PointSet, kinds: tuple[str, ...]) -> None:
    if space.descriptor is None or space.descriptor.kind not in kinds:
        raise MapError(f"operation needs a {' or '.join(kinds)} space, got {space.name}")


def make_rect_transform(p: Matrix, q: Matrix, r: Matrix, space: MatrixSpace) -> PointMap:
    """X -> PXQ + R."""
    _require_kind(space, ("rect",))
    m, n = space.m, space.n
    if p.shape != (m, m) or q.shape != (n, n) or r.shape != (m, n):
        raise MatrixError("dimension mismatch for X -> PXQ + R")
    if p.rank() != m or q.rank() != n:
        raise MatrixError("P and Q must be invertible")
    f = space.field
    images = batch_add(f, batch_matmul(f, batch_matmul(f, p.entries, space.points), q.entries), r.entries)
    return PointMap(space, space, space.index_of_array(images), "X -> PXQ+R")


def make_herm_transform(p: Matrix, h: Matrix, sigma: Involution, space: MatrixSpace) -> PointMap:
    """X -> P X σ(P)^t + H."""
    _require_kind(space, ("herm",))
    n = space.n
    if p.shape != (n, n) or h.shape != (n, n):
        raise MatrixError("dimension mismatch for X -> PXP*+H")
    if p.rank() != n:
        raise MatrixError("P must be invertible")
    if not is_hermitian(h, sigma):
        raise MatrixError("H must be Hermitian")
    f = space.field
    p_star = batch_conj_transpose(sigma, p.entries)
    images = batch_add(f, batch_matmul(f, batch_matmul(f, p.entries, space.points), p_star), h.entries)
    if not np.array_equal(batch_conj_transpose(sigma, images), images):
        raise MatrixError("transform left the Hermitian space")
    return PointMap(space, space, space.index_of_array(images), "X -> PXP*+H")


def make_grass_transform(p: Matrix, space: GrassmannSpace) -> PointMap:
    """Subspace V -> V P for invertible P acting on row vectors."""
    _require_kind(space, ("grass",))
    if p.shape != (space.ambient, space.ambient) or p.rank() != space.ambient:
        raise MatrixError("P must be an invertible (m+n) x (m+n) matrix")
    f = space.field
    moved = batch_matmul(f, space.points, p.entries)
    images = np.stack([rref_array(f, b)[0] for b in moved])
    return PointMap(space, space, space.index_of_array(images), "V -> VP")


def random_group_transform(space: PointSet, rng: np.random.Generator) -> PointMap:
    d = space.descriptor
    if d is None:
        raise MapError("no transformation group for synthetic graphs")
    f = d.field
    if d.kind == "rect":
        r = space.point(int(rng.integers(space.size)))
        return make_rect_transform(random_invertible(f, d.m, rng), random_invertible(f, d.n, rng), r, space)
    if d.kind == "herm":
        h = space.point(int(rng.integers(space.size)))
        return make_herm_transform(random_invertible(f, d.n, rng), h, d.involution, space)
    return make_grass_transform(random_invertible(f, d.m + d.n, rng), space)


# ---------------------------------------------------------------------------
# verdicts


def dm_treu_violation(phi: PointMap, src: DistanceIndex, tgt: DistanceIndex) -> dict[str, int] | None:
    """First pair where d(x,y) = diam Γ and d(φx, φy) = diam Γ' disagree, checked both ways."""
    src_diam = src.dist == src.diameter
    t = phi.table
    img_diam = tgt.dist[np.ix_(t, t)] == tgt.diameter
    bad = np.argwhere(src_diam != img_diam)
    if len(bad) == 0:
        return None
    x, y = (int(v) for v in bad[0])
    return {"x": x, "y": y, "d_src": src.d(x, y), "d_tgt": tgt.d(phi(x), phi(y))}


def check_dm_treu(phi: PointMap, src: DistanceIndex, tgt: DistanceIndex) -> bool:
    return dm_treu_violation(phi, src, tgt) is None


def isomorphism_violation(phi: PointMap, src: PointSet, tgt: PointSet) -> dict[str, Any] | None:
    t = phi.table
    if not phi.bijective:
        return {"reason": "not bijective"}
    img = tgt.adjacency_matrix[np.ix_(t, t)]
    bad = np.argwhere(src.adjacency_matrix != img)
    if len(bad) == 0:
        return None
    x, y = (int(v) for v in bad[0])
    return {"x": x, "y": y, "adjacent_src": bool(src.adjacency_matrix[x, y]), "adjacent_tgt": bool(img[x, y])}


def is_isomorphism(phi: PointMap, src: PointSet, tgt: PointSet) -> bool:
    return isomorphism_violation(phi, src, tgt) is None


def map_verdict(phi: PointMap, src: DistanceIndex, tgt: DistanceIndex) -> dict[str, Any]:
    dm = dm_treu_violation(phi, src, tgt)
    iso = isomorphism_violation(phi, src.space, tgt.space)
    first = dm
    if first is None and iso is not None and "x" in iso:
        x, y = iso["x"], iso["y"]
        first = {"x": x, "y": y, "d_src": src.d(x, y), "d_tgt": tgt.d(phi(x), phi(y))}
    return {
        "map_source": phi.origin,
        "source_space": src.space.name,
        "target_space": tgt.space.name,
        "injective": phi.injective,
        "surjective": phi.surjective,
        "bijective": phi.bijective,
        "dm_treu": dm is None,
        "isomorphism": iso is None,
        "first_violation": first,
    }


# ---------------------------------------------------------------------------
# the two counterexample constructions


def antipodal_swap(index: DistanceIndex, a: int) -> PointMap:
    """Transposition of a with its unique antipode a*, when each is the other's only antipode."""
    shell = index.shell(a)
    if len(shell) != 1:
        raise MapError(f"vertex {a} has {len(shell)} antipodes, need exactly one")
    a_star = int(shell[0])
    back = index.shell(a_star)
    if len(back) != 1 or int(back[0]) != a:
        raise MapError(f"antipode {a_star} of {a} has antipodes {back.tolist()}")
    return permutation_map(index.space, (a, a_star), f"antipodal swap ({a} {a_star})")


def alternate_shift(space: MatrixSpace, k: Matrix) -> PointMap:
    """X -> X + K on alternate matrices, identity on the rest (symmetric, char 2, n even)."""
    d = space.descriptor
    if d is None or d.kind != "herm" or not d.involution.is_identity:
        raise MapError("alternate shift needs a symmetric matrix space")
    if d.field.p != 2:
        raise MapError("alternate shift needs characteristic 2")
    if d.n % 2:
        raise MapError("alternate shift needs even n")
    if k.shape != (d.n, d.n) or not is_alternate(k):
        raise MapError("K must be an alternate n x n matrix")
    if k.is_zero():
        raise MapError("K must be nonzero")
    alt = batch_is_alternate(space.field, space.points)
    table = np.arange(space.size)
    shifted = batch_add(space.field, space.points[alt], k.entries)
    table[alt] = space.index_of_array(shifted)
    return PointMap(space, space, table, f"alternate shift by {k.serialize()}")


# ---------------------------------------------------------------------------
# map files


def save_map(phi: PointMap, path: str | Path) -> None:
    lines = [MAP_FORMAT_TAG, f"# source: {phi.source.name}", f"# target: {phi.target.name}"]
    lines += [f"{i},{int(j)}" for i, j in enumerate(phi.table)]
    Path(path).write_text("\n".join(lines) + "\n")


def load_map(path: str | Path, src: PointSet, tgt: PointSet) -> PointMap:
    """Parse "src,dst" lines; '#' lines are comments, "# source:"/"# target:" must match."""
    assigned: dict[int, int] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            for key, space in (("source:", src), ("target:", tgt)):
                if body.startswith(key) and body[len(key) :].strip() != space.name:
                    raise MapError(f"line {lineno}: map {key} {body[len(key):].strip()} does not match {space.name}")
            continue
        try:
            a, b = (int(tok) for tok in line.split(","))
        except ValueError as exc:
            raise MapError(f"line {lineno}: expected 'src,dst', got {raw!r}") from exc
        if not 0 <= a < src.size or not 0 <= b < tgt.size:
            raise MapError(f"line {lineno}: index out of range")
        if a in assigned:
            raise MapError(f"line {lineno}: vertex {a} assigned twice")
        assigned[a] = b
    missing = [i for i in range(src.size) if i not in assigned]
    if missing:
        raise MapError(f"vertices without image: {missing[:10]}")
    return PointMap(src, tgt, np.array([assigned[i] for i in range(src.size)]), str(path))


# ---------------------------------------------------------------------------
# falsification of "diameter-pair preserving surjection => isomorphism"


def perturbed_maps(space: PointSet, index: DistanceIndex, count: int, seed: int) -> Iterator[PointMap]:
    """Group transforms composed with a small permutation of vertices.

    The perturbation cycles through: a random transposition, a transposition
    of adjacent vertices, of vertices at distance 2, and a random 3-cycle.
    Adjacent and nearby pairs share most of their diameter shells, which
    makes them the hardest cases for the diameter-pair test.
    """
    rng = np.random.default_rng(seed)
    size = space.size
    modes = itertools.cycle(("random", "adjacent", "distance2", "3-cycle"))
    for _ in range(count):
        base = random_group_transform(space, rng)
        mode = next(modes)
        u = int(rng.integers(size))
        if mode in ("adjacent", "distance2"):
            r = 1 if mode == "adjacent" else min(2, index.diameter)
            choices = np.nonzero(index.dist[u] == r)[0]
            v = int(rng.choice(choices))
            cycle: tuple[int, ...] = (u, v)
        elif mode == "3-cycle":
            cycle = tuple(int(c) for c in rng.choice(size, size=3, replace=False))
        else:
            v = int(rng.integers(size - 1))
            cycle = (u, v + (v >= u))
        yield base.then(permutation_map(space, cycle, f"{mode} {cycle}"))


def shell_twin_pairs(index: DistanceIndex) -> np.ndarray:
    """Pairs u < v whose transposition preserves diameter pairs.

    That happens exactly when shell(u) and shell(v) agree outside {u, v}.
    Composing an automorphism with a transposition is dm-treu iff the
    transposed pair is listed here, so an empty result settles every
    transposition perturbation at once.
    """
    mask = (index.dist == index.diameter).astype(np.int32)
    sizes = mask.sum(axis=1)
    sym_diff = sizes[:, None] + sizes[None, :] - 2 * (mask @ mask.T)
    return np.argwhere(np.triu(sym_diff == 2 * mask, k=1))


@dataclass
class FalsificationReport:
    space: str
    seed: int
    group_maps: int
    group_failures: list[dict[str, Any]] = field(default_factory=list)
    perturbed_maps: int = 0
    perturbed_dm_treu: int = 0
    perturbed_isomorphisms: int = 0
    counterexamples: list[dict[str, Any]] = field(default_factory=list)
    shell_twins: int = 0

    @property
    def passed(self) -> bool:
        return not self.group_failures and not self.counterexamples

    def to_dict(self) -> dict[str, Any]:
        return {
            "space": self.space,
            "seed": self.seed,
            "group_maps": self.group_maps,
            "group_failures": self.group_failures,
            "perturbed_maps": self.perturbed_maps,
            "perturbed_dm_treu": self.perturbed_dm_treu,
            "perturbed_isomorphisms": self.perturbed_isomorphisms,
            "counterexamples": self.counterexamples,
            "shell_twin_pairs": self.shell_twins,
            "passed": self.passed,
            "note": "falsification run over sampled maps; not a proof",
        }


def falsify_theorem(index: DistanceIndex, perturbed: int = 1000, group: int = 100, seed: int = 0) -> FalsificationReport:
    """Group maps must pass both tests; no perturbed map may pass dm-treu yet fail isomorphism."""
    space = index.space
    report = FalsificationReport(space.name, seed, group)
    report.shell_twins = len(shell_twin_pairs(index))
    rng = np.random.default_rng(seed)
    for _ in range(group):
        phi = random_group_transform(space, rng)
        verdict = map_verdict(phi, index, index)
        if not (verdict["dm_treu"] and verdict["isomorphism"]):
            report.group_failures.append(verdict)
    for phi in perturbed_maps(space, index, perturbed, seed + 1):
        report.perturbed_maps += 1
        if not phi.surjective:
            continue
        dm = check_dm_treu(phi, index, index)
        iso = is_isomorphism(phi, space, space)
        report.perturbed_dm_treu += dm
        report.perturbed_isomorphisms += iso
        if dm and not iso:
            report.counterexamples.append(map_verdict(phi, index, index))
    return report


def translation_on(space: MatrixSpace, k: Matrix) -> PointMap:
    """X -> X + K on the whole space."""
    if not space.contains(k):
        raise SpaceError("translation vector must be a point of the space")
    return PointMap(space, space, space.index_of_array(batch_add(space.field, space.points, k.entries)), "X -> X+K")
