"""Point sets of the matrix geometries and their adjacency relations.

Three kinds of space are supported:

* ``rect``  -- all m x n matrices over GF(q); adjacent iff rank(A - B) = 1.
* ``herm``  -- Hermitian n x n matrices w.r.t. an involution (``sym`` when the
  involution is the identity); same adjacency.
* ``grass`` -- m-dimensional subspaces of GF(q)^(m+n), stored as RREF basis
  matrices; adjacent iff the intersection has dimension m - 1.

Vertices are numbered in lexicographic order of the row-major entry sequence.
``SyntheticGraph`` wraps arbitrary adjacency lists so that the graph and axiom
code can run on graphs outside these geometries.
"""

from __future__ import annotations

import functools
import itertools
import math
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .field import (
    DEFAULT_ORDER_CAP,
    FieldSpec,
    Involution,
    fixed_subfield,
    make_involution,
    parse_field,
)
from .matrix import (
    Matrix,
    array_rank,
    batch_add,
    batch_conj_transpose,
    batch_sub,
    rref_array,
)

DEFAULT_POINT_CAP = 100_000


class SpaceError(ValueError):
    """Malformed descriptor, oversized space, or a point outside the space."""


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of GF(q)^n."""
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


@dataclass(frozen=True)
class SpaceDescriptor:
    kind: str  # "rect", "herm" or "grass"
    m: int
    n: int
    field: FieldSpec
    involution: Involution | None = None

    def __post_init__(self):
        if self.kind not in ("rect", "herm", "grass"):
            raise SpaceError(f"unknown space kind {self.kind!r}")
        if self.kind == "herm":
            if self.n < 2 or self.m != self.n:
                raise SpaceError("hermitian spaces need n >= 2")
            if self.involution is None:
                object.__setattr__(self, "involution", make_involution(self.field))
            elif self.involution.field != self.field:
                raise SpaceError("involution is defined over a different field")
        elif self.m < 2 or self.n < 2:
            raise SpaceError(f"{self.kind} spaces need m, n >= 2")

    @classmethod
    def rect(cls, m: int, n: int, field: FieldSpec) -> SpaceDescriptor:
        return cls("rect", m, n, field)

    @classmethod
    def herm(cls, n: int, field: FieldSpec, involution: Involution | str = "identity") -> SpaceDescriptor:
        if isinstance(involution, str):
            involution = make_involution(field, involution)
        return cls("herm", n, n, field, involution)

    @classmethod
    def sym(cls, n: int, field: FieldSpec) -> SpaceDescriptor:
        return cls.herm(n, field, "identity")

    @classmethod
    def grass(cls, m: int, ambient: int, field: FieldSpec) -> SpaceDescriptor:
        return cls("grass", m, ambient - m, field)

    @property
    def expected_size(self) -> int:
        q = self.field.order
        if self.kind == "rect":
            return q ** (self.m * self.n)
        if self.kind == "herm":
            qf = len(fixed_subfield(self.involution))
            return qf**self.n * q ** (self.n * (self.n - 1) // 2)
        return gaussian_binomial(self.m + self.n, self.m, q)

    @property
    def diameter_hint(self) -> int:
        """Diameter predicted by the distance formulas (char-2 symmetric: n, or n+1 for even n)."""
        if self.kind == "herm" and self.involution.is_identity and self.field.p == 2 and self.n % 2 == 0:
            return self.n + 1
        return min(self.m, self.n)

    def __str__(self) -> str:
        f = self.field.name
        if self.kind == "rect":
            return f"rect:{self.m}x{self.n}:{f}"
        if self.kind == "grass":
            return f"grass:{self.m}:{self.m + self.n}:{f}"
        if self.involution.is_identity:
            return f"sym:{self.n}:{f}"
        return f"herm:{self.n}:{f}:{self.involution.short_name}"


_DIMS_RE = re.compile(r"^(\d+)\s*[x×X*]\s*(\d+)$")


def parse_descriptor(text: str, field_cap: int = DEFAULT_ORDER_CAP) -> SpaceDescriptor:
    """Parse "rect:2x3:GF(3)", "herm:2:GF(16):frob", "sym:2:GF(3)" or "grass:2:4:GF(2)"."""
    parts = [p.strip() for p in text.strip().split(":")]
    kind = parts[0].lower()
    try:
        if kind == "rect" and len(parts) == 3:
            match = _DIMS_RE.match(parts[1])
            if not match:
                raise SpaceError(f"bad dimensions {parts[1]!r}")
            return SpaceDescriptor.rect(int(match.group(1)), int(match.group(2)), parse_field(parts[2], field_cap))
        if kind == "sym" and len(parts) == 3:
            return SpaceDescriptor.sym(int(parts[1]), parse_field(parts[2], field_cap))
        if kind == "herm" and len(parts) in (3, 4):
            field = parse_field(parts[2], field_cap)
            inv = parts[3] if len(parts) == 4 else "frob"
            if inv not in ("id", "frob"):
                raise SpaceError(f"unknown involution {inv!r}; use 'id' or 'frob'")
            return SpaceDescriptor.herm(int(parts[1]), field, inv)
        if kind == "grass" and len(parts) == 4:
            return SpaceDescriptor.grass(int(parts[1]), int(parts[2].strip("()")), parse_field(parts[3], field_cap))
    except ValueError as exc:
        raise SpaceError(f"cannot parse space descriptor {text!r}: {exc}") from exc
    raise SpaceError(f"cannot parse space descriptor {text!r}")


class PointSet:
    """A finite vertex set with an adjacency oracle; vertices are ``range(size)``."""

    descriptor: SpaceDescriptor | None = None

    @property
    def size(self) -> int:
        raise NotImplementedError

    def __len__(self) -> int:
        return self.size

    @property
    def name(self) -> str:
        return str(self.descriptor) if self.descriptor is not None else "synthetic"

    def label(self, i: int) -> str:
        return str(i)

    def adjacent(self, i: int, j: int) -> bool:
        raise NotImplementedError

    def _compute_neighbors(self) -> list[np.ndarray]:
        n = self.size
        return [np.array([j for j in range(n) if self.adjacent(i, j)], dtype=np.int64) for i in range(n)]

    @functools.cached_property
    def neighbors(self) -> list[np.ndarray]:
        nbrs = self._compute_neighbors()
        for row in nbrs:
            row.setflags(write=False)
        return nbrs

    @functools.cached_property
    def adjacency_matrix(self) -> np.ndarray:
        n = self.size
        adj = np.zeros((n, n), dtype=bool)
        for i, row in enumerate(self.neighbors):
            adj[i, row] = True
        adj.setflags(write=False)
        return adj

    @property
    def edge_count(self) -> int:
        return int(sum(len(r) for r in self.neighbors)) // 2

    def edge_list(self) -> list[tuple[int, int]]:
        return [(i, int(j)) for i, row in enumerate(self.neighbors) for j in row if i < j]


class SyntheticGraph(PointSet):
    """A graph given by an edge list, used for negative examples."""

    def __init__(self, size: int, edges: Iterable[tuple[int, int]], name: str = "synthetic"):
        self._size = size
        self._name = name
        adj: list[set[int]] = [set() for _ in range(size)]
        for a, b in edges:
            if a == b:
                raise SpaceError("loops are not allowed")
            adj[a].add(b)
            adj[b].add(a)
        self._adj = adj

    @property
    def size(self) -> int:
        return self._size

    @property
    def name(self) -> str:
        return self._name

    def adjacent(self, i: int, j: int) -> bool:
        return j in self._adj[i]

    def _compute_neighbors(self) -> list[np.ndarray]:
        return [np.array(sorted(a), dtype=np.int64) for a in self._adj]

    @classmethod
    def path(cls, n: int) -> SyntheticGraph:
        return cls(n, [(i, i + 1) for i in range(n - 1)], name=f"path{n}")

    @classmethod
    def cycle(cls, n: int) -> SyntheticGraph:
        return cls(n, [(i, (i + 1) % n) for i in range(n)], name=f"cycle{n}")


def _product_array(q: int, length: int) -> np.ndarray:
    """All length-tuples over range(q) in lexicographic order, shape (q**length, length)."""
    count = q**length
    return np.arange(count, dtype=np.int64)[:, None] // q ** np.arange(length - 1, -1, -1, dtype=np.int64) % q


def _lex_keys(arr: np.ndarray, q: int) -> np.ndarray:
    """Big-endian base-q keys of the flattened trailing entries; order matches lexicographic order."""
    flat = arr.reshape(arr.shape[0], -1)
    length = flat.shape[-1]
    if length * math.log2(q) > 62:
        raise SpaceError("space too large for 64-bit vertex keys")
    radix = q ** np.arange(length - 1, -1, -1, dtype=np.int64)
    return flat @ radix


class _IndexedPoints(PointSet):
    """Shared machinery for spaces whose points are stacked integer arrays."""

    points: np.ndarray
    _keys: np.ndarray
    field: FieldSpec

    def _set_points(self, pts: np.ndarray) -> None:
        keys = _lex_keys(pts, self.field.order)
        order = np.argsort(keys, kind="stable")
        self.points = pts[order]
        self.points.setflags(write=False)
        self._keys = keys[order]
        if len(self._keys) > 1 and not (np.diff(self._keys) > 0).all():
            raise SpaceError("duplicate points in enumeration")

    @property
    def size(self) -> int:
        return len(self.points)

    def index_of_array(self, arr: np.ndarray) -> np.ndarray:
        """Vertex ids of stacked points; raises if any point is not in the space."""
        arr = np.asarray(arr)
        lead = arr.shape[: arr.ndim - 2]
        keys = _lex_keys(arr.reshape((-1,) + arr.shape[-2:]), self.field.order)
        pos = np.searchsorted(self._keys, keys)
        pos = np.minimum(pos, len(self._keys) - 1)
        if not (self._keys[pos] == keys).all():
            raise SpaceError(f"point not in {self.name}")
        return pos.reshape(lead)

    def label(self, i: int) -> str:
        return ";".join(",".join(str(int(v)) for v in row) for row in self.points[i])


class MatrixSpace(_IndexedPoints):
    """Rectangular or Hermitian matrices; an additive group, so differences stay inside."""

    def __init__(self, descriptor: SpaceDescriptor, cap: int = DEFAULT_POINT_CAP):
        if descriptor.kind not in ("rect", "herm"):
            raise SpaceError("MatrixSpace needs a rect or herm descriptor")
        expected = descriptor.expected_size
        if expected > cap:
            raise SpaceError(f"{descriptor} has {expected} points, above the cap {cap}")
        self.descriptor = descriptor
        self.field = descriptor.field
        self.m = descriptor.m
        self.n = descriptor.n
        self._set_points(self._enumerate())

    def _enumerate(self) -> np.ndarray:
        d = self.descriptor
        q = self.field.order
        if d.kind == "rect":
            return _product_array(q, self.m * self.n).reshape(-1, self.m, self.n)
        n = self.n
        fixed = np.array(fixed_subfield(d.involution), dtype=np.int64)
        upper = [(i, j) for i in range(n) for j in range(i + 1, n)]
        diag_choices = np.array(list(itertools.product(fixed, repeat=n)), dtype=np.int64).reshape(-1, n)
        up_choices = _product_array(q, len(upper))
        total = len(diag_choices) * len(up_choices)
        pts = np.zeros((total, n, n), dtype=np.int64)
        di = np.repeat(np.arange(len(diag_choices)), len(up_choices))
        ui = np.tile(np.arange(len(up_choices)), len(diag_choices))
        for t in range(n):
            pts[:, t, t] = diag_choices[di, t]
        sigma = d.involution.table
        for idx, (i, j) in enumerate(upper):
            pts[:, i, j] = up_choices[ui, idx]
            pts[:, j, i] = sigma[up_choices[ui, idx]]
        return pts

    def point(self, i: int) -> Matrix:
        return Matrix(self.field, self.points[i])

    def index_of(self, point: Matrix) -> int:
        if point.field != self.field or point.shape != (self.m, self.n):
            raise SpaceError(f"{point!r} is not a point of {self.name}")
        return int(self.index_of_array(point.entries[None])[0])

    def contains(self, point: Matrix) -> bool:
        try:
            self.index_of(point)
        except SpaceError:
            return False
        return True

    @functools.cached_property
    def ranks(self) -> np.ndarray:
        """rank of each point (its distance formula value from the zero matrix)."""
        out = np.array([array_rank(self.field, p) for p in self.points], dtype=np.int64)
        out.setflags(write=False)
        return out

    @property
    def zero_index(self) -> int:
        return 0

    def adjacent(self, i: int, j: int) -> bool:
        if i == j:
            return False
        diff = batch_sub(self.field, self.points[i], self.points[j])
        return array_rank(self.field, diff) == 1

    def _compute_neighbors(self) -> list[np.ndarray]:
        # neighbours of A are A + R with R ranging over the rank-one points
        rank_one = self.points[self.ranks == 1]
        out = []
        for i in range(self.size):
            sums = batch_add(self.field, self.points[i][None], rank_one)
            out.append(np.sort(self.index_of_array(sums)))
        return out

    def difference_index(self, i: int) -> np.ndarray:
        """Vertex ids of points[i] - points[j] for every j."""
        return self.index_of_array(batch_sub(self.field, self.points[i][None], self.points))

    def rank_difference_matrix(self) -> np.ndarray:
        """rank(A_i - A_j) for all ordered pairs."""
        ranks = self.ranks
        out = np.empty((self.size, self.size), dtype=np.int64)
        for i in range(self.size):
            out[i] = ranks[self.difference_index(i)]
        return out

    def is_hermitian_point(self, i: int) -> bool:
        sigma = self.descriptor.involution
        if sigma is None:
            return True
        p = self.points[i]
        return np.array_equal(batch_conj_transpose(sigma, p), p)


class GrassmannPoint:
    """An m-dimensional subspace, represented by the RREF of a basis matrix."""

    __slots__ = ("basis", "pivots")

    def __init__(self, field: FieldSpec, rows: np.ndarray | Sequence[Sequence[int]] | Matrix):
        if isinstance(rows, Matrix):
            rows = rows.entries
        red, pivots = rref_array(field, np.asarray(rows, dtype=np.int64))
        self.basis = Matrix(field, red)
        self.pivots = tuple(pivots)

    @classmethod
    def span(cls, field: FieldSpec, vectors: Iterable[Sequence[int]]) -> GrassmannPoint:
        return cls(field, np.array(list(vectors), dtype=np.int64))

    @property
    def field(self) -> FieldSpec:
        return self.basis.field

    @property
    def dim(self) -> int:
        return self.basis.rows

    @property
    def ambient(self) -> int:
        return self.basis.cols

    def vectors(self) -> np.ndarray:
        """All q^dim vectors of the subspace, in lexicographic order of coefficients."""
        f = self.field
        coeffs = _product_array(f.order, self.dim)
        return _combine(f, coeffs, self.basis.entries)

    def contains(self, vec: np.ndarray) -> bool:
        return array_rank(self.field, np.vstack([self.basis.entries, vec])) == self.dim

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GrassmannPoint):
            return NotImplemented
        return self.basis == other.basis

    def __hash__(self) -> int:
        return hash(self.basis)

    def __repr__(self) -> str:
        return f"GrassmannPoint({self.field.name}, {self.basis.serialize()!r})"


def _combine(field: FieldSpec, coeffs: np.ndarray, basis: np.ndarray) -> np.ndarray:
    """Linear combinations coeffs @ basis over the field (coeffs: (N, r), basis: (r, c))."""
    acc = np.zeros((len(coeffs), basis.shape[1]), dtype=np.int64)
    for r in range(basis.shape[0]):
        acc = field.add_table[acc, field.mul_table[coeffs[:, r, None], basis[None, r, :]]]
    return acc


def grass_intersection_dim(a: GrassmannPoint, b: GrassmannPoint) -> int:
    """dim(A ∩ B) = dim A + dim B - rank of the stacked bases."""
    if a.ambient != b.ambient or a.field != b.field:
        raise SpaceError("subspaces live in different ambient spaces")
    stacked = np.vstack([a.basis.entries, b.basis.entries])
    return a.dim + b.dim - array_rank(a.field, stacked)


def enumerate_rref(field: FieldSpec, m: int, ambient: int) -> np.ndarray:
    """All m x ambient RREF matrices of rank m, stacked, in no particular order."""
    q = field.order
    blocks = []
    for pivots in itertools.combinations(range(ambient), m):
        free = [(r, c) for r in range(m) for c in range(pivots[r] + 1, ambient) if c not in pivots]
        vals = _product_array(q, len(free))
        block = np.zeros((len(vals), m, ambient), dtype=np.int64)
        for r, c in enumerate(pivots):
            block[:, r, c] = 1
        for t, (r, c) in enumerate(free):
            block[:, r, c] = vals[:, t]
        blocks.append(block)
    return np.concatenate(blocks)


class GrassmannSpace(_IndexedPoints):
    """G(m, m+n; GF(q)): m-subspaces of GF(q)^(m+n)."""

    def __init__(self, descriptor: SpaceDescriptor, cap: int = DEFAULT_POINT_CAP):
        if descriptor.kind != "grass":
            raise SpaceError("GrassmannSpace needs a grass descriptor")
        expected = descriptor.expected_size
        if expected > cap:
            raise SpaceError(f"{descriptor} has {expected} points, above the cap {cap}")
        self.descriptor = descriptor
        self.field = descriptor.field
        self.m = descriptor.m
        self.n = descriptor.n
        self.ambient = self.m + self.n
        self._set_points(enumerate_rref(self.field, self.m, self.ambient))

    def point(self, i: int) -> GrassmannPoint:
        return GrassmannPoint(self.field, self.points[i])

    def index_of(self, point: GrassmannPoint) -> int:
        if point.dim != self.m or point.ambient != self.ambient or point.field != self.field:
            raise SpaceError(f"{point!r} is not a point of {self.name}")
        return int(self.index_of_array(point.basis.entries[None])[0])

    @functools.cached_property
    def membership(self) -> np.ndarray:
        """membership[i, v]: whether the vector with code v lies in subspace i."""
        q = self.field.order
        coeffs = _product_array(q, self.m)
        radix = q ** np.arange(self.ambient - 1, -1, -1, dtype=np.int64)
        mem = np.zeros((self.size, q**self.ambient), dtype=bool)
        for i, basis in enumerate(self.points):
            mem[i, _combine(self.field, coeffs, basis) @ radix] = True
        return mem

    def intersection_dim_matrix(self) -> np.ndarray:
        mem = self.membership.astype(np.float32)
        counts = np.rint(mem @ mem.T).astype(np.int64)
        # counts are exact powers of q
        log = {self.field.order**d: d for d in range(self.m + 1)}
        return np.vectorize(log.__getitem__, otypes=[np.int64])(counts)

    def adjacent(self, i: int, j: int) -> bool:
        if i == j:
            return False
        stacked = np.vstack([self.points[i], self.points[j]])
        return 2 * self.m - array_rank(self.field, stacked) == self.m - 1

    def _compute_neighbors(self) -> list[np.ndarray]:
        dims = self.intersection_dim_matrix()
        return [np.nonzero(row == self.m - 1)[0] for row in dims]


def enumerate_space(descriptor: SpaceDescriptor | str, cap: int = DEFAULT_POINT_CAP) -> MatrixSpace | GrassmannSpace:
    if isinstance(descriptor, str):
        descriptor = parse_descriptor(descriptor)
    if descriptor.kind == "grass":
        return GrassmannSpace(descriptor, cap)
    return MatrixSpace(descriptor, cap)


def adjacency(space: PointSet, a, b) -> bool:
    """Adjacency oracle on points (Matrix / GrassmannPoint) or vertex ids."""
    if isinstance(a, (Matrix, GrassmannPoint)):
        ia, ib = space.index_of(a), space.index_of(b)
    else:
        ia, ib = int(a), int(b)
    return space.adjacent(ia, ib)
