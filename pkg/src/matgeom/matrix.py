"""Dense matrices over a finite field.

Entries are stored as element encodings in a read-only int64 array.  Besides
the ``Matrix`` value type there are batch helpers working on stacked arrays of
shape ``(..., m, n)``; the space enumerators and map builders use those.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .field import FieldError, FieldSpec, Involution


class MatrixError(ValueError):
    """Dimension mismatch, singular input, or malformed matrix text."""


def _rank_rows(field: FieldSpec, rows: list[list[int]]) -> int:
    """Rank of a list of rows by Gaussian elimination (rows are modified)."""
    if not rows:
        return 0
    add, mul, neg, inv = field.add_table, field.mul_table, field.neg_table, field.inv_table
    ncols = len(rows[0])
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        prow = rows[rank]
        pinv = inv[prow[col]]
        for r in range(rank + 1, len(rows)):
            c = rows[r][col]
            if c:
                f = neg[mul[c, pinv]]
                row = rows[r]
                for j in range(col, ncols):
                    if prow[j]:
                        row[j] = add[row[j], mul[f, prow[j]]]
        rank += 1
        if rank == len(rows):
            break
    return rank


def array_rank(field: FieldSpec, arr: np.ndarray) -> int:
    return _rank_rows(field, [list(map(int, row)) for row in np.asarray(arr)])


def rref_array(field: FieldSpec, arr: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns; zero rows are dropped."""
    add, mul, neg, inv = field.add_table, field.mul_table, field.neg_table, field.inv_table
    a = np.array(arr, dtype=np.int64)
    if a.ndim == 1:
        a = a[None, :]
    nrows, ncols = a.shape
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(a[r:, col])[0]
        if len(nz) == 0:
            continue
        piv = r + nz[0]
        a[[r, piv]] = a[[piv, r]]
        a[r] = mul[inv[a[r, col]], a[r]]
        for i in range(nrows):
            if i != r and a[i, col]:
                a[i] = add[a[i], mul[neg[a[i, col]], a[r]]]
        pivots.append(col)
        r += 1
    return a[:r], pivots


def batch_add(field: FieldSpec, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return field.add_table[a, b]


def batch_sub(field: FieldSpec, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return field.add_table[a, field.neg_table[b]]


def batch_matmul(field: FieldSpec, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix product over the field, broadcasting over leading axes."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape[-1] != b.shape[-2]:
        raise MatrixError(f"cannot multiply {a.shape[-2:]} by {b.shape[-2:]}")
    acc = None
    for k in range(a.shape[-1]):
        term = field.mul_table[a[..., :, k, None], b[..., None, k, :]]
        acc = term if acc is None else field.add_table[acc, term]
    return acc


def batch_conj_transpose(sigma: Involution, a: np.ndarray) -> np.ndarray:
    return sigma.table[np.swapaxes(a, -1, -2)]


class Matrix:
    """Immutable matrix over a FieldSpec, compared entrywise."""

    __slots__ = ("field", "entries", "_rank")

    def __init__(self, field: FieldSpec, entries: Iterable[Sequence[int]] | np.ndarray):
        arr = np.array(entries, dtype=np.int64)
        if arr.ndim != 2:
            raise MatrixError(f"expected a 2-d array of entries, got shape {arr.shape}")
        if arr.size and (arr.min() < 0 or arr.max() >= field.order):
            raise MatrixError(f"entries out of range for {field.name}")
        arr.setflags(write=False)
        self.field = field
        self.entries = arr
        self._rank: int | None = None

    # constructors
    @classmethod
    def zeros(cls, field: FieldSpec, m: int, n: int | None = None) -> Matrix:
        return cls(field, np.zeros((m, m if n is None else n), dtype=np.int64))

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> Matrix:
        return cls(field, np.eye(n, dtype=np.int64))

    @classmethod
    def unit(cls, field: FieldSpec, m: int, n: int, j: int, k: int, value: int = 1) -> Matrix:
        """E_jk with 1-based indices: ``value`` at (j, k), zero elsewhere."""
        arr = np.zeros((m, n), dtype=np.int64)
        arr[j - 1, k - 1] = value
        return cls(field, arr)

    @classmethod
    def diag(cls, field: FieldSpec, values: Sequence[int]) -> Matrix:
        return cls(field, np.diag(np.array(values, dtype=np.int64)))

    @classmethod
    def parse(cls, field: FieldSpec, text: str) -> Matrix:
        """Parse ``"1,0;0,2"``: rows split by ';', entries by ','."""
        try:
            rows = [[int(tok) for tok in row.split(",")] for row in text.strip().split(";")]
        except ValueError as exc:
            raise MatrixError(f"cannot parse matrix {text!r}") from exc
        if len({len(r) for r in rows}) != 1:
            raise MatrixError(f"ragged matrix {text!r}")
        return cls(field, rows)

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    def key(self) -> tuple[int, ...]:
        return tuple(int(v) for v in self.entries.ravel())

    def serialize(self) -> str:
        return ";".join(",".join(str(int(v)) for v in row) for row in self.entries)

    __str__ = serialize

    def __repr__(self) -> str:
        return f"Matrix({self.field.name}, {self.serialize()!r})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.field == other.field and self.shape == other.shape and np.array_equal(self.entries, other.entries)

    def __hash__(self) -> int:
        return hash((self.field, self.shape, self.entries.tobytes()))

    def _check(self, other: Matrix) -> None:
        if self.field != other.field:
            raise FieldError(f"mixed fields {self.field.name} and {other.field.name}")

    def __add__(self, other: Matrix) -> Matrix:
        self._check(other)
        if self.shape != other.shape:
            raise MatrixError(f"shape mismatch {self.shape} vs {other.shape}")
        return Matrix(self.field, batch_add(self.field, self.entries, other.entries))

    def __sub__(self, other: Matrix) -> Matrix:
        self._check(other)
        if self.shape != other.shape:
            raise MatrixError(f"shape mismatch {self.shape} vs {other.shape}")
        return Matrix(self.field, batch_sub(self.field, self.entries, other.entries))

    def __neg__(self) -> Matrix:
        return Matrix(self.field, self.field.neg_table[self.entries])

    def __matmul__(self, other: Matrix) -> Matrix:
        self._check(other)
        return Matrix(self.field, batch_matmul(self.field, self.entries, other.entries))

    def scale(self, c: int) -> Matrix:
        return Matrix(self.field, self.field.mul_table[int(c), self.entries])

    @property
    def T(self) -> Matrix:
        return Matrix(self.field, self.entries.T)

    def conj_transpose(self, sigma: Involution) -> Matrix:
        if sigma.field != self.field:
            raise FieldError("involution belongs to a different field")
        return Matrix(self.field, batch_conj_transpose(sigma, self.entries))

    def rank(self) -> int:
        if self._rank is None:
            self._rank = array_rank(self.field, self.entries)
        return self._rank

    def is_zero(self) -> bool:
        return not self.entries.any()

    def row(self, i: int) -> np.ndarray:
        return self.entries[i]

    def inverse(self) -> Matrix:
        n = self.rows
        if n != self.cols:
            raise MatrixError("only square matrices can be inverted")
        aug = np.concatenate([self.entries, np.eye(n, dtype=np.int64)], axis=1)
        red, pivots = rref_array(self.field, aug)
        if pivots[:n] != list(range(n)) or len(red) < n:
            raise MatrixError("matrix is singular")
        return Matrix(self.field, red[:n, n:])

    def is_square(self) -> bool:
        return self.rows == self.cols


def mat_rank(m: Matrix) -> int:
    return m.rank()


def mat_basic(a: Matrix, b: Matrix | int, op: str) -> Matrix:
    """``op`` in {add, sub, mul, scale}; for ``scale`` the second operand is a field encoding."""
    if op == "scale":
        return a.scale(int(b))
    if not isinstance(b, Matrix):
        raise MatrixError(f"operation {op!r} needs two matrices")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a @ b
    raise MatrixError(f"unknown matrix operation {op!r}")


def conj_transpose(m: Matrix, sigma: Involution) -> Matrix:
    return m.conj_transpose(sigma)


def _require_square(m: Matrix) -> None:
    if not m.is_square():
        raise MatrixError(f"expected a square matrix, got shape {m.shape}")


def is_hermitian(m: Matrix, sigma: Involution) -> bool:
    _require_square(m)
    return m.conj_transpose(sigma) == m


def is_alternate(m: Matrix) -> bool:
    """Skew-symmetric with zero diagonal."""
    _require_square(m)
    e = m.entries
    return not np.diagonal(e).any() and np.array_equal(e.T, m.field.neg_table[e])


def batch_is_alternate(field: FieldSpec, arr: np.ndarray) -> np.ndarray:
    diag_zero = ~np.diagonal(arr, axis1=-2, axis2=-1).any(axis=-1)
    skew = (np.swapaxes(arr, -1, -2) == field.neg_table[arr]).all(axis=(-1, -2))
    return diag_zero & skew


def mat_inverse(m: Matrix) -> Matrix:
    return m.inverse()


def row_space_contains(field: FieldSpec, rows: np.ndarray, vec: np.ndarray) -> bool:
    rows = np.asarray(rows).reshape(-1, len(vec))
    base = array_rank(field, rows) if len(rows) else 0
    return array_rank(field, np.vstack([rows, vec])) == base


def random_matrix(field: FieldSpec, m: int, n: int, rng: np.random.Generator) -> Matrix:
    return Matrix(field, rng.integers(0, field.order, size=(m, n)))


def random_invertible(field: FieldSpec, n: int, rng: np.random.Generator) -> Matrix:
    while True:
        cand = random_matrix(field, n, n, rng)
        if cand.rank() == n:
            return cand
