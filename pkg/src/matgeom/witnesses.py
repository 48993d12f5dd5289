"""Constructive witnesses for the penultimate-point axiom (A4) and rank-one steps.

Each routine builds the point that the existence proofs describe.  None of
them checks its own output: callers re-verify the distances independently.
All matrix witnesses assume the third point Z is the zero matrix; translate
by Z first for the general case.
"""

from __future__ import annotations

import numpy as np

from .field import Involution, check_restrictions
from .matrix import (
    Matrix,
    MatrixError,
    array_rank,
    batch_conj_transpose,
    batch_matmul,
    row_space_contains,
)
from .spaces import GrassmannPoint, MatrixSpace, _product_array, enumerate_rref


class WitnessError(RuntimeError):
    """A construction found nothing although existence is guaranteed."""


def _spans_equal(field, a: np.ndarray, b: np.ndarray) -> bool:
    ra = array_rank(field, a) if len(a) else 0
    rb = array_rank(field, b) if len(b) else 0
    if ra != rb:
        return False
    if ra == 0:
        return True
    return array_rank(field, np.vstack([a, b])) == ra


def witness_a4_rect(x: Matrix, y: Matrix) -> Matrix:
    """W of rank one with rank(X - W) = m - 1 and rank(Y - W) = m.

    For rows x_1..x_m of X let U_i = x_i + span(x_j : j != i), likewise for Y.
    Some i has U_{X,i} != U_{Y,i}; W carries a vector of U_{X,i} \\ U_{Y,i} in
    row i and zeros elsewhere.  Tall matrices are handled through columns.
    """
    if x.shape != y.shape or x.field != y.field:
        raise MatrixError("X and Y must have equal shape over one field")
    m, n = x.shape
    if m > n:
        return witness_a4_rect(x.T, y.T).T
    if x == y:
        raise ValueError("X and Y must be distinct")
    if x.rank() != m or y.rank() != m:
        raise ValueError("X and Y must both have full row rank m")
    f = x.field
    xe, ye = x.entries, y.entries
    for i in range(m):
        others_x = np.delete(xe, i, axis=0)
        others_y = np.delete(ye, i, axis=0)
        same_dir = _spans_equal(f, others_x, others_y)
        shift = f.add_table[xe[i], f.neg_table[ye[i]]]
        if same_dir and (m == 1 and not shift.any() or m > 1 and row_space_contains(f, others_y, shift)):
            continue
        for coeffs in _product_array(f.order, m - 1):
            w = xe[i].copy()
            for c, row in zip(coeffs, others_x):
                w = f.add_table[w, f.mul_table[c, row]]
            off = f.add_table[w, f.neg_table[ye[i]]]
            inside = not off.any() if m == 1 else row_space_contains(f, others_y, off)
            if not inside:
                out = np.zeros_like(xe)
                out[i] = w
                return Matrix(f, out)
    raise WitnessError("no row index separates the affine subspaces")


def _quad(sigma: Involution, vs: np.ndarray, a: np.ndarray) -> np.ndarray:
    """v A σ(v)^t for every row v of ``vs``."""
    va = batch_matmul(sigma.field, vs[:, None, :], a)  # (N, 1, n)
    return batch_matmul(sigma.field, va, sigma.table[vs][:, :, None])[:, 0, 0]


def _rank_one_from(sigma: Involution, xa: np.ndarray, c: int) -> Matrix:
    """σ(xA)^t c^{-1} (xA)."""
    f = sigma.field
    col = sigma.table[xa][:, None]
    row = f.mul_table[f.inv(int(c)), xa][None, :]
    return Matrix(f, batch_matmul(f, col, row))


def _nonzero_vectors(q: int, n: int) -> np.ndarray:
    return _product_array(q, n)[1:]


def witness_a4_herm(x: Matrix, y: Matrix, sigma: Involution, strict: bool = True) -> Matrix:
    """W = σ(vX)^t (vXσ(v)^t)^{-1} (vX) for the first v (lexicographic) with
    vXσ(v)^t != 0 and v(X - XY^{-1}X)σ(v)^t != 0.

    Requires invertible Hermitian X != Y.  With ``strict`` the involution must
    satisfy both restrictions, under which such v always exists.
    """
    if strict and not check_restrictions(sigma).both:
        raise ValueError("the involution violates (R1) or (R2)")
    n = x.rows
    if x == y:
        raise ValueError("X and Y must be distinct")
    if x.rank() != n:
        raise ValueError("X must be invertible")
    y_inv = y.inverse()
    b = x - x @ y_inv @ x
    if b.is_zero():
        raise ValueError("X - XY^{-1}X vanishes")
    vs = _nonzero_vectors(x.field.order, n)
    qx = _quad(sigma, vs, x.entries)
    qb = _quad(sigma, vs, b.entries)
    good = np.nonzero((qx != 0) & (qb != 0))[0]
    if len(good) == 0:
        raise WitnessError("no vector v with vXσ(v)^t and vBσ(v)^t both nonzero")
    v = vs[good[0]]
    vx = batch_matmul(x.field, v[None, :], x.entries)[0]
    return _rank_one_from(sigma, vx, qx[good[0]])


def rank1_step_neighbors(a: Matrix, sigma: Involution) -> set[Matrix]:
    """{σ(xA)^t (xAσ(x)^t)^{-1} (xA) : xAσ(x)^t != 0}."""
    if a.is_zero():
        raise ValueError("A must be nonzero")
    vs = _nonzero_vectors(a.field.order, a.rows)
    q = _quad(sigma, vs, a.entries)
    xa = batch_matmul(a.field, vs[:, None, :], a.entries)[:, 0, :]
    return {_rank_one_from(sigma, xa[i], q[i]) for i in np.nonzero(q)[0]}


def rank1_step_brute_force(space: MatrixSpace, a: Matrix) -> set[Matrix]:
    """{B in the space : rank B = 1 and rank(A - B) = rank A - 1}, by enumeration."""
    k = a.rank() - 1
    out = set()
    for i in np.nonzero(space.ranks == 1)[0]:
        b = space.point(int(i))
        if (a - b).rank() == k:
            out.add(b)
    return out


def witness_a4_grass(x: GrassmannPoint, y: GrassmannPoint, z: GrassmannPoint) -> GrassmannPoint:
    """W = span(a, S) with a in X \\ Y and S an (m-1)-subspace of Z missing span(a, Y) ∩ Z."""
    f = x.field
    m = x.dim
    if not (y.dim == z.dim == m and x.ambient == y.ambient == z.ambient):
        raise ValueError("X, Y, Z must be subspaces of one dimension in one ambient space")
    if m > x.ambient - m:
        raise ValueError("construction needs m <= n")
    if x == y:
        raise ValueError("X and Y must be distinct")
    for other in (x, y):
        if array_rank(f, np.vstack([other.basis.entries, z.basis.entries])) != 2 * m:
            raise ValueError("X and Y must both meet Z trivially")

    a = next(v for v in x.vectors() if not y.contains(v))
    ay = np.vstack([a, y.basis.entries])
    t_vectors = [v for v in z.vectors() if v.any() and row_space_contains(f, ay, v)]
    t_rank = array_rank(f, np.array(t_vectors)) if t_vectors else 0
    t_rows = np.array(t_vectors, dtype=np.int64).reshape(-1, x.ambient)

    coeff_sets = enumerate_rref(f, m - 1, m)
    order = np.lexsort(coeff_sets.reshape(len(coeff_sets), -1).T[::-1])
    for c in coeff_sets[order]:
        s_basis = batch_matmul(f, c, z.basis.entries)
        stacked = np.vstack([s_basis, t_rows]) if t_rank else s_basis
        if array_rank(f, stacked) == m - 1 + t_rank:
            return GrassmannPoint(f, np.vstack([a, s_basis]))
    raise WitnessError("no (m-1)-subspace of Z avoids span(a, Y) ∩ Z")


def translate_witness(fn, x: Matrix, y: Matrix, z: Matrix, *args) -> Matrix:
    """Run a zero-normalised matrix witness for a general Z."""
    return fn(x - z, y - z, *args) + z
