"""Independent reference computations used only by the tests.

Nothing here shares code with the package's linear algebra or moduli
enumeration: ranks come from dense Fraction elimination, torsion from
sympy's invariant factors, and path counts from plain matrix products.
relation_failure is the one exception: it takes the package's induced
maps and only multiplies them with numpy.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import invariant_factors

from akh.complex import CubeComplex
from akh.homology import free_dims, induced_map
from akh.sl2 import Sl2Op


def dense_rank(rows: list[list[int]]) -> int:
    m = [[Fraction(v) for v in r] for r in rows if any(r)]
    rank, col = 0, 0
    ncols = len(m[0]) if m else 0
    while rank < len(m) and col < ncols:
        piv = next((i for i in range(rank, len(m)) if m[i][col] != 0), None)
        if piv is None:
            col += 1
            continue
        m[rank], m[piv] = m[piv], m[rank]
        p = m[rank][col]
        for i in range(rank + 1, len(m)):
            f = m[i][col] / p
            if f:
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
        col += 1
    return rank


def torsion(rows: list[list[int]]) -> tuple[int, ...]:
    if not rows or not rows[0] or not any(any(r) for r in rows):
        return ()
    facs = invariant_factors(Matrix(rows), domain=ZZ)
    return tuple(sorted(abs(int(f)) for f in facs if abs(int(f)) > 1))


def dense_homology(C: CubeComplex) -> dict[tuple[int, int, int], tuple[int, tuple[int, ...]]]:
    """Integral homology per (h, q, a) from dense matrices of each degree."""
    gens: dict[tuple[int, int, int], list] = {}
    for w, i, d in C.generators():
        gens.setdefault(tuple(d), []).append((w, i))
    pos = {g: (key, n) for key, lst in gens.items() for n, g in enumerate(lst)}

    def matrix(h, q, a):
        src, tgt = gens.get((h, q, a), []), gens.get((h + 1, q, a), [])
        M = [[0] * len(src) for _ in tgt]
        for col, (w, i) in enumerate(src):
            for k in range(C.dim):
                if w[k]:
                    continue
                t = C.target((w, k))
                for j, c in C.signed((w, k), i):
                    key, row = pos[(t, j)]
                    assert key == (h + 1, q, a)
                    M[row][col] += c
        return M

    out = {}
    for (h, q, a), lst in gens.items():
        d_out = matrix(h, q, a)
        d_in = matrix(h - 1, q, a)
        r = len(lst) - dense_rank(d_out) - dense_rank(d_in)
        t = torsion(d_in)
        if r or t:
            out[(h, q, a)] = (r, t)
    return out


def count_matrix(C: CubeComplex, w, k) -> np.ndarray:
    """Number of moduli points between basis elements along one cone edge."""
    src, tgt = C.bases[w], C.bases[C.target((w, k))]
    M = np.zeros((len(tgt), len(src)), dtype=np.int64)
    if k == C.j_coord and C.op.value == "H":
        s = C.diagram.resolution(w[:-1]).n_essential
        return s * np.eye(len(src), dtype=np.int64)
    for i, row in enumerate(C.maps[(w, k)]):
        for j, c in row:
            M[j, i] += abs(c)
    return M


def path_count_matrix(C: CubeComplex, w, order) -> np.ndarray:
    M = None
    cur = tuple(w)
    for k in order:
        E = count_matrix(C, cur, k)
        M = E if M is None else E @ M
        cur = C.target((cur, k))
    return M


def _block(maps, dims, key, shift):
    h, q, a = key
    rows = dims.get((h, q + shift, a + shift), 0)
    cols = dims.get(key, 0)
    M = maps.get(key)
    if not M or not rows or not cols:
        return np.zeros((rows, cols), dtype=object)
    return np.array(M, dtype=object).reshape(rows, cols)


def relation_failure(D):
    """First tri-degree where [E, F] = H or H = a fails on free homology, else None."""
    dims = free_dims(D)
    m = {op: induced_map(D, op) for op in Sl2Op}
    for key in dims:
        h, q, a = key
        below, above = (h, q - 2, a - 2), (h, q + 2, a + 2)
        H = _block(m[Sl2Op.H], dims, key, 0)
        ef = np.zeros_like(H)
        fe = np.zeros_like(H)
        if dims.get(below):
            ef = _block(m[Sl2Op.E], dims, below, 2).dot(_block(m[Sl2Op.F], dims, key, -2))
        if dims.get(above):
            fe = _block(m[Sl2Op.F], dims, above, -2).dot(_block(m[Sl2Op.E], dims, key, 2))
        if not ((ef - fe) == H).all() or not (H == a * np.eye(dims[key], dtype=object)).all():
            return key
    return None
