"""Cube-shaped chain complexes: CKh_A(D) and the mapping cone of J.

Vertices are 0/1 tuples.  For the cone the last coordinate is the J
direction.  Each edge (w, k) goes from w (with w[k] = 0) to w + e_k and
carries an unsigned matrix together with the sign (-1)^(w_0 + ... + w_{k-1}).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator

from .algebra import TriDegree, basis, saddle_plan, tridegree
from .diagram import AnnularDiagram
from .sl2 import Sl2Op, j_image

Vertex = tuple[int, ...]
Edge = tuple[Vertex, int]


def edge_sign(w: Vertex, k: int) -> int:
    return -1 if sum(w[:k]) % 2 else 1


@dataclass(eq=False)
class CubeComplex:
    diagram: AnnularDiagram
    dim: int
    op: Sl2Op | None
    bases: dict[Vertex, list[tuple[int, ...]]]
    degrees: dict[Vertex, list[TriDegree]]
    # maps[(w, k)][i] = list of (target index, coefficient) before the sign
    maps: dict[Edge, list[list[tuple[int, int]]]]
    signs: dict[Edge, int] = field(default_factory=dict)

    def __post_init__(self):
        for e in self.maps:
            self.signs.setdefault(e, edge_sign(*e))

    @property
    def involves_J(self) -> bool:
        return self.op is not None

    @property
    def j_coord(self) -> int | None:
        return self.dim - 1 if self.op is not None else None

    @property
    def vertices(self) -> list[Vertex]:
        return list(self.bases)

    def size(self) -> int:
        return sum(len(b) for b in self.bases.values())

    def edges(self) -> Iterator[Edge]:
        return iter(self.maps)

    def target(self, e: Edge) -> Vertex:
        w, k = e
        return w[:k] + (1,) + w[k + 1:]

    def signed(self, e: Edge, i: int) -> list[tuple[int, int]]:
        s = self.signs[e]
        return [(j, s * c) for j, c in self.maps[e][i]]

    def generators(self) -> Iterator[tuple[Vertex, int, TriDegree]]:
        for w, degs in self.degrees.items():
            for i, d in enumerate(degs):
                yield w, i, d

    def with_sign_flipped(self, e: Edge) -> "CubeComplex":
        signs = dict(self.signs)
        signs[e] = -signs[e]
        return CubeComplex(self.diagram, self.dim, self.op, self.bases, self.degrees, self.maps, signs)


def _saddle_matrix(D: AnnularDiagram, u: Vertex, k: int) -> list[list[tuple[int, int]]]:
    plan = saddle_plan(D, u, k)
    index = {b: i for i, b in enumerate(basis(plan.target))}
    return [[(index[y], 1) for y in plan.image(x)] for x in basis(plan.source)]


def _j_matrix(op: Sl2Op, D: AnnularDiagram, u: Vertex) -> list[list[tuple[int, int]]]:
    res = D.resolution(u)
    index = {b: i for i, b in enumerate(basis(res))}
    return [sorted((index[y], c) for y, c in j_image(op, x, res).items()) for x in basis(res)]


def build_ckh(D: AnnularDiagram) -> CubeComplex:
    bases, degrees, maps = {}, {}, {}
    for u in D.vertices():
        res = D.resolution(u)
        bases[u] = basis(res)
        degrees[u] = [tridegree(D, u, b, res) for b in bases[u]]
        for k in range(D.n):
            if not u[k]:
                maps[(u, k)] = _saddle_matrix(D, u, k)
    C = CubeComplex(D, D.n, None, bases, degrees, maps)
    return C


def build_cone(D: AnnularDiagram, op: Sl2Op | str) -> CubeComplex:
    """Cone of J as an (n+1)-cube; copy 1 is shifted by h+1 and (q, a) - shift(J)."""
    op = Sl2Op(op)
    off = -op.qa_shift
    n = D.n
    bases, degrees, maps = {}, {}, {}
    for u in D.vertices():
        res = D.resolution(u)
        b = basis(res)
        base_deg = [tridegree(D, u, x, res) for x in b]
        for i in (0, 1):
            w = u + (i,)
            bases[w] = b
            degrees[w] = [TriDegree(d.h + i, d.q + i * off, d.a + i * off) for d in base_deg]
            for k in range(n):
                if not u[k]:
                    maps[(w, k)] = _saddle_matrix(D, u, k)
        maps[(u + (0,), n)] = _j_matrix(op, D, u)
    C = CubeComplex(D, n + 1, op, bases, degrees, maps)
    if not verify_d_squared(C):
        raise AssertionError("cone differential does not square to zero")  # pragma: no cover
    return C


def verify_d_squared(C: CubeComplex) -> bool:
    """Every square face anticommutes on every basis element."""
    for w in C.bases:
        free = [k for k in range(C.dim) if not w[k]]
        for a, b in itertools.combinations(free, 2):
            wa, wb = C.target((w, a)), C.target((w, b))
            routes = [(C.maps[(w, x)], C.maps[(m, y)], C.signs[(w, x)] * C.signs[(m, y)])
                      for x, m, y in ((a, wa, b), (b, wb, a))]
            for i in range(len(C.bases[w])):
                total: dict[int, int] = {}
                for first, second, sign in routes:
                    for j, c in first[i]:
                        for t, d in second[j]:
                            total[t] = total.get(t, 0) + sign * c * d
                if any(total.values()):
                    return False
    return True


def check_homogeneous(C: CubeComplex) -> bool:
    """Every nonzero entry raises h by one and keeps q and a."""
    for e, rows in C.maps.items():
        src, tgt = C.degrees[e[0]], C.degrees[C.target(e)]
        for i, row in enumerate(rows):
            for j, c in row:
                if c and (tgt[j].h != src[i].h + 1 or tgt[j][1:] != src[i][1:]):
                    return False
    return True


def graded_euler(C: CubeComplex) -> dict[tuple[int, int], int]:
    table: dict[tuple[int, int], int] = {}
    for _, _, d in C.generators():
        key = (d.q, d.a)
        table[key] = table.get(key, 0) + (-1 if d.h % 2 else 1)
    return {k: v for k, v in sorted(table.items()) if v}


def differential(C: CubeComplex, w: Vertex, i: int) -> dict[tuple[Vertex, int], int]:
    """d of a single basis element, as {(vertex, index): coefficient}."""
    out: dict[tuple[Vertex, int], int] = {}
    for k in range(C.dim):
        if w[k]:
            continue
        t = C.target((w, k))
        for j, c in C.signed((w, k), i):
            out[(t, j)] = out.get((t, j), 0) + c
    return {g: c for g, c in out.items() if c}
