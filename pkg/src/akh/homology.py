"""Integer homology of cube complexes, stratum by stratum, and induced maps.

Matrices act on column vectors: the differential from degree h to h+1 in a
stratum is stored as a |C^{h+1}| x |C^h| matrix.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .complex import CubeComplex, build_ckh, build_cone, verify_d_squared
from .diagram import AnnularDiagram
from .sl2 import Sl2Op, j_image

Matrix = Sequence[Sequence[int]]


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


@dataclass
class SnfResult:
    """U @ M @ V = D with D diagonal in its leading block.

    ``divisors`` are the nonzero diagonal entries, positive and forming a
    divisibility chain.  U is stored by rows and V by columns, each as a
    list of sparse dicts, and only when transforms were requested.
    """
    shape: tuple[int, int]
    divisors: tuple[int, ...]
    U: list[dict[int, int]] | None = field(default=None, repr=False)
    V: list[dict[int, int]] | None = field(default=None, repr=False)

    @property
    def rank(self) -> int:
        return len(self.divisors)

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in self.divisors if d > 1)

    def kernel_basis(self) -> list[dict[int, int]]:
        return self.V[self.rank:]

    def apply_U(self, vec: dict[int, int]) -> list[int]:
        return [sum(c * vec.get(j, 0) for j, c in row.items()) for row in self.U]


class _Sparse:
    """Row- and column-indexed sparse integer matrix with optional transforms."""

    def __init__(self, M: Matrix, ncols: int, transforms: bool):
        self.rows = [{j: v for j, v in enumerate(r) if v} for r in M]
        self.cols: list[set[int]] = [set() for _ in range(ncols)]
        for i, r in enumerate(self.rows):
            for j in r:
                self.cols[j].add(i)
        self.U = [{i: 1} for i in range(len(M))] if transforms else None
        self.V = [{j: 1} for j in range(ncols)] if transforms else None

    @staticmethod
    def _axpy(dst: dict, src: dict, k: int):
        if not k:
            return
        for j, v in src.items():
            w = dst.get(j, 0) + k * v
            if w:
                dst[j] = w
            else:
                del dst[j]

    def add_row(self, dst: int, src: int, k: int):
        """row dst += k * row src"""
        if not k:
            return
        row = self.rows[dst]
        for j, v in self.rows[src].items():
            w = row.get(j, 0) + k * v
            if w:
                if j not in row:
                    self.cols[j].add(dst)
                row[j] = w
            else:
                del row[j]
                self.cols[j].discard(dst)
        if self.U is not None:
            self._axpy(self.U[dst], self.U[src], k)

    def add_col(self, dst: int, src: int, k: int):
        """col dst += k * col src"""
        if not k:
            return
        for i in list(self.cols[src]):
            row = self.rows[i]
            w = row.get(dst, 0) + k * row[src]
            if w:
                if dst not in row:
                    self.cols[dst].add(i)
                row[dst] = w
            else:
                row.pop(dst, None)
                self.cols[dst].discard(i)
        if self.V is not None:
            self._axpy(self.V[dst], self.V[src], k)

    def negate_row(self, i: int):
        for j in self.rows[i]:
            self.rows[i][j] = -self.rows[i][j]
        if self.U is not None:
            self.U[i] = {j: -v for j, v in self.U[i].items()}

    def mix_cols(self, a: int, b: int, s: int, t: int, x: int, y: int):
        """(col a, col b) <- (s a + t b, x a + y b), a unimodular 2x2 change."""
        touched = self.cols[a] | self.cols[b]
        for i in touched:
            row = self.rows[i]
            va, vb = row.get(a, 0), row.get(b, 0)
            for j, val in ((a, s * va + t * vb), (b, x * va + y * vb)):
                if val:
                    row[j] = val
                    self.cols[j].add(i)
                else:
                    row.pop(j, None)
                    self.cols[j].discard(i)
        if self.V is not None:
            ca, cb = self.V[a], self.V[b]
            na, nb = {}, {}
            self._axpy(na, ca, s)
            self._axpy(na, cb, t)
            self._axpy(nb, ca, x)
            self._axpy(nb, cb, y)
            self.V[a], self.V[b] = na, nb


def smith_normal_form(M: Matrix, transforms: bool = False, ncols: int | None = None) -> SnfResult:
    """Exact Smith normal form by sparse elimination.

    A first pass walks the rows in order and pivots on any unit entry,
    preferring the sparsest column.  What is left is reduced by always
    taking the entry of smallest absolute value, breaking ties by
    Markowitz fill-in cost and then by position.  Both passes are
    deterministic.
    """
    m = len(M)
    n = ncols if ncols is not None else (len(M[0]) if m else 0)
    A = _Sparse(M, n, transforms)
    live_rows = set(range(m))
    pivots: list[tuple[int, int]] = []

    def eliminate(r: int, c: int) -> None:
        while True:
            p = A.rows[r][c]
            for r2 in sorted(A.cols[c] - {r}):
                A.add_row(r2, r, -(A.rows[r2][c] // p))
            for c2 in sorted(set(A.rows[r]) - {c}):
                A.add_col(c2, c, -(A.rows[r][c2] // p))
            rest = [(abs(A.rows[i][c]), i, c) for i in A.cols[c] if i != r]
            rest += [(abs(v), r, j) for j, v in A.rows[r].items() if j != c]
            if not rest:
                break
            _, r, c = min(rest)
        pivots.append((r, c))
        live_rows.discard(r)

    for i in range(m):
        units = [j for j, v in A.rows[i].items() if v == 1 or v == -1]
        if units:
            eliminate(i, min(units, key=lambda j: (len(A.cols[j]), j)))
    while True:
        best = None
        for i in live_rows:
            row = A.rows[i]
            if not row:
                continue
            rl = len(row) - 1
            for j, v in row.items():
                key = (abs(v), rl * (len(A.cols[j]) - 1), i, j)
                if best is None or key < best:
                    best = key
        if best is None:
            break
        eliminate(best[2], best[3])
    for r, c in pivots:
        if A.rows[r][c] < 0:
            A.negate_row(r)
    # make the diagonal a divisibility chain
    k = len(pivots)
    for i in range(k):
        ri, ci = pivots[i]
        for j in range(i + 1, k):
            rj, cj = pivots[j]
            a, b = A.rows[ri][ci], A.rows[rj][cj]
            if b % a == 0:
                continue
            g, s, t = _xgcd(a, b)
            A.add_row(ri, rj, 1)
            A.mix_cols(ci, cj, s, t, -b // g, a // g)
            A.add_row(rj, ri, -(t * b // g))
            if A.rows[rj][cj] < 0:  # pragma: no cover
                A.negate_row(rj)
    divisors = tuple(A.rows[r][c] for r, c in pivots)
    U = V = None
    if transforms:
        prow = [r for r, _ in pivots]
        pcol = [c for _, c in pivots]
        rest_r = sorted(set(range(m)) - set(prow))
        rest_c = sorted(set(range(n)) - set(pcol))
        U = [A.U[i] for i in prow + rest_r]
        V = [A.V[j] for j in pcol + rest_c]
    return SnfResult((m, n), divisors, U, V)


# -- homology -----------------------------------------------------------------

Key = tuple[int, int, int]


@dataclass
class HomologyTable:
    groups: dict[Key, tuple[int, tuple[int, ...]]]

    def rank(self, h: int, q: int, a: int) -> int:
        return self.groups.get((h, q, a), (0, ()))[0]

    def total_rank(self) -> int:
        return sum(r for r, _ in self.groups.values())

    def ranks_by_h(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for (h, _, _), (r, _) in self.groups.items():
            out[h] = out.get(h, 0) + r
        return out

    def rows(self) -> list[dict]:
        return [{"h": h, "q": q, "a": a, "rank": r, "torsion": list(t)}
                for (h, q, a), (r, t) in sorted(self.groups.items())]

    def __eq__(self, other):
        return isinstance(other, HomologyTable) and self.groups == other.groups


@dataclass
class Stratum:
    """Chain groups and differentials of one (q, a) stratum."""
    q: int
    a: int
    gens: dict[int, list[tuple[tuple[int, ...], int]]]     # h -> [(vertex, index)]
    index: dict[tuple[tuple[int, ...], int], tuple[int, int]]  # gen -> (h, position)
    diff: dict[int, list[list[int]]]                       # h -> matrix C^h -> C^{h+1}

    def matrix(self, h: int) -> list[list[int]]:
        if h in self.diff:
            return self.diff[h]
        return [[0] * len(self.gens.get(h, ())) for _ in self.gens.get(h + 1, ())]


def strata(C: CubeComplex) -> dict[tuple[int, int], Stratum]:
    groups: dict[tuple[int, int], dict[int, list]] = {}
    for w, i, d in C.generators():
        groups.setdefault((d.q, d.a), {}).setdefault(d.h, []).append((w, i))
    out = {}
    for (q, a), by_h in sorted(groups.items()):
        index = {g: (h, pos) for h, gs in by_h.items() for pos, g in enumerate(gs)}
        diff = {}
        for h, gs in by_h.items():
            tgt = by_h.get(h + 1, [])
            if not tgt:
                continue
            M = [[0] * len(gs) for _ in tgt]
            for col, (w, i) in enumerate(gs):
                for k in range(C.dim):
                    if w[k]:
                        continue
                    t = C.target((w, k))
                    for j, c in C.signed((w, k), i):
                        h2, row = index[(t, j)]
                        M[row][col] += c
            diff[h] = M
        out[(q, a)] = Stratum(q, a, dict(by_h), index, diff)
    return out


def homology(C: CubeComplex, check: bool = True) -> HomologyTable:
    if check and not verify_d_squared(C):
        raise ValueError("d^2 != 0; refusing to compute homology")
    groups = {}
    for (q, a), S in strata(C).items():
        snf = {h: smith_normal_form(S.matrix(h), ncols=len(S.gens.get(h, ()))) for h in S.gens}
        for h, gs in S.gens.items():
            before = snf.get(h - 1)
            r_in = before.rank if before else 0
            free = len(gs) - snf[h].rank - r_in
            tors = before.torsion if before else ()
            if free or tors:
                groups[(h, q, a)] = (free, tors)
    return HomologyTable(dict(sorted(groups.items())))


# -- homology bases and induced maps -----------------------------------------------

class _FreePart:
    """Coordinates on H^h / torsion for one stratum and degree h."""

    def __init__(self, S: Stratum, h: int):
        n = len(S.gens.get(h, ()))
        self.n = n
        A = smith_normal_form(S.matrix(h - 1), transforms=True, ncols=len(S.gens.get(h - 1, ())))
        B = smith_normal_form(S.matrix(h), transforms=True, ncols=n)
        self.A = A
        K = B.kernel_basis()
        r = A.rank
        P = [[0] * len(K) for _ in range(n - r)]
        for col, vec in enumerate(K):
            y = A.apply_U(vec)
            for row in range(n - r):
                P[row][col] = y[r + row]
        SP = smith_normal_form(P, transforms=True, ncols=len(K))
        if any(d != 1 for d in SP.divisors):
            raise AssertionError("cycle lattice is not saturated")  # pragma: no cover
        self.r, self.P, self.K = r, SP, K
        self.f = SP.rank
        self.lifts = []
        for k in range(self.f):
            vec: dict[int, int] = {}
            for idx, c in SP.V[k].items():
                _Sparse._axpy(vec, K[idx], c)
            self.lifts.append(vec)

    def coords(self, vec: dict[int, int]) -> list[int]:
        y = self.A.apply_U(vec)[self.r:] if self.n else []
        z = [sum(c * y[j] for j, c in row.items()) for row in self.P.U] if y else []
        if any(z[self.f:]):
            raise AssertionError("vector is not a cycle")
        return z[:self.f]


def _chain_j(C: CubeComplex, op: Sl2Op, w, i) -> dict[tuple[tuple[int, ...], int], int]:
    res = C.diagram.resolution(w)
    index = {b: k for k, b in enumerate(C.bases[w])}
    return {(w, index[y]): c for y, c in j_image(op, C.bases[w][i], res).items()}


def induced_map(D: AnnularDiagram, op: Sl2Op | str, C: CubeComplex | None = None) -> dict[Key, list[list[int]]]:
    """Matrix of J on free homology, keyed by the source tri-degree.

    Columns index a basis of H^h(q, a)/torsion, rows a basis of the target
    H^h(q + s, a + s)/torsion with s the (q, a) shift of J.
    """
    op = Sl2Op(op)
    if C is None:
        C, _, S, parts = _annular(D)
    else:
        S, parts = strata(C), {}
    s = op.qa_shift

    def part(h, q, a):
        if (h, q, a) not in parts:
            parts[(h, q, a)] = _FreePart(S[(q, a)], h)
        return parts[(h, q, a)]

    out = {}
    for (q, a), st in S.items():
        tgt = S.get((q + s, a + s))
        for h, gens in st.gens.items():
            src = part(h, q, a)
            if not src.f:
                continue
            if tgt is None or h not in tgt.gens:
                out[(h, q, a)] = []
                continue
            dst = part(h, q + s, a + s)

            def image(vec):
                res: dict[int, int] = {}
                for idx, c in vec.items():
                    w, i = gens[idx]
                    for g, d in _chain_j(C, op, w, i).items():
                        pos = tgt.index[g][1]
                        res[pos] = res.get(pos, 0) + c * d
                return res

            # lifts differing by a boundary must agree
            for col in range(len(st.gens.get(h - 1, ()))):
                bvec = {row: v for row, line in enumerate(st.matrix(h - 1)) if (v := line[col])}
                if any(dst.coords(image(bvec))):
                    raise AssertionError("J does not preserve boundaries")
            cols = [dst.coords(image(vec)) for vec in src.lifts]
            out[(h, q, a)] = [[cols[k][r] for k in range(src.f)] for r in range(dst.f)]
    return out


def _annular(D: AnnularDiagram) -> tuple[CubeComplex, HomologyTable, dict, dict]:
    """CKh_A of D with its homology, strata and free-part bases, built once per diagram."""
    key = ("annular",)
    if key not in D._cache:
        C = build_ckh(D)
        D._cache[key] = (C, homology(C), strata(C), {})
    return D._cache[key]


def free_dims(D: AnnularDiagram, C: CubeComplex | None = None) -> dict[Key, int]:
    T = homology(C) if C is not None else _annular(D)[1]
    return {k: r for k, (r, _) in T.groups.items()}


def verify_les(D: AnnularDiagram, op: Sl2Op | str):
    """Rank identity of the long exact sequence of the cone, over Q."""
    from .report import Report

    op = Sl2Op(op)
    s = op.qa_shift
    dims = free_dims(D)
    maps = induced_map(D, op)
    cone = homology(build_cone(D, op), check=False)   # build_cone checks d^2
    rep = Report(f"les-{op.value}")

    def rk(key):
        M = maps.get(key)
        return smith_normal_form(M).rank if M else 0

    keys = {(h, q, a) for (h, q, a) in dims} | {(h + 1, q - s, a - s) for (h, q, a) in dims}
    keys |= {(h, q, a) for (h, q, a) in cone.groups}
    for h, q, a in sorted(keys):
        # cone stratum (q, a): copy 0 at (q, a), copy 1 from (q + s, a + s) shifted by one
        coker = dims.get((h - 1, q + s, a + s), 0) - rk((h - 1, q, a))
        ker = dims.get((h, q, a), 0) - rk((h, q, a))
        ok = cone.rank(h, q, a) == coker + ker
        rep.check(ok, "dim H(Cone) = coker + ker", h=h, q=q, a=a,
                              cone=cone.rank(h, q, a), coker=coker, ker=ker)
    by_h = cone.ranks_by_h()
    rep.stats["cone_ranks"] = dict(sorted(by_h.items()))
    return rep
