"""Framed moduli data for the cone of J: points, intervals and their closure.

Everything lives on the (n+1)-cube of Cone(J), whose last coordinate is the
J direction.  A generator at a cube vertex is an index into the label basis
of that vertex.  Moduli points over a subcube that contains the J direction
carry an exact position j/(s+1) in (0, 1) and a framing sign, where j is the
essential circle J acted on and s is the number of essential circles at the
vertex where J was applied.
"""
from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

from .algebra import Generator, basis, saddle_plan
from .diagram import AnnularDiagram, arc_diagram, components, interleaved, _edge_positions
from .report import Report
from .sl2 import Sl2Op, j_terms

Vertex = tuple[int, ...]


class FramedPoint(NamedTuple):
    """A moduli point.  ``witness`` lists the intermediate generators (as
    label tuples) strictly between x and y; ``j`` is the acted-on essential
    circle when the path uses the J edge."""
    witness: tuple[tuple[int, ...], ...]
    j: int | None
    position: Fraction | None
    framing: int | None


@dataclass(frozen=True)
class PathModuli:
    start: Vertex
    path: tuple[int, ...]
    x: tuple[int, ...]
    y: tuple[int, ...]
    points: tuple[FramedPoint, ...]
    j_vertex: Vertex | None     # e0, where the J edge starts

    def __len__(self):
        return len(self.points)

    @property
    def positions(self) -> list[Fraction]:
        return sorted(p.position for p in self.points)


@dataclass(frozen=True)
class Chord:
    kind: str                         # "through" or "turnback"
    ends: tuple[tuple[int, int], tuple[int, int]]   # (side, point index)


@dataclass(frozen=True)
class IntervalMatching:
    """A 1-dimensional moduli space over a square face.

    Side 0 is the composition through u + e_a and side 1 through u + e_b,
    where (a, b) are the face coordinates with a < b.
    """
    start: Vertex
    coords: tuple[int, int]
    x: tuple[int, ...]
    y: tuple[int, ...]
    sides: tuple[tuple[FramedPoint, ...], tuple[FramedPoint, ...]]
    chords: tuple[Chord, ...]
    ladybug: bool = False

    @property
    def turnbacks(self) -> list[Chord]:
        return [c for c in self.chords if c.kind == "turnback"]

    @property
    def throughs(self) -> list[Chord]:
        return [c for c in self.chords if c.kind == "through"]


@dataclass(frozen=True)
class CubeFaceChain:
    """A face of the permutohedron over u <= v: a strictly increasing chain."""
    vertices: tuple[Vertex, ...]

    def __post_init__(self):
        for a, b in zip(self.vertices, self.vertices[1:]):
            if not (all(x <= y for x, y in zip(a, b)) and a != b):
                raise ValueError("chain must increase strictly")

    @property
    def codim(self) -> int:
        return len(self.vertices) - 2


def chains(u: Vertex, v: Vertex, codim: int) -> Iterable[CubeFaceChain]:
    """All chains u < w_1 < ... < w_codim < v."""
    free = [i for i in range(len(u)) if u[i] != v[i]]

    def rec(cur, left, need):
        if need == 0:
            yield ()
            return
        for r in range(1, len(left) - need + 1):
            for chosen in itertools.combinations(left, r):
                w = list(cur)
                for i in chosen:
                    w[i] = 1
                rest = [i for i in left if i not in chosen]
                for tail in rec(tuple(w), rest, need - 1):
                    yield (tuple(w),) + tail

    for mid in rec(u, free, codim):
        yield CubeFaceChain((u,) + mid + (v,))


class MatchingError(RuntimeError):
    pass


class FlowData:
    """Cached edge moduli of Cone(J) for one diagram."""

    def __init__(self, D: AnnularDiagram, op: Sl2Op | str):
        self.D = D
        self.op = Sl2Op(op)
        self.n = D.n
        self.J = D.n
        self._bases: dict = {}
        self._index: dict = {}
        self._saddle: dict = {}
        self._jpts: dict = {}
        self._faces: dict = {}
        self._steps: dict = {}

    # -- bases -----------------------------------------------------------
    def basis(self, w: Sequence[int]) -> list[tuple[int, ...]]:
        u = tuple(w[:self.n])
        if u not in self._bases:
            self._bases[u] = basis(self.D.resolution(u))
            self._index[u] = {b: i for i, b in enumerate(self._bases[u])}
        return self._bases[u]

    def index(self, w: Sequence[int], bits: Sequence[int]) -> int:
        self.basis(w)
        return self._index[tuple(w[:self.n])][tuple(bits)]

    def n_essential(self, w: Sequence[int]) -> int:
        return self.D.resolution(tuple(w[:self.n])).n_essential

    # -- edges -----------------------------------------------------------
    def saddle_row(self, u: Vertex, k: int, xi: int) -> list[int]:
        key = (u, k)
        table = self._saddle.get(key)
        if table is None:
            plan = saddle_plan(self.D, u, k)
            v = list(u)
            v[k] = 1
            self.basis(v)
            idx = self._index[tuple(v)]
            table = [[idx[y] for y in plan.image(x)] for x in self.basis(u)]
            self._saddle[key] = table
        return table[xi]

    def j_row(self, u: Vertex, xi: int) -> list[tuple[int, int, int]]:
        """(target index, essential index j, framing) for the J edge at u."""
        table = self._jpts.get(u)
        if table is None:
            res = self.D.resolution(u)
            idx = self._index[u] if u in self._index else (self.basis(u), self._index[u])[1]
            table = [[(idx[y], j, c) for y, c, j in j_terms(self.op, x, res)] for x in self.basis(u)]
            self._jpts[u] = table
        return table[xi]

    def step(self, w: Vertex, k: int, xi: int) -> list[tuple[int, int | None, int | None]]:
        """(target, j, framing) for every point of the edge (w, k) out of xi."""
        key = (w[:self.n], k)
        table = self._steps.get(key)
        if table is None:
            u = key[0]
            if k == self.J:
                self.j_row(u, 0) if self.basis(u) else None
                table = self._jpts.get(u, [])
            else:
                self.saddle_row(u, k, 0) if self.basis(u) else None
                table = [[(y, None, None) for y in row] for row in self._saddle.get((u, k), [])]
            self._steps[key] = table
        return table[xi]

    # -- paths -----------------------------------------------------------
    def path_points(self, w: Vertex, order: Sequence[int], xi: int) -> dict[int, list[FramedPoint]]:
        """All points of every path moduli space from x along ``order``, by target."""
        states = [(xi, (), None, None, None)]
        cur = tuple(w)
        for k in order:
            new = []
            for z, wit, j, fr, jv in states:
                for y, jj, f in self.step(cur, k, z):
                    if jj is None:
                        new.append((y, wit + (y,), j, fr, jv))
                    else:
                        new.append((y, wit + (y,), jj, f, cur))
            cur = cur[:k] + (1,) + cur[k + 1:]
            states = new
            if not states:
                return {}
        out: dict[int, list[FramedPoint]] = {}
        for y, wit, j, fr, jv in states:
            pos = Fraction(j, self.n_essential(jv) + 1) if j is not None else None
            out.setdefault(y, []).append(FramedPoint(wit[:-1], j, pos, fr))
        return out

    def faces(self, w: Vertex, a: int, b: int, xi: int, convention: str = "right"):
        """Memoised face_matchings; the memo is dropped by clear_faces()."""
        key = (w, a, b, xi, convention)
        got = self._faces.get(key)
        if got is None:
            got = self._faces[key] = face_matchings(self, w, a, b, xi, convention)
        return got

    def clear_faces(self) -> None:
        self._faces.clear()

    def bits(self, w: Vertex, i: int) -> tuple[int, ...]:
        return self.basis(w)[i]


def flow_data(D: AnnularDiagram, op: Sl2Op | str) -> FlowData:
    key = ("flow", Sl2Op(op))
    if key not in D._cache:
        D._cache[key] = FlowData(D, op)
    return D._cache[key]


def _as_index(F: FlowData, w: Vertex, x) -> int:
    if isinstance(x, Generator):
        x = x.bits
    return F.index(w, x)


def _points_with_bits(F: FlowData, w: Vertex, order, pts: list[FramedPoint]) -> tuple[FramedPoint, ...]:
    out = []
    for p in pts:
        cur, wit = tuple(w), []
        for k, z in zip(order, p.witness):
            cur = cur[:k] + (1,) + cur[k + 1:]
            wit.append(F.bits(cur, z))
        out.append(p._replace(witness=tuple(wit)))
    return tuple(out)


# -- 0-dimensional moduli ---------------------------------------------------------

def edge_moduli(D: AnnularDiagram, edge: tuple[Vertex, int], op, x, y) -> list[FramedPoint]:
    w, k = tuple(edge[0]), edge[1]
    F = flow_data(D, op)
    if len(w) == F.n:
        w = w + (0,)
    v = w[:k] + (1,) + w[k + 1:]
    xi, yi = _as_index(F, w, x), _as_index(F, v, y)
    return list(F.path_points(w, (k,), xi).get(yi, []))


def path_moduli(D: AnnularDiagram, path: tuple[Vertex, Sequence[int]], op, x, y) -> PathModuli:
    w, order = tuple(path[0]), tuple(path[1])
    F = flow_data(D, op)
    v = list(w)
    for k in order:
        if v[k]:
            raise ValueError("path leaves the cube")
        v[k] = 1
    xi, yi = _as_index(F, w, x), _as_index(F, v, y)
    pts = F.path_points(w, order, xi).get(yi, [])
    jv = None
    if F.J in order:
        cur = list(w)
        for k in order[:order.index(F.J)]:
            cur[k] = 1
        jv = tuple(cur)
    return PathModuli(w, order, F.bits(w, xi), F.bits(tuple(v), yi),
                      _points_with_bits(F, w, order, pts), jv)


def path_name(order: Sequence[int], J: int, op: Sl2Op) -> str:
    """Composition-style name: the last edge is written first, e.g. 1E2."""
    labels = [op.value if k == J else str(k + 1) for k in reversed(order)]
    sep = "" if J <= 9 else "."
    return sep.join(labels)


# -- 1-dimensional moduli ---------------------------------------------------------

def right_pair_nodes(A, a: int, b: int, convention: str = "right") -> tuple[int, int]:
    """Strand nodes on the two boundary arcs of the ladybug circle singled out
    by the matching convention.

    Standing on an arc and facing one of its endpoints, the circle arc that
    leaves that endpoint on our right belongs to the right pair (in the
    rectangle picture, slices increasing rightward and positions upward).
    The left pair is the complementary one.
    """
    res = A.resolution
    arc_a, arc_b = A.arc(a), A.arc(b)
    circle = res.circles[arc_a.circles[0]]
    where = _edge_positions(res, circle)
    cuts = sorted(where[p] for p in arc_a.ports + arc_b.ports)
    node_pos = {port >> 1: idx for idx, port in enumerate(circle.ports)}

    def segment(node):
        # ports[idx] leaves node idx along edge idx; node idx sits between
        # edges idx-1 and idx
        idx = node_pos[node]
        return sum(1 for c in cuts if c < idx) % 4

    segs_a = {segment(nd) for nd in arc_a.right_nodes}
    segs_b = {segment(nd) for nd in arc_b.right_nodes}
    if segs_a != segs_b or len(segs_a) != 2:
        raise MatchingError("right pair is not well defined for this ladybug")
    if convention == "right":
        return arc_a.right_nodes
    other = sorted(set(range(4)) - segs_a)
    picks = {}
    for idx, port in enumerate(circle.ports):
        s = segment(port >> 1)
        if s in other and s not in picks:
            picks[s] = port >> 1
    return picks[other[0]], picks[other[1]]


def ladybug_matching(F: FlowData, w: Vertex, a: int, b: int, side0, side1,
                     convention: str = "right") -> list[tuple[int, int]]:
    """Match the two points on each side of a ladybug face by following the
    chosen pair of boundary arcs through both surgeries."""
    D = F.D
    u = tuple(w[:F.n])
    top = list(u)
    top[a] = top[b] = 1
    A = arc_diagram(D, u, (u, tuple(top)))
    if not interleaved(A, a, b):
        raise MatchingError("two-point face without a ladybug configuration")
    n1, n2 = right_pair_nodes(A, a, b, convention)
    w1 = u[:a] + (1,) + u[a + 1:]
    w2 = u[:b] + (1,) + u[b + 1:]
    r1, r2 = D.resolution(w1), D.resolution(w2)
    phi = {}
    keys2 = {c.key: i for i, c in enumerate(r2.circles)}
    for i, c in enumerate(r1.circles):
        if c.key in keys2:
            phi[i] = keys2[c.key]
    for nd in (n1, n2):
        phi[r1.node_circle[nd]] = r2.node_circle[nd]
    pairs = []
    for i0, p0 in enumerate(side0):
        z = F.bits(w1 + w[F.n:], p0.witness[0])
        for i1, p1 in enumerate(side1):
            z2 = F.bits(w2 + w[F.n:], p1.witness[0])
            if all(z2[phi[c]] == z[c] for c in range(len(z))):
                pairs.append((i0, i1))
    if sorted(i for i, _ in pairs) != list(range(len(side0))) or \
            sorted(i for _, i in pairs) != list(range(len(side1))):
        raise MatchingError("ladybug matching is not a bijection")
    return pairs


def _j_face_matching(F: FlowData, w: Vertex, k: int, side0, side1):
    """Chords for a face spanned by the saddle k and J.

    Side 0 applies the saddle first (J acts on the target resolution),
    side 1 applies J first (J acts on the source resolution).
    """
    u = tuple(w[:F.n])
    plan = saddle_plan(F.D, u, k)
    src, tgt = plan.source, plan.target
    ts = [c for c in plan.touched_source if src.circles[c].essential]
    tt = [c for c in plan.touched_target if tgt.circles[c].essential]
    # essential index on side 1 (source) -> essential index on side 0 (target)
    corr = {}
    for c, s in enumerate(plan.carried):
        if s >= 0 and tgt.circles[c].essential:
            corr[s - src.n_trivial + 1] = c - tgt.n_trivial + 1
    if len(ts) == 1 and len(tt) == 1:
        corr[ts[0] - src.n_trivial + 1] = tt[0] - tgt.n_trivial + 1
    lost = {c - src.n_trivial + 1 for c in ts} if len(ts) == 2 else set()
    born = {c - tgt.n_trivial + 1 for c in tt} if len(tt) == 2 else set()
    chords = []
    by_j0 = {}
    for i, p in enumerate(side0):
        if p.j in by_j0:
            raise MatchingError("two points for one circle on the same side")
        by_j0[p.j] = i
    used0 = set()
    turn1 = []
    for i, p in enumerate(side1):
        if p.j in lost:
            turn1.append(i)
            continue
        j0 = corr.get(p.j)
        if j0 is None or j0 not in by_j0 or by_j0[j0] in used0:
            raise MatchingError(f"unmatched boundary point on circle {p.j}")
        used0.add(by_j0[j0])
        chords.append(Chord("through", ((1, i), (0, by_j0[j0]))))
    turn0 = [i for i in range(len(side0)) if i not in used0]
    for side, idxs, allowed in ((0, turn0, born), (1, turn1, lost)):
        pts = side0 if side == 0 else side1
        if not idxs:
            continue
        if len(idxs) != 2 or {pts[i].j for i in idxs} != allowed:
            raise MatchingError("same-side points do not form a created/destroyed pair")
        chords.append(Chord("turnback", ((side, idxs[0]), (side, idxs[1]))))
    return chords


def _match(F: FlowData, w: Vertex, a: int, b: int, side0, side1, convention="right"):
    if F.J in (a, b):
        k = a if b == F.J else b
        return _j_face_matching(F, w, k, side0, side1), False
    if len(side0) != len(side1) or len(side0) > 2:
        raise MatchingError(f"non-J face with {len(side0)} and {len(side1)} points")
    if len(side0) == 2:
        pairs = ladybug_matching(F, w, a, b, side0, side1, convention)
        return [Chord("through", ((0, i), (1, j))) for i, j in pairs], True
    return [Chord("through", ((0, 0), (1, 0)))] if side0 else [], False


def face_matchings(F: FlowData, w: Vertex, a: int, b: int, xi: int,
                   convention: str = "right") -> dict[int, tuple[list, list, list, bool]]:
    """Per target y: (side0 points, side1 points, chords, ladybug flag)."""
    s0 = F.path_points(w, (a, b), xi)
    s1 = F.path_points(w, (b, a), xi)
    out = {}
    for y in sorted(set(s0) | set(s1)):
        p0, p1 = s0.get(y, []), s1.get(y, [])
        chords, lady = _match(F, w, a, b, p0, p1, convention)
        out[y] = (p0, p1, chords, lady)
    return out


def square_moduli(D: AnnularDiagram, face: tuple[Vertex, tuple[int, int]], op, x, y,
                  convention: str = "right") -> IntervalMatching:
    w, (a, b) = tuple(face[0]), tuple(sorted(face[1]))
    F = flow_data(D, op)
    if len(w) == F.n:
        w = w + (0,)
    v = list(w)
    v[a] = v[b] = 1
    xi, yi = _as_index(F, w, x), _as_index(F, tuple(v), y)
    got = face_matchings(F, w, a, b, xi, convention).get(yi, ([], [], [], False))
    p0, p1, chords, lady = got
    return IntervalMatching(w, (a, b), F.bits(w, xi), F.bits(tuple(v), yi),
                            (_points_with_bits(F, w, (a, b), p0), _points_with_bits(F, w, (b, a), p1)),
                            tuple(chords), lady)


def chord_positions(chord: Chord, sides) -> tuple:
    (s0, i0), (s1, i1) = chord.ends
    return (s0, sides[s0][i0].position), (s1, sides[s1][i1].position)


def planar(chords: Sequence[Chord], sides) -> bool:
    """Chords drawn in a strip [0,1] x (0,1), side 0 on the left.

    Coincident endpoints are allowed only for coincident chords, which is
    what a thick (covering) embedding looks like.
    """
    segs = []
    for c in chords:
        (sa, pa), (sb, pb) = chord_positions(c, sides)
        if pa is None:
            return True
        if c.kind == "through":
            left, right = (pa, pb) if sa == 0 else (pb, pa)
            segs.append(("t", left, right))
        else:
            segs.append((sa, min(pa, pb), max(pa, pb)))
    for s, t in itertools.combinations(segs, 2):
        if s == t:
            continue
        if s[0] == "t" and t[0] == "t":
            d0, d1 = s[1] - t[1], s[2] - t[2]
            if d0 * d1 < 0 or (d0 == 0) != (d1 == 0):
                return False
        elif s[0] == "t" or t[0] == "t":
            th, tb = (s, t) if s[0] == "t" else (t, s)
            p = th[1] if tb[0] == 0 else th[2]
            if tb[1] <= p <= tb[2]:
                return False
        elif s[0] == t[0]:
            a1, b1, a2, b2 = s[1], s[2], t[1], t[2]
            if len({a1, b1, a2, b2}) < 4:
                return False
            if (a1 < a2 < b1) != (a1 < b2 < b1):
                return False
    return True


def _check_matching(rep: Report, sides, chords, where) -> None:
    seen = sorted(e for c in chords for e in c.ends)
    every = sorted((s, i) for s in (0, 1) for i in range(len(sides[s])))
    rep.check(seen == every, "boundary-exact matching", **where)
    for c in chords:
        (s0, i0), (s1, i1) = c.ends
        f0, f1 = sides[s0][i0].framing, sides[s1][i1].framing
        if f0 is None:
            continue
        if c.kind == "through":
            rep.check(s0 != s1 and f0 == f1, "through strands keep framing", **where)
        else:
            rep.check(s0 == s1 and f0 == -f1, "turnbacks reverse framing", **where)
    rep.check(planar(chords, sides), "planar chords", **where)


def _faces(dim: int, J: int, d: int, plain: bool):
    """Base vertices and coordinate sets of the d-faces either containing the
    J direction or not.  Plain faces of the two copies are identical, so
    only copy 0 is visited for them."""
    for coords in itertools.combinations(range(dim), d):
        if (J in coords) == plain:
            continue
        others = [i for i in range(dim) if i not in coords]
        for vals in itertools.product((0, 1), repeat=len(others)):
            w = [0] * dim
            for i, v in zip(others, vals):
                w[i] = v
            if plain and w[J] == 1:
                continue
            yield tuple(w), coords


def _plain_part(D: AnnularDiagram, suite: str, convention: str, runner) -> Report:
    """Plain faces only see the saddle maps, so one run serves E, F and H."""
    key = ("plain", suite, convention)
    if key not in D._cache:
        F = flow_data(D, Sl2Op.E)
        part = Report(suite)
        try:
            runner(F, part, convention, True)
        finally:
            F.clear_faces()
        D._cache[key] = part
    return D._cache[key]


def verify_squares(D: AnnularDiagram, op, convention: str = "right") -> Report:
    F = flow_data(D, op)
    rep = Report(f"squares-{F.op.value}")
    rep.merge(_plain_part(D, "squares", convention, _squares))
    if rep.passed:
        _squares(F, rep, convention, False)
    return rep


def _squares(F: FlowData, rep: Report, convention: str, plain: bool) -> None:
    for w, (a, b) in _faces(F.n + 1, F.J, 2, plain):
        for xi in range(len(F.basis(w))):
            where = {"vertex": w, "face": (a + 1, b + 1), "x": F.bits(w, xi)}
            try:
                got = F.faces(w, a, b, xi, convention)
            except MatchingError as err:
                rep.fail(str(err), **where)
                return
            top = w[:a] + (1,) + w[a + 1:b] + (1,) + w[b + 1:]
            for y, (p0, p1, chords, lady) in got.items():
                where["y"] = F.bits(top, y)
                sides = (p0, p1)
                _check_matching(rep, sides, chords, where)
                if plain:
                    rep.check(len(p0) == len(p1) <= 2, "plain faces have N in {0,1,2}", **where)
                    rep.count(f"plain_N{len(p0)}")
                else:
                    s0 = sum(p.framing for p in p0)
                    s1 = sum(p.framing for p in p1)
                    rep.check(s0 == s1, "signed counts agree", **where)
                    rep.count("J_faces")
                    rep.count("turnbacks", sum(1 for c in chords if c.kind == "turnback"))
                    rep.count("throughs", sum(1 for c in chords if c.kind == "through"))
                if lady:
                    rep.count("ladybugs")
                if not rep.passed:
                    return


# -- closure over 3-dimensional subcubes ----------------------------------------------

def closure_graph(F: FlowData, w: Vertex, coords: tuple[int, int, int], xi: int,
                  convention: str = "right") -> dict[int, tuple[dict, list]]:
    """For each target y: (corner points keyed by (order, witness, j), chords).

    A chord joins two corner keys and records the endpoint data its piece
    assigns to each end.
    """
    corners: dict[int, dict] = {}
    for order in itertools.permutations(coords):
        for y, pts in F.path_points(w, order, xi).items():
            for p in pts:
                corners.setdefault(y, {})[(order, p.witness, p.j)] = p
    if not corners:
        # every chord endpoint below is a point of some 3-path, so no chords either
        return {}
    edges: dict[int, list] = {y: [] for y in corners}
    for pick in _hexagon_edges():
        first = tuple(coords[i] for i in pick)
        last = tuple(c for c in coords if c not in first)
        mid = list(w)
        for c in first:
            mid[c] = 1
        mid = tuple(mid)
        if len(first) == 1:
            p = first[0]
            q, r = last
            for z1, jp, fp in F.step(w, p, xi):
                for y, (s0, s1, chords, _) in F.faces(mid, q, r, z1, convention).items():
                    sides = (s0, s1)
                    orders = ((p, q, r), (p, r, q))
                    for ch in chords:
                        ends = []
                        for side, i in ch.ends:
                            pt = sides[side][i]
                            j, pos, fr = (jp, Fraction(jp, F.n_essential(w) + 1), fp) if jp is not None else (pt.j, pt.position, pt.framing)
                            key = (orders[side], (z1,) + pt.witness, j)
                            ends.append((key, pos, fr))
                        edges.setdefault(y, []).append((ch.kind, ends))
        else:
            p, q = first
            r = last[0]
            for z2, (s0, s1, chords, _) in F.faces(w, p, q, xi, convention).items():
                sides = (s0, s1)
                orders = ((p, q, r), (q, p, r))
                for y, jr, fr_r in F.step(mid, r, z2):
                    for ch in chords:
                        ends = []
                        for side, i in ch.ends:
                            pt = sides[side][i]
                            j, pos, fr = (jr, Fraction(jr, F.n_essential(mid) + 1), fr_r) if jr is not None else (pt.j, pt.position, pt.framing)
                            key = (orders[side], pt.witness + (z2,), j)
                            ends.append((key, pos, fr))
                        edges.setdefault(y, []).append((ch.kind, ends))
    return {y: (corners.get(y, {}), edges.get(y, [])) for y in set(corners) | set(edges)}


@functools.lru_cache(maxsize=None)
def _hexagon_edges() -> tuple[tuple[int, ...], ...]:
    """Coordinates (as positions 0..2) used before the middle vertex of each
    codimension-one chain of the 3-cube."""
    out = []
    for chain in chains((0, 0, 0), (1, 1, 1), 1):
        out.append(tuple(i for i in range(3) if chain.vertices[1][i]))
    return tuple(out)


def _loops(corners: dict, chords: list) -> list[list]:
    adj: dict = {k: [] for k in corners}
    for idx, (_, ends) in enumerate(chords):
        for e in ends:
            adj.setdefault(e[0], []).append(idx)
    seen_chord = set()
    loops = []
    for start in sorted(adj, key=repr):
        for idx in adj[start]:
            if idx in seen_chord:
                continue
            loop, node, cur = [start], start, idx
            while cur not in seen_chord:
                seen_chord.add(cur)
                a, b = (e[0] for e in chords[cur][1])
                node = b if a == node else a
                loop.append(node)
                nxt = [i for i in adj[node] if i not in seen_chord]
                if not nxt:
                    break
                cur = nxt[0]
            loops.append(loop[:-1])
    return loops


def verify_closure_3d(D: AnnularDiagram, op, convention: str = "right") -> Report:
    F = flow_data(D, op)
    rep = Report(f"closure-{F.op.value}")
    rep.merge(_plain_part(D, "closure", convention, _closure))
    if rep.passed:
        try:
            _closure(F, rep, convention, False)
        finally:
            F.clear_faces()
    return rep


def _closure(F: FlowData, rep: Report, convention: str, plain: bool) -> None:
    with_j = not plain
    for w, coords in _faces(F.n + 1, F.J, 3, plain):
        for xi in range(len(F.basis(w))):
            try:
                graph = closure_graph(F, w, coords, xi, convention)
            except MatchingError as err:
                rep.fail(str(err), vertex=w, coords=coords, x=F.bits(w, xi))
                return
            for y, (corners, chords) in sorted(graph.items()):
                top = tuple(1 if i in coords else c for i, c in enumerate(w))
                where = {"vertex": w, "coords": tuple(c + 1 for c in coords), "x": F.bits(w, xi),
                         "y": F.bits(top, y)}
                degree = {k: 0 for k in corners}
                ok = True
                for _, ends in chords:
                    for key, pos, fr in ends:
                        if key not in corners:
                            ok = rep.check(False, "chord ends at a missing corner point", corner=key, **where)
                            break
                        degree[key] += 1
                        pt = corners[key]
                        if with_j:
                            ok &= rep.check(pos == pt.position
                                            and fr == pt.framing,
                                            "corner position and framing agree", corner=key, **where)
                if not ok:
                    return
                rep.check(all(d == 2 for d in degree.values()), "every corner point is met twice",
                          degrees=sorted(set(degree.values())), **where)
                loops = _loops(corners, chords)
                rep.count("loops", len(loops))
                if not with_j:
                    rep.check(all(len(lp) == 6 and len({k[0] for k in lp}) == 6 for lp in loops),
                              "hexagon cover is trivial", **where)
                    rep.count("plain_hexagons")
                else:
                    rep.count("J_hexagons")
                if not rep.passed:
                    return
    return


# -- thinness ---------------------------------------------------------------

GRID_FOUR = [Fraction(1, 3), Fraction(1, 3), Fraction(2, 3), Fraction(2, 3)]


def _classify(op: Sl2Op, pts: list[FramedPoint], s: int) -> str:
    pos = sorted(p.position for p in pts)
    grid = [Fraction(i, s + 1) for i in range(1, s + 1)]
    if pos == grid:
        return "thin"
    if op is Sl2Op.H and pos == GRID_FOUR:
        signs = {}
        for p in pts:
            signs.setdefault(p.position, []).append(p.framing)
        if all(sorted(v) == [-1, 1] for v in signs.values()):
            return "four"
    return "bad"


def check_thin_props(D: AnnularDiagram, op, max_dim: int = 4,
                     scan_disconnected: bool | None = None) -> Report:
    """Exhaustive check of the thinness statements over connected subcubes.

    Subcubes that contain the J direction and have dimension <= max_dim are
    visited.  Disconnected subcubes are only observed (thickness recorded,
    nothing asserted), and by default only for small diagrams.
    """
    F = flow_data(D, op)
    op = F.op
    if scan_disconnected is None:
        scan_disconnected = F.n <= 5
    rep = Report(f"thinness-{op.value}")
    rep.stats.update({"thin": 0, "four": 0, "max_thickness_disconnected": 1})
    for m in range(1, min(max_dim, F.n + 1) + 1):
        for rest in itertools.combinations(range(F.n), m - 1):
            coords = rest + (F.J,)
            others = [i for i in range(F.n) if i not in rest]
            for vals in itertools.product((0, 1), repeat=len(others)):
                u = [0] * F.n
                for i, v in zip(others, vals):
                    u[i] = v
                u = tuple(u)
                res = D.resolution(u)
                connected = len(res.circles) <= m and _connected(D, u, rest)
                if not connected and not scan_disconnected:
                    continue
                w = u + (0,)
                for xi in range(len(F.basis(w))):
                    per_y: dict[int, list] = {}
                    for order in itertools.permutations(coords):
                        jv = list(w)
                        for k in order[:order.index(F.J)]:
                            jv[k] = 1
                        s = F.n_essential(jv)
                        for y, pts in F.path_points(w, order, xi).items():
                            per_y.setdefault(y, []).append((order, tuple(jv), s, pts))
                    top = tuple(1 if i in coords else c for i, c in enumerate(w))
                    for y, paths in per_y.items():
                        where = {"vertex": w, "coords": tuple(c + 1 for c in coords),
                                 "x": F.bits(w, xi), "y": F.bits(top, y)}
                        by_e0: dict = {}
                        for order, jv, s, pts in paths:
                            sig = sorted((p.position, p.framing) for p in pts)
                            if jv in by_e0:
                                rep.check(by_e0[jv] == sig, "paths through one J edge agree",
                                          order=order, **where)
                            by_e0[jv] = sig
                        if not connected:
                            mult = max(max(sum(1 for p in pts if p.position == q.position) for q in pts)
                                       for _, _, _, pts in paths)
                            if mult > rep.stats["max_thickness_disconnected"]:
                                rep.stats["max_thickness_disconnected"] = mult
                                rep.stats["thick_witness"] = where
                            continue
                        kinds = {_classify(op, pts, s) for _, _, s, pts in paths}
                        if op is Sl2Op.H:
                            ok = kinds in ({"thin"}, {"four"})
                        else:
                            ok = kinds == {"thin"}
                        rep.check(ok, "thin and bijective" if op is not Sl2Op.H else "H dichotomy",
                                  kinds=sorted(kinds), **where)
                        if ok:
                            branch = kinds.pop()
                            rep.count(branch)
                            if branch == "four" and "four_witness" not in rep.stats:
                                rep.stats["four_witness"] = where
                        if not rep.passed:
                            return rep
    return rep


def _connected(D: AnnularDiagram, u: Vertex, coords: Sequence[int]) -> bool:
    top = list(u)
    for c in coords:
        top[c] = 1
    A = arc_diagram(D, u, (u, tuple(top)))
    return len(components(A)) == 1
