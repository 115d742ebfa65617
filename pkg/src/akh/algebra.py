"""The annular TQFT: labels, generators, gradings and saddle maps.

A generator is stored as a tuple of bits, one per circle of its resolution,
in the resolution's circle order (trivial circles first, then essential ones
innermost to outermost).  Bit 0 is ``1`` or ``v+`` and bit 1 is ``X`` or
``v-``, matching the identification v+ = 1, v- = X.
"""
from __future__ import annotations

import enum
import itertools
import re
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from .diagram import AnnularDiagram, DiagramError, Resolution


class Label(enum.Enum):
    ONE = "1"
    X = "X"
    VPLUS = "v+"
    VMINUS = "v-"

    @property
    def bit(self) -> int:
        return 0 if self in (Label.ONE, Label.VPLUS) else 1

    @property
    def essential(self) -> bool:
        return self in (Label.VPLUS, Label.VMINUS)


def label_of(bit: int, essential: bool) -> Label:
    if essential:
        return Label.VMINUS if bit else Label.VPLUS
    return Label.X if bit else Label.ONE


class TriDegree(NamedTuple):
    h: int
    q: int
    a: int


@dataclass(frozen=True)
class Generator:
    vertex: tuple[int, ...]
    bits: tuple[int, ...]
    resolution: Resolution = field(compare=False, hash=False, repr=False)

    def __post_init__(self):
        if len(self.bits) != len(self.resolution.circles):
            raise DiagramError("one label per circle is required")

    @property
    def labels(self) -> tuple[Label, ...]:
        t = self.resolution.n_trivial
        return tuple(label_of(b, i >= t) for i, b in enumerate(self.bits))

    def __str__(self):
        return "⊗".join(lab.value for lab in self.labels) or "∅"

    def relabel(self, bits: Sequence[int]) -> "Generator":
        return Generator(self.vertex, tuple(bits), self.resolution)


def parse_generator(text: str, res: Resolution) -> Generator:
    """Parse ``"1,v-"`` style labels, one per circle in circle order.

    Commas, whitespace and ``⊗`` all separate labels.
    """
    toks = [t for t in re.split(r"[,\s⊗]+", text) if t]
    if len(toks) != len(res.circles):
        raise DiagramError(f"expected {len(res.circles)} labels, got {len(toks)}")
    bits = []
    for i, tok in enumerate(toks):
        lab = Label(tok)
        if lab.essential != res.circles[i].essential:
            kind = "essential" if res.circles[i].essential else "trivial"
            raise DiagramError(f"label {tok} does not fit {kind} circle {i + 1}")
        bits.append(lab.bit)
    return Generator(res.vertex, tuple(bits), res)


class FormalSum(dict):
    """Generator -> integer coefficient, zero coefficients dropped."""

    def add(self, gen, coef: int = 1) -> "FormalSum":
        c = self.get(gen, 0) + coef
        if c:
            self[gen] = c
        else:
            self.pop(gen, None)
        return self

    def __add__(self, other):
        out = FormalSum(self)
        for g, c in other.items():
            out.add(g, c)
        return out

    def __sub__(self, other):
        return self + other.scaled(-1)

    def scaled(self, k: int) -> "FormalSum":
        return FormalSum({g: k * c for g, c in self.items()} if k else {})

    def __str__(self):
        if not self:
            return "0"
        parts = []
        for g, c in sorted(self.items(), key=lambda t: t[0].bits):
            parts.append(("" if c == 1 else "-" if c == -1 else f"{c}*") + str(g))
        return " + ".join(parts).replace("+ -", "- ")


def basis(res: Resolution) -> list[tuple[int, ...]]:
    """All label tuples in lexicographic order (1 < X, v+ < v-)."""
    return list(itertools.product((0, 1), repeat=len(res.circles)))


def qdeg_bits(bits: Sequence[int]) -> int:
    return len(bits) - 2 * sum(bits)


def adeg_bits(bits: Sequence[int], res: Resolution) -> int:
    tail = bits[res.n_trivial:]
    return len(tail) - 2 * sum(tail)


def tridegree(D: AnnularDiagram, u: Sequence[int], bits: Sequence[int], res: Resolution) -> TriDegree:
    w = sum(u)
    return TriDegree(w - D.n_minus,
                     qdeg_bits(bits) + w + D.n_plus - 2 * D.n_minus,
                     adeg_bits(bits, res))


def gradings(x: Generator, D: AnnularDiagram) -> TriDegree:
    return tridegree(D, x.vertex, x.bits, x.resolution)


# -- Frobenius structure on bits (1 -> 0, X -> 1) ------------------------------

def frob_merge(a: int, b: int) -> list[int]:
    return [] if a and b else [a | b]


def frob_split(a: int) -> list[tuple[int, int]]:
    return [(1, 1)] if a else [(0, 1), (1, 0)]


@dataclass(frozen=True)
class SaddlePlan:
    """How the circles of two adjacent resolutions correspond across a saddle."""
    source: Resolution
    target: Resolution
    crossing: int
    touched_source: tuple[int, ...]
    touched_target: tuple[int, ...]
    carried: tuple[int, ...]   # target circle -> source circle, -1 if touched

    @property
    def merge(self) -> bool:
        return len(self.touched_source) == 2

    @property
    def kind(self) -> str:
        """Saddle type in terms of essential circles, e.g. 'AA>A', 'VV>A'."""
        def sig(res, idx):
            return "".join(sorted("V" if res.circles[i].essential else "A" for i in idx))
        return sig(self.source, self.touched_source) + ">" + sig(self.target, self.touched_target)

    def kh_image(self, bits: Sequence[int]) -> list[tuple[int, ...]]:
        """Khovanov image (no annular filtering) as a list of label tuples."""
        if self.merge:
            i, j = self.touched_source
            outs = [(m,) for m in frob_merge(bits[i], bits[j])]
        else:
            outs = frob_split(bits[self.touched_source[0]])
        results = []
        for out in outs:
            new = [bits[s] if s >= 0 else 0 for s in self.carried]
            for t, b in zip(self.touched_target, out):
                new[t] = b
            results.append(tuple(new))
        return results

    def image(self, bits: Sequence[int]) -> list[tuple[int, ...]]:
        """Annular image: the Khovanov terms that keep the annular degree."""
        a = adeg_bits(bits, self.source)
        return [y for y in self.kh_image(bits) if adeg_bits(y, self.target) == a]


def saddle_plan(D: AnnularDiagram, u: tuple[int, ...], k: int) -> SaddlePlan:
    """Plan for the cube edge from u (with u[k] = 0) to u + e_k."""
    key = ("plan", u, k)
    plan = D._cache.get(key)
    if plan is not None:
        return plan
    if u[k] != 0:
        raise DiagramError("edge must start at a 0 coordinate")
    v = list(u)
    v[k] = 1
    src, tgt = D.resolution(u), D.resolution(v)
    c = D.crossings[k]
    site = [D.node(c.event, c.position - 1), D.node(c.event, c.position),
            D.node(c.event + 1, c.position - 1), D.node(c.event + 1, c.position)]
    ts = tuple(sorted({src.node_circle[x] for x in site}))
    tt = tuple(sorted({tgt.node_circle[x] for x in site}))
    if len(ts) + len(tt) != 3:
        raise DiagramError("a saddle must merge two circles or split one")  # pragma: no cover
    where = {circ.key: i for i, circ in enumerate(src.circles)}
    carried = tuple(-1 if i in tt else where[circ.key] for i, circ in enumerate(tgt.circles))
    plan = SaddlePlan(src, tgt, k, ts, tt, carried)
    for kind, pair in (("VV>A", ts), ("A>VV", tt)):
        if plan.kind == kind and pair[1] - pair[0] != 1:
            raise DiagramError("essential circles of a saddle are not nesting-adjacent")
    D._cache[key] = plan
    return plan


def apply_saddle(D: AnnularDiagram, edge: tuple[Sequence[int], int], x: Generator) -> FormalSum:
    """F_A on the edge ``(u, k)`` from u to u + e_k."""
    u, k = tuple(edge[0]), edge[1]
    if tuple(x.vertex) != u:
        raise DiagramError("generator does not live at the edge's source")
    plan = saddle_plan(D, u, k)
    out = FormalSum()
    for y in plan.image(x.bits):
        out.add(Generator(plan.target.vertex, y, plan.target))
    return out
