"""Annular link diagrams as Morse words in the cut-open annulus.

The annulus is drawn as a rectangle whose left and right edges are glued.
Slices run left to right; strand positions are counted from the bottom,
which is the puncture side.  A diagram is a list of Morse events between
consecutive slices:

* ``x+ i`` / ``x- i``: strands ``i`` and ``i+1`` cross.  ``x+`` is the
  crossing that is positive when both strands run rightward.
* ``cup i``: two new strands appear at positions ``i`` and ``i+1``.
* ``cap i``: strands ``i`` and ``i+1`` are joined and disappear.

The 0-smoothing of ``x+`` is the identity tangle and its 1-smoothing is cap
followed by cup; ``x-`` is the other way round.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

L, R = 0, 1  # sides of a strand node


class DiagramError(ValueError):
    pass


class ParseError(DiagramError):
    def __init__(self, line: int, cause: str):
        super().__init__(f"line {line}: {cause}")
        self.line = line
        self.cause = cause


class EventKind(enum.Enum):
    POS = "x+"
    NEG = "x-"
    CUP = "cup"
    CAP = "cap"

    @property
    def is_crossing(self) -> bool:
        return self in (EventKind.POS, EventKind.NEG)


class MorseEvent(NamedTuple):
    kind: EventKind
    position: int

    def __str__(self):
        return f"{self.kind.value} {self.position}"


class Crossing(NamedTuple):
    event: int      # index into the event list; also the slice to its left
    position: int   # 1-based lower strand
    kind: EventKind
    sign: int


@dataclass(frozen=True)
class AnnularDiagram:
    strands: int
    events: tuple[MorseEvent, ...] = ()
    orientations: tuple[int, ...] | None = None
    name: str = field(default="", compare=False)
    _cache: dict = field(default_factory=dict, init=False, repr=False,
                         compare=False, hash=False)

    def __post_init__(self):
        events = tuple(MorseEvent(EventKind(e[0]) if not isinstance(e[0], EventKind)
                                  else e[0], int(e[1])) for e in self.events)
        object.__setattr__(self, "events", events)
        widths = _check_widths(self.strands, events)
        object.__setattr__(self, "widths", widths)
        offsets = [0]
        for w in widths:
            offsets.append(offsets[-1] + w)
        object.__setattr__(self, "offsets", tuple(offsets))
        dirs = _orient(self)
        object.__setattr__(self, "directions", dirs)
        if self.orientations is None:
            object.__setattr__(self, "orientations",
                               tuple(dirs[self.node(0, q)] for q in range(self.strands)))
        crossings = []
        for j, ev in enumerate(events):
            if ev.kind.is_crossing:
                p = ev.position - 1
                parallel = dirs[self.node(j, p)] == dirs[self.node(j, p + 1)]
                sign = 1 if parallel == (ev.kind is EventKind.POS) else -1
                crossings.append(Crossing(j, ev.position, ev.kind, sign))
        object.__setattr__(self, "crossings", tuple(crossings))

    # -- basic shape --------------------------------------------------------
    @property
    def n(self) -> int:
        return len(self.crossings)

    @property
    def n_plus(self) -> int:
        return sum(1 for c in self.crossings if c.sign > 0)

    @property
    def n_minus(self) -> int:
        return sum(1 for c in self.crossings if c.sign < 0)

    @property
    def n_nodes(self) -> int:
        return self.offsets[-1]

    def node(self, slice_: int, q: int) -> int:
        """Node id of the strand at 0-based position q in the given slice."""
        return self.offsets[slice_] + q

    def node_coords(self, node: int) -> tuple[int, int]:
        for j in range(len(self.widths)):
            if node < self.offsets[j + 1]:
                return j, node - self.offsets[j]
        raise IndexError(node)

    def vertices(self) -> Iterable[tuple[int, ...]]:
        return itertools.product((0, 1), repeat=self.n)

    def word(self) -> str:
        lines = [f"strands {self.strands}"]
        if self.strands:
            lines.append("orient " + " ".join("+" if d > 0 else "-" for d in self.orientations))
        lines += [str(e) for e in self.events]
        return "\n".join(lines) + "\n"

    def resolution(self, u: Sequence[int]) -> "Resolution":
        u = tuple(u)
        res = self._cache.get(("res", u))
        if res is None:
            res = resolve(self, u)
            self._cache[("res", u)] = res
        return res


def _check_widths(k: int, events: Sequence[MorseEvent], lines: Sequence[int] | None = None):
    if k < 0:
        raise ParseError(lines[0] if lines else 0, "negative strand count")
    widths = [k]
    for idx, ev in enumerate(events):
        w = widths[-1]
        line = lines[idx + 1] if lines else idx + 1
        hi = w + 1 if ev.kind is EventKind.CUP else w - 1
        if not 1 <= ev.position <= hi:
            raise ParseError(line, f"position {ev.position} out of range for "
                                   f"'{ev.kind.value}' with {w} strands")
        widths.append(w + 2 if ev.kind is EventKind.CUP else
                      w - 2 if ev.kind is EventKind.CAP else w)
    if widths[-1] != k:
        raise ParseError(lines[-1] if lines else len(events),
                         f"unbalanced strand count: {k} at the start, {widths[-1]} at the end")
    return tuple(widths)


# -- the port graph ---------------------------------------------------------
#
# Every node (slice, position) has a left port and a right port, and every
# port is joined to exactly one other port.  Port id = 2 * node + side.

def _base_ports(D: AnnularDiagram) -> tuple[list[int], list[tuple]]:
    """Partner and tag arrays for everything except crossing sites."""
    key = "base_ports"
    if key in D._cache:
        partner, tag = D._cache[key]
        return list(partner), list(tag)
    size = 2 * D.n_nodes
    partner = [-1] * size
    tag: list[tuple] = [()] * size

    def join(a, b, t):
        partner[a], partner[b] = b, a
        tag[a] = tag[b] = t

    for j, ev in enumerate(D.events):
        w = D.widths[j]
        p = ev.position - 1
        for q in range(w):
            if ev.kind.is_crossing and q in (p, p + 1):
                continue
            if ev.kind is EventKind.CAP and q in (p, p + 1):
                continue
            q2 = q if (q < p or ev.kind.is_crossing) else q + 2 if ev.kind is EventKind.CUP else q - 2
            join(2 * D.node(j, q) + R, 2 * D.node(j + 1, q2) + L, ("s", j, q))
        if ev.kind is EventKind.CUP:
            join(2 * D.node(j + 1, p) + L, 2 * D.node(j + 1, p + 1) + L, ("cup", j))
        elif ev.kind is EventKind.CAP:
            join(2 * D.node(j, p) + R, 2 * D.node(j, p + 1) + R, ("cap", j))
    last = len(D.events)
    for q in range(D.strands):
        join(2 * D.node(last, q) + R, 2 * D.node(0, q) + L, ("cut", q))
    D._cache[key] = (tuple(partner), tuple(tag))
    return partner, tag


def _crossing_ports(D: AnnularDiagram, c: Crossing, mode: str, partner, tag):
    j, p = c.event, c.position - 1
    a, b = 2 * D.node(j, p) + R, 2 * D.node(j, p + 1) + R
    c_, d = 2 * D.node(j + 1, p) + L, 2 * D.node(j + 1, p + 1) + L

    def join(x, y, t):
        partner[x], partner[y] = y, x
        tag[x] = tag[y] = t

    if mode == "cross":
        join(a, d, ("x", j, 0))
        join(b, c_, ("x", j, 1))
    elif mode == "id":
        join(a, c_, ("s", j, p))
        join(b, d, ("s", j, p + 1))
    else:
        join(a, b, ("cap", j))
        join(c_, d, ("cup", j))


def smoothing_mode(c: Crossing, bit: int) -> str:
    identity_at = 0 if c.kind is EventKind.POS else 1
    return "id" if bit == identity_at else "capcup"


def _walk(partner: Sequence[int], start_port: int) -> list[int]:
    """Ports visited leaving each node, starting by leaving via start_port."""
    out = []
    port = start_port
    while True:
        out.append(port)
        other = partner[port]
        port = other ^ 1  # leave the next node through its other side
        if port == start_port:
            return out


def _orient(D: AnnularDiagram) -> tuple[int, ...]:
    partner, _ = _base_ports(D)
    for c in _raw_crossings(D):
        _crossing_ports(D, c, "cross", partner, [()] * len(partner))
    dirs = [0] * D.n_nodes
    given = D.orientations
    if given is not None:
        given = tuple(given)
        if len(given) != D.strands or any(g not in (1, -1) for g in given):
            raise ParseError(1, f"orient needs {D.strands} entries of + or -")
    starts = [D.node(0, q) for q in range(D.strands)] + list(range(D.n_nodes))
    for node in starts:
        if dirs[node]:
            continue
        d = 1
        if node < D.strands and given is not None:
            d = given[node]
        # leaving through R means travelling rightward
        for port in _walk(partner, 2 * node + (R if d > 0 else L)):
            dirs[port >> 1] = 1 if port & 1 == R else -1
    if given is not None:
        for q in range(D.strands):
            if dirs[D.node(0, q)] != given[q]:
                raise ParseError(1, f"inconsistent orientation at cut strand {q + 1}")
    return tuple(dirs)


def _raw_crossings(D: AnnularDiagram):
    for j, ev in enumerate(D.events):
        if ev.kind.is_crossing:
            yield Crossing(j, ev.position, ev.kind, 0)


# -- parsing ----------------------------------------------------------------

def parse_morse_word(text: str, name: str = "") -> AnnularDiagram:
    """Parse the line-oriented word format; ``;`` also separates statements."""
    statements = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0]
        for part in body.split(";"):
            toks = part.split()
            if toks:
                statements.append((lineno, toks))
    if not statements or statements[0][1][0] != "strands":
        raise ParseError(statements[0][0] if statements else 1, "expected 'strands <k>' first")
    lineno, toks = statements[0]
    if len(toks) != 2 or not toks[1].isdigit():
        raise ParseError(lineno, "malformed 'strands' line")
    k = int(toks[1])
    orient = None
    orient_line = lineno
    events, lines = [], [lineno]
    kinds = {e.value: e for e in EventKind}
    for lineno, toks in statements[1:]:
        head = toks[0]
        if head == "orient":
            if orient is not None or events:
                raise ParseError(lineno, "'orient' must directly follow 'strands'")
            if len(toks) - 1 != k or any(t not in "+-" or len(t) != 1 for t in toks[1:]):
                raise ParseError(lineno, f"orient needs {k} entries of + or -")
            orient = tuple(1 if t == "+" else -1 for t in toks[1:])
            orient_line = lineno
            continue
        if head not in kinds:
            raise ParseError(lineno, f"unknown event '{head}'")
        if len(toks) != 2 or not toks[1].lstrip("-").isdigit():
            raise ParseError(lineno, f"malformed '{head}' line")
        events.append(MorseEvent(kinds[head], int(toks[1])))
        lines.append(lineno)
    _check_widths(k, events, lines)
    try:
        return AnnularDiagram(k, tuple(events), orient, name=name)
    except ParseError as err:
        raise ParseError(orient_line, err.cause) from None


# -- resolutions --------------------------------------------------------------

@dataclass(frozen=True)
class Circle:
    ports: tuple[int, ...]   # ports in walk order; node = port >> 1
    essential: bool
    cut_count: int

    @property
    def nodes(self) -> tuple[int, ...]:
        return tuple(p >> 1 for p in self.ports)

    @property
    def key(self) -> int:
        return min(p >> 1 for p in self.ports)


@dataclass(frozen=True, eq=False)
class Resolution:
    vertex: tuple[int, ...]
    circles: tuple[Circle, ...]
    node_circle: tuple[int, ...]
    n_trivial: int
    partner: tuple[int, ...] = field(repr=False)
    tag: tuple[tuple, ...] = field(repr=False)

    @property
    def n_essential(self) -> int:
        return len(self.circles) - self.n_trivial

    @property
    def essential_order(self) -> tuple[int, ...]:
        return tuple(range(self.n_trivial, len(self.circles)))

    def circle_of_node(self, node: int) -> int:
        return self.node_circle[node]

    def describe(self) -> str:
        return f"{self.n_trivial} trivial + {self.n_essential} essential"


def resolve(D: AnnularDiagram, u: Sequence[int]) -> Resolution:
    u = tuple(u)
    if len(u) != D.n:
        raise DiagramError(f"vertex has {len(u)} coordinates, diagram has {D.n} crossings")
    partner, tag = _base_ports(D)
    for c, bit in zip(D.crossings, u):
        _crossing_ports(D, c, smoothing_mode(c, bit), partner, tag)
    seen = [False] * D.n_nodes
    raw = []
    for node in range(D.n_nodes):
        if seen[node]:
            continue
        ports = _walk(partner, 2 * node + R)
        for p in ports:
            seen[p >> 1] = True
        cut = sum(1 for p in ports if (p >> 1) < D.strands)
        raw.append((ports, cut))
    trivial = [Circle(tuple(p), False, cut) for p, cut in raw if cut % 2 == 0]
    essential = [Circle(tuple(p), True, cut) for p, cut in raw if cut % 2 == 1]
    trivial.sort(key=lambda c: c.key)
    essential = _nest(D, essential)
    circles = tuple(trivial) + tuple(essential)
    node_circle = [0] * D.n_nodes
    for i, c in enumerate(circles):
        for p in c.ports:
            node_circle[p >> 1] = i
    return Resolution(u, circles, tuple(node_circle), len(trivial), tuple(partner), tuple(tag))


def _nest(D: AnnularDiagram, essential: list[Circle]) -> list[Circle]:
    """Sort essential circles innermost first using the cut line.

    Walking up the cut from the puncture to the lowest point of C, we cross
    C' an odd number of times exactly when C' lies inside C.
    """
    cut_pos = [sorted(p >> 1 for p in c.ports if (p >> 1) < D.strands) for c in essential]
    rank = []
    for i, ci in enumerate(cut_pos):
        low = ci[0]
        rank.append(sum(1 for j, cj in enumerate(cut_pos)
                        if j != i and sum(1 for x in cj if x < low) % 2 == 1))
    if sorted(rank) != list(range(len(essential))):
        raise DiagramError("essential circles are not nested")  # pragma: no cover
    return [c for _, c in sorted(zip(rank, essential), key=lambda t: t[0])]


def separation_essential(D: AnnularDiagram, res: Resolution, circle: int,
                         slice_: int | None = None) -> bool:
    """Essential iff a vertical segment from the puncture to the outer
    boundary, placed at the given slice, meets the circle an odd number of
    times.  Defaults to the middle slice, away from the cut."""
    j = len(D.widths) // 2 if slice_ is None else slice_
    return sum(1 for q in range(D.widths[j])
               if res.node_circle[D.node(j, q)] == circle) % 2 == 1


# -- arc diagrams -------------------------------------------------------------

class ArcType(enum.Enum):
    PAST = "past"
    FUTURE = "future"


@dataclass(frozen=True)
class Arc:
    crossing: int                 # cube coordinate
    site: tuple[int, int]         # (event index, 1-based position)
    type: ArcType
    circles: tuple[int, int]
    ports: tuple[int, int]        # the two attachment edges, one port each
    right_nodes: tuple[int, int]  # node met when turning right at each end


@dataclass(frozen=True, eq=False)
class ArcDiagram:
    diagram: AnnularDiagram
    resolution: Resolution
    arcs: tuple[Arc, ...]
    subcube: tuple[tuple[int, ...], tuple[int, ...]] | None = None

    @property
    def vertex(self) -> tuple[int, ...]:
        return self.resolution.vertex

    def arc(self, crossing: int) -> Arc:
        for a in self.arcs:
            if a.crossing == crossing:
                return a
        raise KeyError(f"no arc at crossing {crossing + 1}")


def _make_arc(D: AnnularDiagram, res: Resolution, i: int) -> Arc:
    c = D.crossings[i]
    j, p = c.event, c.position - 1
    bit = res.vertex[i]
    if smoothing_mode(c, bit) == "id":
        ports = (2 * D.node(j, p) + R, 2 * D.node(j, p + 1) + R)
        right = (D.node(j, p), D.node(j + 1, p + 1))
    else:
        ports = (2 * D.node(j, p) + R, 2 * D.node(j + 1, p) + L)
        right = (D.node(j, p + 1), D.node(j + 1, p))
    circles = (res.node_circle[ports[0] >> 1], res.node_circle[ports[1] >> 1])
    kind = ArcType.FUTURE if bit == 0 else ArcType.PAST
    return Arc(i, (j, c.position), kind, circles, ports, right)


def arc_diagram(D: AnnularDiagram, u: Sequence[int],
                subcube: tuple[Sequence[int], Sequence[int]] | None = None) -> ArcDiagram:
    u = tuple(u)
    if subcube is not None:
        lo, hi = tuple(subcube[0]), tuple(subcube[1])
        if not all(a <= x <= b for a, x, b in zip(lo, u, hi)):
            raise DiagramError("vertex outside the subcube")
        coords = [i for i in range(D.n) if lo[i] != hi[i]]
        subcube = (lo, hi)
    else:
        coords = range(D.n)
    res = D.resolution(u)
    return ArcDiagram(D, res, tuple(_make_arc(D, res, i) for i in coords), subcube)


def surger(A: ArcDiagram, crossing: int) -> ArcDiagram:
    """Surgery along the arc at ``crossing``; the dual arc has the other type."""
    A.arc(crossing)
    u = list(A.vertex)
    u[crossing] ^= 1
    return arc_diagram(A.diagram, u, A.subcube)


@dataclass(frozen=True)
class ComponentPartition:
    groups: tuple[tuple[int, ...], ...]   # circle indices per component
    keys: tuple[int, ...]                 # smallest strand node per component

    def __len__(self):
        return len(self.groups)

    def correspondence(self, other: "ComponentPartition") -> dict[int, int]:
        where = {k: i for i, k in enumerate(other.keys)}
        return {i: where[k] for i, k in enumerate(self.keys)}


def components(A: ArcDiagram) -> ComponentPartition:
    circles = A.resolution.circles
    parent = list(range(len(circles)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a in A.arcs:
        parent[find(a.circles[0])] = find(a.circles[1])
    groups: dict[int, list[int]] = {}
    for i in range(len(circles)):
        groups.setdefault(find(i), []).append(i)
    parts = sorted((min(circles[i].key for i in g), tuple(g)) for g in groups.values())
    return ComponentPartition(tuple(g for _, g in parts), tuple(k for k, _ in parts))


def is_connected(A: ArcDiagram) -> bool:
    return len(components(A)) <= 1


def interleaved(A: ArcDiagram, a: int, b: int) -> bool:
    """Both arcs sit on one circle with alternating endpoints."""
    x, y = A.arc(a), A.arc(b)
    if len({*x.circles, *y.circles}) != 1:
        return False
    circle = A.resolution.circles[x.circles[0]]
    where = _edge_positions(A.resolution, circle)
    ax = sorted(where[p] for p in x.ports)
    inside = [ax[0] < where[p] < ax[1] for p in y.ports]
    return inside[0] != inside[1]


def _edge_positions(res: Resolution, circle: Circle) -> dict[int, int]:
    """Index along the circle of the edge containing each port."""
    where = {}
    for idx, port in enumerate(circle.ports):
        where[port] = idx
        where[res.partner[port]] = idx
    return where


def is_zero_pair(A: ArcDiagram, first: int, second: int, j_between=None) -> bool:
    """True iff no moduli point runs through the two edges in this order.

    The face is entered at the vertex where both coordinates are 0, crosses
    ``first``, then the J edge if given, then ``second``.  Counts rather than
    signed coefficients are composed, so a four-point H space that cancels
    algebraically is still reported as nonzero.
    """
    from .algebra import basis, saddle_plan
    from .sl2 import Sl2Op, j_terms

    if first == second:
        raise DiagramError("both arcs sit at the same crossing")
    A.arc(first), A.arc(second)
    D = A.diagram
    lo = list(A.vertex)
    lo[first] = lo[second] = 0
    mid = list(lo)
    mid[first] = 1
    p1 = saddle_plan(D, tuple(lo), first)
    p2 = saddle_plan(D, tuple(mid), second)
    op = Sl2Op(j_between) if j_between is not None else None
    mid_res = D.resolution(mid)
    for x in basis(D.resolution(lo)):
        for z in p1.image(x):
            zs = [z] if op is None else [t[0] for t in j_terms(op, z, mid_res)]
            if any(p2.image(w) for w in zs):
                return False
    return True
