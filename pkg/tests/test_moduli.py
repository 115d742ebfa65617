from __future__ import annotations

import itertools
from fractions import Fraction

import pytest

from akh import parse_morse_word
from akh.complex import build_cone
from akh.moduli import (Chord, CubeFaceChain, chains, check_thin_props, closure_graph,
                        edge_moduli, flow_data, path_moduli, path_name, planar,
                        square_moduli, verify_closure_3d, verify_squares, FramedPoint)
from akh.sl2 import Sl2Op

from oracles import path_count_matrix

TWO = parse_morse_word("strands 2")


def _pts(points):
    return sorted((p.position, p.framing) for p in points)


def test_edge_moduli_two_essentials():
    e = edge_moduli(TWO, ((), 0), "E", (1, 1), (0, 1))
    assert _pts(e) == [(Fraction(1, 3), 1)]
    e = edge_moduli(TWO, ((), 0), "E", (1, 1), (1, 0))
    assert _pts(e) == [(Fraction(2, 3), -1)]
    h = edge_moduli(TWO, ((), 0), "H", (0, 1), (0, 1))
    assert _pts(h) == [(Fraction(1, 3), 1), (Fraction(2, 3), -1)]
    triv = parse_morse_word("strands 0; cup 1; cap 1")
    assert edge_moduli(triv, ((), 0), "H", (0,), (0,)) == []


def test_fig7_path_counts(fig7):
    counts = {}
    for order in itertools.permutations(range(3)):
        pm = path_moduli(fig7, ((0, 0, 0), order), "E", (0, 1), (1, 0))
        counts[path_name(order, 2, Sl2Op.E)] = len(pm)
    assert counts == {"1E2": 3, "E21": 1, "E12": 1, "2E1": 1, "21E": 1, "12E": 1}
    pm = path_moduli(fig7, ((0, 0, 0), (1, 2, 0)), "E", (0, 1), (1, 0))
    assert pm.j_vertex == (0, 1, 0)
    assert pm.positions == [Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)]


def test_fig7_turnback_face(fig7):
    m = square_moduli(fig7, ((0, 1, 0), (0, 2)), "E", (0, 1, 1), (1, 0))
    assert [len(s) for s in m.sides] == [0, 2]
    (tb,) = m.chords
    assert tb.kind == "turnback"
    ends = sorted((m.sides[s][i].position, m.sides[s][i].framing) for s, i in tb.ends)
    assert ends == [(Fraction(1, 2), -1), (Fraction(3, 4), 1)]


def test_split_face_turnback_on_first_side():
    D = parse_morse_word("strands 2; x- 1")
    m = square_moduli(D, ((0, 0), (0, 1)), "E", (0,), (0, 0))
    assert [len(s) for s in m.sides] == [2, 0]
    (tb,) = m.turnbacks
    assert sorted((m.sides[0][i].position, m.sides[0][i].framing) for _, i in tb.ends) == \
        [(Fraction(1, 3), 1), (Fraction(2, 3), -1)]


def test_trivial_essential_merge_is_a_through_strand():
    D = parse_morse_word("strands 1; cup 2; x+ 1; cap 2")
    m = square_moduli(D, ((0, 0), (0, 1)), "E", (0, 1), (0,))
    assert len(m.chords) == 1 and m.chords[0].kind == "through"
    assert all(p.position == Fraction(1, 2) for s in m.sides for p in s)


def test_h_merge_face_has_one_turnback():
    # two of three essentials merge into a trivial circle; one essential survives
    D = parse_morse_word("strands 3; x+ 2")
    m = square_moduli(D, ((0, 0), (0, 1)), "H", (0, 0, 1), (1, 0))
    assert [len(s) for s in m.sides] == [1, 3]
    assert sorted(c.kind for c in m.chords) == ["through", "turnback"]
    (tb,) = m.turnbacks
    assert sorted(m.sides[s][i].framing for s, i in tb.ends) == [-1, 1]


def test_ladybug_face_matches_two_points():
    D = parse_morse_word("strands 0; cup 1; cup 2; x- 3; x+ 1; cap 2; cap 1")
    m = square_moduli(D, ((0, 0, 0), (0, 1)), "E", (0,), (1,))
    assert m.ladybug and len(m.chords) == 2
    assert {tuple(sorted(s for s, _ in c.ends)) for c in m.chords} == {(0, 1)}
    left = square_moduli(D, ((0, 0, 0), (0, 1)), "E", (0,), (1,), convention="left")
    assert {c.ends for c in left.chords} != {c.ends for c in m.chords}


def test_planarity_checker():
    def pt(p):
        return FramedPoint((), 1, Fraction(p), 1)
    sides = ([pt("1/3"), pt("2/3")], [pt("1/3"), pt("2/3")])
    ok = [Chord("through", ((0, 0), (1, 0))), Chord("through", ((0, 1), (1, 1)))]
    crossed = [Chord("through", ((0, 0), (1, 1))), Chord("through", ((0, 1), (1, 0)))]
    assert planar(ok, sides) and not planar(crossed, sides)
    sides = ([pt("1/4"), pt("2/4"), pt("3/4")], [pt("1/2")])
    around = [Chord("turnback", ((0, 0), (0, 2))), Chord("through", ((0, 1), (1, 0)))]
    assert not planar(around, sides)
    beside = [Chord("turnback", ((0, 1), (0, 2))), Chord("through", ((0, 0), (1, 0)))]
    assert planar(beside, sides)


def test_chains_and_faces():
    cs = list(chains((0, 0, 0), (1, 1, 1), 1))
    assert len(cs) == 6 and all(c.codim == 1 for c in cs)
    assert len(list(chains((0, 0, 0), (1, 1, 1), 2))) == 6
    with pytest.raises(ValueError):
        CubeFaceChain(((0, 1), (1, 0)))


def test_fig7_suites(fig7):
    for op in Sl2Op:
        assert verify_squares(fig7, op).passed
        assert verify_closure_3d(fig7, op).passed
        assert check_thin_props(fig7, op).passed


def test_fig7_closure_loop(fig7):
    F = flow_data(fig7, "E")
    graph = closure_graph(F, (0, 0, 0), (0, 1, 2), F.index((0, 0, 0), (0, 1)))
    corners, chords = graph[F.index((1, 1, 1), (1, 0))]
    assert len(corners) == 8 and len(chords) == 8


def test_signed_edge_counts_are_cone_entries(corpus):
    for name in ("fig7", "two_essential", "braid2_p3", "h_four"):
        D = corpus[name]
        for op in Sl2Op:
            C = build_cone(D, op)
            F = flow_data(D, op)
            for u in D.vertices():
                w = u + (0,)
                for xi, row in enumerate(C.maps[(w, C.j_coord)]):
                    got = {}
                    for y, j, f in F.step(w, C.j_coord, xi):
                        got[y] = got.get(y, 0) + f
                    assert {y: c for y, c in got.items() if c} == dict(row)


def test_path_counts_match_matrix_products(corpus):
    for D in corpus.values():
        if D.n > 4:
            continue
        for op in Sl2Op:
            C = build_cone(D, op)
            F = flow_data(D, op)
            dim = D.n + 1
            for w in itertools.product((0, 1), repeat=dim):
                free = [k for k in range(dim) if not w[k]]
                for m in range(1, min(3, len(free)) + 1):
                    for order in itertools.permutations(free, m):
                        M = path_count_matrix(C, w, order)
                        for xi in range(M.shape[1]):
                            got = F.path_points(w, order, xi)
                            want = {y: int(M[y, xi]) for y in range(M.shape[0]) if M[y, xi]}
                            assert {y: len(p) for y, p in got.items()} == want


def test_witness_diagrams(corpus):
    thick = check_thin_props(corpus["thick_e"], "E")
    assert thick.passed and thick.stats["max_thickness_disconnected"] == 2
    four = check_thin_props(corpus["h_four"], "H")
    assert four.passed and four.stats["four"] >= 1 and four.stats["thin"] >= 1
