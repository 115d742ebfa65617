from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from akh import parse_morse_word
from akh.algebra import (FormalSum, Generator, Label, TriDegree, apply_saddle, basis,
                         frob_merge, frob_split, gradings, parse_generator, saddle_plan)
from akh.corpus import random_word
from akh.diagram import DiagramError

# The four elementary saddles touching an essential circle, with the tensor
# factors written essential-first as in the tables; "0" is the zero map.
TABLE_I = {("v-", "1"): ["v-"], ("v+", "1"): ["v+"], ("v-", "X"): [], ("v+", "X"): []}
TABLE_II = {("v-", "v-"): [], ("v+", "v-"): ["X"], ("v-", "v+"): ["X"], ("v+", "v+"): []}
TABLE_III = {("v-",): [("v-", "X")], ("v+",): [("v+", "X")]}
TABLE_IV = {("1",): [("v+", "v-"), ("v-", "v+")], ("X",): []}


def _edge(D, kind):
    for u in D.vertices():
        for k in range(D.n):
            if u[k] == 0 and saddle_plan(D, u, k).kind == kind:
                return u, k
    raise AssertionError(f"no {kind} edge")


def _word(gen: Generator, circles) -> tuple[str, ...]:
    return tuple(gen.labels[c].value for c in circles)


def _run(D, kind, table):
    u, k = _edge(D, kind)
    plan = saddle_plan(D, u, k)
    src, tgt = plan.source, plan.target
    # essential circles first, then trivial, in nesting order
    order_src = sorted(plan.touched_source, key=lambda c: (not src.circles[c].essential, c))
    order_tgt = sorted(plan.touched_target, key=lambda c: (not tgt.circles[c].essential, c))
    seen = 0
    for bits in basis(src):
        x = Generator(u, bits, src)
        key = _word(x, order_src)
        if key not in table:
            continue
        out = apply_saddle(D, (u, k), x)
        got = sorted(_word(y, order_tgt) for y in out)
        want = sorted(tuple(w) if isinstance(w, tuple) else (w,) for w in table[key])
        assert got == want, (kind, key)
        assert all(c == 1 for c in out.values())
        seen += 1
    return seen


def test_every_table_value():
    total = _run(parse_morse_word("strands 1; cup 2; x+ 1; cap 2"), "AV>V", TABLE_I)
    total += _run(parse_morse_word("strands 2; x+ 1"), "VV>A", TABLE_II)
    total += _run(parse_morse_word("strands 1; cup 2; x- 1; cap 2"), "V>AV", TABLE_III)
    total += _run(parse_morse_word("strands 2; x- 1"), "A>VV", TABLE_IV)
    assert total == 12   # 4 + 4 + 2 + 2 input generators


def test_pure_trivial_saddles_are_khovanov():
    assert frob_merge(0, 0) == [0] and frob_merge(0, 1) == [1] and frob_merge(1, 1) == []
    assert sorted(frob_split(0)) == [(0, 1), (1, 0)] and frob_split(1) == [(1, 1)]
    D = parse_morse_word("strands 0; cup 1; x+ 1; cap 1")
    for u in D.vertices():
        if u == (0,):
            plan = saddle_plan(D, u, 0)
            for bits in basis(plan.source):
                assert plan.image(bits) == plan.kh_image(bits)


def test_gradings_examples(fig7):
    triv = parse_morse_word("strands 0; cup 1; cap 1")
    res = triv.resolution(())
    assert gradings(parse_generator("1", res), triv) == TriDegree(0, 1, 0)
    ess = parse_morse_word("strands 1")
    assert gradings(parse_generator("v-", ess.resolution(())), ess) == TriDegree(0, -1, -1)
    x = parse_generator("1,v-", fig7.resolution((0, 0)))
    # (n+, n-) = (1, 1): h = -1, q = 0 + 0 + 1 - 2, a = -1
    assert gradings(x, fig7) == TriDegree(-1, -1, -1)


def test_fig7_edge_maps(fig7):
    x = parse_generator("1,v-", fig7.resolution((0, 0)))
    e1 = apply_saddle(fig7, ((0, 0), 0), x)
    e2 = apply_saddle(fig7, ((0, 0), 1), x)
    assert {str(g) for g in e1} == {"v-"}
    assert {str(g) for g in e2} == {"v+⊗v-⊗v-", "v-⊗v+⊗v-"}


def test_generator_validation(fig7):
    res = fig7.resolution((0, 0))
    with pytest.raises(DiagramError):
        parse_generator("v-,1", res)
    with pytest.raises(DiagramError):
        parse_generator("1", res)
    with pytest.raises(DiagramError):
        apply_saddle(fig7, ((0, 1), 0), parse_generator("1,v-", res))


def test_formal_sum_drops_zeros():
    s = FormalSum().add("a", 2).add("a", -2).add("b")
    assert dict(s) == {"b": 1}
    assert dict(s - s) == {}
    assert dict(s.scaled(3)) == {"b": 3}


def test_adjacent_essential_merges(corpus):
    for D in corpus.values():
        for u in D.vertices():
            for k in range(D.n):
                if not u[k]:
                    saddle_plan(D, u, k)   # asserts nesting adjacency internally


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 4))
def test_saddles_preserve_adeg_and_shifted_q(seed, n):
    D = random_word(random.Random(seed), n)
    for u in D.vertices():
        for k in range(D.n):
            if u[k]:
                continue
            plan = saddle_plan(D, u, k)
            for bits in basis(plan.source):
                x = Generator(u, bits, plan.source)
                dx = gradings(x, D)
                for y in apply_saddle(D, (u, k), x):
                    dy = gradings(y, D)
                    assert (dy.h, dy.q, dy.a) == (dx.h + 1, dx.q, dx.a)


def test_label_kinds():
    assert {l.essential for l in (Label.VPLUS, Label.VMINUS)} == {True}
    assert Label.X.bit == 1 and Label.ONE.bit == 0
