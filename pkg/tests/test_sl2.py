from __future__ import annotations

import random

from hypothesis import given, settings, strategies as st

from akh import parse_morse_word
from akh.algebra import Generator, adeg_bits, basis, parse_generator
from akh.corpus import random_word
from akh.sl2 import Sl2Op, apply_J, j_terms, theta, verify_sl2

TWO = parse_morse_word("strands 2")
RES2 = TWO.resolution(())


def _sum(op, text):
    return {str(g): c for g, c in apply_J(op, parse_generator(text, RES2)).items()}


def test_two_circle_table():
    assert _sum("E", "v-,v-") == {"v+⊗v-": 1, "v-⊗v+": -1}
    assert _sum("E", "v-,v+") == {"v+⊗v+": 1}
    assert _sum("E", "v+,v-") == {"v+⊗v+": -1}
    assert _sum("E", "v+,v+") == {}
    assert _sum("F", "v-,v-") == {}
    assert _sum("F", "v-,v+") == {"v-⊗v-": -1}
    assert _sum("F", "v+,v-") == {"v-⊗v-": 1}
    assert _sum("F", "v+,v+") == {"v-⊗v+": 1, "v+⊗v-": -1}


def test_h_and_theta():
    assert _sum("H", "v+,v+") == {"v+⊗v+": 2}
    assert _sum("H", "v+,v-") == {}
    x = parse_generator("v+,v+", RES2)
    lhs = {}
    for y, c in apply_J("E", theta(x)).items():
        lhs[str(theta(y))] = c
    assert lhs == _sum("F", "v+,v+")
    fig = parse_morse_word("strands 3; x+ 2; x- 1")
    g = parse_generator("1,v-", fig.resolution((0, 0)))
    assert str(theta(g)) == "1⊗v+" and theta(theta(g)) == g


def test_trivial_circles_are_inert():
    D = parse_morse_word("strands 0; cup 1; cap 1")
    x = parse_generator("X", D.resolution(()))
    assert all(len(apply_J(op, x)) == 0 for op in "EFH")


def test_refined_h_terms():
    x = parse_generator("v+,v-", RES2)
    assert sorted((c, i) for _, c, i in j_terms(Sl2Op.H, x.bits, RES2)) == [(-1, 2), (1, 1)]


def test_essential_unknot_commutator():
    D = parse_morse_word("strands 1")
    res = D.resolution(())
    x = parse_generator("v+", res)
    ef = {}
    for z, c in apply_J("F", x).items():
        for y, d in apply_J("E", z).items():
            ef[y.bits] = ef.get(y.bits, 0) + c * d
    for z, c in apply_J("E", x).items():
        for y, d in apply_J("F", z).items():
            ef[y.bits] = ef.get(y.bits, 0) - c * d
    assert {k: v for k, v in ef.items() if v} == {(0,): 1}


def test_verify_sl2_on_fig7(fig7):
    rep = verify_sl2(fig7)
    assert rep.passed and rep.checked > 0


def test_verify_sl2_reports_counterexample(monkeypatch, fig7):
    import akh.sl2 as mod
    real = mod.j_image

    def broken(op, bits, res):
        out = real(op, bits, res)
        return {y: -c for y, c in out.items()} if op is Sl2Op.E else out

    monkeypatch.setattr(mod, "j_image", broken)
    rep = mod.verify_sl2(fig7, checks=("theta",))
    assert not rep.passed and rep.counterexample["check"] == "F=ΘEΘ"


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(0, 4))
def test_weights_and_matrix_shape(seed, n):
    D = random_word(random.Random(seed), n) if n else parse_morse_word("strands 3")
    for u in D.vertices():
        res = D.resolution(u)
        for bits in basis(res):
            x = Generator(u, bits, res)
            a = adeg_bits(bits, res)
            for op, shift in (("E", 2), ("F", -2), ("H", 0)):
                out = apply_J(op, x)
                assert all(c in (-1, 1) for c in out.values()) or op == "H"
                assert all(adeg_bits(y.bits, res) == a + shift for y in out)
            h = apply_J("H", x)
            assert dict(h) == ({x: a} if a else {})
