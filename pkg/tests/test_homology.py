from __future__ import annotations

import itertools
from math import gcd

import numpy as np
from hypothesis import given, settings, strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import invariant_factors

from akh import parse_morse_word
from akh.complex import build_ckh, build_cone
from akh.homology import homology, induced_map, smith_normal_form, verify_les
from akh.sl2 import Sl2Op

from oracles import dense_homology, dense_rank, relation_failure

matrices = st.integers(1, 6).flatmap(lambda r: st.integers(1, 6).flatmap(
    lambda c: st.lists(st.lists(st.integers(-9, 9), min_size=c, max_size=c), min_size=r, max_size=r)))


def test_snf_examples():
    assert smith_normal_form([[1, 0, 0], [0, 1, 0], [0, 0, 1]]).divisors == (1, 1, 1)
    z = smith_normal_form([[0, 0], [0, 0]])
    assert z.divisors == () and z.rank == 0
    assert smith_normal_form([[2, 4], [6, 8]]).divisors == (2, 4)


def _minor_gcd(M, k):
    g = 0
    for rows in itertools.combinations(range(len(M)), k):
        for cols in itertools.combinations(range(len(M[0])), k):
            g = gcd(g, int(round(np.linalg.det(np.array([[M[r][c] for c in cols] for r in rows], dtype=float)))))
    return g


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_snf_against_independent_routes(M):
    res = smith_normal_form(M, transforms=True)
    d = res.divisors
    assert all(b % a == 0 for a, b in zip(d, d[1:]))
    assert res.rank == dense_rank(M)
    want = [abs(int(f)) for f in invariant_factors(Matrix(M), domain=ZZ) if f != 0]
    assert list(d) == want
    # product of the first k divisors is the gcd of the k x k minors
    if len(M) <= 4 and len(M[0]) <= 4:
        prod = 1
        for k in range(1, len(d) + 1):
            prod *= d[k - 1]
            assert prod == _minor_gcd(M, k)
    r, c = len(M), len(M[0])
    # U is stored by rows and V by columns, as sparse dicts
    U = np.array([[row.get(j, 0) for j in range(r)] for row in res.U], dtype=object)
    V = np.array([[col.get(i, 0) for col in res.V] for i in range(c)], dtype=object)
    D = U.dot(np.array(M, dtype=object)).dot(V)
    for i in range(D.shape[0]):
        for j in range(D.shape[1]):
            assert D[i, j] == (d[i] if i == j and i < len(d) else 0)


def test_known_homology():
    ess = parse_morse_word("strands 1")
    assert homology(build_ckh(ess)).groups == {(0, -1, -1): (1, ()), (0, 1, 1): (1, ())}
    triv = parse_morse_word("strands 0; cup 1; cap 1")
    assert homology(build_ckh(triv)).groups == {(0, -1, 0): (1, ()), (0, 1, 0): (1, ())}


def test_known_induced_maps():
    ess = parse_morse_word("strands 1")
    E = induced_map(ess, "E")
    assert E[(0, -1, -1)] == [[1]]
    triv = parse_morse_word("strands 0; cup 1; cap 1")
    for op in "EFH":
        assert all(not any(any(r) for r in M) for M in induced_map(triv, op).values())


def test_fig7_homology(fig7):
    table = homology(build_ckh(fig7))
    assert table.groups == dense_homology(build_ckh(fig7))
    assert table.total_rank() == 10
    assert table.rank(0, -3, -3) == table.rank(0, 3, 3) == 1


def test_torsion_is_found():
    # a trefoil away from the puncture: ordinary Khovanov homology, a = 0
    D = parse_morse_word("strands 0; cup 1; cup 2; x+ 1; x+ 1; x+ 1; cap 2; cap 1")
    C = build_ckh(D)
    t = homology(C)
    assert t.groups == dense_homology(C)
    assert t.groups == {(0, 1, 0): (1, ()), (0, 3, 0): (1, ()), (2, 5, 0): (1, ()),
                        (3, 7, 0): (0, (2,)), (3, 9, 0): (1, ())}


def test_relations_on_homology(fig7, corpus):
    assert relation_failure(fig7) is None
    for name in ("essential_unknot", "two_essential", "braid2_p3", "h_four", "R3_pos_a"):
        assert relation_failure(corpus[name]) is None


def test_les(fig7):
    for op in Sl2Op:
        assert verify_les(fig7, op).passed
    rep = verify_les(parse_morse_word("strands 1"), "E")
    assert rep.passed and sum(rep.stats["cone_ranks"].values()) == 2


def test_les_with_zero_h_action():
    D = parse_morse_word("strands 0; cup 1; x+ 1; cap 1")
    rep = verify_les(D, "H")
    K = homology(build_cone(D, "H"))
    base = homology(build_ckh(D))
    assert rep.passed
    for (h, q, a), (r, _) in K.groups.items():
        assert r == base.rank(h - 1, q, a) + base.rank(h, q, a)


def test_stratified_equals_dense(corpus):
    for name in ("fig7", "braid2_p2", "R1_neg_b", "thick_e"):
        C = build_ckh(corpus[name])
        assert homology(C).groups == dense_homology(C)
        K = build_cone(corpus[name], "E")
        assert homology(K).groups == dense_homology(K)
