from __future__ import annotations

import random

import pytest

from akh import build_ckh, parse_morse_word, verify_d_squared
from akh.corpus import MAX_CIRCLES, generate_corpus, random_word, reidemeister_pairs


def test_corpus_files_are_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    generate_corpus(6, 12, seed=3, out=a)
    generate_corpus(6, 12, seed=3, out=b)
    names = sorted(p.name for p in a.iterdir())
    assert names == sorted(p.name for p in b.iterdir())
    assert all((a / n).read_bytes() == (b / n).read_bytes() for n in names)
    for n in names:
        D = parse_morse_word((a / n).read_text())
        assert verify_d_squared(build_ckh(D))


def test_default_corpus_shape(corpus):
    randoms = [D for k, D in corpus.items() if k.startswith("random_")]
    assert len(randoms) == 50
    assert all(1 <= D.n <= 8 for D in randoms)
    assert all(len(D.resolution(u).circles) <= MAX_CIRCLES for D in randoms for u in D.vertices())
    for name in ("fig7", "thick_e", "h_four", "essential_unknot", "trivial_unknot"):
        assert name in corpus


def test_random_word_hits_target():
    rng = random.Random(5)
    for target in range(1, 9):
        assert random_word(rng, target).n == target


def test_safety_bound():
    with pytest.raises(ValueError):
        generate_corpus(max_crossings=11)


def test_reidemeister_pairs_cover_each_move():
    pairs = reidemeister_pairs()
    assert len(pairs) >= 6
    for move in ("R1", "R2", "R3"):
        assert sum(k.startswith(move) for k in pairs) >= 2
    for a, b in pairs.values():
        assert a.n != b.n or a.word() != b.word()
