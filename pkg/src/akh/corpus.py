"""Named diagrams, Reidemeister pairs and a seeded random corpus."""
from __future__ import annotations

import random
from pathlib import Path

from .diagram import AnnularDiagram, EventKind, MorseEvent, parse_morse_word

SAFETY_BOUND = 10
MAX_CIRCLES = 6     # random words whose resolutions have more circles are redrawn

NAMED_WORDS = {
    "trivial_unknot": "strands 0; cup 1; cap 1",
    "essential_unknot": "strands 1",
    "fig7": "strands 3; x+ 2; x- 1",
    "braid2_p1": "strands 2; x+ 1",
    "braid2_p2": "strands 2; x+ 1; x+ 1",
    "braid2_p3": "strands 2; x+ 1; x+ 1; x+ 1",
    "braid2_m2": "strands 2; x- 1; x- 1",
    "braid2_pm": "strands 2; x+ 1; x- 1",
    "two_essential": "strands 2",
    "ladybug_disk": "strands 0; cup 1; cup 2; x- 3; x+ 1; cap 2; cap 1",
}


def named(name: str) -> AnnularDiagram:
    return parse_morse_word(NAMED_WORDS[name], name=name)


def stack(lower: AnnularDiagram, upper: AnnularDiagram, name: str = "") -> AnnularDiagram:
    """Disjoint union with ``upper`` drawn farther from the puncture."""
    k = lower.strands
    events = tuple(lower.events) + tuple(MorseEvent(e.kind, e.position + k) for e in upper.events)
    orient = tuple(lower.orientations) + tuple(upper.orientations)
    return AnnularDiagram(k + upper.strands, events, orient, name=name)


def thick_e_witness() -> AnnularDiagram:
    """An essential circle beside a trivial circle that carries a ladybug."""
    return stack(named("essential_unknot"), named("ladybug_disk"), name="thick_e")


def h_four_witness() -> AnnularDiagram:
    return parse_morse_word("strands 2; x+ 1; x- 1", name="h_four")


REIDEMEISTER_PAIRS = {
    "R1_pos": ("strands 1", "strands 1; cup 2; x+ 1; cap 2"),
    "R1_neg": ("strands 3; x+ 2; x- 1", "strands 3; x+ 2; cup 4; x- 3; cap 4; x- 1"),
    "R2_braid": ("strands 2", "strands 2; x+ 1; x- 1"),
    "R2_fig7": ("strands 3; x+ 2; x- 1", "strands 3; x+ 2; x+ 1; x- 1; x- 1"),
    "R3_pos": ("strands 3; x+ 1; x+ 2; x+ 1", "strands 3; x+ 2; x+ 1; x+ 2"),
    "R3_mixed": ("strands 3; x+ 1; x+ 2; x- 1", "strands 3; x- 2; x+ 1; x+ 2"),
}


def reidemeister_pairs() -> dict[str, tuple[AnnularDiagram, AnnularDiagram]]:
    return {k: (parse_morse_word(a, name=f"{k}_a"), parse_morse_word(b, name=f"{k}_b"))
            for k, (a, b) in REIDEMEISTER_PAIRS.items()}


def random_word(rng: random.Random, target: int, max_width: int = 6) -> AnnularDiagram:
    """A closure-balanced Morse word with exactly ``target`` crossings."""
    k = rng.choice((0, 1, 1, 2, 2, 3))
    events: list[MorseEvent] = []
    width, crossings = k, 0
    while crossings < target:
        moves = []
        if width >= 2:
            moves += ["x"] * 4
        if width + 2 <= max_width:
            moves.append("cup")
        if width >= 2 and (width > k or rng.random() < 0.3):
            moves.append("cap")
        move = rng.choice(moves)
        if move == "x":
            kind = EventKind.POS if rng.random() < 0.5 else EventKind.NEG
            events.append(MorseEvent(kind, rng.randint(1, width - 1)))
            crossings += 1
        elif move == "cup":
            events.append(MorseEvent(EventKind.CUP, rng.randint(1, width + 1)))
            width += 2
        else:
            events.append(MorseEvent(EventKind.CAP, rng.randint(1, width - 1)))
            width -= 2
    while width > k:
        events.append(MorseEvent(EventKind.CAP, rng.randint(1, width - 1)))
        width -= 2
    while width < k:
        events.append(MorseEvent(EventKind.CUP, rng.randint(1, width + 1)))
        width += 2
    return AnnularDiagram(k, tuple(events))


def named_corpus() -> dict[str, AnnularDiagram]:
    out = {name: named(name) for name in NAMED_WORDS}
    out["thick_e"] = thick_e_witness()
    out["h_four"] = h_four_witness()
    for key, (a, b) in reidemeister_pairs().items():
        out[a.name] = a
        out[b.name] = b
    return out


def generate_corpus(max_crossings: int = 8, count: int = 50, seed: int = 0,
                    out: str | Path | None = None) -> dict[str, AnnularDiagram]:
    """Named diagrams plus ``count`` random words; optionally written as .akh files."""
    if max_crossings > SAFETY_BOUND:
        raise ValueError(f"max_crossings above the safety bound {SAFETY_BOUND}")
    corpus = named_corpus()
    rng = random.Random(seed)
    for i in range(count):
        target = rng.randint(1, max_crossings)
        D = random_word(rng, target)
        while max(len(D.resolution(u).circles) for u in D.vertices()) > MAX_CIRCLES:
            D = random_word(rng, target)
        name = f"random_{i:03d}"
        corpus[name] = parse_morse_word(D.word(), name=name)
    if out is not None:
        path = Path(out)
        path.mkdir(parents=True, exist_ok=True)
        for name, D in corpus.items():
            (path / f"{name}.akh").write_text(D.word())
    return corpus
