"""The chain-level sl2 action on annular chain groups.

Essential circles are numbered i = 1, 2, ... from the innermost outward and
circle i carries the sign (-1)^(i+1), so E and F alternate between the
standard representation and its dual along the nesting order.
"""
from __future__ import annotations

import enum
from typing import Sequence

from .algebra import FormalSum, Generator, adeg_bits, basis, saddle_plan
from .diagram import AnnularDiagram, Resolution
from .report import Report


class Sl2Op(enum.Enum):
    E = "E"
    F = "F"
    H = "H"

    @property
    def qa_shift(self) -> int:
        return {"E": 2, "F": -2, "H": 0}[self.value]


def j_terms(op: Sl2Op, bits: Sequence[int], res: Resolution) -> list[tuple[tuple[int, ...], int, int]]:
    """Terms (label tuple, coefficient, essential index i) of J applied to bits.

    For H this is the refined form: one term per essential circle, with
    coefficient +1 on v+ and -1 on v-.
    """
    t = res.n_trivial
    out = []
    for i in range(1, len(bits) - t + 1):
        c = t + i - 1
        b = bits[c]
        if op is Sl2Op.H:
            out.append((tuple(bits), 1 - 2 * b, i))
        elif (op is Sl2Op.E) == (b == 1):
            new = list(bits)
            new[c] = 1 - b
            out.append((tuple(new), 1 if i % 2 else -1, i))
    return out


def j_image(op: Sl2Op, bits: Sequence[int], res: Resolution) -> dict[tuple[int, ...], int]:
    out: dict[tuple[int, ...], int] = {}
    for y, c, _ in j_terms(op, bits, res):
        out[y] = out.get(y, 0) + c
    return {y: c for y, c in out.items() if c}


def apply_J(op: Sl2Op | str, x: Generator) -> FormalSum:
    op = Sl2Op(op)
    out = FormalSum()
    for y, c in j_image(op, x.bits, x.resolution).items():
        out.add(x.relabel(y), c)
    return out


def theta(x: Generator) -> Generator:
    t = x.resolution.n_trivial
    return x.relabel(x.bits[:t] + tuple(1 - b for b in x.bits[t:]))


def _theta_bits(bits, res):
    t = res.n_trivial
    return tuple(bits[:t]) + tuple(1 - b for b in bits[t:])


def _compose(first, second, bits):
    """second(first(bits)) for maps given as bits -> {bits: coef}."""
    out: dict = {}
    for z, c in first(bits).items():
        for y, d in second(z).items():
            out[y] = out.get(y, 0) + c * d
    return {y: c for y, c in out.items() if c}


def _diff(a: dict, b: dict, scale: int = 1) -> dict:
    out = dict(a)
    for y, c in b.items():
        out[y] = out.get(y, 0) - scale * c
    return {y: c for y, c in out.items() if c}


def verify_sl2(D: AnnularDiagram, checks: Sequence[str] = ("chainmap", "relations", "theta", "weight")) -> Report:
    """Exact chain-level checks of the sl2 action on every vertex basis."""
    rep = Report("sl2")
    ops = list(Sl2Op)
    for u in D.vertices():
        res = D.resolution(u)
        J = {op: (lambda b, op=op, res=res: j_image(op, b, res)) for op in ops}
        for x in basis(res):
            if "relations" in checks:
                ef = _diff(_compose(J[Sl2Op.F], J[Sl2Op.E], x), _compose(J[Sl2Op.E], J[Sl2Op.F], x))
                rep.check(ef == J[Sl2Op.H](x), "[E,F]=H", vertex=u, x=x)
                he = _diff(_compose(J[Sl2Op.E], J[Sl2Op.H], x), _compose(J[Sl2Op.H], J[Sl2Op.E], x))
                rep.check(he == {y: 2 * c for y, c in J[Sl2Op.E](x).items()}, "[H,E]=2E", vertex=u, x=x)
                hf = _diff(_compose(J[Sl2Op.F], J[Sl2Op.H], x), _compose(J[Sl2Op.H], J[Sl2Op.F], x))
                rep.check(hf == {y: -2 * c for y, c in J[Sl2Op.F](x).items()}, "[H,F]=-2F", vertex=u, x=x)
            if "theta" in checks:
                tet = {_theta_bits(y, res): c for y, c in J[Sl2Op.E](_theta_bits(x, res)).items()}
                rep.check(tet == J[Sl2Op.F](x), "F=ΘEΘ", vertex=u, x=x)
            if "weight" in checks:
                a = adeg_bits(x, res)
                rep.check(J[Sl2Op.H](x) == ({x: a} if a else {}), "Hx=adeg(x)x", vertex=u, x=x)
                rep.check(all(adeg_bits(y, res) == a + 2 for y in J[Sl2Op.E](x)), "adeg(Ex)=adeg(x)+2",
                          vertex=u, x=x)
                rep.check(all(adeg_bits(y, res) == a - 2 for y in J[Sl2Op.F](x)), "adeg(Fx)=adeg(x)-2",
                          vertex=u, x=x)
        if "chainmap" in checks:
            for k in range(D.n):
                if u[k]:
                    continue
                plan = saddle_plan(D, tuple(u), k)
                tgt = plan.target

                def psi(b, plan=plan):
                    return {y: 1 for y in plan.image(b)}

                for op in ops:
                    def j_after(b, op=op, tgt=tgt):
                        return j_image(op, b, tgt)
                    for x in basis(res):
                        rep.check(_compose(J[op], psi, x) == _compose(psi, j_after, x),
                                  f"d{op.value}={op.value}d", vertex=u, crossing=k + 1, x=x)
        if not rep.passed:
            break
    return rep
