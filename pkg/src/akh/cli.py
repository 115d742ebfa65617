"""Command-line front end: ``akh <subcommand> ...``.

Exit status is 0 when every requested check passes, 1 on a verification
failure and 2 on usage or parse errors.
"""
from __future__ import annotations

import argparse
import itertools
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .algebra import parse_generator
from .complex import build_ckh, build_cone, verify_d_squared
from .corpus import SAFETY_BOUND, generate_corpus
from .diagram import AnnularDiagram, DiagramError, parse_morse_word
from .homology import HomologyTable, homology, verify_les
from .report import Report, jsonable
from .sl2 import Sl2Op, verify_sl2
from . import moduli

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
SUITES = ("thinness", "squares", "closure")


class UsageError(Exception):
    pass


def load(path: str) -> AnnularDiagram:
    try:
        text = Path(path).read_text()
    except OSError as err:
        raise UsageError(f"cannot read {path}: {err.strerror}") from None
    return parse_morse_word(text, name=Path(path).stem)


def summary(D: AnnularDiagram) -> dict:
    circles: dict[str, int] = {}
    for u in D.vertices():
        res = D.resolution(u)
        circles["".join(map(str, u))] = len(res.circles)
    return {"name": D.name, "n": D.n, "n_plus": D.n_plus, "n_minus": D.n_minus,
            "circles_per_vertex": circles}


def threads(args) -> int:
    if getattr(args, "threads", None):
        return max(1, args.threads)
    try:
        return max(1, int(os.environ.get("AKH_THREADS", "1")))
    except ValueError:
        raise UsageError("AKH_THREADS must be an integer") from None


def format_table(table: HomologyTable) -> str:
    rows = table.rows()
    if not rows:
        return "  (zero)"
    lines = []
    for r in rows:
        tors = "".join(f" + Z/{t}" for t in r["torsion"])
        lines.append(f"  h={r['h']:>3} q={r['q']:>4} a={r['a']:>3}  Z^{r['rank']}{tors}")
    return "\n".join(lines)


def _ops(arg: str) -> list[Sl2Op]:
    return list(Sl2Op) if arg == "all" else [Sl2Op(arg)]


def _vertex(text: str) -> tuple[int, ...]:
    if not text or set(text) - {"0", "1"}:
        raise UsageError(f"bad cube vertex '{text}'")
    return tuple(int(c) for c in text)


# -- subcommands ------------------------------------------------------------------

def cmd_compute(args, doc: dict) -> bool:
    D = load(args.file)
    table = homology(build_ckh(D))
    doc.update(diagram=summary(D), homology=table.rows())
    print(f"{D.name}: n={D.n} (n+={D.n_plus}, n-={D.n_minus})")
    print(format_table(table))
    return True


def cmd_sl2(args, doc: dict) -> bool:
    D = load(args.file)
    checks = ("chainmap", "relations", "theta", "weight") if args.verify == "all" else (args.verify,)
    rep = verify_sl2(D, checks)
    doc.update(diagram=summary(D), verify=[rep.to_json()])
    _print_report(rep)
    return rep.passed


def cmd_cone(args, doc: dict) -> bool:
    D = load(args.file)
    ok = True
    doc.update(diagram=summary(D), cones=[])
    for op in _ops(args.op):
        C = build_cone(D, op)
        entry = {"op": op.value, "generators": C.size(), "d_squared_zero": verify_d_squared(C)}
        print(f"Cone({op.value}): {C.size()} generators, d^2 = 0: {entry['d_squared_zero']}")
        ok &= entry["d_squared_zero"]
        if args.homology:
            table = homology(C)
            entry["homology"] = table.rows()
            print(format_table(table))
        if args.les:
            rep = verify_les(D, op)
            entry["verify"] = rep.to_json()
            _print_report(rep)
            ok &= rep.passed
        doc["cones"].append(entry)
    return ok


def _subcube(args, F: moduli.FlowData) -> tuple[tuple[int, ...], tuple[int, ...]]:
    if args.subcube:
        try:
            lo_s, hi_s = args.subcube.split("..")
        except ValueError:
            raise UsageError("subcube must look like U..V") from None
        lo, hi = _vertex(lo_s), _vertex(hi_s)
        if len(lo) == F.n:
            lo, hi = lo + (0,), hi + (1,)
    else:
        lo, hi = (0,) * (F.n + 1), (1,) * (F.n + 1)
    if len(lo) != F.n + 1 or len(hi) != F.n + 1 or any(a > b for a, b in zip(lo, hi)):
        raise UsageError(f"subcube needs two comparable vertices of length {F.n + 1}")
    return lo, hi


def _gens(text: str | None, D: AnnularDiagram, w, F: moduli.FlowData) -> list[int]:
    if text is None:
        return list(range(len(F.basis(w))))
    try:
        g = parse_generator(text, D.resolution(w[:F.n]))
    except (ValueError, KeyError) as err:
        raise UsageError(f"bad generator '{text}': {err}") from None
    return [F.index(w, g.bits)]


def cmd_moduli(args, doc: dict) -> bool:
    D = load(args.file)
    op = Sl2Op(args.op)
    F = moduli.flow_data(D, op)
    lo, hi = _subcube(args, F)
    coords = tuple(i for i in range(F.n + 1) if lo[i] != hi[i])
    if args.dim >= 1 and len(coords) != args.dim + 1:
        raise UsageError(f"--dim {args.dim} needs a subcube of dimension {args.dim + 1}")
    xs, ys = _gens(args.x, D, lo, F), set(_gens(args.y, D, hi, F))
    out = []
    for xi in xs:
        x_bits = F.bits(lo, xi)
        if args.dim == 0:
            per: dict[int, list] = {}
            for order in itertools.permutations(coords):
                got = F.path_points(lo, order, xi)
                for yi in ys:
                    per.setdefault(yi, []).append((order, got.get(yi, [])))
            for yi, paths in sorted(per.items()):
                if not any(pts for _, pts in paths):
                    continue
                entry = {"x": x_bits, "y": F.bits(hi, yi), "paths": []}
                for order, pts in paths:
                    name = moduli.path_name(order, F.J, op)
                    pos = sorted((p.position, p.framing) for p in pts if p.position is not None)
                    entry["paths"].append({"path": name, "count": len(pts),
                                           "points": [[str(a), b] for a, b in pos]})
                out.append(entry)
        elif args.dim == 1:
            a, b = coords
            for yi, (s0, s1, chords, lady) in F.faces(lo, a, b, xi).items():
                if yi not in ys:
                    continue
                sides = (s0, s1)
                out.append({"x": x_bits, "y": F.bits(hi, yi), "ladybug": lady,
                            "side_counts": [len(s0), len(s1)],
                            "chords": [{"kind": c.kind,
                                        "ends": [[s, str(sides[s][i].position), sides[s][i].framing]
                                                 for s, i in c.ends]} for c in chords]})
        else:
            graph = moduli.closure_graph(F, lo, coords, xi)
            for yi, (corners, chords) in sorted(graph.items()):
                if yi not in ys:
                    continue
                loops = moduli._loops(corners, chords)
                out.append({"x": x_bits, "y": F.bits(hi, yi),
                            "loops": [[moduli.path_name(k[0], F.J, op) for k in lp] for lp in loops]})
    F.clear_faces()
    doc.update(diagram=summary(D), moduli={"op": op.value, "dim": args.dim,
                                           "subcube": ["".join(map(str, lo)), "".join(map(str, hi))],
                                           "entries": jsonable(out)})
    for e in out:
        head = f"x={_fmt(e['x'])} y={_fmt(e['y'])}"
        if args.dim == 0:
            print(head + "  " + " ".join(f"{p['path']}={p['count']}" for p in e["paths"]))
        elif args.dim == 1:
            kinds = ", ".join(c["kind"] for c in e["chords"]) or "empty"
            print(head + f"  sides {e['side_counts']}: {kinds}")
        else:
            print(head + f"  {len(e['loops'])} loop(s): " + "; ".join(" ".join(lp) for lp in e["loops"]))
    return True


def _fmt(bits) -> str:
    return "".join(map(str, bits))


def _run_suite(path: str, op: str, suite: str, max_dim: int) -> dict:
    D = load(path)
    if suite == "thinness":
        rep = moduli.check_thin_props(D, op, max_dim=max_dim)
    elif suite == "squares":
        rep = moduli.verify_squares(D, op)
    else:
        rep = moduli.verify_closure_3d(D, op)
    return rep.to_json()


def cmd_verify(args, doc: dict) -> bool:
    D = load(args.file)
    if D.n + 1 > SAFETY_BOUND + 1 and not args.force:
        raise UsageError(f"{D.n} crossings exceeds the safety bound {SAFETY_BOUND} (use --force)")
    suites = SUITES if args.suite == "all" else (args.suite,)
    tasks = [(op.value, s) for op in _ops(args.op) for s in suites]
    workers = threads(args)
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futs = [pool.submit(_run_suite, args.file, op, s, args.max_dim) for op, s in tasks]
            results = [f.result() for f in futs]
    else:
        results = [_run_suite(args.file, op, s, args.max_dim) for op, s in tasks]
    doc.update(diagram=summary(D), verify=results)
    for r in results:
        _print_json_report(r)
    return all(r["pass"] for r in results)


def cmd_corpus(args, doc: dict) -> bool:
    if args.max_crossings > SAFETY_BOUND:
        raise UsageError(f"--max-crossings above the safety bound {SAFETY_BOUND}")
    corpus = generate_corpus(args.max_crossings, args.count, args.seed, args.out)
    ok = True
    for D in corpus.values():
        ok &= verify_d_squared(build_ckh(D))
    doc["corpus"] = {"out": str(args.out), "files": sorted(f"{k}.akh" for k in corpus), "d_squared_zero": ok}
    print(f"wrote {len(corpus)} diagrams to {args.out}")
    return ok


def cmd_reidemeister(args, doc: dict) -> bool:
    A, B = load(args.file1), load(args.file2)
    ta, tb = homology(build_ckh(A)), homology(build_ckh(B))
    same = ta == tb
    doc.update(first=summary(A), second=summary(B), homology=[ta.rows(), tb.rows()],
               verify=[{"suite": "reidemeister", "pass": same}])
    print(f"{A.name} vs {B.name}: homology tables {'agree' if same else 'differ'}")
    if not same:
        print(format_table(ta))
        print("  --")
        print(format_table(tb))
    return same


def _print_report(rep: Report) -> None:
    _print_json_report(rep.to_json())


def _print_json_report(r: dict) -> None:
    status = "pass" if r["pass"] else "FAIL"
    print(f"[{status}] {r['suite']}: {r['checked']} checks")
    if not r["pass"]:
        print("  counterexample: " + json.dumps(r.get("counterexample"), sort_keys=True))


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="akh", description="Annular Khovanov homology and its sl2 action.")
    p.add_argument("--json", metavar="PATH", help="also write a JSON report")
    p.add_argument("--threads", type=int, help="worker processes (default: $AKH_THREADS or 1)")
    p.add_argument("--timing", action="store_true", help="include wall time in the JSON report")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("compute", help="homology of the annular complex")
    s.add_argument("file")
    s.set_defaults(func=cmd_compute)

    s = sub.add_parser("sl2", help="chain-level sl2 checks")
    s.add_argument("file")
    s.add_argument("--op", choices=("E", "F", "H", "all"), default="all")
    s.add_argument("--verify", choices=("all", "relations", "chainmap", "theta", "weight"), default="all")
    s.set_defaults(func=cmd_sl2)

    s = sub.add_parser("cone", help="mapping cone of E, F or H")
    s.add_argument("file")
    s.add_argument("--op", choices=("E", "F", "H", "all"), required=True)
    s.add_argument("--homology", action="store_true")
    s.add_argument("--les", action="store_true", help="check the long exact sequence ranks")
    s.set_defaults(func=cmd_cone)

    s = sub.add_parser("moduli", help="framed moduli data of Cone(J)")
    s.add_argument("file")
    s.add_argument("--op", choices=("E", "F", "H"), required=True)
    s.add_argument("--dim", type=int, choices=(0, 1, 2), default=0)
    s.add_argument("--subcube", metavar="U..V")
    s.add_argument("--x", metavar="GEN")
    s.add_argument("--y", metavar="GEN")
    s.set_defaults(func=cmd_moduli)

    s = sub.add_parser("verify", help="thinness, square and closure suites")
    s.add_argument("file")
    s.add_argument("--op", choices=("E", "F", "H", "all"), required=True)
    s.add_argument("--suite", choices=SUITES + ("all",), default="all")
    s.add_argument("--max-dim", type=int, default=4)
    s.add_argument("--force", action="store_true", help="ignore the crossing safety bound")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("corpus", help="write the named and random test diagrams")
    s.add_argument("--max-crossings", type=int, default=8)
    s.add_argument("--count", type=int, default=50)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_corpus)

    s = sub.add_parser("reidemeister", help="compare homology tables of two diagrams")
    s.add_argument("file1")
    s.add_argument("file2")
    s.set_defaults(func=cmd_reidemeister)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    doc: dict = {"command": args.command}
    start = time.perf_counter()
    try:
        threads(args)
        ok = args.func(args, doc)
    except (DiagramError, UsageError) as err:
        print(f"akh: error: {err}", file=sys.stderr)
        return EXIT_USAGE
    doc["pass"] = bool(ok)
    if args.timing:
        doc["seconds"] = round(time.perf_counter() - start, 3)
    if args.json:
        Path(args.json).write_text(json.dumps(jsonable(doc), indent=2, sort_keys=True) + "\n")
    return EXIT_OK if ok else EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
