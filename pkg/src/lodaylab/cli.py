"""Command-line front end.

Exit codes: 0 when the computation succeeded or the check passed, 1 when a
mathematical check failed (the residual is printed), 2 for malformed input.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import io
from .cohomology import bidegree_correspondence, loday_cohomology, loday_coboundary, lod_infty_coboundary
from .coalgebra import coproduct_word
from .deformation import FormalDeformation, deformation_check, gauge_action, obstruction_class
from .grading import Degree, InputError, LodayError
from .homotopy import minimal_model, quasi_inverse
from .jacobi import AlphaAntisymOp, check_jacobi_structure, gm_bracket
from .multilinear import MapSequence, MultiMap, bracket, sequence_bracket
from .structures import (
    CheckFailed,
    check_lod_infinity,
    check_loday,
    check_morphism,
    conjugate,
    invert_morphism,
    loday_as_sequence,
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise InputError(message)


def _fmt_vec(vec: dict) -> str:
    if not vec:
        return "0"
    parts = []
    for y in sorted(vec):
        c = Fraction(vec[y])
        mag = "" if abs(c) == 1 else f"{abs(c)} "
        parts.append(("- " if c < 0 else "+ ") + mag + y)
    s = " ".join(parts)
    return s[2:] if s.startswith("+ ") else s


def _fmt_map(m: MultiMap) -> list[str]:
    if m.arity_index < 0:
        return [_fmt_vec(m.table.get((), {}))]
    return [f"({', '.join(args)}) -> {_fmt_vec(val)}" for args, val in sorted(m.table.items())]


class Session:
    def __init__(self, args):
        self.format = args.format
        self.output = getattr(args, "output", None)

    def emit(self, report: dict, text_lines: list[str], document: dict | None = None) -> None:
        if document is not None and self.output:
            Path(self.output).write_text(io.dumps(document))
        if self.format == "json":
            payload = dict(report)
            if document is not None and not self.output:
                payload["result"] = document
            print(json.dumps(payload, sort_keys=True, indent=2, default=str))
        else:
            print("\n".join(text_lines))
            if document is not None and not self.output:
                print(io.dumps(document), end="")


# --- loaders --------------------------------------------------------------------------------


def _load(path, *keys):
    doc = io.load(path)
    for k in keys:
        if k in doc:
            return doc[k]
    raise InputError(f"{path}: expected one of {', '.join(keys)}")


def _structure(path) -> MapSequence:
    doc = io.load(path)
    if "structure" in doc:
        return doc["structure"]
    if "map" in doc:
        return loday_as_sequence(doc["map"])
    raise InputError(f"{path}: expected a 'structure' (or a Loday 'map')")


def _bracket_operand(path):
    doc = io.load(path)
    if "structure" in doc:
        return doc["structure"]
    if "map" in doc:
        return doc["map"]
    raise InputError(f"{path}: expected a 'map' or a 'structure'")


def _operator(path) -> AlphaAntisymOp:
    doc = io.load(path)
    if "algebra" not in doc or "map" not in doc:
        raise InputError(f"{path}: an operator file needs the algebra ('product', 'unit', 'alpha') and a 'map'")
    return AlphaAntisymOp(doc["algebra"], doc["map"])


def _deformation(path) -> FormalDeformation:
    doc = io.load(path)
    base = doc.get("map", doc.get("structure"))
    if base is None:
        raise InputError(f"{path}: a deformation needs a base 'map' or 'structure'")
    return FormalDeformation(base, doc.get("terms", []))


def _chi(path, like):
    raw = io.read_json(path)
    space = io.space_from_json(raw.get("space"))
    items = raw.get("chi")
    if not isinstance(items, list):
        raise InputError(f"{path}: expected a list 'chi'")
    if isinstance(like, MultiMap):
        return [io.multimap_from_json(x, space) if x is not None else None for x in items]
    return [io.sequence_from_json(x, space) if x is not None else None for x in items]


def _doc_of(x) -> dict:
    return io.map_document(x) if isinstance(x, MultiMap) else io.structure_document(x)


def _weight_box(text: str, n: int) -> list[Degree]:
    """'-1:1' (n = 1) or '-1:1,0:2' (one range per component) -> all degrees in the box."""
    ranges = []
    for part in text.split(","):
        lo, _, hi = part.partition(":")
        try:
            lo_i = int(lo)
            hi_i = int(hi) if hi else lo_i
        except ValueError as exc:
            raise InputError(f"bad weight box component {part!r}") from exc
        ranges.append(range(lo_i, hi_i + 1))
    if len(ranges) != n:
        raise InputError(f"weight box needs {n} ranges")
    out = [()]
    for r in ranges:
        out = [w + (k,) for w in out for k in r]
    return [Degree(w) for w in out]


# --- commands -------------------------------------------------------------------------------


def cmd_check_loday(args, s: Session) -> int:
    pi = _load(args.file, "map")
    rep = check_loday(pi)
    lines = ["Loday identity holds" if rep.ok else "Loday identity fails"]
    for triple, res in rep.failures[:10]:
        lines.append(f"  residual at ({', '.join(triple)}): {_fmt_vec(res)}")
    report = {"ok": rep.ok, "failures": [{"triple": list(t), "residual": {k: str(v) for k, v in r.items()}}
                                          for t, r in rep.failures]}
    s.emit(report, lines)
    return 0 if rep.ok else 1


def cmd_check_lod_infinity(args, s: Session) -> int:
    seq = _structure(args.file)
    rep = check_lod_infinity(seq, args.max_arity)
    lines = [f"Lod-infinity identities hold up to arity {args.max_arity}" if rep.ok
             else f"identity p = {rep.failing_p} fails"]
    report = {"ok": rep.ok, "max_arity": args.max_arity, "failing_p": rep.failing_p}
    if rep.residual is not None:
        lines += ["  " + x for x in _fmt_map(rep.residual)[:10]]
        report["residual"] = io.multimap_to_json(rep.residual)
    s.emit(report, lines)
    return 0 if rep.ok else 1


def cmd_bracket(args, s: Session) -> int:
    a, b = _bracket_operand(args.a), _bracket_operand(args.b)
    if type(a) is not type(b):
        raise InputError("both operands must be maps or both sequences")
    out = bracket(a, b, args.max_position) if isinstance(a, MapSequence) else bracket(a, b)
    s.emit({"zero": out.is_zero()}, ["bracket computed"], _doc_of(out))
    return 0


def cmd_sequence_bracket(args, s: Session) -> int:
    a, b = _structure(args.a), _structure(args.b)
    out = sequence_bracket(a, b, args.max_position)
    s.emit({"zero": out.is_zero()}, ["sequence bracket computed"], _doc_of(out))
    return 0


def cmd_coboundary(args, s: Session) -> int:
    pi = _bracket_operand(args.pi)
    b = _bracket_operand(args.cochain)
    if isinstance(pi, MultiMap) and isinstance(b, MultiMap):
        out = loday_coboundary(pi, b)
    elif isinstance(pi, MapSequence) and isinstance(b, MapSequence):
        out = lod_infty_coboundary(pi, b, args.max_position)
    else:
        raise InputError("structure and cochain must both be maps or both sequences")
    s.emit({"zero": out.is_zero()}, ["coboundary computed"], _doc_of(out))
    return 0


def cmd_cohomology(args, s: Session) -> int:
    pi = _load(args.file, "map")
    weights = _weight_box(args.weight_box, pi.space.n)
    if args.p_ary:
        ok, rows = bidegree_correspondence(pi, args.p_ary, weights, args.arity_max)
        lines = [f"{'plain':>14} {'shifted':>14} {'H':>4} {'H':>4}"]
        lines += [f"{str((list(p[0]), p[1])):>14} {str((list(q[0]), q[1])):>14} {hp:>4} {hq:>4}" for p, q, hp, hq in rows]
        lines.append("tables agree" if ok else "tables differ")
        report = {"ok": ok, "rows": [{"plain": [list(p[0]), p[1]], "shifted": [list(q[0]), q[1]],
                                      "h_plain": hp, "h_shifted": hq} for p, q, hp, hq in rows]}
        s.emit(report, lines)
        return 0 if ok else 1
    rep = loday_cohomology(pi, weights, args.arity_min, args.arity_max)
    lines = [f"{'weight':>10} {'a':>3} {'dim C':>6} {'dim Z':>6} {'dim B':>6} {'dim H':>6}"]
    rows = []
    for c in rep.cells:
        w, a = c.label
        lines.append(f"{str(list(w)):>10} {a:>3} {c.cochains:>6} {c.cocycles:>6} {c.coboundaries:>6} {c.cohomology:>6}")
        rows.append({"weight": list(w), "arity_index": a, "cochains": c.cochains, "cocycles": c.cocycles,
                     "coboundaries": c.coboundaries, "cohomology": c.cohomology})
    s.emit({"cells": rows}, lines)
    return 0


def cmd_deform_check(args, s: Session) -> int:
    d = _deformation(args.file)
    if args.order is not None and args.order < d.order:
        d = FormalDeformation(d.base, d.terms[: args.order])
    rep = deformation_check(d, args.max_position)
    lines = [f"deformation conditions hold to order {d.order}" if rep.ok
             else f"order {rep.failing_order} condition fails"]
    s.emit({"ok": rep.ok, "order": d.order, "failing_order": rep.failing_order}, lines)
    return 0 if rep.ok else 1


def cmd_obstruction(args, s: Session) -> int:
    d = _deformation(args.file)
    if args.order is not None and args.order < d.order:
        d = FormalDeformation(d.base, d.terms[: args.order])
    rep = obstruction_class(d, args.max_position)
    lines = [f"E_{d.order + 1} is a cocycle: {rep.cocycle}",
             "extendable" if rep.extendable else "obstructed: E is not a coboundary"]
    doc = _doc_of(rep.next_term) if rep.extendable and rep.next_term is not None else None
    s.emit({"cocycle": rep.cocycle, "extendable": rep.extendable}, lines, doc)
    return 0 if rep.extendable else 1


def cmd_gauge(args, s: Session) -> int:
    d = _deformation(args.file)
    chi = _chi(args.chi, d.base)
    out = gauge_action(d, chi, args.order, args.max_position)
    s.emit({"order": out.order}, [f"gauge transform computed to order {out.order}"], io.deformation_document(out))
    return 0


def cmd_morphism_check(args, s: Session) -> int:
    f = _load(args.morphism, "morphism")
    pi, pi_t = _structure(args.source), _structure(args.target)
    rep = check_morphism(f, pi, pi_t, args.max_arity)
    lines = [f"morphism condition holds up to arity {args.max_arity}" if rep.ok
             else f"condition fails at p = {rep.failing_p} on ({', '.join(rep.word)})"]
    s.emit({"ok": rep.ok, "failing_p": rep.failing_p, "word": list(rep.word) if rep.word else None}, lines)
    return 0 if rep.ok else 1


def cmd_morphism_invert(args, s: Session) -> int:
    f = _load(args.morphism, "morphism")
    g = invert_morphism(f, args.max_arity)
    s.emit({"max_arity": args.max_arity}, [f"inverse computed up to arity {args.max_arity}"], io.morphism_to_json(g))
    return 0


def cmd_conjugate(args, s: Session) -> int:
    pi = _structure(args.structure)
    f = _load(args.morphism, "morphism")
    out = conjugate(pi, f, args.max_arity)
    s.emit({"max_arity": args.max_arity}, ["conjugated structure computed"], io.structure_document(out))
    return 0


def cmd_minimal_model(args, s: Session) -> int:
    pi = _structure(args.file)
    mm = minimal_model(pi, args.max_arity)
    doc = {
        "max_arity": mm.max_arity,
        "corrections": {str(k): v for k, v in mm.corrections.items()},
        "minimal": io.structure_document(mm.minimal),
        "contractible": io.structure_document(mm.contractible),
        "iso": io.morphism_to_json(mm.iso),
    }
    lines = [f"minimal part: dim {mm.minimal.space.dim}, contractible part: dim {mm.contractible.space.dim}",
             f"certified up to arity {mm.max_arity}"]
    s.emit({"minimal_dim": mm.minimal.space.dim, "contractible_dim": mm.contractible.space.dim}, lines, doc)
    return 0


def cmd_quasi_inverse(args, s: Session) -> int:
    f = _load(args.morphism, "morphism")
    pi, pi_t = _structure(args.source), _structure(args.target)
    qi = quasi_inverse(f, pi, pi_t, args.max_arity)
    rep = check_morphism(qi.g, pi_t, pi, args.max_arity)
    if not rep.ok:
        raise CheckFailed(f"quasi-inverse fails the morphism condition at p = {rep.failing_p}")
    s.emit({"max_arity": args.max_arity}, ["quasi-inverse computed and checked"], io.morphism_to_json(qi.g))
    return 0


def cmd_gm_bracket(args, s: Session) -> int:
    a, b = _operator(args.a), _operator(args.b)
    out = gm_bracket(a, b)
    s.emit({"zero": out.is_zero()}, ["Grabowski-Marmo bracket computed"], io.operator_document(out))
    return 0


def cmd_check_jacobi(args, s: Session) -> int:
    pi = _operator(args.file)
    rep = check_jacobi_structure(pi, args.kind)
    lines = [f"{args.kind} structure" if rep.ok else f"not a {args.kind} structure"]
    lines += [f"  {what} fails at ({', '.join(where)})" for what, where in rep.failures[:10]]
    report = {"ok": rep.ok, "kind": args.kind, "square_zero": rep.bracket_squares_to_zero,
              "first_order": rep.first_order, "leibniz": rep.leibniz}
    s.emit(report, lines)
    return 0 if rep.ok else 1


def cmd_coproduct(args, s: Session) -> int:
    space = _load(args.space, "space")
    for x in args.word:
        if x not in space:
            raise InputError(f"unknown basis element {x!r}")
    terms = coproduct_word(space, args.word, not args.no_koszul)
    lines = []
    rows = []
    for (left, right), c in sorted(terms.items()):
        mag = "" if abs(c) == 1 else f"{abs(c)} "
        lines.append(f"{'-' if c < 0 else '+'} {mag}{' '.join(left)} ⊗ {' '.join(right)}")
        rows.append({"left": list(left), "right": list(right), "coeff": str(c)})
    s.emit({"terms": rows}, lines)
    return 0


def cmd_fixtures(args, s: Session) -> int:
    from .fixtures import write_fixtures

    paths = write_fixtures(args.dir)
    s.emit({"written": [str(p) for p in paths]}, [str(p) for p in paths])
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="text")
    common.add_argument("-o", "--output", help="write the resulting document here")

    p = _Parser(prog="lodaylab", description="Exact computations with graded Loday and Lod-infinity algebras.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=fn)
        return sp

    sp = add("check-loday", cmd_check_loday, "check the Jacobi identity of a bilinear bracket")
    sp.add_argument("file")
    sp = add("check-lod-infinity", cmd_check_lod_infinity, "check the Lod-infinity identities")
    sp.add_argument("file")
    sp.add_argument("--max-arity", type=int, default=4)
    sp = add("bracket", cmd_bracket, "stem bracket of two maps (or sequence bracket of two structures)")
    sp.add_argument("a")
    sp.add_argument("b")
    sp.add_argument("--max-position", type=int, default=None)
    sp = add("sequence-bracket", cmd_sequence_bracket, "bracket of two map sequences")
    sp.add_argument("a")
    sp.add_argument("b")
    sp.add_argument("--max-position", type=int, default=None)
    sp = add("coboundary", cmd_coboundary, "apply the coboundary of a structure to a cochain")
    sp.add_argument("pi")
    sp.add_argument("cochain")
    sp.add_argument("--max-position", type=int, default=None)
    sp = add("cohomology", cmd_cohomology, "cohomology table over a window")
    sp.add_argument("file")
    sp.add_argument("--weight-box", default="0", help="per-component ranges, e.g. '-1:1' or '-1:1,0:0'")
    sp.add_argument("--arity-min", type=int, default=-1)
    sp.add_argument("--arity-max", type=int, default=2)
    sp.add_argument("--p-ary", type=int, default=None, help="compare the p-ary plain and shifted tables")
    for name, fn, help_ in (("deform-check", cmd_deform_check, "check a formal deformation"),
                            ("obstruction", cmd_obstruction, "obstruction to extending a deformation")):
        sp = add(name, fn, help_)
        sp.add_argument("file")
        sp.add_argument("--order", type=int, default=None)
        sp.add_argument("--max-position", type=int, default=4)
    sp = add("gauge", cmd_gauge, "apply exp(ad chi) to a deformation")
    sp.add_argument("file")
    sp.add_argument("--chi", required=True)
    sp.add_argument("--order", type=int, default=None)
    sp.add_argument("--max-position", type=int, default=4)
    sp = add("morphism-check", cmd_morphism_check, "check the morphism condition")
    sp.add_argument("morphism")
    sp.add_argument("source")
    sp.add_argument("target")
    sp.add_argument("--max-arity", type=int, default=4)
    sp = add("morphism-invert", cmd_morphism_invert, "invert a morphism with invertible linear part")
    sp.add_argument("morphism")
    sp.add_argument("--max-arity", type=int, default=4)
    sp = add("conjugate", cmd_conjugate, "conjugate a structure by a morphism with f_1 = id")
    sp.add_argument("structure")
    sp.add_argument("morphism")
    sp.add_argument("--max-arity", type=int, default=4)
    sp = add("minimal-model", cmd_minimal_model, "split off a contractible part")
    sp.add_argument("file")
    sp.add_argument("--max-arity", type=int, default=4)
    sp = add("quasi-inverse", cmd_quasi_inverse, "quasi-inverse of a quasi-isomorphism")
    sp.add_argument("morphism")
    sp.add_argument("source")
    sp.add_argument("target")
    sp.add_argument("--max-arity", type=int, default=3)
    sp = add("gm-bracket", cmd_gm_bracket, "Grabowski-Marmo bracket of two operators")
    sp.add_argument("a")
    sp.add_argument("b")
    sp = add("check-jacobi", cmd_check_jacobi, "detect graded Jacobi or Poisson structures")
    sp.add_argument("file")
    sp.add_argument("--kind", choices=("jacobi", "poisson"), default="jacobi")
    sp = add("coproduct", cmd_coproduct, "coproduct of a basis word")
    sp.add_argument("space")
    sp.add_argument("word", nargs="+")
    sp.add_argument("--no-koszul", action="store_true", help="drop the Koszul sign (for demonstrations)")
    sp = add("fixtures", cmd_fixtures, "write the bundled fixture files")
    sp.add_argument("--dir", default="fixtures")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args, Session(args))
    except CheckFailed as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return 1
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except LodayError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def run(argv=None) -> int:
    return main(argv)


if __name__ == "__main__":
    sys.exit(main())
