"""Canonical JSON for spaces, maps, sequences, morphisms and algebras.

A document is a JSON object carrying a ``space`` (or ``source``/``target``
for morphisms) plus one payload: ``map``, ``structure``, ``morphism``,
``product`` (algebras, with ``unit`` and ``alpha``) or ``terms``
(deformations). Coefficients are strings ``"p"`` or ``"p/q"``; tuple keys are
sorted, so writing a parsed canonical file reproduces it byte for byte.
"""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from .grading import Degree, GradedSpace, InputError
from .multilinear import MapSequence, MultiMap
from .structures import Morphism


def fraction_to_json(c) -> str:
    return str(Fraction(c))


def fraction_from_json(s) -> Fraction:
    if isinstance(s, bool) or not isinstance(s, (str, int)):
        raise InputError(f"coefficient {s!r} must be a string 'p' or 'p/q'")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad coefficient {s!r}") from exc


def _degree(raw, n: int, what: str) -> Degree:
    if not isinstance(raw, list) or len(raw) != n or not all(isinstance(x, int) and not isinstance(x, bool) for x in raw):
        raise InputError(f"{what} must be a list of {n} integers")
    return Degree(raw)


def space_to_json(space: GradedSpace) -> dict:
    return {"n": space.n, "basis": [{"name": x, "degree": list(d)} for x, d in space.basis]}


def space_from_json(raw) -> GradedSpace:
    if not isinstance(raw, dict) or "n" not in raw or "basis" not in raw:
        raise InputError("a space needs 'n' and 'basis'")
    n = raw["n"]
    if not isinstance(n, int) or n < 1:
        raise InputError("n must be a positive integer")
    basis = []
    for b in raw["basis"]:
        if not isinstance(b, dict) or not isinstance(b.get("name"), str):
            raise InputError("basis entries need a string 'name'")
        basis.append((b["name"], _degree(b.get("degree"), n, f"degree of {b['name']}")))
    return GradedSpace(n, basis)


def multimap_to_json(m: MultiMap) -> dict:
    entries = []
    for args in sorted(m.table):
        val = m.table[args]
        entries.append({
            "args": list(args),
            "value": [{"basis": y, "coeff": fraction_to_json(val[y])} for y in sorted(val)],
        })
    return {"arity_index": m.arity_index, "entries": entries, "weight": list(m.weight)}


def multimap_from_json(raw, space: GradedSpace, codomain: GradedSpace | None = None) -> MultiMap:
    if not isinstance(raw, dict):
        raise InputError("a map must be a JSON object")
    for key in ("weight", "arity_index", "entries"):
        if key not in raw:
            raise InputError(f"map is missing {key!r}")
    weight = _degree(raw["weight"], space.n, "weight")
    a = raw["arity_index"]
    if not isinstance(a, int):
        raise InputError("arity_index must be an integer")
    table: dict = {}
    for e in raw["entries"]:
        args = tuple(e.get("args", []))
        if len(args) != a + 1 and not (a < 0 and args == ()):
            raise InputError(f"entry {list(args)} does not have {a + 1} arguments")
        for x in args:
            if x not in space:
                raise InputError(f"unknown basis element {x!r}")
        row = table.setdefault(args, {})
        for t in e.get("value", []):
            y = t.get("basis")
            if y not in (codomain or space):
                raise InputError(f"unknown basis element {y!r}")
            row[y] = row.get(y, 0) + fraction_from_json(t.get("coeff"))
    return MultiMap(space, a, weight, table, codomain=codomain)


def sequence_to_json(seq: MapSequence) -> dict:
    return {
        "base_weight": list(seq.base_weight),
        "maps": {str(p): multimap_to_json(m) for p, m in sorted(seq.maps.items())},
    }


def sequence_from_json(raw, space: GradedSpace) -> MapSequence:
    if not isinstance(raw, dict) or "base_weight" not in raw:
        raise InputError("a structure needs 'base_weight' and 'maps'")
    base = _degree(raw["base_weight"], space.n, "base_weight")
    maps = {}
    for p, m in raw.get("maps", {}).items():
        try:
            maps[int(p)] = multimap_from_json(m, space)
        except ValueError as exc:
            if isinstance(exc, InputError):
                raise
            raise InputError(f"position {p!r} is not an integer") from exc
    return MapSequence(space, base, maps)


def morphism_to_json(f: Morphism) -> dict:
    return {
        "source": space_to_json(f.source),
        "target": space_to_json(f.target),
        "morphism": {str(p): multimap_to_json(m) for p, m in sorted(f.maps.items())},
    }


def morphism_from_json(raw) -> Morphism:
    source = space_from_json(raw.get("source"))
    target = space_from_json(raw.get("target"))
    maps = {int(p): multimap_from_json(m, source, target) for p, m in raw.get("morphism", {}).items()}
    return Morphism(source, target, maps)


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def map_document(m: MultiMap) -> dict:
    return {"space": space_to_json(m.space), "map": multimap_to_json(m)}


def structure_document(seq: MapSequence) -> dict:
    return {"space": space_to_json(seq.space), "structure": sequence_to_json(seq)}


def algebra_document(alg) -> dict:
    return {
        "space": space_to_json(alg.space),
        "product": multimap_to_json(alg.product),
        "unit": alg.unit,
        "alpha": list(alg.alpha),
    }


def operator_document(op) -> dict:
    doc = algebra_document(op.algebra)
    doc["map"] = multimap_to_json(op.op)
    return doc


def deformation_document(d) -> dict:
    """Deformation of a bilinear map or of a sequence: base plus terms."""
    enc = multimap_to_json if isinstance(d.base, MultiMap) else sequence_to_json
    key = "map" if isinstance(d.base, MultiMap) else "structure"
    return {"space": space_to_json(d.base.space), key: enc(d.base), "terms": [enc(t) for t in d.terms]}


def read_json(path) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc


def parse_document(raw) -> dict:
    """Decode whichever payloads are present into library objects."""
    if not isinstance(raw, dict):
        raise InputError("a document must be a JSON object")
    out: dict = {}
    if "morphism" in raw:
        out["morphism"] = morphism_from_json(raw)
        return out
    if "space" not in raw:
        raise InputError("document has no 'space'")
    space = space_from_json(raw["space"])
    out["space"] = space
    if "map" in raw:
        out["map"] = multimap_from_json(raw["map"], space)
    if "structure" in raw:
        out["structure"] = sequence_from_json(raw["structure"], space)
    if "product" in raw:
        from .jacobi import GradedAlgebra

        alpha = _degree(raw.get("alpha", [0] * space.n), space.n, "alpha")
        out["algebra"] = GradedAlgebra(space, multimap_from_json(raw["product"], space), raw.get("unit", "1"), alpha)
    if "terms" in raw:
        if "map" in raw:
            out["terms"] = [multimap_from_json(t, space) for t in raw["terms"]]
        elif "structure" in raw:
            out["terms"] = [sequence_from_json(t, space) for t in raw["terms"]]
        else:
            raise InputError("'terms' needs a base 'map' or 'structure'")
    return out


def load(path) -> dict:
    return parse_document(read_json(path))


def canonical(raw) -> str:
    """Re-encode a document in canonical form (via the library objects)."""
    doc = parse_document(raw)
    if "morphism" in doc:
        return dumps(morphism_to_json(doc["morphism"]))
    out: dict = {"space": space_to_json(doc["space"])}
    if "map" in doc:
        out["map"] = multimap_to_json(doc["map"])
    if "structure" in doc:
        out["structure"] = sequence_to_json(doc["structure"])
    if "algebra" in doc:
        alg = doc["algebra"]
        out.update(product=multimap_to_json(alg.product), unit=alg.unit, alpha=list(alg.alpha))
    if "terms" in doc:
        enc = multimap_to_json if "map" in doc else sequence_to_json
        out["terms"] = [enc(t) for t in doc["terms"]]
    return dumps(out)
