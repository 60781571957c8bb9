"""Canonical JSON for groups, maps, complexes, butterflies and sequences.

Matrix entries are decimal strings (bit-exact at any size); keys are sorted
on output, so emit(parse(emit(x))) == emit(x) byte for byte.  Documents are
tagged with a "kind" field at the top level; nested objects carry no tag
because the schema fixes them.
"""

from __future__ import annotations

import json

from .intlinalg import IntMatrix
from .fgab import FgAbGroup, FgAbMap
from .twocomplex import TwoTermComplex
from .butterfly import Butterfly
from .exactness import ButterflyShortSeq, ZeroWitness


class SchemaError(ValueError):
    """Malformed document; distinct from mathematical refusals."""


class RefusalError(ValueError):
    """Mathematically well-formed input that violates an axiom or precondition."""


KINDS = ("group", "map", "complex", "butterfly", "sequence")


# -- encoding ----------------------------------------------------------------

def matrix_to_json(m: IntMatrix) -> list:
    return [[str(e) for e in m.row(i)] for i in range(m.rows)]


def group_to_json(g: FgAbGroup) -> dict:
    return {"ngens": g.ngens, "relations": matrix_to_json(g.relations)}


def map_to_json(f: FgAbMap) -> dict:
    return {"src": group_to_json(f.src), "dst": group_to_json(f.dst),
            "matrix": matrix_to_json(f.matrix)}


def complex_to_json(e: TwoTermComplex) -> dict:
    return {"deg-1": group_to_json(e.deg_m1), "deg0": group_to_json(e.deg_0),
            "d": matrix_to_json(e.d.matrix)}


def butterfly_to_json(b: Butterfly) -> dict:
    return {"src": complex_to_json(b.src), "dst": complex_to_json(b.dst),
            "carrier": group_to_json(b.carrier),
            "i": matrix_to_json(b.i.matrix), "j": matrix_to_json(b.j.matrix),
            "p": matrix_to_json(b.p.matrix), "q": matrix_to_json(b.q.matrix)}


def sequence_to_json(s: ButterflyShortSeq) -> dict:
    return {"E": complex_to_json(s.e), "F": complex_to_json(s.f),
            "G": complex_to_json(s.g),
            "Y": butterfly_to_json(s.y), "Z": butterfly_to_json(s.z),
            "phi": matrix_to_json(s.w.phi.matrix)}


def document(kind: str, payload: dict) -> dict:
    if kind not in KINDS:
        raise SchemaError(f"unknown kind {kind!r}")
    return {"kind": kind, **payload}


def emit(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


# -- decoding ----------------------------------------------------------------

def _expect(cond: bool, msg: str):
    if not cond:
        raise SchemaError(msg)


def matrix_from_json(data, rows: int, cols: int) -> IntMatrix:
    _expect(isinstance(data, list), "matrix must be a list of rows")
    _expect(len(data) == rows, f"matrix has {len(data)} rows, expected {rows}")
    flat = []
    for r in data:
        _expect(isinstance(r, list) and len(r) == cols,
                f"matrix row has wrong length (expected {cols})")
        for e in r:
            _expect(isinstance(e, (str, int)), "matrix entries must be decimal strings")
            try:
                flat.append(int(e))
            except ValueError:
                raise SchemaError(f"bad integer literal {e!r}")
    return IntMatrix(rows, cols, flat)


def group_from_json(data) -> FgAbGroup:
    _expect(isinstance(data, dict), "group must be an object")
    _expect(isinstance(data.get("ngens"), int) and data["ngens"] >= 0,
            "group.ngens must be a nonnegative integer")
    rel = data.get("relations")
    _expect(isinstance(rel, list), "group.relations must be a matrix")
    ncols = len(rel[0]) if rel else 0
    return FgAbGroup(data["ngens"], matrix_from_json(rel, data["ngens"], ncols))


def map_from_json(data) -> FgAbMap:
    _expect(isinstance(data, dict), "map must be an object")
    src = group_from_json(data.get("src"))
    dst = group_from_json(data.get("dst"))
    mat = matrix_from_json(data.get("matrix"), dst.ngens, src.ngens)
    try:
        return FgAbMap(src, dst, mat)
    except ValueError as exc:
        # shape is fine but the matrix does not descend: a refusal, not a schema error
        raise RefusalError(str(exc))


def complex_from_json(data) -> TwoTermComplex:
    _expect(isinstance(data, dict), "complex must be an object")
    m1 = group_from_json(data.get("deg-1"))
    g0 = group_from_json(data.get("deg0"))
    d = matrix_from_json(data.get("d"), g0.ngens, m1.ngens)
    try:
        return TwoTermComplex(m1, g0, FgAbMap(m1, g0, d))
    except ValueError as exc:
        raise RefusalError(str(exc))


def butterfly_from_json(data) -> Butterfly:
    _expect(isinstance(data, dict), "butterfly must be an object")
    src = complex_from_json(data.get("src"))
    dst = complex_from_json(data.get("dst"))
    car = group_from_json(data.get("carrier"))
    try:
        i = FgAbMap(dst.deg_m1, car, matrix_from_json(data.get("i"), car.ngens, dst.deg_m1.ngens))
        j = FgAbMap(src.deg_m1, car, matrix_from_json(data.get("j"), car.ngens, src.deg_m1.ngens))
        p = FgAbMap(car, dst.deg_0, matrix_from_json(data.get("p"), dst.deg_0.ngens, car.ngens))
        q = FgAbMap(car, src.deg_0, matrix_from_json(data.get("q"), src.deg_0.ngens, car.ngens))
        return Butterfly(src, dst, car, i, j, p, q)
    except SchemaError:
        raise
    except ValueError as exc:
        # ill-defined wing matrices are a mathematical refusal, not a schema error
        raise RefusalError(str(exc))


def sequence_from_json(data) -> ButterflyShortSeq:
    _expect(isinstance(data, dict), "sequence must be an object")
    e = complex_from_json(data.get("E"))
    f = complex_from_json(data.get("F"))
    g = complex_from_json(data.get("G"))
    y = butterfly_from_json(data.get("Y"))
    z = butterfly_from_json(data.get("Z"))
    phi = matrix_from_json(data.get("phi"), z.carrier.ngens, y.carrier.ngens)
    try:
        w = ZeroWitness(y, z, FgAbMap(y.carrier, z.carrier, phi))
        return ButterflyShortSeq(e, f, g, y, z, w)
    except ValueError as exc:
        raise RefusalError(str(exc))


PARSERS = {
    "group": group_from_json,
    "map": map_from_json,
    "complex": complex_from_json,
    "butterfly": butterfly_from_json,
    "sequence": sequence_from_json,
}


def parse_document(text: str):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}")
    _expect(isinstance(data, dict), "document must be an object")
    kind = data.get("kind")
    _expect(kind in KINDS, f"unknown document kind {kind!r}")
    return kind, PARSERS[kind](data)


def invariants_to_json(g: FgAbGroup) -> dict:
    rank, tors = g.invariant_factors()
    return {"rank": rank, "torsion": [str(d) for d in tors]}


def parse_group_shorthand(text: str) -> FgAbGroup:
    """Invariant-factor shorthand: "Z/2+Z/4+Z", "2", "Z", "0"."""
    text = text.strip()
    if text == "0":
        return FgAbGroup.trivial()
    rank = 0
    tors = []
    for tok in text.split("+"):
        tok = tok.strip()
        if tok == "Z":
            rank += 1
        elif tok.startswith("Z/"):
            tors.append(_positive_int(tok[2:]))
        else:
            tors.append(_positive_int(tok))
    return FgAbGroup.from_invariants(rank, tors)


def _positive_int(s: str) -> int:
    try:
        n = int(s)
    except ValueError:
        raise SchemaError(f"bad group shorthand token {s!r}")
    if n < 2:
        raise SchemaError(f"torsion factor must be >= 2, got {n}")
    return n
