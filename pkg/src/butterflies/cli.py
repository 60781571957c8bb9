"""Command-line surface: validate, compute and compare constructions on
JSON-described inputs.

Exit codes: 0 success, 1 mathematical refusal (axiom or precondition
violated), 2 I/O or schema error.
"""

from __future__ import annotations

import argparse
import random
import sys

from .twocomplex import random_complex
from .butterfly import (
    validate, compose, two_morphism_find, homology_action, is_invertible,
    classify, pip, copip, kernel_b, cokernel_b, image_b, coimage_b,
    random_butterfly,
)
from .twocomplex import homology
from .derived import biext_groups
from .exactness import is_exact, les, random_exact_seq
from . import jsonio
from .jsonio import SchemaError, RefusalError
from . import selftest


def _read_doc(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}")
    return jsonio.parse_document(text)


def _read_kind(path: str, kind: str):
    got, obj = _read_doc(path)
    if got != kind:
        raise SchemaError(f"{path}: expected a {kind} document, got {got}")
    return obj


def _write_or_print(doc: dict, out_path):
    text = jsonio.emit(doc)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_validate(args) -> int:
    kind, obj = _read_doc(args.path)
    if kind == "butterfly":
        bad = validate(obj)
        if bad:
            print(bad[0])
            return 1
    elif kind == "sequence":
        for name, bf in (("Y", obj.y), ("Z", obj.z)):
            bad = validate(bf)
            if bad:
                print(f"{name}: {bad[0]}")
                return 1
        # the witness conditions themselves were checked while parsing
    print("ok")
    return 0


def cmd_compose(args) -> int:
    y = _read_kind(args.first, "butterfly")
    z = _read_kind(args.second, "butterfly")
    if y.dst != z.src:
        print("endpoint mismatch: first.dst != second.src", file=sys.stderr)
        return 1
    w = compose(z, y)
    _write_or_print(jsonio.document("butterfly", jsonio.butterfly_to_json(w)), args.out)
    return 0


def cmd_iso2(args) -> int:
    a = _read_kind(args.first, "butterfly")
    b = _read_kind(args.second, "butterfly")
    if (a.src, a.dst) != (b.src, b.dst):
        print("endpoint mismatch: butterflies are not parallel", file=sys.stderr)
        return 1
    tm = two_morphism_find(a, b)
    if tm is None:
        print("none")
    else:
        print("isomorphic")
        _write_or_print({"matrix": jsonio.matrix_to_json(tm.m.matrix)}, args.out)
    return 0


def cmd_report(args) -> int:
    y = _read_kind(args.path, "butterfly")
    bad = validate(y)
    if bad:
        print(bad[0], file=sys.stderr)
        return 1
    hm1, h0 = homology_action(y)
    flags = classify(y)
    kcx, _ = kernel_b(y)
    ccx, _ = cokernel_b(y)
    icx, _ = image_b(y)
    ocx, _ = coimage_b(y)

    def cx_inv(cx):
        h = homology(cx)
        return {"deg-1": jsonio.invariants_to_json(cx.deg_m1),
                "deg0": jsonio.invariants_to_json(cx.deg_0),
                "h-1": jsonio.invariants_to_json(h.hm1),
                "h0": jsonio.invariants_to_json(h.h0)}

    doc = {
        "homology_action": {"h-1": jsonio.matrix_to_json(hm1.matrix),
                            "h0": jsonio.matrix_to_json(h0.matrix)},
        "invertible": is_invertible(y),
        "mono": flags.mono, "epi": flags.epi,
        "faithful": flags.faithful, "cofaithful": flags.cofaithful,
        "pip": jsonio.invariants_to_json(pip(y)),
        "copip": jsonio.invariants_to_json(copip(y)),
        "kernel": cx_inv(kcx), "cokernel": cx_inv(ccx),
        "image": cx_inv(icx), "coimage": cx_inv(ocx),
    }
    _write_or_print(doc, args.out)
    return 0


def cmd_les(args) -> int:
    s = _read_kind(args.path, "sequence")
    if not is_exact(s):
        print("sequence is not two-sided exact; refusing", file=sys.stderr)
        return 1
    l = les(s)
    doc = {
        "groups": [jsonio.invariants_to_json(g) for g in l.groups],
        "maps": [jsonio.matrix_to_json(m.matrix) for m in l.maps],
        "exact": list(l.verdicts),
        "all_exact": l.all_exact,
    }
    _write_or_print(doc, args.out)
    return 0


def cmd_biext(args) -> int:
    a = jsonio.parse_group_shorthand(args.a)
    b = jsonio.parse_group_shorthand(args.b)
    c = jsonio.parse_group_shorthand(args.c)
    bg = biext_groups(a, b, c)
    doc = {"pi1": jsonio.invariants_to_json(bg.pi1),
           "pi0": jsonio.invariants_to_json(bg.pi0)}
    _write_or_print(doc, args.out)
    return 0


def cmd_gen(args) -> int:
    rng = random.Random(args.seed)
    if args.kind == "group":
        from .fgab import random_group
        doc = jsonio.document("group", jsonio.group_to_json(random_group(rng)))
    elif args.kind == "complex":
        doc = jsonio.document("complex", jsonio.complex_to_json(random_complex(rng)))
    elif args.kind == "butterfly":
        e = random_complex(rng, max_rank=1, max_order=8)
        f = random_complex(rng, max_rank=1, max_order=8)
        doc = jsonio.document("butterfly",
                              jsonio.butterfly_to_json(random_butterfly(e, f, rng)))
    else:
        doc = jsonio.document("sequence",
                              jsonio.sequence_to_json(random_exact_seq(rng)))
    _write_or_print(doc, args.out)
    return 0


def cmd_selftest(args) -> int:
    only = set(args.suite) if args.suite else None
    ok = selftest.run(scale=args.scale, only=only)
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="butterflies",
        description="2-term complexes of f.g. abelian groups with butterflies as morphisms")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a document against the axioms")
    p.add_argument("path")
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("compose", help="compose two butterflies (second after first)")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_compose)

    p = sub.add_parser("iso2", help="search for a 2-morphism between parallel butterflies")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_iso2)

    p = sub.add_parser("report", help="full invariant report for one butterfly")
    p.add_argument("path")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_report)

    p = sub.add_parser("les", help="six-term homology sequence of an exact sequence")
    p.add_argument("path")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_les)

    p = sub.add_parser("biext", help="Biext groups pi1, pi0 for shorthand groups (e.g. Z/2+Z)")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("c")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_biext)

    p = sub.add_parser("gen", help="generate a random fixture, deterministic per seed")
    p.add_argument("kind", choices=["group", "complex", "butterfly", "sequence"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_gen)

    p = sub.add_parser("selftest", help="run the acceptance suites")
    p.add_argument("--scale", type=float, default=1.0)
    p.add_argument("--suite", nargs="*", help="criterion numbers to run, e.g. 1 6 9")
    p.set_defaults(fn=cmd_selftest)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 2
    except RefusalError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
