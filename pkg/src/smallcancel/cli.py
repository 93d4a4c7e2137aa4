"""Command-line front end.

Exit codes: 0 pass or success, 1 a check failed (a witness is reported),
2 bad input or a precondition error. SMALLCANCEL_BUDGET overrides the
default search budget.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

from . import conditions, diagram, distortion, fileio, witness
from .completion import (Budget, InconsistentFactors, build_completion, check_cprime_star,
                         check_gr_star, is_embedded_sheets)
from .graph import gamma_R

DEFAULT_BUDGET = 2_000_000
BUILTIN_DIAGRAMS = {"tetrahedron": diagram.tetrahedron, "cube": diagram.cube,
                    "dodecahedron": diagram.dodecahedron, "icosahedron": diagram.icosahedron}


class UsageError(ValueError):
    pass


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _budget(args) -> int:
    if args.budget is not None:
        return args.budget
    env = os.environ.get("SMALLCANCEL_BUDGET")
    if env:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"SMALLCANCEL_BUDGET={env!r} is not an integer")
    return DEFAULT_BUDGET


def _rational(text: str) -> Fraction:
    if text is None:
        raise UsageError("--lambda is required")
    if "." in text or "e" in text.lower():
        raise UsageError(f"{text!r}: rationals are written p/q")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"{text!r} is not a rational p/q")


def _emit(args, obj, g=None):
    text = fileio.dumps(obj, g) if args.format == "structured" else fileio.format_text(obj, g)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_presentation(path):
    return fileio.parse_presentation(_read(path), path)


def _load_graph(args):
    if args.graph:
        return fileio.parse_graph(_read(args.graph), args.graph)
    if args.presentation:
        p = _load_presentation(args.presentation)
        return gamma_R(p.relators, p.alphabet)
    raise UsageError("need --graph or --presentation")


def _load_completion(args):
    if not args.factors:
        raise UsageError("need --factors")
    g = fileio.parse_graph(_read(args.graph), args.graph) if args.graph else None
    if g is None:
        raise UsageError("need --graph")
    factors = fileio.parse_factors(_read(args.factors), args.factors)
    if args.radius is not None:
        import dataclasses
        factors = [dataclasses.replace(f, radius=args.radius) if f.kind == "Z" else f
                   for f in factors]
    return build_completion(g, factors, budget=_budget(args))


# ------------------------------------------------------------ commands

def cmd_check(args) -> int:
    cond = args.condition
    g = None
    if cond == "C":
        _need(args.n, "--n")
        rep = conditions.check_c_classical(_load_presentation(_need(args.presentation, "--presentation")), args.n)
    elif cond == "Cprime":
        rep = conditions.check_cprime_classical(
            _load_presentation(_need(args.presentation, "--presentation")), _rational(args.lam))
    elif cond == "Gr":
        _need(args.n, "--n")
        g = _load_graph(args)
        rep = conditions.check_gr(g, args.n, essential=not args.plain)
    elif cond == "Grprime":
        g = _load_graph(args)
        rep = conditions.check_grprime(g, _rational(args.lam), essential=not args.plain)
    elif cond == "Grstar":
        _need(args.n, "--n")
        c = _load_completion(args)
        g = c.graph
        rep = check_gr_star(c, args.n, essential=not args.plain)
    elif cond == "Cstarprime":
        c = _load_completion(args)
        g = c.graph
        rep = check_cprime_star(c, _rational(args.lam), essential=not args.plain)
    else:
        raise UsageError(f"unknown condition {cond!r}")
    _emit(args, rep, g)
    return 0 if rep.passed else 1


def _need(value, flag):
    if value is None:
        raise UsageError(f"{flag} is required")
    return value


def cmd_witness(args) -> int:
    budget = _budget(args)
    if args.presentation:
        p = _load_presentation(args.presentation)
        pkg = witness.select_witnesses_classical(p, budget)
        ver = witness.verify_classical(p, pkg)
    else:
        c = _load_completion(args)
        pkg = witness.select_witnesses_graphical(c, budget)
        ver = witness.verify_graphical(c, pkg)
    pkg.notes.append("verified" if ver.ok else "verification failed: " + "; ".join(ver.failures))
    _emit(args, pkg)
    return 0 if ver.ok else 1


def cmd_completion(args) -> int:
    c = _load_completion(args)
    emb = is_embedded_sheets(c)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(fileio.format_graph(c.graph))
    summary = {"vertices": c.graph.n_vertices, "edges": len(c.graph.edges),
               "sheets": len(c.sheet_factor), "truncated": c.truncated,
               "embedded_sheets": emb.ok, "witness": emb.witness}
    text = fileio.dumps(summary) if args.format == "structured" else fileio.format_text(summary)
    sys.stdout.write(text)
    return 0 if emb.ok else 1


def cmd_curvature(args) -> int:
    if args.builtin:
        d = BUILTIN_DIAGRAMS[args.builtin]()
    else:
        d = fileio.parse_diagram(_read(_need(args.diagram, "--diagram")), args.diagram)
    if d.topology == "disk":
        d = diagram.cap_off(d)
    value = diagram.curvature_audit(d)
    sys.stdout.write(fileio.jsonable(value) if value.denominator != 1 else str(value.numerator))
    sys.stdout.write("\n")
    return 0 if value == 6 else 1


def cmd_distortion(args) -> int:
    g = _load_graph(args)
    w = fileio.parse_word(_need(args.word, "--word"), g.alphabet)
    cert = distortion.classify_case(g, tuple(w), strict=args.strict)
    if cert.case == distortion.CASE2B:
        try:
            cert.evidence.append(distortion.sigma_path(g, tuple(w), cert))
        except distortion.SigmaAssertion as ex:
            cert.notes.append(f"sigma check failed: {ex}")
            cert.downgraded = True
    _emit(args, cert, g)
    return 1 if cert.downgraded else 0


def cmd_generate(args) -> int:
    if args.family != "distorted":
        raise UsageError(f"unknown family {args.family!r}")
    p = distortion.gen_distorted_family(args.p, args.N)
    text = fileio.format_presentation(p)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


# ------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="smallcancel",
                                 description="Small cancellation checks and constructions.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, inputs=True):
        if inputs:
            sp.add_argument("--presentation")
            sp.add_argument("--graph")
            sp.add_argument("--factors")
            sp.add_argument("--radius", type=int)
        sp.add_argument("--budget", type=int)
        sp.add_argument("--format", choices=("text", "structured"), default="text")
        sp.add_argument("--output")

    sp = sub.add_parser("check", help="run a small cancellation condition")
    sp.add_argument("--condition", required=True,
                    choices=("C", "Cprime", "Gr", "Grprime", "Grstar", "Cstarprime"))
    sp.add_argument("--n", type=int)
    sp.add_argument("--lambda", dest="lam")
    sp.add_argument("--plain", action="store_true", help="count all pieces, not only essential ones")
    common(sp)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("witness", help="select witness tuples and build the W-sets")
    common(sp)
    sp.set_defaults(func=cmd_witness)

    sp = sub.add_parser("completion", help="build a free-product completion")
    common(sp)
    sp.set_defaults(func=cmd_completion)

    sp = sub.add_parser("curvature", help="audit the curvature sum of a spherical diagram")
    sp.add_argument("--diagram")
    sp.add_argument("--builtin", choices=sorted(BUILTIN_DIAGRAMS))
    common(sp, inputs=False)
    sp.set_defaults(func=cmd_curvature)

    sp = sub.add_parser("distortion", help="classify a cyclic subgroup")
    sp.add_argument("--word")
    sp.add_argument("--strict", action="store_true")
    common(sp)
    sp.set_defaults(func=cmd_distortion)

    sp = sub.add_parser("generate", help="write a presentation from a family")
    sp.add_argument("--family", default="distorted")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--N", type=int, required=True)
    common(sp, inputs=False)
    sp.set_defaults(func=cmd_generate)
    return ap


EXPECTED = (UsageError, fileio.ParseError, OSError, InconsistentFactors, Budget,
            diagram.InvalidMap, distortion.PreconditionError, distortion.NotSmallCancellation,
            witness.InsufficientRelators, witness.InsufficientComponents, witness.NoInteriorVertex,
            witness.SearchExhausted, witness.NotC6, witness.SymbolClash, ValueError)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except EXPECTED as ex:
        sys.stderr.write(f"error: {type(ex).__name__}: {ex}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
