"""Command-line front end: ``thx validate|classify|build|verify|morphism|catalog``.

Triple arguments are paths to TripleFile JSON, or ``catalog:<name>`` for a
built-in example.  Exit codes: 0 ok, 2 constraint violation, 3 parse error,
4 pipeline error, 5 a verification check failed, 6 kernel not preserved.
"""
from __future__ import annotations

import argparse
import sys

from . import catalog
from .dgla import (FORMAT_TAG, dgla_from_json, dgla_to_json, full_report, homology, run_pipeline,
                   status_lines, verify_axioms)
from .errors import (ConstraintViolation, DimensionMismatch, KernelNotPreserved, MorphismInvalid,
                     ParseError, Phi1IllDefined, PipelineError, ThxError)
from .fileformats import (dumps, matrix_to_json, parse_morphism_dict, read_json, triple_from_dict,
                          write_text)
from .functor import TripleMorphism, check_morphism, induce, validate_morphism
from .report import VerificationReport
from .triple import center, ideal_of_squares, ker_theta, r_theta

EXIT_OK, EXIT_CONSTRAINT, EXIT_PARSE, EXIT_PIPELINE, EXIT_VERIFY, EXIT_KERNEL = 0, 2, 3, 4, 5, 6

EXIT_CODES = [
    (ParseError, EXIT_PARSE),
    (DimensionMismatch, EXIT_PARSE),
    (KernelNotPreserved, EXIT_KERNEL),
    (ConstraintViolation, EXIT_CONSTRAINT),
    (MorphismInvalid, EXIT_CONSTRAINT),
    (Phi1IllDefined, EXIT_PIPELINE),
    (PipelineError, EXIT_PIPELINE),
]

DEFAULT_DEPTH = 6


def exit_code_for(err: BaseException) -> int:
    for cls, code in EXIT_CODES:
        if isinstance(err, cls):
            return code
    return EXIT_PIPELINE


def _load_raw(arg: str):
    if arg.startswith("catalog:"):
        name = arg[len("catalog:"):]
        try:
            return catalog.get(name), arg
        except KeyError as e:
            raise ParseError(e.args[0], where=arg) from None
    return read_json(arg), arg


def _load_triple(arg: str):
    raw, src = _load_raw(arg)
    return triple_from_dict(raw, src)


def _emit(text: str, out: str | None) -> None:
    if out:
        write_text(out, text)
    else:
        sys.stdout.write(text)


def _check(mark: bool) -> str:
    return "✓" if mark else "✗"


# -- commands -------------------------------------------------------------------

def cmd_validate(args) -> int:
    t = _load_triple(args.triple)
    print(f"{t.name or args.triple}: valid Lie-Leibniz triple (dim g = {t.g.dim}, dim V = {t.dimV})")
    return EXIT_OK


def cmd_classify(args) -> int:
    t = _load_triple(args.triple)
    flags = t.flags.as_dict()
    print("flags: " + " ".join(f"{k} {_check(v)}" for k, v in flags.items()))
    print(f"dim I = {ideal_of_squares(t).dim}")
    print(f"dim Z = {center(t).dim}")
    print(f"dim Ker Theta = {ker_theta(t).dim}")
    print(f"dim R_Theta = {r_theta(t).dim}")
    return EXIT_OK


def _homology_json(d):
    return [[r.degree, r.dim, r.ker, r.im, r.h] for r in homology(d)]


def cmd_build(args) -> int:
    t = _load_triple(args.triple)
    p = run_pipeline(t, args.max_degree)
    rep = full_report(p)
    obj = dgla_to_json(p.dgla, rep, {"homology": _homology_json(p.dgla)})
    _emit(dumps(obj), args.out)
    return EXIT_OK


def _print_report(rep: VerificationReport) -> None:
    print(rep.format())
    fails = rep.failures
    print(f"{len(rep.checks) - len(fails)} of {len(rep.checks)} checks without failure")


def _print_homology(d, t=None) -> None:
    print("degree  dim  ker  im  H")
    for r in homology(d):
        h = "-" if r.h is None else str(r.h)
        print(f"{r.degree:>6}  {r.dim:>3}  {r.ker:>3}  {r.im:>2}  {h}")
    for line in status_lines(d, t):
        print(line)


def cmd_verify(args) -> int:
    raw, src = _load_raw(args.triple)
    if isinstance(raw, dict) and raw.get("format") == FORMAT_TAG:
        d = dgla_from_json(raw, src)
        t = None
        rep = verify_axioms(d)
    else:
        t = triple_from_dict(raw, src)
        p = run_pipeline(t, args.max_degree)
        d = p.dgla
        rep = full_report(p)
    _print_report(rep)
    if args.homology:
        _print_homology(d, t)
    return EXIT_OK if rep.ok else EXIT_VERIFY


def cmd_morphism(args) -> int:
    s, t = _load_triple(args.source), _load_triple(args.target)
    raw, src = _load_raw(args.morphism)
    phi, chi = parse_morphism_dict(raw, s.g.dim, s.dimV, t.g.dim, t.dimV, src)
    m = TripleMorphism(phi, chi)
    rep = validate_morphism(s, t, m)
    if not rep.ok:
        _print_report(rep)
        raise MorphismInvalid("; ".join(c.name for c in rep.failures))
    ps, pt = run_pipeline(s, args.max_degree), run_pipeline(t, args.max_degree)
    f = induce(ps, pt, m)
    rep.extend(check_morphism(f, ps.dgla, pt.dgla))
    obj = {"format": "thx-morphism", "version": 1, "source": s.name, "target": t.name,
           "max_degree": args.max_degree,
           "maps": {str(d): matrix_to_json(f.maps[d]) for d in sorted(f.maps)},
           "report": rep.summary()}
    if args.out:
        write_text(args.out, dumps(obj))
    _print_report(rep)
    return EXIT_OK if rep.ok else EXIT_VERIFY


def cmd_catalog(args) -> int:
    if args.action == "list":
        for n in catalog.names():
            print(n)
        return EXIT_OK
    if not args.name:
        raise ParseError(f"catalog {args.action} needs a triple name")
    try:
        d = catalog.get(args.name)
    except KeyError as e:
        raise ParseError(e.args[0], where="catalog") from None
    if args.action == "show":
        sys.stdout.write(dumps(d))
        return EXIT_OK
    if not args.path:
        raise ParseError("catalog emit needs an output path")
    write_text(args.path, dumps(d))
    return EXIT_OK


# -- entry point ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="thx", description="Tensor hierarchies of Lie-Leibniz triples.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check that a file describes a Lie-Leibniz triple")
    p.add_argument("triple")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("classify", help="print the structural flags of a triple")
    p.add_argument("triple")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("build", help="build the hierarchy and write it as JSON")
    p.add_argument("triple")
    p.add_argument("--max-degree", type=int, default=DEFAULT_DEPTH)
    p.add_argument("--out")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("verify", help="run every check on a triple or a hierarchy file")
    p.add_argument("triple")
    p.add_argument("--max-degree", type=int, default=DEFAULT_DEPTH)
    p.add_argument("--homology", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("morphism", help="induce the hierarchy morphism of a triple morphism")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("morphism")
    p.add_argument("--max-degree", type=int, default=DEFAULT_DEPTH)
    p.add_argument("--out")
    p.set_defaults(func=cmd_morphism)

    p = sub.add_parser("catalog", help="list, show or write the built-in triples")
    p.add_argument("action", choices=["list", "show", "emit"])
    p.add_argument("name", nargs="?")
    p.add_argument("path", nargs="?")
    p.set_defaults(func=cmd_catalog)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "max_degree", 2) < 2:
        print("thx: --max-degree must be at least 2", file=sys.stderr)
        return EXIT_PARSE
    try:
        return args.func(args)
    except ThxError as e:
        print(f"thx: {type(e).__name__}: {e}", file=sys.stderr)
        return exit_code_for(e)


if __name__ == "__main__":
    sys.exit(main())
