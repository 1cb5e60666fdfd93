"""Command-line front end: ``monadpreserve {classify,check,props,monoid,reproduce}``.

Exit codes: 0 success, 1 violation (or failed criterion), 2 usage or parse
error, 3 inconclusive within budget.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .core import StructureError
from .monads import CapabilityError, parse_selector
from .presentations import NONTRIVIAL, TRIVIAL, affineness_of_presented, load_presentation, t1_triviality
from .preserve import UNKNOWN, VIOLATED, check_preservation
from .props import (algebraic_relevance_check, is_affine, n_relevance_check, relevance_check,
                    two_discerning_check)
from .terms import NotDiscerningCandidate, ParseError, classify, discerning_companion, parse_theory

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_UNKNOWN = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _positive(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _int_list(text: str) -> list:
    try:
        out = [int(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of integers, got {text!r}") from None
    if any(n < 2 for n in out):
        raise argparse.ArgumentTypeError("n-relevance needs n >= 2")
    return out


def _jobs(args) -> int:
    if args.jobs is not None:
        return args.jobs
    env = os.environ.get("MONADPRESERVE_JOBS")
    if env:
        try:
            return _positive(env)
        except (ValueError, argparse.ArgumentTypeError):
            raise UsageError(f"MONADPRESERVE_JOBS must be a positive integer, got {env!r}") from None
    return 1


def _emit(args, doc, text_lines):
    if args.json:
        print(json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False))
    else:
        print("\n".join(text_lines))


def _load_theory(path):
    try:
        return parse_theory(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _monad(sel):
    try:
        return parse_selector(sel)
    except (ValueError, OSError, KeyError) as exc:
        raise UsageError(str(exc)) from None


# -- commands ------------------------------------------------------------------------------


def cmd_classify(args) -> int:
    theory = _load_theory(args.theory)
    rows, lines = [], [f"theory {theory.name}"]
    for eq in theory.equations:
        cls = classify(eq)
        row = {"equation": str(eq), "classes": cls.as_dict()}
        text = f"{str(eq):40s} {', '.join(cls.names())}"
        try:
            discerning_companion(eq)
        except NotDiscerningCandidate:
            pass
        else:
            v = two_discerning_check(eq, args.model_bound, args.derivation_depth, theory.sig)
            row["two_discerning"] = v.to_json()
            text += f"; 2-discerning: {v.status}"
        rows.append(row)
        lines.append(text)
    _emit(args, {"theory": theory.name, "equations": rows}, lines)
    return EXIT_OK


def cmd_check(args) -> int:
    T = _monad(args.monad)
    if not T.enumerable and not args.randomized:
        raise UsageError(f"{T.name} cannot be enumerated; pass --randomized")
    theory = _load_theory(args.theory)
    samples = args.samples if (args.randomized or args.samples) else None
    reports, lines, codes = [], [], []
    for eq in theory.equations:
        rep = check_preservation(T, eq, theory.sig, args.max_carrier, args.budget, seed=args.seed,
                                 samples=samples, jobs=_jobs(args))
        doc = rep.to_json(T)
        reports.append(doc)
        line = f"{str(eq):40s} {rep.verdict}  algebras={rep.stats['algebras']} assignments={rep.stats['assignments']}"
        if rep.witness is not None:
            w = doc["witness"]
            line += f"\n    witness on {w['carrier']} points: {json.dumps(w['assignment'])}"
            line += f"\n    lhs = {json.dumps(w['lhs'])}\n    rhs = {json.dumps(w['rhs'])}"
        lines.append(line)
        if rep.verdict == VIOLATED:
            codes.append(EXIT_VIOLATION)
        elif rep.verdict == UNKNOWN and rep.budget_exhausted:
            codes.append(EXIT_UNKNOWN)
    _emit(args, {"monad": T.name, "theory": theory.name, "seed": args.seed, "reports": reports},
          [f"monad {T.name}, theory {theory.name}, seed {args.seed}"] + lines)
    if EXIT_VIOLATION in codes:
        return EXIT_VIOLATION
    return EXIT_UNKNOWN if codes else EXIT_OK


def cmd_props(args) -> int:
    T = _monad(args.monad)
    verdicts = [is_affine(T), relevance_check(T, args.max_carrier, seed=args.seed)]
    verdicts += [n_relevance_check(T, n, args.max_carrier, seed=args.seed) for n in args.n_relevance]
    verdicts.append(algebraic_relevance_check(T, seed=args.seed))
    lines = [f"monad {T.name}, seed {args.seed}"] + [f"  {v.prop:24s} {v.summary()}" for v in verdicts]
    _emit(args, {"monad": T.name, "seed": args.seed, "verdicts": [v.to_json() for v in verdicts]}, lines)
    return EXIT_OK


def cmd_monoid(args) -> int:
    try:
        p = load_presentation(args.presentation)
    except OSError as exc:
        raise UsageError(f"cannot read {args.presentation}: {exc.strerror}") from None
    v = t1_triviality(p, args.budget, args.model_bound)
    aff = affineness_of_presented(p, args.budget, args.model_bound)
    lines = [f"{p}: {v.status}"]
    if v.status == TRIVIAL:
        lines += [f"  {g}: " + " -> ".join("".join(w) or "ε" for w in chain) for g, chain in v.trace.items()]
    elif v.status == NONTRIVIAL:
        lines.append(f"  countermodel: {v.countermodel.size}-element monoid {list(v.countermodel.op)}, {v.images}")
    lines.append(f"  presented monad affine: {aff.summary()}")
    _emit(args, {"triviality": v.to_json(), "affine": aff.to_json()}, lines)
    return EXIT_UNKNOWN if v.status not in (TRIVIAL, NONTRIVIAL) else EXIT_OK


def cmd_reproduce(args) -> int:
    from .reproduce import run_all

    def progress(res):
        if not args.json:
            print(res.line(), flush=True)
            if args.verbose or not res.passed:
                for d in res.details:
                    print("      " + d)

    results = run_all(args.only, progress=progress, sabotage_psi=args.sabotage_psi)
    if args.json:
        print(json.dumps({"criteria": [r.to_json() for r in results],
                          "passed": all(r.passed for r in results)}, indent=2, ensure_ascii=False))
    else:
        print(f"{sum(r.passed for r in results)}/{len(results)} criteria passed")
    return EXIT_OK if all(r.passed for r in results) else EXIT_VIOLATION


# -- parser ---------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="monadpreserve",
                                     description="Equation preservation by monoidal monads on finite algebras.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.add_argument("--seed", type=int, default=0)
        return p

    p = common(sub.add_parser("classify", help="classify the equations of a theory file"))
    p.add_argument("theory")
    p.add_argument("--model-bound", type=_positive, default=4)
    p.add_argument("--derivation-depth", type=_positive, default=4)
    p.set_defaults(func=cmd_classify)

    p = common(sub.add_parser("check", help="check preservation of each equation of a theory"))
    p.add_argument("monad", help="powerset | powerset+ | maybe | dist | reader:<k> | "
                                 "writer:<monoid.json> | multiset:<semiring.json>")
    p.add_argument("theory")
    p.add_argument("--max-carrier", type=_positive, default=3)
    p.add_argument("--budget", type=_positive, default=10**6, help="maximum assignments examined")
    p.add_argument("--randomized", action="store_true", help="sample T-objects instead of enumerating")
    p.add_argument("--samples", type=_positive, default=None, help="sampled assignments per algebra")
    p.add_argument("--jobs", type=_positive, default=None)
    p.set_defaults(func=cmd_check)

    p = common(sub.add_parser("props", help="affineness and relevance verdicts for a monad"))
    p.add_argument("monad")
    p.add_argument("--max-carrier", type=_positive, default=3)
    p.add_argument("--n-relevance", type=_int_list, default=[], metavar="N[,N...]")
    p.add_argument("--jobs", type=_positive, default=None)
    p.set_defaults(func=cmd_props)

    p = common(sub.add_parser("monoid", help="is the monoid of a presentation trivial?"))
    p.add_argument("presentation")
    p.add_argument("--budget", type=_positive, default=10**5, help="words visited by rewriting")
    p.add_argument("--model-bound", type=_positive, default=4)
    p.set_defaults(func=cmd_monoid)

    p = common(sub.add_parser("reproduce", help="run the reproduction suite"))
    p.add_argument("--only", type=lambda s: [int(x) for x in s.split(",")], default=None, metavar="N[,N...]")
    p.add_argument("-v", "--verbose", action="store_true")
    p.add_argument("--sabotage-psi", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
    except (UsageError, CapabilityError, StructureError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
