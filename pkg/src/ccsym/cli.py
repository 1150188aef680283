"""Command-line front end.

Subcommands: symbol, tame, factorize, integrate, and verify with the
check families lemma, main-theorem, weil, bilinear, commutator and
identities.  Exit status: 0 on success/pass, 1 when a check fails,
2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import sys

from .algebra import element_to_json, parse_signature
from .chen import DlogForm, QuadratureConfig, iterated_integral, line_integral
from .checks import (
    bilinear_reciprocity_check,
    commutator_quadratic_check,
    identity_suite,
    lemma_check,
    main_theorem_check,
    weil_reciprocity_check,
)
from .errors import CcsymError, InputError
from .laurent import factorize
from .parsing import parse_element, parse_path, parse_ratfunc, parse_scalar, parse_series
from .ratfunc import SpherePoint
from .symbol import cc_symbol_series, tame_symbol

DEFAULT_ALGEBRA = "gens=;degree=1;scalars=exact"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ccsym",
        description="Contou-Carrere symbols and their iterated-integral verification",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, trunc=True, quad=False):
        p.add_argument("--algebra", default=DEFAULT_ALGEBRA, help="e.g. gens=eps;degree=2;scalars=exact")
        p.add_argument("--json", action="store_true", help="emit JSON output")
        if trunc:
            p.add_argument("--trunc", type=int, default=16, help="series truncation order")
        if quad:
            p.add_argument("--steps", type=int, default=1024, help="quadrature steps per path segment")
            p.add_argument("--tol", type=float, default=1e-8, help="check tolerance")

    p = sub.add_parser("symbol", help="Contou-Carrere symbol of two series")
    common(p)
    p.add_argument("--f", required=True, help="Laurent series literal")
    p.add_argument("--g", required=True, help="Laurent series literal")

    p = sub.add_parser("tame", help="tame symbol of two series over C")
    common(p)
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)

    p = sub.add_parser("factorize", help="canonical product decomposition of a series")
    common(p)
    p.add_argument("--f", required=True)

    p = sub.add_parser("integrate", help="integrate dlog forms along a path")
    common(p, quad=True)
    p.add_argument("--f", required=True, help="rational function literal")
    p.add_argument("--g", help="second function: compute the iterated df/f o dg/g")
    p.add_argument("--path", required=True, help="path literal, e.g. circle(0,1/2)")

    verify = sub.add_parser("verify", help="run a verification check")
    vsub = verify.add_subparsers(dest="check", required=True)

    p = vsub.add_parser("lemma", help="local integral identities (ids 3.2-3.6)")
    common(p, quad=True)
    p.add_argument("--id", required=True, choices=["3.2", "3.3", "3.4", "3.5", "3.6"])
    p.add_argument("--r", type=int, help="word length for id 3.2")
    p.add_argument("--n", type=int, help="binomial exponent for id 3.4")
    p.add_argument("--j", type=int, help="first binomial exponent for id 3.5")
    p.add_argument("--k", type=int, help="second binomial exponent for id 3.5")
    p.add_argument("--a", help="first coefficient (scalar or nilpotent element)")
    p.add_argument("--b", help="second coefficient")
    p.add_argument("--f", help="rational function for ids 3.3 and 3.6")
    p.add_argument("--center", default="0", help="loop center for id 3.3")
    p.add_argument("--base", help="start point P for id 3.6")
    p.add_argument("--point", help="end point for id 3.6")
    p.add_argument("--radius", default="1/2", help="loop radius")

    p = vsub.add_parser("main-theorem", help="exp of the iterated integral vs the product formula")
    common(p, quad=True)
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--point", required=True, help="support point s (scalar or 'inf')")
    p.add_argument("--base", required=True, help="base point P")
    p.add_argument("--radius", default="1/4")

    p = vsub.add_parser("weil", help="exact reciprocity product over the joint support")
    common(p)
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)

    p = vsub.add_parser("bilinear", help="second-order loop-sum identity")
    common(p, quad=True)
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--base", required=True, help="common base point P")

    p = vsub.add_parser("commutator", help="quadratic term over a commutator of loops")
    common(p, quad=True)
    p.add_argument("--alpha", required=True, help="first loop literal")
    p.add_argument("--beta", required=True, help="second loop literal")
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)

    p = vsub.add_parser("identities", help="shuffle/reversal/composition/homotopy suite")
    common(p, quad=True)

    return parser


def _point_of(text: str) -> SpherePoint:
    if text.strip().lower() in ("inf", "infinity", "oo"):
        return SpherePoint.infinity()
    return SpherePoint.finite(parse_scalar(text))


def _emit_reports(reports, as_json: bool) -> int:
    if as_json:
        if len(reports) == 1:
            print(reports[0].to_json())
        else:
            print(json.dumps([r.to_json_dict() for r in reports], indent=2))
    else:
        for rep in reports:
            print(rep.summary())
    return 0 if all(r.passed for r in reports) else 1


def run(argv) -> int:
    args = build_parser().parse_args(argv)
    sig = parse_signature(args.algebra)

    if args.command == "symbol":
        f = parse_series(args.f, sig, args.trunc)
        g = parse_series(args.g, sig, args.trunc)
        value = cc_symbol_series(f, g).value
        print(json.dumps(element_to_json(value)) if args.json else value)
        return 0

    if args.command == "tame":
        f = parse_series(args.f, sig, args.trunc)
        g = parse_series(args.g, sig, args.trunc)
        value = tame_symbol(f, g)
        print(value)
        return 0

    if args.command == "factorize":
        f = parse_series(args.f, sig, args.trunc)
        fac = factorize(f)
        if args.json:
            payload = {
                "nu": fac.nu,
                "a0": element_to_json(fac.a0),
                "neg_factors": {str(j): element_to_json(a) for j, a in sorted(fac.neg_factors.items())},
                "pos_factors": {str(j): element_to_json(a) for j, a in sorted(fac.pos_factors.items())},
                "trunc_order": fac.trunc_order if fac.trunc_order != float("inf") else "inf",
            }
            print(json.dumps(payload, indent=2))
        else:
            print(fac)
        return 0

    if args.command == "integrate":
        cfg = QuadratureConfig(args.steps, args.tol)
        path = parse_path(args.path)
        f = parse_ratfunc(args.f, sig)
        if args.g:
            g = parse_ratfunc(args.g, sig)
            value = iterated_integral([DlogForm(f), DlogForm(g)], path, cfg)
        else:
            value = line_integral(DlogForm(f), path, cfg)
        print(json.dumps(element_to_json(value)) if args.json else value)
        return 0

    # verify subcommands
    cfg = QuadratureConfig(getattr(args, "steps", 1024), getattr(args, "tol", 1e-8))

    if args.check == "lemma":
        params = {}
        if args.id == "3.2":
            if args.r is None:
                raise InputError("id 3.2 needs --r")
            params = {"r": args.r, "radius": float(complex(parse_scalar(args.radius)).real)}
        elif args.id == "3.3":
            if not args.f:
                raise InputError("id 3.3 needs --f")
            params = {
                "f": parse_ratfunc(args.f, sig),
                "center": parse_scalar(args.center),
                "radius": float(complex(parse_scalar(args.radius)).real),
            }
        elif args.id == "3.4":
            if args.n is None or args.a is None:
                raise InputError("id 3.4 needs --n and --a")
            params = {
                "n": args.n,
                "a": parse_element(args.a, sig),
                "radius": float(complex(parse_scalar(args.radius)).real),
                "signature": sig,
            }
        elif args.id == "3.5":
            if None in (args.j, args.k) or args.a is None or args.b is None:
                raise InputError("id 3.5 needs --j, --k, --a and --b")
            params = {
                "j": args.j,
                "k": args.k,
                "a": parse_element(args.a, sig),
                "b": parse_element(args.b, sig),
                "radius": float(complex(parse_scalar(args.radius)).real),
                "signature": sig,
            }
        elif args.id == "3.6":
            if not (args.f and args.base and args.point):
                raise InputError("id 3.6 needs --f, --base and --point")
            params = {
                "f": parse_ratfunc(args.f, sig),
                "base": complex(parse_scalar(args.base)),
                "endpoint": complex(parse_scalar(args.point)),
            }
        report = lemma_check(args.id, cfg, **params)
        return _emit_reports([report], args.json)

    if args.check == "main-theorem":
        report = main_theorem_check(
            parse_ratfunc(args.f, sig),
            parse_ratfunc(args.g, sig),
            _point_of(args.point),
            parse_scalar(args.base),
            float(complex(parse_scalar(args.radius)).real),
            cfg,
            trunc=args.trunc,
        )
        return _emit_reports([report], args.json)

    if args.check == "weil":
        report = weil_reciprocity_check(
            parse_ratfunc(args.f, sig), parse_ratfunc(args.g, sig), args.trunc
        )
        return _emit_reports([report], args.json)

    if args.check == "bilinear":
        report = bilinear_reciprocity_check(
            parse_ratfunc(args.f, sig), parse_ratfunc(args.g, sig), parse_scalar(args.base), cfg
        )
        return _emit_reports([report], args.json)

    if args.check == "commutator":
        report = commutator_quadratic_check(
            parse_path(args.alpha),
            parse_path(args.beta),
            DlogForm(parse_ratfunc(args.f, sig)),
            DlogForm(parse_ratfunc(args.g, sig)),
            cfg,
        )
        return _emit_reports([report], args.json)

    if args.check == "identities":
        return _emit_reports(identity_suite(cfg), args.json)

    raise InputError(f"unknown verify target {args.check!r}")


def main(argv=None) -> int:
    try:
        code = run(sys.argv[1:] if argv is None else argv)
    except CcsymError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return code


if __name__ == "__main__":
    sys.exit(main())
