"""Command-line interface.

Subcommands: portrait, star, bifdiagram, classify, canon, nf, dsinv.
Exit codes: 0 ok, 2 usage error, 3 numerical failure, 4 semantic mismatch.
All file input/output is JSON (UTF-8) or SVG 1.1.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import render
from .disk import NewtonDivergence, RootLoss
from .model import (
    AtBifurcation,
    DegenerateParameter,
    ModelField,
    PathThroughSingularity,
    SeriesOutOfDomain,
    StepSizeUnderflow,
    ds_invariant,
    singularities,
)
from .normal_forms import NotCanonical, polynomial_nf, rational_nf
from .series import NotAUnit, NotInvertible, SeriesError
from .unfolding import (
    AmbiguousMatch,
    EigenvalueFunction,
    FamilySpec,
    NotGeneric,
    canonicalize,
    eigenvalue_function,
    equivalent_fixed_parameter,
    equivalent_full,
    factor_family,
)

NUMERICAL_ERRORS = (
    NewtonDivergence,
    RootLoss,
    StepSizeUnderflow,
    PathThroughSingularity,
    SeriesOutOfDomain,
    AtBifurcation,
    NotInvertible,
    NotAUnit,
    SeriesError,
)
SEMANTIC_ERRORS = (NotGeneric, NotCanonical, DegenerateParameter)


def parse_complex(text: str) -> complex:
    cleaned = text.strip().replace(" ", "").replace("i", "j")
    try:
        return complex(cleaned)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"cannot parse complex number {text!r}") from exc


def _complex_dict(z: complex):
    return {"re": z.real, "im": z.imag}


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _load_json(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: cannot read JSON from {path}: {exc}", file=sys.stderr)
        sys.exit(2)


def _load_eigenvalue(path, truncation):
    """Read an eigenvalue function from a lambda file or a family file."""
    data = _load_json(path)
    try:
        if "omega" in data:
            spec = FamilySpec.from_dict(data)
            return eigenvalue_function(spec, order=truncation)
        return EigenvalueFunction.from_dict(data)
    except KeyError as exc:
        print(f"error: malformed input {path}: missing {exc}", file=sys.stderr)
        sys.exit(2)


def _write_text(path, text):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def cmd_portrait(args):
    svg = render.portrait_svg(
        k=args.k, eps=args.eps, radius=args.radius, seed=args.seed, samples=args.samples
    )
    _write_text(args.out, svg)
    if args.json_out:
        from .model import separatrices

        fld = ModelField(args.k, args.eps)
        data = {
            "singularities": [_complex_dict(z) for z in singularities(fld)],
            "separatrices": [t.to_dict() for t in separatrices(fld)],
        }
        _write_text(args.json_out, _dump(data))
    return 0


def cmd_star(args):
    svg = render.star_svg(k=args.k, eps=args.eps, r=args.r)
    _write_text(args.out, svg)
    return 0


def cmd_bifdiagram(args):
    lo, hi = args.decades
    if not (0 < lo < hi):
        print("error: empty decade range", file=sys.stderr)
        return 2
    svg = render.bifdiagram_svg(
        k=args.k, r=args.r, decades=(lo, hi), per_decade=args.per_decade
    )
    _write_text(args.out, svg)
    return 0


def cmd_classify(args):
    l1 = _load_eigenvalue(args.family_a, args.truncation)
    l2 = _load_eigenvalue(args.family_b, args.truncation)
    if l1.k != l2.k:
        print(f"error: codimension mismatch {l1.k} != {l2.k}", file=sys.stderr)
        return 4
    verdict = {"truncation_order": min(l1.order, l2.order)}
    try:
        zeta = equivalent_fixed_parameter(l1, l2, tol=args.tol)
        verdict["fixed_parameter"] = None if zeta is None else _complex_dict(zeta)
    except AmbiguousMatch as exc:
        verdict["fixed_parameter"] = {"ambiguous": [_complex_dict(w) for w in exc.witnesses]}
    try:
        full = equivalent_full(l1, l2, tol=args.tol)
        if full is None:
            verdict["full"] = None
        else:
            nu, xi = full
            verdict["full"] = {"nu": _complex_dict(nu), "xi": xi.to_dict(zero_tol=1e-14)}
    except AmbiguousMatch as exc:
        verdict["full"] = {"ambiguous": [_complex_dict(w) for w in exc.witnesses]}
    print(_dump(verdict))
    return 0


def cmd_canon(args):
    ef = _load_eigenvalue(args.input, args.truncation)
    result = canonicalize(ef)
    out = {
        "k": ef.k,
        "truncation_order": ef.order,
        "lambda_canonical": result.lam.to_dict(),
        "h": result.h.to_dict(zero_tol=1e-15),
        "linear_choices": [_complex_dict(a) for a in result.linear_choices],
    }
    print(_dump(out))
    return 0


def cmd_nf(args):
    data = _load_json(args.family)
    if "omega" not in data:
        print("error: nf expects a family file with an 'omega' entry", file=sys.stderr)
        return 2
    spec = factor_family(FamilySpec.from_dict(data), z_order=args.truncation)
    maker = polynomial_nf if args.kind == "polynomial" else rational_nf
    nf = maker(spec, eps_order=args.eps_order)
    print(_dump(nf.to_dict()))
    return 0


def cmd_dsinv(args):
    fld = ModelField(args.k, args.eps)
    inv = ds_invariant(fld, tol=args.tol, validate=args.validate)
    out = inv.to_dict()
    out["epsilon"] = _complex_dict(args.eps)
    out["singularities"] = [_complex_dict(z) for z in singularities(fld)]
    print(_dump(out))
    return 0


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--truncation", type=int, default=40, help="series truncation order")
    common.add_argument("--tol", type=float, default=1e-9, help="decision tolerance")
    common.add_argument("--seed", type=int, default=0, help="RNG seed for sampled artwork")
    parser = argparse.ArgumentParser(
        prog="parafold",
        description="Phase portraits, bifurcation diagrams and normal forms "
        "for z' = z^{k+1} - eps and its generic unfoldings.",
        parents=[common],
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_parser(name, **kwargs):
        return sub.add_parser(name, parents=[common], **kwargs)

    p = add_parser("portrait", help="phase portrait of z' = z^{k+1} - eps")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--eps", type=parse_complex, required=True)
    p.add_argument("--radius", type=float, default=1.5)
    p.add_argument("--samples", type=int, default=40)
    p.add_argument("--out", required=True)
    p.add_argument("--json-out", default=None, help="also export trajectories as JSON")
    p.set_defaults(func=cmd_portrait)

    p = add_parser("star", help="rectified t-space figure with eyelets")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--eps", type=parse_complex, required=True)
    p.add_argument("--r", type=float, default=1.0, help="disk radius")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_star)

    p = add_parser("bifdiagram", help="bifurcation curves in the eps-plane")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--r", type=float, default=1.0)
    p.add_argument("--decades", type=float, nargs=2, default=(1e-6, 1e-2),
                   metavar=("LO", "HI"))
    p.add_argument("--per-decade", type=int, default=12)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_bifdiagram)

    p = add_parser("classify", help="decide conjugacy of two families")
    p.add_argument("family_a")
    p.add_argument("family_b")
    p.set_defaults(func=cmd_classify)

    p = add_parser("canon", help="canonicalize an eigenvalue function or family")
    p.add_argument("input")
    p.set_defaults(func=cmd_canon)

    p = add_parser("nf", help="polynomial or rational normal form coefficients")
    p.add_argument("kind", choices=("polynomial", "rational"))
    p.add_argument("family")
    p.add_argument("--eps-order", type=int, default=6)
    p.set_defaults(func=cmd_nf)

    p = add_parser("dsinv", help="print the combinatorial invariant")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--eps", type=parse_complex, required=True)
    p.add_argument("--validate", action="store_true")
    p.set_defaults(func=cmd_dsinv)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code = args.func(args)
    except SEMANTIC_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = 4
    except NUMERICAL_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = 2
    sys.exit(code)


if __name__ == "__main__":
    main()
