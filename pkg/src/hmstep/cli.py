"""Command-line front end.

Every verb is a thin adapter over one library operation: it parses the
document files, calls the operation, and prints the result exactly (no
recomputation, no rounding).  Exit codes: 0 success, 1 property failure,
2 input or validation error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import dugundji, equiconnect, functionals, serialize, stepfn, suites
from .errors import ValidationError


def _load(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path} is not valid JSON: {exc}") from None


def _emit(doc) -> None:
    print(json.dumps(doc, indent=2, sort_keys=True))


def _rat(text: str) -> Fraction:
    return serialize.parse_rational(text)


def _cmd_dist(args) -> int:
    f = serialize.stepfn_from_doc(_load(args.f))
    g = serialize.stepfn_from_doc(_load(args.g), f.space)
    print(serialize.format_rational(stepfn.hm_distance(f, g)))
    return 0


def _cmd_eval(args) -> int:
    f = serialize.stepfn_from_doc(_load(args.f))
    print(stepfn.evaluate(f, _rat(args.at)))
    return 0


def _cmd_push(args) -> int:
    f = serialize.stepfn_from_doc(_load(args.f))
    m = serialize.map_from_doc(_load(args.map), domain=f.space)
    _emit(serialize.stepfn_to_doc(stepfn.pushforward(m, f)))
    return 0


def _cmd_nbhd(args) -> int:
    alpha = serialize.stepfn_from_doc(_load(args.alpha))
    beta = serialize.stepfn_from_doc(_load(args.beta), alpha.space)
    inside = stepfn.neighborhood_contains(alpha, _rat(args.delta), _rat(args.eps), beta)
    print("true" if inside else "false")
    return 0


def _cmd_avg(args) -> int:
    family = serialize.family_from_doc(_load(args.family))
    f = serialize.stepfn_from_doc(_load(args.f), family[0].space)
    for wf in family:
        print(serialize.format_rational(functionals.window_average(wf, f)))
    return 0


def _cmd_rho(args) -> int:
    family = serialize.family_from_doc(_load(args.family))
    f = serialize.stepfn_from_doc(_load(args.f), family[0].space)
    g = serialize.stepfn_from_doc(_load(args.g), family[0].space)
    print(serialize.format_rational(functionals.pseudometric(family, f, g)))
    return 0


def _cmd_project(args) -> int:
    family = serialize.family_from_doc(_load(args.family))
    f = serialize.stepfn_from_doc(_load(args.f), family[0].space)
    _emit([serialize.format_rational(c) for c in functionals.project(f, family)])
    return 0


def _cmd_sample_family(args) -> int:
    space = serialize.space_from_doc(_load(args.space))
    fam = functionals.sample_family(space, args.windows, args.seed)
    _emit(serialize.family_to_doc(fam))
    return 0


def _cmd_e1(args) -> int:
    alpha = serialize.stepfn_from_doc(_load(args.alpha))
    beta = serialize.stepfn_from_doc(_load(args.beta), alpha.space)
    _emit(serialize.stepfn_to_doc(equiconnect.e1(alpha, beta, _rat(args.t))))
    return 0


def _cmd_en(args) -> int:
    if not args.points:
        raise ValidationError("need at least one step-function file")
    first = serialize.stepfn_from_doc(_load(args.points[0]))
    points = [first] + [serialize.stepfn_from_doc(_load(p), first.space) for p in args.points[1:]]
    weights = equiconnect.SimplexWeights(tuple(_rat(w) for w in args.weights.split(",")))
    _emit(serialize.stepfn_to_doc(equiconnect.e_n(points, weights)))
    return 0


def _cmd_midpoint(args) -> int:
    alpha = serialize.stepfn_from_doc(_load(args.alpha))
    beta = serialize.stepfn_from_doc(_load(args.beta), alpha.space)
    coords = serialize.family_from_doc(_load(args.family), alpha.space)
    _emit(serialize.stepfn_to_doc(equiconnect.hm_midpoint(alpha, beta, coords)))
    return 0


def _cmd_certificate(args) -> int:
    phi = serialize.functional_from_doc(_load(args.functional))
    _emit(serialize.certificate_to_doc(equiconnect.make_certificate(phi, _rat(args.delta))))
    return 0


def _cmd_check_cert(args) -> int:
    cert = serialize.certificate_from_doc(_load(args.cert))
    space = cert.phi.space
    a1 = serialize.stepfn_from_doc(_load(args.alpha1), space)
    b1 = serialize.stepfn_from_doc(_load(args.beta1), space)
    a2 = serialize.stepfn_from_doc(_load(args.alpha2), space)
    b2 = serialize.stepfn_from_doc(_load(args.beta2), space)
    res = equiconnect.check_certificate(cert, a1, b1, _rat(args.t1), a2, b2, _rat(args.t2))
    _emit({"in_V": res.in_v, "in_E": res.in_e, "conclusion": res.conclusion})
    return 0


def _cmd_build_system(args) -> int:
    sys_ = dugundji.build_system(args.n)
    doc = {"n": args.n}
    if args.depth:
        doc["cells"] = [
            {
                "vertex": serialize.format_point(v),
                "level": sys_.level(v),
                "anchor": serialize.format_point(sys_.anchor(v)),
            }
            for v in sys_.vertices_up_to(args.depth)
        ]
    _emit(doc)
    return 0


def _cmd_verify_system(args) -> int:
    sys_ = dugundji.build_system(args.n)
    report = dugundji.verify_system(sys_, args.depth, samples=args.samples, seed=args.seed)
    _emit(
        {
            "n": report.n,
            "depth": report.depth,
            "cells_checked": report.cells_checked,
            "points_sampled": report.points_sampled,
            "violations": [
                {
                    "condition": v.condition,
                    "cell": serialize.format_point(v.cell) if v.cell is not None else None,
                    "witness": serialize.format_point(v.witness)
                    if isinstance(v.witness, (Fraction, tuple))
                    else str(v.witness),
                    "detail": v.detail,
                }
                for v in report.violations
            ],
        }
    )
    return 0 if report.ok else 1


def _cmd_extend(args) -> int:
    data = serialize.boundary_from_doc(_load(args.boundary))
    x = serialize.parse_point(args.at, data.system.n)
    _emit(serialize.stepfn_to_doc(dugundji.extend(data.system, data, x)))
    return 0


def _cmd_probe_boundary(args) -> int:
    data = serialize.boundary_from_doc(_load(args.boundary))
    p = serialize.parse_point(args.point, data.system.n)
    path = dugundji.dyadic_path(data.system, p, args.steps)
    report = dugundji.boundary_continuity_probe(data.system, data, p, path, _rat(args.tol))
    _emit(
        {
            "boundary_point": serialize.format_point(p),
            "tol": serialize.format_rational(report.tol),
            "samples": [
                {
                    "point": serialize.format_point(s.point),
                    "distance": serialize.format_rational(s.distance),
                }
                for s in report.samples
            ],
            "tail_below_tol": report.tail_below_tol,
        }
    )
    return 0


def _cmd_probe_shrink(args) -> int:
    z = serialize.stepfn_from_doc(_load(args.z))
    family = serialize.family_from_doc(_load(args.family), z.space)
    report = dugundji.shrink_probe(
        z, family, _rat(args.outer), _rat(args.inner), args.samples, args.seed, args.tuple_size
    )
    _emit(
        {
            "samples_run": report.samples_run,
            "counterexamples": [
                {
                    "weights": [serialize.format_rational(w) for w in ce.weights],
                    "points": [serialize.stepfn_to_doc(p) for p in ce.points],
                    "image_distance": serialize.format_rational(ce.image_distance),
                }
                for ce in report.counterexamples
            ],
        }
    )
    return 0 if report.ok else 1


def _cmd_check(args) -> int:
    report = suites.run_suite(args.suite, args.seed, args.cases)
    if args.json:
        _emit(report.to_doc())
    else:
        print(report.summary())
        for f in report.failures:
            print(f"  FAIL {f.property} (seed {f.seed}): {f.case}")
    return 0 if report.ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hmstep",
        description="Exact-rational step-function metric geometry.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dist", help="integral metric between two step functions")
    p.add_argument("f")
    p.add_argument("g")
    p.set_defaults(fn=_cmd_dist)

    p = sub.add_parser("eval", help="evaluate a step function")
    p.add_argument("f")
    p.add_argument("--at", required=True, metavar="P/Q")
    p.set_defaults(fn=_cmd_eval)

    p = sub.add_parser("push", help="push a step function through a space map")
    p.add_argument("map")
    p.add_argument("f")
    p.set_defaults(fn=_cmd_push)

    p = sub.add_parser("nbhd", help="basic-neighborhood membership test")
    p.add_argument("alpha")
    p.add_argument("beta")
    p.add_argument("--delta", required=True, metavar="P/Q")
    p.add_argument("--eps", required=True, metavar="P/Q")
    p.set_defaults(fn=_cmd_nbhd)

    p = sub.add_parser("avg", help="windowed averages of a family over a step function")
    p.add_argument("family")
    p.add_argument("f")
    p.set_defaults(fn=_cmd_avg)

    p = sub.add_parser("rho", help="pseudometric of a family between two step functions")
    p.add_argument("family")
    p.add_argument("f")
    p.add_argument("g")
    p.set_defaults(fn=_cmd_rho)

    p = sub.add_parser("project", help="coordinates of a step function under a family")
    p.add_argument("family")
    p.add_argument("f")
    p.set_defaults(fn=_cmd_project)

    p = sub.add_parser("sample-family", help="seeded indicator/dyadic-window family")
    p.add_argument("space")
    p.add_argument("--windows", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=_cmd_sample_family)

    p = sub.add_parser("e1", help="splice two step functions at a time")
    p.add_argument("alpha")
    p.add_argument("beta")
    p.add_argument("--t", required=True, metavar="P/Q")
    p.set_defaults(fn=_cmd_e1)

    p = sub.add_parser("en", help="iterated splice over simplex weights")
    p.add_argument("points", nargs="+")
    p.add_argument("--weights", required=True, metavar="W1,W2,...")
    p.set_defaults(fn=_cmd_en)

    p = sub.add_parser("midpoint", help="exact midpoint under a coordinate family")
    p.add_argument("alpha")
    p.add_argument("beta")
    p.add_argument("family")
    p.set_defaults(fn=_cmd_midpoint)

    p = sub.add_parser("certificate", help="uniform-continuity certificate for a functional")
    p.add_argument("functional")
    p.add_argument("--delta", required=True, metavar="P/Q")
    p.set_defaults(fn=_cmd_certificate)

    p = sub.add_parser("check-cert", help="evaluate a certificate on two splice inputs")
    p.add_argument("cert")
    p.add_argument("alpha1")
    p.add_argument("beta1")
    p.add_argument("alpha2")
    p.add_argument("beta2")
    p.add_argument("--t1", required=True, metavar="P/Q")
    p.add_argument("--t2", required=True, metavar="P/Q")
    p.set_defaults(fn=_cmd_check_cert)

    p = sub.add_parser("build-system", help="describe a Dugundji system")
    p.add_argument("--n", type=int, choices=(1, 2), required=True)
    p.add_argument("--depth", type=int, default=0)
    p.set_defaults(fn=_cmd_build_system)

    p = sub.add_parser("verify-system", help="check the system conditions up to a depth")
    p.add_argument("--n", type=int, choices=(1, 2), required=True)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=_cmd_verify_system)

    p = sub.add_parser("extend", help="extend boundary data to a point of the cube")
    p.add_argument("boundary")
    p.add_argument("--at", required=True, metavar="P/Q[,P/Q]")
    p.set_defaults(fn=_cmd_extend)

    p = sub.add_parser("probe-boundary", help="continuity probe along a dyadic path")
    p.add_argument("boundary")
    p.add_argument("--point", required=True, metavar="P/Q[,P/Q]")
    p.add_argument("--steps", type=int, default=12)
    p.add_argument("--tol", default="1/100", metavar="P/Q")
    p.set_defaults(fn=_cmd_probe_boundary)

    p = sub.add_parser("probe-shrink", help="falsification probe for neighborhood shrinking")
    p.add_argument("z")
    p.add_argument("family")
    p.add_argument("--outer", required=True, metavar="P/Q")
    p.add_argument("--inner", required=True, metavar="P/Q")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tuple-size", type=int, default=3)
    p.set_defaults(fn=_cmd_probe_shrink)

    p = sub.add_parser("check", help="run a property suite")
    p.add_argument("suite", choices=suites.SUITE_NAMES)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cases", type=int, default=1000)
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=_cmd_check)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
