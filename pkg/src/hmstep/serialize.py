"""Document codecs: exact rationals as "p/q" strings and the JSON-shaped
dict forms of every object the CLI reads or writes.

Rationals are always emitted reduced with a positive denominator, so
parse(format(r)) == r for every rational.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Mapping

from .errors import ValidationError
from .space import FiniteMetricSpace, SpaceMap, TestFunctional, validate_space
from .stepfn import StepFunction, canonicalize
from .functionals import Window, WindowedFunctional
from .equiconnect import ContinuityCertificate, make_certificate

_RATIONAL = re.compile(r"^[+-]?\d+(/(\d+))?$")


def parse_rational(text: str) -> Fraction:
    """Parse "p" or "p/q" with integer p and positive integer q."""
    if not isinstance(text, str) or not _RATIONAL.match(text):
        raise ValidationError(f"malformed rational {text!r}")
    if "/" in text:
        num, den = text.split("/")
        if int(den) == 0:
            raise ValidationError(f"zero denominator in {text!r}")
        return Fraction(int(num), int(den))
    return Fraction(int(text))


def format_rational(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_point(text: str, n: int):
    """A boundary or evaluation point: "p/q" for n=1, "p/q,p/q" for n=2."""
    parts = [s.strip() for s in str(text).split(",")]
    if len(parts) != n:
        raise ValidationError(f"point {text!r} must have {n} coordinate(s)")
    coords = [parse_rational(p) for p in parts]
    return coords[0] if n == 1 else tuple(coords)


def format_point(p) -> str:
    if isinstance(p, tuple):
        return ",".join(format_rational(c) for c in p)
    return format_rational(p)


# ---------------------------------------------------------------------------
# spaces, functionals, maps


def space_to_doc(space: FiniteMetricSpace) -> dict:
    return {
        "points": list(space.points),
        "dist": [[format_rational(q) for q in row] for row in space.dist],
    }


def space_from_doc(doc: Mapping) -> FiniteMetricSpace:
    try:
        points = doc["points"]
        dist = doc["dist"]
    except (KeyError, TypeError):
        raise ValidationError("space document needs 'points' and 'dist'") from None
    return validate_space(points, dist)


def functional_to_doc(phi: TestFunctional) -> dict:
    return {
        "space": space_to_doc(phi.space),
        "values": {p: format_rational(v) for p, v in zip(phi.space.points, phi.values)},
    }


def functional_from_doc(doc: Mapping, space: FiniteMetricSpace | None = None) -> TestFunctional:
    if space is None:
        space = space_from_doc(doc["space"])
    return TestFunctional.from_mapping(space, doc["values"])


def map_to_doc(m: SpaceMap) -> dict:
    return {
        "table": {p: m.apply(p) for p in m.domain.points},
        "domain": space_to_doc(m.domain),
        "codomain": space_to_doc(m.codomain),
    }


def map_from_doc(
    doc: Mapping,
    domain: FiniteMetricSpace | None = None,
    codomain: FiniteMetricSpace | None = None,
) -> SpaceMap:
    if domain is None:
        if "domain" not in doc:
            raise ValidationError("map document carries no domain space")
        domain = space_from_doc(doc["domain"])
    if codomain is None:
        if "codomain" in doc:
            codomain = space_from_doc(doc["codomain"])
        else:
            codomain = domain
    return SpaceMap.from_mapping(domain, codomain, doc["table"])


# ---------------------------------------------------------------------------
# step functions, windows, families


def stepfn_to_doc(f: StepFunction) -> dict:
    return {
        "space": space_to_doc(f.space),
        "breakpoints": [format_rational(t) for t in f.breakpoints],
        "values": list(f.values),
    }


def stepfn_from_doc(doc: Mapping, space: FiniteMetricSpace | None = None) -> StepFunction:
    if space is None:
        space = space_from_doc(doc["space"])
    return canonicalize(space, [parse_rational(t) for t in doc["breakpoints"]], doc["values"])


def window_to_doc(w: Window) -> dict:
    return {"a": format_rational(w.a), "b": format_rational(w.b)}


def window_from_doc(doc: Mapping) -> Window:
    return Window(parse_rational(doc["a"]), parse_rational(doc["b"]))


def family_to_doc(family) -> list:
    return [
        {"functional": functional_to_doc(wf.functional), "window": window_to_doc(wf.window)}
        for wf in family
    ]


def family_from_doc(doc, space: FiniteMetricSpace | None = None) -> tuple[WindowedFunctional, ...]:
    if not isinstance(doc, list) or not doc:
        raise ValidationError("family document must be a nonempty list")
    out = []
    for rec in doc:
        phi = functional_from_doc(rec["functional"], space)
        out.append(WindowedFunctional(phi, window_from_doc(rec["window"])))
    return tuple(out)


# ---------------------------------------------------------------------------
# certificates


def certificate_to_doc(cert: ContinuityCertificate) -> dict:
    return {
        "functional": functional_to_doc(cert.phi),
        "delta": format_rational(cert.delta),
        "c": format_rational(cert.c),
        "n": cert.n,
        "grid": [format_rational(a) for a in cert.grid],
        "v_threshold": format_rational(cert.v_threshold),
        "e_threshold": format_rational(cert.e_threshold),
    }


def certificate_from_doc(doc: Mapping) -> ContinuityCertificate:
    phi = functional_from_doc(doc["functional"])
    cert = make_certificate(phi, parse_rational(doc["delta"]))
    stated = (
        int(doc["n"]),
        parse_rational(doc["v_threshold"]),
        parse_rational(doc["e_threshold"]),
    )
    if stated != (cert.n, cert.v_threshold, cert.e_threshold):
        raise ValidationError("certificate document inconsistent with its functional and delta")
    return cert


# ---------------------------------------------------------------------------
# boundary data


def boundary_to_doc(data) -> dict:
    return {
        "system": {"n": data.system.n},
        "values": {format_point(p): stepfn_to_doc(f) for p, f in data.values.items()},
    }


def boundary_from_doc(doc: Mapping, system=None):
    from .dugundji import BoundaryData, build_system

    n = int(doc["system"]["n"])
    if system is None:
        system = build_system(n)
    space = None
    table = {}
    for key, sub in doc["values"].items():
        f = stepfn_from_doc(sub, space)
        space = f.space
        table[parse_point(key, n)] = f
    return BoundaryData(system, table)
