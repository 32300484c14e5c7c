"""Piecewise-constant right-open step functions on [0, 1) and the integral
metric between them.

A step function is stored in canonical form: strictly increasing rational
breakpoints from 0 to 1, one point label per piece, no two adjacent pieces
equal.  Two raw descriptions of the same function always canonicalize to
the same object, and equality of step functions is equality of canonical
forms.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from ._backend import kernels
from .errors import ValidationError
from .space import FiniteMetricSpace, SpaceMap, _as_fraction

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class StepFunction:
    """A canonical step function; build through :func:`canonicalize`."""

    space: FiniteMetricSpace
    breakpoints: tuple[Fraction, ...]
    values: tuple[str, ...]

    @cached_property
    def _kernel_view(self) -> tuple[list[int], list[int], list[int]]:
        bn = [t.numerator for t in self.breakpoints]
        bd = [t.denominator for t in self.breakpoints]
        iv = [self.space.index(v) for v in self.values]
        return bn, bd, iv

    def __repr__(self) -> str:
        pieces = ", ".join(
            f"{v}@[{self.breakpoints[i]},{self.breakpoints[i + 1]})"
            for i, v in enumerate(self.values)
        )
        return f"StepFunction({pieces})"


def canonicalize(space: FiniteMetricSpace, breakpoints: Sequence, values: Sequence[str]) -> StepFunction:
    """Build the canonical form of raw step data.

    Zero-length pieces are dropped and adjacent equal values merged.
    Breakpoints must be nondecreasing, start at 0 and end at 1, with one
    value per piece.
    """
    pts = [_as_fraction(t) for t in breakpoints]
    vals = [str(v) for v in values]
    if not vals:
        raise ValidationError("step function needs at least one piece")
    if len(pts) != len(vals) + 1:
        raise ValidationError("need exactly one value per piece")
    if pts[0] != 0 or pts[-1] != 1:
        raise ValidationError("breakpoints must start at 0 and end at 1")
    for a, b in zip(pts, pts[1:]):
        if b < a:
            raise ValidationError("breakpoints must be nondecreasing")
        if a < 0 or b > 1:
            raise ValidationError("breakpoint outside [0, 1]")
    for v in vals:
        space.index(v)  # raises on unknown label

    out_b = [ZERO]
    out_v: list[str] = []
    for i, v in enumerate(vals):
        if pts[i + 1] == pts[i]:
            continue  # zero measure
        if out_v and out_v[-1] == v:
            out_b[-1] = pts[i + 1]
        else:
            out_b.append(pts[i + 1])
            out_v.append(v)
    if not out_v:
        raise ValidationError("step function needs at least one piece of positive length")
    return StepFunction(space, tuple(out_b), tuple(out_v))


def constant(space: FiniteMetricSpace, label: str) -> StepFunction:
    return canonicalize(space, (ZERO, ONE), (label,))


def from_pairs(space: FiniteMetricSpace, pairs: Sequence[tuple]) -> StepFunction:
    """Build from [(breakpoint, value), ...]; the last piece runs to 1."""
    breaks = [p[0] for p in pairs] + [ONE]
    return canonicalize(space, breaks, [p[1] for p in pairs])


def evaluate(f: StepFunction, t) -> str:
    """Value of the unique piece with t_i <= t < t_{i+1}."""
    t = _as_fraction(t)
    if not ZERO <= t < ONE:
        raise ValidationError(f"evaluation point {t} outside [0, 1)")
    # rightmost breakpoint <= t owns the piece (right-open convention)
    return f.values[bisect_right(f.breakpoints, t) - 1]


def piece_count(f: StepFunction) -> int:
    return len(f.values)


def in_hm_n(f: StepFunction, n: int) -> bool:
    """Whether f has at most n constancy pieces."""
    if n < 1:
        raise ValidationError("piece bound must be at least 1")
    return piece_count(f) <= n


def _require_same_space(f: StepFunction, g: StepFunction) -> None:
    if f.space != g.space:
        raise ValidationError("step functions live over different spaces")


def common_refinement(
    f: StepFunction, g: StepFunction
) -> tuple[tuple[Fraction, ...], list[tuple[str, str]]]:
    """Union of both breakpoint sets plus the (f value, g value) pair on
    each refined piece."""
    _require_same_space(f, g)
    merged = sorted(set(f.breakpoints) | set(g.breakpoints))
    pairs = [(evaluate(f, t), evaluate(g, t)) for t in merged[:-1]]
    return tuple(merged), pairs


def hm_distance(f: StepFunction, g: StepFunction) -> Fraction:
    """The integral of d(f(t), g(t)) over [0, 1), exactly."""
    _require_same_space(f, g)
    fbn, fbd, fiv = f._kernel_view
    gbn, gbd, giv = g._kernel_view
    wn, wd = f.space._dist_flat
    num, den = kernels.pair_integral(fbn, fbd, fiv, gbn, gbd, giv, wn, wd, len(f.space))
    return Fraction(num, den)


def neighborhood_contains(alpha: StepFunction, delta, eps, beta: StepFunction) -> bool:
    """Whether the set {t : d(alpha(t), beta(t)) >= delta} has measure < eps.

    This is membership of ``beta`` in the basic neighborhood of ``alpha``
    carved out by the metric entourage of radius ``delta`` and the measure
    bound ``eps``; both inequalities are strict, exactly as stated.
    """
    _require_same_space(alpha, beta)
    delta = _as_fraction(delta)
    eps = _as_fraction(eps)
    if delta <= 0 or eps <= 0:
        raise ValidationError("entourage radius and measure bound must be positive")
    fbn, fbd, fiv = alpha._kernel_view
    gbn, gbd, giv = beta._kernel_view
    wn, wd = alpha.space._dist_flat
    num, den = kernels.measure_at_least(
        fbn, fbd, fiv, gbn, gbd, giv, wn, wd, len(alpha.space), delta.numerator, delta.denominator
    )
    return Fraction(num, den) < eps


def pushforward(m: SpaceMap, f: StepFunction) -> StepFunction:
    """Compose f with a space map pointwise; the result re-canonicalizes."""
    if f.space != m.domain:
        raise ValidationError("step function does not live in the map's domain")
    return canonicalize(m.codomain, f.breakpoints, [m.apply(v) for v in f.values])
