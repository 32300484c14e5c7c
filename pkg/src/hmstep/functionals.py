"""Windowed averages of test functionals over step functions, the induced
pseudometrics, and finite coordinate projections.

The full family of windowed functionals is infinite; every operation here
takes an explicit finite subfamily, and :func:`sample_family` produces a
canonical seeded one (indicator functionals crossed with dyadic windows).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ._backend import kernels
from .errors import ValidationError
from .rng import SeededRng
from .space import FiniteMetricSpace, TestFunctional, _as_fraction
from .stepfn import StepFunction

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class Window:
    """An averaging window (a, b) with 0 <= a < b <= 1.

    Integration treats (a, b) and [a, b) identically; the endpoints have
    measure zero.
    """

    a: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", _as_fraction(self.a))
        object.__setattr__(self, "b", _as_fraction(self.b))
        if not (ZERO <= self.a < self.b <= ONE):
            raise ValidationError(f"window ({self.a}, {self.b}) must satisfy 0 <= a < b <= 1")

    @property
    def length(self) -> Fraction:
        return self.b - self.a


@dataclass(frozen=True)
class WindowedFunctional:
    """A test functional paired with an averaging window."""

    functional: TestFunctional
    window: Window

    @property
    def space(self) -> FiniteMetricSpace:
        return self.functional.space


def window_average(wf: WindowedFunctional, alpha: StepFunction) -> Fraction:
    """The normalized integral of phi(alpha(t)) over the window, exactly."""
    if alpha.space != wf.space:
        raise ValidationError("step function and functional live over different spaces")
    bn, bd, iv = alpha._kernel_view
    pn, pd = wf.functional._flat
    w = wf.window
    num, den = kernels.window_integral(
        bn, bd, iv, pn, pd, w.a.numerator, w.a.denominator, w.b.numerator, w.b.denominator
    )
    return Fraction(num, den) / w.length


def pseudometric(wfs: Sequence[WindowedFunctional], f: StepFunction, g: StepFunction) -> Fraction:
    """max over the family of |avg(wf, f) - avg(wf, g)|."""
    if not wfs:
        raise ValidationError("pseudometric needs a nonempty family")
    return max(abs(window_average(wf, f) - window_average(wf, g)) for wf in wfs)


def project(alpha: StepFunction, family: Sequence[WindowedFunctional]) -> tuple[Fraction, ...]:
    """Coordinates of alpha under a finite set of windowed functionals."""
    if not family:
        raise ValidationError("projection needs a nonempty family")
    return tuple(window_average(wf, alpha) for wf in family)


def convex_midpoint_vector(u: Sequence[Fraction], v: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """Coordinatewise exact average of two equal-length rational vectors."""
    if len(u) != len(v):
        raise ValidationError("midpoint of vectors of different lengths")
    return tuple((a + b) / 2 for a, b in zip(u, v))


def indicator(space: FiniteMetricSpace, label: str) -> TestFunctional:
    """The functional that is 1 at ``label`` and 0 elsewhere."""
    i = space.index(label)
    return TestFunctional(space, tuple(ONE if j == i else ZERO for j in range(len(space))))


def sample_family(space: FiniteMetricSpace, windows: int, seed: int) -> tuple[WindowedFunctional, ...]:
    """A deterministic seeded family: one indicator per point crossed with
    ``windows`` distinct dyadic windows, the first always (0, 1)."""
    if windows < 1:
        raise ValidationError("need at least one window")
    rng = SeededRng(seed)
    chosen: list[Window] = [Window(ZERO, ONE)]
    seen = {(ZERO, ONE)}
    while len(chosen) < windows:
        level = rng.int_in(1, 4)
        cells = 1 << level
        j = rng.int_in(0, cells - 1)
        run = rng.int_in(1, cells - j)
        a = Fraction(j, cells)
        b = Fraction(j + run, cells)
        if (a, b) not in seen:
            seen.add((a, b))
            chosen.append(Window(a, b))
    return tuple(
        WindowedFunctional(indicator(space, p), w) for p in space.points for w in chosen
    )
