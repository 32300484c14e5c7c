"""Finite metric spaces, test functionals on them, and maps between spaces.

All distances and functional values are exact rationals; the metric is
required to be bounded by 1.  Values are immutable after validation and
every operation is a pure function, so everything here is safe for
unrestricted concurrent use.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Mapping, Sequence

from .errors import ValidationError


@dataclass(frozen=True)
class FiniteMetricSpace:
    """A finite set of labelled points with a rational metric bounded by 1.

    Construct through :func:`validate_space`; the constructor itself does
    not re-check the axioms.  The order of ``points`` fixes all iteration
    orders downstream.
    """

    points: tuple[str, ...]
    dist: tuple[tuple[Fraction, ...], ...]

    @cached_property
    def _index(self) -> dict[str, int]:
        return {p: i for i, p in enumerate(self.points)}

    @cached_property
    def _dist_flat(self) -> tuple[list[int], list[int]]:
        # parallel numerator/denominator tables for the kernels
        nums, dens = [], []
        for row in self.dist:
            for q in row:
                nums.append(q.numerator)
                dens.append(q.denominator)
        return nums, dens

    def __len__(self) -> int:
        return len(self.points)

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise ValidationError(f"unknown point label {label!r}") from None

    def d(self, a: str, b: str) -> Fraction:
        return self.dist[self.index(a)][self.index(b)]

    def d_idx(self, i: int, j: int) -> Fraction:
        return self.dist[i][j]

    @cached_property
    def diameter(self) -> Fraction:
        return max((q for row in self.dist for q in row), default=Fraction(0))


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        from .serialize import parse_rational

        return parse_rational(value)
    raise ValidationError(f"not an exact rational: {value!r}")


def validate_space(points: Sequence[str], dist: Sequence[Sequence]) -> FiniteMetricSpace:
    """Check every metric axiom and return the validated space.

    Rejection names the first violated axiom: shape mismatch, duplicate
    label, nonzero diagonal, zero off-diagonal, asymmetry, bound exceeded,
    or triangle inequality.
    """
    labels = tuple(str(p) for p in points)
    if not labels:
        raise ValidationError("empty point list")
    if len(set(labels)) != len(labels):
        raise ValidationError("duplicate point labels")
    if len(dist) != len(labels) or any(len(row) != len(labels) for row in dist):
        raise ValidationError("distance table is not square over the point list")

    table = tuple(tuple(_as_fraction(v) for v in row) for row in dist)
    n = len(labels)
    for i in range(n):
        if table[i][i] != 0:
            raise ValidationError(f"nonzero diagonal: d({labels[i]},{labels[i]}) = {table[i][i]}")
    for i in range(n):
        for j in range(i + 1, n):
            if table[i][j] != table[j][i]:
                raise ValidationError(f"asymmetry: d({labels[i]},{labels[j]}) != d({labels[j]},{labels[i]})")
            if table[i][j] <= 0:
                raise ValidationError(f"zero off-diagonal: d({labels[i]},{labels[j]}) must be positive")
            if table[i][j] > 1:
                raise ValidationError(f"bound exceeded: d({labels[i]},{labels[j]}) = {table[i][j]} > 1")
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if table[i][j] > table[i][k] + table[k][j]:
                    raise ValidationError(
                        "triangle inequality: "
                        f"d({labels[i]},{labels[j]}) > d({labels[i]},{labels[k]}) + d({labels[k]},{labels[j]})"
                    )
    return FiniteMetricSpace(labels, table)


@dataclass(frozen=True)
class TestFunctional:
    """A rational-valued function on the points of a space.

    On a finite space every function is continuous, so this is the full
    dual test family.  Values are stored in point order.
    """

    space: FiniteMetricSpace
    values: tuple[Fraction, ...]

    @classmethod
    def from_mapping(cls, space: FiniteMetricSpace, table: Mapping[str, object]) -> "TestFunctional":
        missing = [p for p in space.points if p not in table]
        if missing:
            raise ValidationError(f"functional missing values for {missing}")
        extra = [k for k in table if k not in space._index]
        if extra:
            raise ValidationError(f"functional has values for unknown labels {extra}")
        return cls(space, tuple(_as_fraction(table[p]) for p in space.points))

    def __post_init__(self):
        if len(self.values) != len(self.space.points):
            raise ValidationError("functional must assign exactly one value per point")

    @cached_property
    def _flat(self) -> tuple[list[int], list[int]]:
        return [v.numerator for v in self.values], [v.denominator for v in self.values]

    def value(self, label: str) -> Fraction:
        return self.values[self.space.index(label)]

    def value_idx(self, i: int) -> Fraction:
        return self.values[i]


def functional_norm(phi: TestFunctional) -> Fraction:
    """max over points of |phi(x)|."""
    return max(abs(v) for v in phi.values)


def functional_range(phi: TestFunctional) -> tuple[Fraction, Fraction]:
    """The interval [min |phi(x)|, max |phi(x)|].

    This is the absolute-value reading of the coordinate interval; see
    :func:`functional_value_bounds` for the signed envelope that window
    averages actually stay inside.
    """
    magnitudes = [abs(v) for v in phi.values]
    return min(magnitudes), max(magnitudes)


def functional_value_bounds(phi: TestFunctional) -> tuple[Fraction, Fraction]:
    """The signed interval [min phi(x), max phi(x)]; window averages of
    phi over any step function land in it."""
    return min(phi.values), max(phi.values)


def lipschitz_seminorm(phi: TestFunctional) -> Fraction:
    """max over point pairs of |phi(x) - phi(y)| / d(x, y).

    The sharp constant linking window-average gaps to the integral metric.
    """
    best = Fraction(0)
    n = len(phi.values)
    for i in range(n):
        for j in range(i + 1, n):
            ratio = abs(phi.values[i] - phi.values[j]) / phi.space.d_idx(i, j)
            if ratio > best:
                best = ratio
    return best


@dataclass(frozen=True)
class SpaceMap:
    """A total map between the point sets of two spaces."""

    domain: FiniteMetricSpace
    codomain: FiniteMetricSpace
    table: tuple[int, ...]  # domain index -> codomain index

    @classmethod
    def from_mapping(
        cls,
        domain: FiniteMetricSpace,
        codomain: FiniteMetricSpace,
        table: Mapping[str, str],
    ) -> "SpaceMap":
        missing = [p for p in domain.points if p not in table]
        if missing:
            raise ValidationError(f"map missing images for {missing}")
        return cls(domain, codomain, tuple(codomain.index(str(table[p])) for p in domain.points))

    @classmethod
    def identity(cls, space: FiniteMetricSpace) -> "SpaceMap":
        return cls(space, space, tuple(range(len(space.points))))

    def __post_init__(self):
        if len(self.table) != len(self.domain.points):
            raise ValidationError("map must send every domain point somewhere")
        for i in self.table:
            if not 0 <= i < len(self.codomain.points):
                raise ValidationError("map image outside codomain")

    def apply(self, label: str) -> str:
        return self.codomain.points[self.table[self.domain.index(label)]]

    def apply_idx(self, i: int) -> int:
        return self.table[i]

    def after(self, other: "SpaceMap") -> "SpaceMap":
        """The composite map: apply ``other`` first, then ``self``."""
        if other.codomain != self.domain:
            raise ValidationError("composition mismatch: codomain of inner != domain of outer")
        return SpaceMap(other.domain, self.codomain, tuple(self.table[i] for i in other.table))
