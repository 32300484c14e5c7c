"""Dugundji systems for the open interval and the open square, and the
extension operator built from the iterated splice.

A system is an implicit, lazily enumerated family of open cells covering
the interior, each cell carrying a boundary anchor, together with a
piecewise-linear partition of unity.  Cells are the open vertex stars of a
locally finite triangulation whose granularity halves toward the boundary,
so at most ``n + 1`` cells contain any point.  The governing conditions:

  (1) every cell stays inside the open cube and every anchor lies on the
      boundary;
  (2) the cells cover the interior, the cover is locally finite, and no
      point lies in more than ``n + 1`` cells;
  (3) for x in the cell anchored at a: d(x, a) <= 2 d(x, boundary) in the
      max-coordinate metric.

Condition (3) is decided exactly: h(x) = d(x, a) - 2 d(x, boundary) is
convex on every triangle (a max of affine functions minus twice a min of
affine functions), so h <= 0 at the triangle corners certifies h <= 0 on
the whole closed cell.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .errors import ValidationError
from .equiconnect import SimplexWeights, e_n
from .functionals import WindowedFunctional, pseudometric
from .rng import SeededRng
from .space import _as_fraction
from .stepfn import StepFunction, canonicalize, evaluate, hm_distance

ZERO = Fraction(0)
ONE = Fraction(1)
HALF = Fraction(1, 2)

Point2 = tuple[Fraction, Fraction]
Triangle = tuple[Point2, Point2, Point2]


# ---------------------------------------------------------------------------
# n = 1: the open interval


def _interval_boundary_gap(x: Fraction) -> Fraction:
    return min(x, 1 - x)


class IntervalSystem:
    """Dugundji system for (0, 1).

    Vertices are the dyadic points 2**-k and 1 - 2**-k together with 7/16
    and 9/16; the two extra vertices keep the star of 1/2 inside the zone
    where a one-sided anchor satisfies the factor-2 bound.  Cells are the
    open stars (prev, next) of the path triangulation; hats are the usual
    piecewise-linear peaks.
    """

    n = 1

    def __init__(self, anchor_overrides: dict[Fraction, Fraction] | None = None):
        self._overrides = dict(anchor_overrides or {})
        self._mid = (Fraction(7, 16), HALF, Fraction(9, 16))

    # vertex enumeration -----------------------------------------------------

    def level_vertices(self, level: int) -> list[Fraction]:
        if level < 1:
            raise ValidationError("level must be at least 1")
        if level == 1:
            return list(self._mid)
        k = level
        return [Fraction(1, 2**k), 1 - Fraction(1, 2**k)]

    def vertices_up_to(self, depth: int) -> list[Fraction]:
        out: list[Fraction] = []
        for lv in range(1, depth + 1):
            out.extend(self.level_vertices(lv))
        return sorted(out)

    def level(self, v: Fraction) -> int:
        if v in self._mid:
            return 1
        gap = _interval_boundary_gap(v)
        if gap.numerator != 1 or gap.denominator & (gap.denominator - 1):
            raise ValidationError(f"{v} is not a system vertex")
        k = gap.denominator.bit_length() - 1
        if k < 2:
            raise ValidationError(f"{v} is not a system vertex")
        return k

    def order_key(self, v: Fraction):
        return (self.level(v), v)

    # local structure --------------------------------------------------------

    def neighbors(self, v: Fraction) -> tuple[Fraction, Fraction]:
        """The vertices immediately before and after v."""
        if v == Fraction(7, 16):
            return Fraction(1, 4), HALF
        if v == HALF:
            return Fraction(7, 16), Fraction(9, 16)
        if v == Fraction(9, 16):
            return HALF, Fraction(3, 4)
        k = self.level(v)
        if v < HALF:
            nxt = Fraction(7, 16) if k == 2 else Fraction(1, 2 ** (k - 1))
            return Fraction(1, 2 ** (k + 1)), nxt
        prv = Fraction(9, 16) if k == 2 else 1 - Fraction(1, 2 ** (k - 1))
        return prv, 1 - Fraction(1, 2 ** (k + 1))

    def star(self, v: Fraction) -> tuple[Fraction, Fraction]:
        return self.neighbors(v)

    def cell_pieces(self, v: Fraction) -> list[tuple[Fraction, Fraction]]:
        """The closed segments of the star, for the convexity certificate."""
        lo, hi = self.neighbors(v)
        return [(lo, v), (v, hi)]

    def anchor(self, v: Fraction) -> Fraction:
        if v in self._overrides:
            return self._overrides[v]
        return ZERO if v <= HALF else ONE

    def contains(self, v: Fraction, x: Fraction) -> bool:
        lo, hi = self.neighbors(v)
        return lo < x < hi

    def hat(self, v: Fraction, x: Fraction) -> Fraction:
        lo, hi = self.neighbors(v)
        if not lo < x < hi:
            return ZERO
        if x <= v:
            return (x - lo) / (v - lo)
        return (hi - x) / (hi - v)

    def bracket(self, x: Fraction) -> tuple[Fraction, Fraction]:
        """Consecutive vertices u <= x < w."""
        quarters = [Fraction(1, 4), Fraction(7, 16), HALF, Fraction(9, 16), Fraction(3, 4)]
        if quarters[0] <= x < quarters[-1]:
            for u, w in zip(quarters, quarters[1:]):
                if u <= x < w:
                    return u, w
        if x < Fraction(1, 4):
            k = 2
            while Fraction(1, 2 ** (k + 1)) > x:
                k += 1
            return Fraction(1, 2 ** (k + 1)), Fraction(1, 2**k)
        # x >= 3/4: mirror of the left tail; the bracket is right-open, so
        # the vertex at 1 - 2**-k owns [1 - 2**-k, 1 - 2**-(k+1))
        k = 2
        while Fraction(1, 2 ** (k + 1)) >= 1 - x:
            k += 1
        return 1 - Fraction(1, 2**k), 1 - Fraction(1, 2 ** (k + 1))

    def pou_eval(self, x) -> list[tuple[Fraction, Fraction]]:
        x = _as_fraction(x)
        if not ZERO < x < ONE:
            raise ValidationError(f"partition of unity undefined at {x}: not interior")
        u, w = self.bracket(x)
        if x == u:
            return [(u, ONE)]
        entries = [(u, (w - x) / (w - u)), (w, (x - u) / (w - u))]
        entries.sort(key=lambda e: self.order_key(e[0]))
        return entries

    def boundary_gap(self, x: Fraction) -> Fraction:
        return _interval_boundary_gap(x)

    def point_metric(self, x: Fraction, y: Fraction) -> Fraction:
        return abs(x - y)

    def is_boundary(self, x: Fraction) -> bool:
        return x == 0 or x == 1

    def interior_sample(self, rng: SeededRng) -> Fraction:
        return rng.fraction(Fraction(1, 128), Fraction(127, 128), 128)


# ---------------------------------------------------------------------------
# n = 2: the open square


def _square_boundary_gap(p: Point2) -> Fraction:
    x, y = p
    return min(x, 1 - x, y, 1 - y)


def _rot(p: Point2) -> Point2:
    """Quarter rotation about the center of the square."""
    return (1 - p[1], p[0])


def _rot_inv(p: Point2) -> Point2:
    return (p[1], 1 - p[0])


def _apply(f, p: Point2, times: int) -> Point2:
    for _ in range(times):
        p = f(p)
    return p


def _cross(o: Point2, a: Point2, b: Point2) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _in_triangle(p: Point2, tri: Triangle) -> bool:
    s1 = _cross(tri[0], tri[1], p)
    s2 = _cross(tri[1], tri[2], p)
    s3 = _cross(tri[2], tri[0], p)
    return (s1 >= 0 and s2 >= 0 and s3 >= 0) or (s1 <= 0 and s2 <= 0 and s3 <= 0)


def _barycentric(p: Point2, tri: Triangle) -> tuple[Fraction, Fraction, Fraction]:
    v1, v2, v3 = tri
    den = _cross(v1, v2, v3)
    w1 = _cross(p, v2, v3) / den
    w2 = _cross(p, v3, v1) / den
    w3 = _cross(p, v1, v2) / den
    return w1, w2, w3


class SquareSystem:
    """Dugundji system for the open unit square.

    The interior is meshed by concentric dyadic rings: the central block
    [1/4, 3/4]^2 on a 1/8 grid, then for each k >= 2 a one-square-thick
    ring between the contours at distances 2**-k and 2**-(k+1) from the
    boundary.  The contour at distance t carries vertices spaced t/2, so
    consecutive rings meet in a 2:1 transition resolved by the hanging
    midpoints; the squares at the ends of each strip use a corner-
    protecting diagonal so that no inner-corner star reaches far-side
    midpoints (which would break the factor-2 anchor bound).
    """

    n = 2

    def __init__(self, anchor_overrides: dict[Point2, Point2] | None = None):
        self._overrides = dict(anchor_overrides or {})
        self._ring_cache: dict[int, list[Triangle]] = {}
        self._incidence: dict[Point2, list[Triangle]] = {}
        self._incidence_depth = 0

    # mesh generation ---------------------------------------------------------

    def _central_triangles(self) -> list[Triangle]:
        h = Fraction(1, 8)
        base = Fraction(1, 4)
        out: list[Triangle] = []
        for i in range(4):
            for j in range(4):
                gx = base + i * h
                gy = base + j * h
                p00 = (gx, gy)
                p10 = (gx + h, gy)
                p01 = (gx, gy + h)
                p11 = (gx + h, gy + h)
                out.append((p00, p10, p11))
                out.append((p00, p11, p01))
        return out

    def _ring_triangles(self, k: int) -> list[Triangle]:
        """Triangles of ring k; ring 1 is the central block."""
        if k in self._ring_cache:
            return self._ring_cache[k]
        if k == 1:
            tris = self._central_triangles()
        else:
            t_in = Fraction(1, 2**k)
            t_out = Fraction(1, 2 ** (k + 1))
            s = Fraction(1, 2 ** (k + 2))
            base: list[Triangle] = []

            # bottom strip: squares of side 2s, hanging midpoint below
            count = 2 ** (k + 1) - 4
            for i in range(count):
                x0 = t_in + 2 * s * i
                a = (x0, t_out)
                m = (x0 + s, t_out)
                b = (x0 + 2 * s, t_out)
                d = (x0, t_in)
                c = (x0 + 2 * s, t_in)
                if i == 0:
                    # protect the inner-left corner: no d-m edge
                    base += [(a, m, c), (a, c, d), (m, b, c)]
                elif i == count - 1:
                    # protect the inner-right corner: no c-m edge
                    base += [(d, a, m), (d, m, b), (d, b, c)]
                else:
                    base += [(d, a, m), (d, m, c), (c, m, b)]

            # bottom-left corner square, fanned from its bottom midpoint
            p00 = (t_out, t_out)
            mb = (t_out + s, t_out)
            p10 = (t_in, t_out)
            p11 = (t_in, t_in)
            p01 = (t_out, t_in)
            ml = (t_out, t_out + s)
            base += [(mb, p10, p11), (mb, p11, p01), (mb, p01, ml), (mb, ml, p00)]

            tris = []
            for r in range(4):
                for tri in base:
                    tris.append(tuple(_apply(_rot, p, r) for p in tri))  # type: ignore[arg-type]
        self._ring_cache[k] = tris
        return tris

    def _ensure_incidence(self, depth: int) -> None:
        if depth <= self._incidence_depth:
            return
        for k in range(self._incidence_depth + 1, depth + 1):
            for tri in self._ring_triangles(k):
                for p in tri:
                    self._incidence.setdefault(p, []).append(tri)
        self._incidence_depth = depth

    # vertex structure --------------------------------------------------------

    def level(self, v: Point2) -> int:
        gap = _square_boundary_gap(v)
        if gap <= 0:
            raise ValidationError(f"{v} is not interior")
        if gap >= Fraction(1, 4):
            return 1
        k = 2
        while Fraction(1, 2 ** (k + 1)) > gap:
            k += 1
        return k

    def order_key(self, v: Point2):
        return (self.level(v), v)

    def vertices_up_to(self, depth: int) -> list[Point2]:
        self._ensure_incidence(depth + 1)
        found = {p for p in self._incidence if self.level(p) <= depth}
        return sorted(found, key=self.order_key)

    def star_triangles(self, v: Point2) -> list[Triangle]:
        self._ensure_incidence(self.level(v) + 1)
        tris = self._incidence.get(v)
        if not tris:
            raise ValidationError(f"{v} is not a system vertex")
        return tris

    def anchor(self, v: Point2) -> Point2:
        if v in self._overrides:
            return self._overrides[v]
        x, y = v
        gap = _square_boundary_gap(v)
        candidates = []
        if x == gap:
            candidates.append((ZERO, y))
        if y == gap:
            candidates.append((x, ZERO))
        if 1 - x == gap:
            candidates.append((ONE, y))
        if 1 - y == gap:
            candidates.append((x, ONE))
        return min(candidates)

    # point location ----------------------------------------------------------

    def locate(self, p: Point2) -> Triangle:
        gap = _square_boundary_gap(p)
        if gap <= 0:
            raise ValidationError(f"{p} is not interior")
        if gap >= Fraction(1, 4):
            return self._locate_central(p)
        k = 2
        while Fraction(1, 2 ** (k + 1)) > gap:
            k += 1
        return self._locate_ring(p, k)

    def _locate_central(self, p: Point2) -> Triangle:
        h = Fraction(1, 8)
        base = Fraction(1, 4)
        i = min(int((p[0] - base) / h), 3)
        j = min(int((p[1] - base) / h), 3)
        gx = base + i * h
        gy = base + j * h
        p00 = (gx, gy)
        p10 = (gx + h, gy)
        p01 = (gx, gy + h)
        p11 = (gx + h, gy + h)
        for tri in ((p00, p10, p11), (p00, p11, p01)):
            if _in_triangle(p, tri):
                return tri
        raise AssertionError(f"central location failed at {p}")

    def _locate_ring(self, p: Point2, k: int) -> Triangle:
        t_in = Fraction(1, 2**k)
        t_out = Fraction(1, 2 ** (k + 1))
        s = Fraction(1, 2 ** (k + 2))
        count = 2 ** (k + 1) - 4
        for r in range(4):
            q = _apply(_rot_inv, p, r)
            in_corner = t_out <= q[0] <= t_in and t_out <= q[1] <= t_in
            in_strip = t_out <= q[1] <= t_in and t_in <= q[0] <= 1 - t_in
            if not (in_corner or in_strip):
                continue
            if in_corner:
                p00 = (t_out, t_out)
                mb = (t_out + s, t_out)
                p10 = (t_in, t_out)
                p11 = (t_in, t_in)
                p01 = (t_out, t_in)
                ml = (t_out, t_out + s)
                tris = [(mb, p10, p11), (mb, p11, p01), (mb, p01, ml), (mb, ml, p00)]
            else:
                i = min(int((q[0] - t_in) / (2 * s)), count - 1)
                x0 = t_in + 2 * s * i
                a = (x0, t_out)
                m = (x0 + s, t_out)
                b = (x0 + 2 * s, t_out)
                d = (x0, t_in)
                c = (x0 + 2 * s, t_in)
                if i == 0:
                    tris = [(a, m, c), (a, c, d), (m, b, c)]
                elif i == count - 1:
                    tris = [(d, a, m), (d, m, b), (d, b, c)]
                else:
                    tris = [(d, a, m), (d, m, c), (c, m, b)]
            for tri in tris:
                if _in_triangle(q, tri):
                    return tuple(_apply(_rot, v, r) for v in tri)  # type: ignore[return-value]
        raise AssertionError(f"ring location failed at {p}")

    def pou_eval(self, p) -> list[tuple[Point2, Fraction]]:
        p = (_as_fraction(p[0]), _as_fraction(p[1]))
        if not (ZERO < p[0] < ONE and ZERO < p[1] < ONE):
            raise ValidationError(f"partition of unity undefined at {p}: not interior")
        tri = self.locate(p)
        weights = _barycentric(p, tri)
        entries = [(v, w) for v, w in zip(tri, weights) if w > 0]
        entries.sort(key=lambda e: self.order_key(e[0]))
        return entries

    def boundary_gap(self, p: Point2) -> Fraction:
        return _square_boundary_gap(p)

    def point_metric(self, p: Point2, q: Point2) -> Fraction:
        return max(abs(p[0] - q[0]), abs(p[1] - q[1]))

    def is_boundary(self, p: Point2) -> bool:
        return _square_boundary_gap(p) == 0

    def interior_sample(self, rng: SeededRng) -> Point2:
        lo, hi = Fraction(1, 128), Fraction(127, 128)
        return (rng.fraction(lo, hi, 128), rng.fraction(lo, hi, 128))


DugundjiSystem = IntervalSystem | SquareSystem


def build_system(n: int) -> DugundjiSystem:
    """The standard system for the interval (n = 1) or the square (n = 2)."""
    if n == 1:
        return IntervalSystem()
    if n == 2:
        return SquareSystem()
    raise ValidationError(f"unsupported dimension {n}: only 1 and 2 are built")


# ---------------------------------------------------------------------------
# verification


@dataclass(frozen=True)
class Violation:
    condition: str
    cell: object
    witness: object
    detail: str


@dataclass
class SystemReport:
    n: int
    depth: int
    cells_checked: int = 0
    points_sampled: int = 0
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def _cell_corner_sets(sys: DugundjiSystem, v) -> list[tuple]:
    """Corner tuples of the convex pieces making up the closed cell of v."""
    if sys.n == 1:
        return [seg for seg in sys.cell_pieces(v)]
    return [tri for tri in sys.star_triangles(v)]


def verify_system(
    sys: DugundjiSystem, depth: int, *, samples: int = 200, seed: int = 0
) -> SystemReport:
    """Check conditions (1)-(3) for every cell generated up to ``depth``.

    Condition (3) is certified exactly: h(x) = d(x, anchor) - 2 d(x,
    boundary) is convex on every triangle or segment of the cell, so
    h <= 0 at the corners implies h <= 0 on the closed cell.  Condition
    (2) is checked as coverage plus multiplicity at seeded sample points
    and at every cell vertex, and the partition of unity is summed
    exactly at the sample points.
    """
    if depth < 1:
        raise ValidationError("depth must be at least 1")
    report = SystemReport(n=sys.n, depth=depth)
    for v in sys.vertices_up_to(depth):
        report.cells_checked += 1
        a = sys.anchor(v)
        if sys.n == 1:
            anchor_on_boundary = a == 0 or a == 1
        else:
            anchor_on_boundary = sys.boundary_gap(a) == 0
        if not anchor_on_boundary:
            report.violations.append(Violation("anchor-on-boundary", v, a, "anchor not on the boundary"))
        for corners in _cell_corner_sets(sys, v):
            for w in corners:
                if sys.boundary_gap(w) <= 0:
                    report.violations.append(
                        Violation("cell-inside-interior", v, w, "cell corner not strictly interior")
                    )
                h = sys.point_metric(w, a) - 2 * sys.boundary_gap(w)
                if h > 0:
                    report.violations.append(
                        Violation(
                            "factor-2-anchor-bound",
                            v,
                            w,
                            f"d(x, anchor) - 2 d(x, boundary) = {h} > 0 at corner {w}",
                        )
                    )
        # multiplicity at the vertex itself: the only cell containing a
        # vertex is its own star
        at_vertex = sys.pou_eval(v)
        if at_vertex != [(v, ONE)]:
            report.violations.append(
                Violation("vertex-multiplicity", v, v, f"expected the lone hat peak, got {at_vertex}")
            )

    rng = SeededRng(seed)
    for _ in range(samples):
        x = sys.interior_sample(rng)
        report.points_sampled += 1
        try:
            entries = sys.pou_eval(x)
        except ValidationError as exc:
            report.violations.append(Violation("coverage", None, x, str(exc)))
            continue
        if not entries or len(entries) > sys.n + 1:
            report.violations.append(
                Violation("multiplicity", None, x, f"{len(entries)} cells contain the point")
            )
        if sum(w for _, w in entries) != 1:
            report.violations.append(Violation("partition-of-unity", None, x, "weights do not sum to 1"))
        if any(w <= 0 for _, w in entries):
            report.violations.append(Violation("partition-of-unity", None, x, "nonpositive weight reported"))
    return report


# ---------------------------------------------------------------------------
# boundary data and the extension operator


@dataclass(frozen=True)
class BoundaryData:
    """Step-function values attached to boundary points.

    The table must cover every anchor the extension will touch; extra
    boundary samples may be present for continuity probing.
    """

    system: DugundjiSystem
    values: dict

    def __post_init__(self):
        spaces = {f.space for f in self.values.values()}
        if len(spaces) > 1:
            raise ValidationError("boundary data mixes metric spaces")

    def value(self, point) -> StepFunction:
        try:
            return self.values[point]
        except KeyError:
            raise ValidationError(f"no boundary value at {point}") from None


def tabulate_boundary(
    sys: DugundjiSystem, rule: Callable, depth: int, extra: Sequence = ()
) -> BoundaryData:
    """Materialize ``rule`` at every anchor of cells up to ``depth`` (plus
    any extra boundary points)."""
    table = {}
    for v in sys.vertices_up_to(depth):
        a = sys.anchor(v)
        if a not in table:
            table[a] = rule(a)
    for p in extra:
        if p not in table:
            table[p] = rule(p)
    return BoundaryData(sys, table)


def extend(sys: DugundjiSystem, data: BoundaryData, x) -> StepFunction:
    """The extension: boundary points keep their data; an interior point
    gets the iterated splice of its active anchors' values under the
    partition-of-unity weights (inactive slots padded with weight 0)."""
    if sys.n == 1:
        x = _as_fraction(x)
        if not ZERO <= x <= ONE:
            raise ValidationError(f"{x} outside [0, 1]")
        if sys.is_boundary(x):
            return data.value(x)
    else:
        x = (_as_fraction(x[0]), _as_fraction(x[1]))
        if not (ZERO <= x[0] <= ONE and ZERO <= x[1] <= ONE):
            raise ValidationError(f"{x} outside the unit square")
        if sys.is_boundary(x):
            return data.value(x)
    entries = sys.pou_eval(x)
    points = [data.value(sys.anchor(v)) for v, _ in entries]
    weights = [w for _, w in entries]
    while len(points) < sys.n + 1:
        points.append(points[0])
        weights.append(ZERO)
    return e_n(points, SimplexWeights(tuple(weights)))


@dataclass(frozen=True)
class ProbeSample:
    point: object
    distance: Fraction


@dataclass(frozen=True)
class BoundaryProbeReport:
    boundary_point: object
    tol: Fraction
    samples: tuple[ProbeSample, ...]
    tail_below_tol: bool


def boundary_continuity_probe(
    sys: DugundjiSystem, data: BoundaryData, p, path: Sequence, tol
) -> BoundaryProbeReport:
    """Distances from the extension along a path to the boundary value at
    its limit.  A failing probe is a report, not an error."""
    tol = _as_fraction(tol)
    target = data.value(p)
    samples = []
    for x in path:
        d = hm_distance(extend(sys, data, x), target)
        samples.append(ProbeSample(point=x, distance=d))
    tail_ok = bool(samples) and samples[-1].distance < tol
    return BoundaryProbeReport(boundary_point=p, tol=tol, samples=tuple(samples), tail_below_tol=tail_ok)


def dyadic_path(sys: DugundjiSystem, p, steps: int) -> list:
    """The path p + 2**-m * (center - p) * 2 for m = 1..steps; for the
    interval with p = 0 this is the sequence 2**-m."""
    if sys.n == 1:
        p = _as_fraction(p)
        center = HALF
        return [p + Fraction(1, 2**m) * (center - p) * 2 for m in range(1, steps + 1)]
    p = (_as_fraction(p[0]), _as_fraction(p[1]))
    center = (HALF, HALF)
    return [
        (
            p[0] + Fraction(1, 2**m) * (center[0] - p[0]) * 2,
            p[1] + Fraction(1, 2**m) * (center[1] - p[1]) * 2,
        )
        for m in range(1, steps + 1)
    ]


# ---------------------------------------------------------------------------
# the shrink falsifier


@dataclass(frozen=True)
class ShrinkCounterexample:
    points: tuple[StepFunction, ...]
    weights: tuple[Fraction, ...]
    image_distance: Fraction


@dataclass(frozen=True)
class ShrinkReport:
    samples_run: int
    counterexamples: tuple[ShrinkCounterexample, ...]

    @property
    def ok(self) -> bool:
        return not self.counterexamples


def _perturb_within(
    z: StepFunction, family: Sequence[WindowedFunctional], radius: Fraction, rng: SeededRng
) -> StepFunction:
    """A step function within pseudometric ``radius`` of z (z itself in the
    worst case)."""
    for _ in range(8):
        lo = rng.unit_fraction(64)
        span = rng.fraction(Fraction(1, 256), Fraction(1, 16), 256)
        hi = min(lo + span, ONE)
        if hi <= lo:
            continue
        label = rng.choice(z.space.points)
        breaks = sorted(set(z.breakpoints) | {lo, hi})
        vals = []
        for a in breaks[:-1]:
            vals.append(label if lo <= a < hi else evaluate(z, a))
        candidate = canonicalize(z.space, breaks, vals)
        if pseudometric(family, candidate, z) < radius:
            return candidate
    return z


def shrink_probe(
    z: StepFunction,
    family: Sequence[WindowedFunctional],
    delta_outer,
    delta_inner,
    samples: int,
    seed: int,
    tuple_size: int = 3,
) -> ShrinkReport:
    """Falsification probe for the neighborhood-shrinking step: sample
    tuples from the inner pseudometric ball around z and report any whose
    iterated-splice image leaves the outer ball."""
    delta_outer = _as_fraction(delta_outer)
    delta_inner = _as_fraction(delta_inner)
    if not ZERO < delta_inner <= delta_outer:
        raise ValidationError("need 0 < inner radius <= outer radius")
    rng = SeededRng(seed)
    bad = []
    for _ in range(samples):
        points = tuple(_perturb_within(z, family, delta_inner, rng) for _ in range(tuple_size))
        if rng.int_in(0, 4) == 0:
            weights = [ZERO] * tuple_size
            weights[rng.int_in(0, tuple_size - 1)] = ONE
        else:
            raw = [rng.int_in(0, 8) for _ in range(tuple_size)]
            if not any(raw):
                raw[0] = 1
            total = sum(raw)
            weights = [Fraction(r, total) for r in raw]
        image = e_n(points, SimplexWeights(tuple(weights)))
        rho = pseudometric(family, image, z)
        if rho >= delta_outer:
            bad.append(ShrinkCounterexample(points=points, weights=tuple(weights), image_distance=rho))
    return ShrinkReport(samples_run=samples, counterexamples=tuple(bad))
