"""Seeded property suites and their runner.

Every suite is deterministic from (name, seed, cases): per-case seeds are
derived from the suite seed, and all generation goes through
:class:`~hmstep.rng.SeededRng`.  A report lists any failing properties
with the case seed and a best-effort minimized witness; reports are
byte-identical across runs apart from wall time.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import dugundji, equiconnect, functionals, stepfn
from .errors import ValidationError
from .rng import SeededRng, case_seed
from .space import (
    FiniteMetricSpace,
    SpaceMap,
    TestFunctional,
    functional_value_bounds,
    lipschitz_seminorm,
    validate_space,
)

ZERO = Fraction(0)
ONE = Fraction(1)


# ---------------------------------------------------------------------------
# random instance generators (shared with the test suite)


def random_space(rng: SeededRng, max_points: int = 5) -> FiniteMetricSpace:
    n = rng.int_in(2, max_points)
    labels = [f"p{i}" for i in range(n)]
    if rng.bool():
        # distances in [1/2, 1] satisfy the triangle inequality outright
        table = [[ZERO] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                d = rng.fraction(Fraction(1, 2), ONE, 32)
                table[i][j] = table[j][i] = d
    else:
        # arbitrary positive symmetric start, repaired by shortest paths
        table = [[ZERO] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                d = rng.fraction(Fraction(1, 64), ONE, 64)
                table[i][j] = table[j][i] = d
        for k in range(n):
            for i in range(n):
                for j in range(n):
                    if i != j:
                        via = table[i][k] + table[k][j]
                        if 0 < via < table[i][j]:
                            table[i][j] = via
    return validate_space(labels, table)


def random_stepfn(rng: SeededRng, space: FiniteMetricSpace, max_pieces: int = 5):
    pieces = rng.int_in(1, max_pieces)
    cuts = rng.distinct_unit_fractions(pieces - 1) if pieces > 1 else []
    values = [rng.choice(space.points) for _ in range(pieces)]
    return stepfn.canonicalize(space, [ZERO, *cuts, ONE], values)


def random_functional(rng: SeededRng, space: FiniteMetricSpace) -> TestFunctional:
    return TestFunctional(
        space, tuple(rng.fraction(Fraction(-2), Fraction(2), 32) for _ in space.points)
    )


def random_window(rng: SeededRng) -> functionals.Window:
    a = rng.fraction(ZERO, Fraction(7, 8), 32)
    b = rng.fraction(a + Fraction(1, 32), ONE, 32)
    if b <= a:
        b = min(ONE, a + Fraction(1, 32))
    return functionals.Window(a, b)


def random_family(rng: SeededRng, space: FiniteMetricSpace, size: int):
    return tuple(
        functionals.WindowedFunctional(random_functional(rng, space), random_window(rng))
        for _ in range(size)
    )


def random_map(rng: SeededRng, domain: FiniteMetricSpace, codomain: FiniteMetricSpace) -> SpaceMap:
    table = {p: rng.choice(codomain.points) for p in domain.points}
    return SpaceMap.from_mapping(domain, codomain, table)


def corrupt_distance_table(space: FiniteMetricSpace):
    """A distance table that must be rejected, for the negative control."""
    rows = [list(row) for row in space.dist]
    if len(space) >= 3:
        rows[0][1] = rows[1][0] = ONE
        rows[0][2] = rows[2][0] = Fraction(1, 4)
        rows[1][2] = rows[2][1] = Fraction(1, 4)
    else:
        rows[0][1] = rows[1][0] = Fraction(3, 2)
    return rows


# ---------------------------------------------------------------------------
# runner machinery


class PropertyFailure(Exception):
    def __init__(self, prop: str, case: str):
        super().__init__(f"{prop}: {case}")
        self.property = prop
        self.case = case


def _check(condition: bool, prop: str, case: object) -> None:
    if not condition:
        raise PropertyFailure(prop, repr(case))


@dataclass(frozen=True)
class Failure:
    property: str
    seed: int
    case: str

    def to_doc(self) -> dict:
        return {"property": self.property, "seed": self.seed, "minimized_input": self.case}


@dataclass
class SuiteReport:
    suite: str
    seed: int
    cases: int
    failures: list[Failure] = field(default_factory=list)
    wall_time_s: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_doc(self, include_wall_time: bool = True) -> dict:
        doc = {
            "suite": self.suite,
            "seed": self.seed,
            "cases": self.cases,
            "failures": [f.to_doc() for f in self.failures],
        }
        if include_wall_time:
            doc["wall_time_s"] = self.wall_time_s
        return doc

    def summary(self) -> str:
        status = "ok" if self.ok else f"{len(self.failures)} failure(s)"
        return f"suite {self.suite}: {self.cases} cases, {status}, {self.wall_time_s:.2f}s"


def _minimize(case_fn, prop: str, witness: str, cs: int) -> str:
    """Re-run the case at smaller size hints, keeping the shortest witness
    for the same property."""
    best = witness
    for size in (2, 1):
        for j in range(40):
            try:
                case_fn(SeededRng(case_seed(cs, j)), size)
            except PropertyFailure as pf:
                if pf.property == prop and len(pf.case) < len(best):
                    best = pf.case
            except ValidationError:
                continue
    return best


def _run(name: str, seed: int, cases: int, case_fn: Callable[[SeededRng, int], None]) -> SuiteReport:
    report = SuiteReport(suite=name, seed=seed, cases=cases)
    start = time.perf_counter()
    for i in range(cases):
        cs = case_seed(seed, i)
        try:
            case_fn(SeededRng(cs), 3)
        except PropertyFailure as pf:
            minimized = _minimize(case_fn, pf.property, pf.case, cs)
            report.failures.append(Failure(property=pf.property, seed=cs, case=minimized))
        except ValidationError as exc:
            report.failures.append(Failure(property=str(exc), seed=cs, case="input rejected"))
    report.wall_time_s = time.perf_counter() - start
    return report


# ---------------------------------------------------------------------------
# the suites


def _case_metric_axioms(rng: SeededRng, size: int, corrupt: bool = False) -> None:
    space = random_space(rng, max_points=2 + size)
    if corrupt:
        table = corrupt_distance_table(space)
        try:
            validate_space(space.points, table)
        except ValidationError as exc:
            raise PropertyFailure(str(exc), repr(table)) from None
        raise PropertyFailure("corrupted table accepted", repr(table))
    validate_space(space.points, [list(r) for r in space.dist])
    f = random_stepfn(rng, space, max_pieces=1 + size)
    g = random_stepfn(rng, space, max_pieces=1 + size)
    h = random_stepfn(rng, space, max_pieces=1 + size)
    case = {"space": space.dist, "f": f, "g": g, "h": h}
    dfg = stepfn.hm_distance(f, g)
    _check(dfg >= 0, "nonnegativity", case)
    _check(dfg <= space.diameter, "bounded by the diameter", case)
    _check(dfg == stepfn.hm_distance(g, f), "symmetry", case)
    _check((dfg == 0) == (f == g), "identity of indiscernibles", case)
    _check(
        stepfn.hm_distance(f, h) <= dfg + stepfn.hm_distance(g, h),
        "triangle inequality",
        case,
    )


def _case_functoriality(rng: SeededRng, size: int) -> None:
    x = random_space(rng, max_points=2 + size)
    y = random_space(rng, max_points=2 + size)
    z = random_space(rng, max_points=2 + size)
    f = random_map(rng, x, y)
    g = random_map(rng, y, z)
    alpha = random_stepfn(rng, x, max_pieces=1 + size)
    case = {"alpha": alpha, "f": f.table, "g": g.table}
    _check(stepfn.pushforward(SpaceMap.identity(x), alpha) == alpha, "identity preserved", case)
    _check(
        stepfn.pushforward(g.after(f), alpha)
        == stepfn.pushforward(g, stepfn.pushforward(f, alpha)),
        "composition preserved",
        case,
    )


def _case_pseudometrics(rng: SeededRng, size: int) -> None:
    space = random_space(rng, max_points=2 + size)
    fam = random_family(rng, space, size=rng.int_in(1, 2 + size))
    f = random_stepfn(rng, space, max_pieces=1 + size)
    g = random_stepfn(rng, space, max_pieces=1 + size)
    h = random_stepfn(rng, space, max_pieces=1 + size)
    case = {"f": f, "g": g, "h": h}
    rho_fg = functionals.pseudometric(fam, f, g)
    _check(functionals.pseudometric(fam, f, f) == 0, "vanishing on the diagonal", case)
    _check(rho_fg == functionals.pseudometric(fam, g, f), "pseudometric symmetry", case)
    _check(
        functionals.pseudometric(fam, f, h) <= rho_fg + functionals.pseudometric(fam, g, h),
        "pseudometric triangle inequality",
        case,
    )
    pf, pg = functionals.project(f, fam), functionals.project(g, fam)
    _check(
        max(abs(a - b) for a, b in zip(pf, pg)) == rho_fg,
        "projection gap equals the pseudometric",
        case,
    )
    phi = fam[0].functional
    lo, hi = functional_value_bounds(phi)
    _check(
        all(lo <= functionals.window_average(wf, f) <= hi for wf in fam if wf.functional is phi),
        "averages inside the value bounds",
        case,
    )
    # splitting identity at a random interior time
    t = rng.fraction(Fraction(1, 16), Fraction(15, 16), 32)
    full = functionals.WindowedFunctional(phi, functionals.Window(ZERO, ONE))
    left = functionals.WindowedFunctional(phi, functionals.Window(ZERO, t))
    right = functionals.WindowedFunctional(phi, functionals.Window(t, ONE))
    _check(
        functionals.window_average(full, f)
        == t * functionals.window_average(left, f) + (1 - t) * functionals.window_average(right, f),
        "splitting identity",
        case,
    )
    # linearity in the functional
    psi = random_functional(rng, space)
    a = rng.fraction(Fraction(-2), Fraction(2), 16)
    b = rng.fraction(Fraction(-2), Fraction(2), 16)
    combo = TestFunctional(space, tuple(a * u + b * v for u, v in zip(phi.values, psi.values)))
    w = fam[0].window
    _check(
        functionals.window_average(functionals.WindowedFunctional(combo, w), f)
        == a * functionals.window_average(functionals.WindowedFunctional(phi, w), f)
        + b * functionals.window_average(functionals.WindowedFunctional(psi, w), f),
        "linearity in the functional",
        case,
    )
    # Markov-style bound linking the metric and the neighborhoods
    delta = rng.fraction(Fraction(1, 8), ONE, 16)
    eps = rng.fraction(Fraction(1, 8), ONE, 16)
    if stepfn.hm_distance(f, g) < delta * eps:
        _check(
            stepfn.neighborhood_contains(f, delta, eps, g),
            "neighborhood implied by the metric bound",
            case,
        )
    # sharp Lipschitz link between averages and the integral metric
    gap = abs(functionals.window_average(fam[0], f) - functionals.window_average(fam[0], g))
    bound = lipschitz_seminorm(phi) * stepfn.hm_distance(f, g) / fam[0].window.length
    _check(gap <= bound, "Lipschitz link", case)


def _case_midpoint(rng: SeededRng, size: int) -> None:
    space = random_space(rng, max_points=2 + size)
    alpha = random_stepfn(rng, space, max_pieces=1 + size)
    beta = random_stepfn(rng, space, max_pieces=1 + size)
    coords = random_family(rng, space, size=rng.int_in(1, 2 + size))
    gamma = equiconnect.hm_midpoint(alpha, beta, coords)
    case = {"alpha": alpha, "beta": beta, "windows": [(w.window.a, w.window.b) for w in coords]}
    _check(
        functionals.project(gamma, coords)
        == functionals.convex_midpoint_vector(
            functionals.project(alpha, coords), functionals.project(beta, coords)
        ),
        "exact coordinatewise midpoint",
        case,
    )
    _check(
        equiconnect.hm_midpoint(alpha, alpha, coords) == alpha,
        "midpoint of a function with itself",
        case,
    )


def _perturbed_within(
    rng: SeededRng, base, budget: Fraction
):
    """A copy of ``base`` altered on measure < budget (exact)."""
    if budget <= 0:
        return base
    span = min(budget / 2, Fraction(1, 8))
    lo = rng.fraction(ZERO, ONE - span, 64)
    hi = lo + rng.fraction(span / 4, span, 256)
    if hi <= lo or hi > 1:
        return base
    label = rng.choice(base.space.points)
    breaks = sorted(set(base.breakpoints) | {lo, hi})
    vals = [label if lo <= a < hi else stepfn.evaluate(base, a) for a in breaks[:-1]]
    return stepfn.canonicalize(base.space, breaks, vals)


def _case_certificate(rng: SeededRng, size: int) -> None:
    space = random_space(rng, max_points=2 + size)
    kind = rng.int_in(0, 9)
    if kind == 0:
        phi = TestFunctional(space, tuple(ZERO for _ in space.points))  # c = 0
    else:
        phi = random_functional(rng, space)
    c = max(abs(v) for v in phi.values)
    if c > 0:
        delta = c * rng.fraction(Fraction(1, 4), Fraction(2), 16)
    else:
        delta = rng.fraction(Fraction(1, 4), Fraction(2), 16)
    cert = equiconnect.make_certificate(phi, delta)
    alpha1 = random_stepfn(rng, space, max_pieces=1 + size)
    beta1 = random_stepfn(rng, space, max_pieces=1 + size)
    t1 = rng.unit_fraction(32)
    if rng.int_in(0, 4) == 0:
        alpha2, beta2, t2 = alpha1, beta1, t1
    else:
        if c > 0:
            budget = cert.v_threshold / (2 * c * cert.n)
        else:
            budget = Fraction(1, 4)
        alpha2 = _perturbed_within(rng, alpha1, budget)
        beta2 = _perturbed_within(rng, beta1, budget)
        shift = cert.e_threshold * rng.fraction(ZERO, Fraction(31, 32), 32)
        t2 = t1 + shift if rng.bool() and t1 + shift <= 1 else max(ZERO, t1 - shift)
    res = equiconnect.check_certificate(cert, alpha1, beta1, t1, alpha2, beta2, t2)
    case = {"delta": delta, "n": cert.n, "alpha1": alpha1, "t1": t1, "t2": t2}
    _check(res.in_v, "generator satisfies the V hypothesis", case)
    _check(res.in_e, "generator satisfies the E hypothesis", case)
    _check(res.conclusion, "certificate conclusion", case)


def _case_e_n_laws(rng: SeededRng, size: int) -> None:
    space = random_space(rng, max_points=2 + size)
    alpha = random_stepfn(rng, space, max_pieces=1 + size)
    beta = random_stepfn(rng, space, max_pieces=1 + size)
    t = rng.unit_fraction(32)
    case = {"alpha": alpha, "beta": beta, "t": t}
    _check(equiconnect.e1(alpha, beta, ONE) == alpha, "splice endpoint at 1", case)
    _check(equiconnect.e1(alpha, beta, ZERO) == beta, "splice endpoint at 0", case)
    _check(equiconnect.e1(alpha, alpha, t) == alpha, "splice idempotence", case)
    spliced = equiconnect.e1(alpha, beta, t)
    _check(
        stepfn.piece_count(spliced) <= stepfn.piece_count(alpha) + stepfn.piece_count(beta) + 1,
        "splice piece bound",
        case,
    )
    codomain = random_space(rng, max_points=2 + size)
    m = random_map(rng, space, codomain)
    _check(
        stepfn.pushforward(m, spliced)
        == equiconnect.e1(stepfn.pushforward(m, alpha), stepfn.pushforward(m, beta), t),
        "splice naturality under pushforward",
        case,
    )
    # iterated splice laws
    k = rng.int_in(2, 4)
    points = [random_stepfn(rng, space, max_pieces=size) for _ in range(k)]
    j = rng.int_in(0, k - 1)
    vertex = [ZERO] * k
    vertex[j] = ONE
    _check(
        equiconnect.e_n(points, equiconnect.SimplexWeights(tuple(vertex))) == points[j],
        "vertex weights select the vertex",
        case,
    )
    _check(
        equiconnect.e_n([alpha] * k, _random_weights(rng, k)) == alpha,
        "diagonal identity",
        case,
    )
    w = _random_weights(rng, k)
    out = equiconnect.e_n(points, w)
    pos = rng.int_in(0, k)
    padded_points = points[:pos] + [random_stepfn(rng, space, max_pieces=size)] + points[pos:]
    padded_weights = list(w.weights[:pos]) + [ZERO] + list(w.weights[pos:])
    _check(
        equiconnect.e_n(padded_points, equiconnect.SimplexWeights(tuple(padded_weights))) == out,
        "zero-weight padding invariance",
        case,
    )
    for i, lab in enumerate(out.values):
        t0 = out.breakpoints[i]
        _check(
            lab in {stepfn.evaluate(p, t0) for p in points},
            "output values selected pointwise from the inputs",
            case,
        )


def _random_weights(rng: SeededRng, k: int) -> equiconnect.SimplexWeights:
    raw = [rng.int_in(0, 8) for _ in range(k)]
    if not any(raw):
        raw[rng.int_in(0, k - 1)] = 1
    total = sum(raw)
    return equiconnect.SimplexWeights(tuple(Fraction(r, total) for r in raw))


def _case_dugundji(sys, rng: SeededRng, size: int) -> None:
    space = random_space(rng, max_points=2 + size)
    x = sys.interior_sample(rng)
    entries = sys.pou_eval(x)
    case = {"x": x}
    _check(1 <= len(entries) <= sys.n + 1, "multiplicity at most n+1", case)
    _check(sum(w for _, w in entries) == 1, "partition of unity sums to 1", case)
    _check(all(w > 0 for _, w in entries), "only positive weights reported", case)
    keys = [sys.order_key(v) for v, _ in entries]
    _check(keys == sorted(keys), "weights sorted by the global order", case)

    anchors = sorted({sys.anchor(v) for v, _ in entries})
    if sys.n == 1:
        table = {
            ZERO: random_stepfn(rng, space, max_pieces=1 + size),
            ONE: random_stepfn(rng, space, max_pieces=1 + size),
        }
    else:
        f_by_side = [random_stepfn(rng, space, max_pieces=1 + size) for _ in range(4)]

        def rule(p):
            if p[0] == 0:
                return f_by_side[0]
            if p[1] == 0:
                return f_by_side[1]
            if p[0] == 1:
                return f_by_side[2]
            return f_by_side[3]

        table = {a: rule(a) for a in anchors}
        table.setdefault((ZERO, Fraction(1, 2)), rule((ZERO, Fraction(1, 2))))
    data = dugundji.BoundaryData(sys, table)
    value = dugundji.extend(sys, data, x)
    _check(value == dugundji.extend(sys, data, x), "extension deterministic", case)
    active = [data.value(a) for a in anchors]
    cuts = sorted(set(value.breakpoints) | {t for g in active for t in g.breakpoints})
    for t0 in cuts[:-1]:
        _check(
            stepfn.evaluate(value, t0) in {stepfn.evaluate(g, t0) for g in active},
            "range confined to the active anchor values",
            case,
        )
    # boundary agreement
    p = rng.choice(sorted(table))
    _check(dugundji.extend(sys, data, p) == data.value(p), "extension agrees on the boundary", case)


def _case_boundary_continuity(rng: SeededRng, size: int) -> None:
    space = random_space(rng, max_points=2 + size)
    tol = Fraction(1, 100)
    if rng.bool():
        sys = _shared_system(1)
        data = dugundji.BoundaryData(
            sys,
            {
                ZERO: random_stepfn(rng, space, max_pieces=1 + size),
                ONE: random_stepfn(rng, space, max_pieces=1 + size),
            },
        )
        p = rng.choice([ZERO, ONE])
        path = dugundji.dyadic_path(sys, p, 12)
    else:
        sys = _shared_system(2)
        g = random_stepfn(rng, space, max_pieces=1 + size)
        h = g if rng.bool() else random_stepfn(rng, space, max_pieces=1 + size)
        p = rng.choice(
            [(ZERO, Fraction(1, 2)), (Fraction(1, 2), ZERO), (ONE, Fraction(1, 2)), (Fraction(1, 2), ONE)]
        )
        path = dugundji.dyadic_path(sys, p, 12)
        needed = {p}
        for x in path:
            needed.update(sys.anchor(v) for v, _ in sys.pou_eval(x))

        def rule(q):
            return g if q == p else h

        data = dugundji.BoundaryData(sys, {a: rule(a) for a in needed})
    report = dugundji.boundary_continuity_probe(sys, data, p, path, tol)
    case = {"p": p, "distances": [s.distance for s in report.samples]}
    _check(report.tail_below_tol, "tail distance below tolerance", case)
    _check(report.samples[-1].distance == 0, "tail distance exactly zero", case)


_SYSTEMS: dict[int, object] = {}


def _shared_system(n: int):
    # systems are immutable apart from internal mesh caches; sharing one
    # per dimension keeps ring generation amortized across cases
    if n not in _SYSTEMS:
        _SYSTEMS[n] = dugundji.build_system(n)
    return _SYSTEMS[n]


SUITE_NAMES = (
    "metric-axioms",
    "functoriality",
    "pseudometrics",
    "midpoint",
    "certificate",
    "e-n-laws",
    "dugundji-1",
    "dugundji-2",
    "boundary-continuity",
)


def run_suite(name: str, seed: int, cases: int, *, inject_corruption: bool = False) -> SuiteReport:
    """Run a named suite; deterministic from (name, seed, cases).

    ``inject_corruption`` is the negative control for "metric-axioms": it
    feeds a corrupted distance table through validation every case, so the
    run must fail and the report names the violated axiom.
    """
    if name not in SUITE_NAMES:
        raise ValidationError(f"unknown suite {name!r}; known: {', '.join(SUITE_NAMES)}")
    if cases < 1:
        raise ValidationError("need at least one case")
    if name == "metric-axioms":
        return _run(name, seed, cases, lambda r, s: _case_metric_axioms(r, s, corrupt=inject_corruption))
    if inject_corruption:
        raise ValidationError("corruption injection is only defined for metric-axioms")
    if name == "functoriality":
        return _run(name, seed, cases, _case_functoriality)
    if name == "pseudometrics":
        return _run(name, seed, cases, _case_pseudometrics)
    if name == "midpoint":
        return _run(name, seed, cases, _case_midpoint)
    if name == "certificate":
        return _run(name, seed, cases, _case_certificate)
    if name == "e-n-laws":
        return _run(name, seed, cases, _case_e_n_laws)
    if name == "dugundji-1":
        sys1 = _shared_system(1)
        report = _run(name, seed, cases, lambda r, s: _case_dugundji(sys1, r, s))
        _merge_system_report(report, dugundji.verify_system(sys1, depth=8, samples=50, seed=seed))
        return report
    if name == "dugundji-2":
        sys2 = _shared_system(2)
        report = _run(name, seed, cases, lambda r, s: _case_dugundji(sys2, r, s))
        _merge_system_report(report, dugundji.verify_system(sys2, depth=4, samples=50, seed=seed))
        return report
    return _run(name, seed, cases, _case_boundary_continuity)


def _merge_system_report(report: SuiteReport, system_report) -> None:
    for v in system_report.violations:
        report.failures.append(
            Failure(property=f"system condition {v.condition}", seed=report.seed, case=f"{v.cell}: {v.detail}")
        )
