from collections import Counter
from fractions import Fraction

import pytest

from hmstep import (
    BoundaryData,
    IntervalSystem,
    SquareSystem,
    ValidationError,
    boundary_continuity_probe,
    build_system,
    constant,
    dyadic_path,
    e1,
    extend,
    from_pairs,
    hm_distance,
    pseudometric,
    sample_family,
    shrink_probe,
    tabulate_boundary,
    verify_system,
)
from hmstep.dugundji import _cross
from hmstep.rng import SeededRng

F = Fraction
HALF = F(1, 2)


# n = 1 structure -------------------------------------------------------------


def test_point_in_exactly_two_stars():
    sys1 = build_system(1)
    x = F(3, 8)
    holders = [v for v in sys1.vertices_up_to(12) if sys1.contains(v, x)]
    assert sorted(holders) == [F(1, 4), F(7, 16)]


def test_anchor_rule():
    sys1 = build_system(1)
    assert sys1.anchor(F(1, 4)) == 0
    assert sys1.anchor(HALF) == 0
    assert sys1.anchor(F(9, 16)) == 1


def test_quarter_star_satisfies_factor_two_bound():
    sys1 = build_system(1)
    lo, hi = sys1.star(F(1, 4))
    a = sys1.anchor(F(1, 4))
    for endpoint in (lo, hi):
        assert abs(endpoint - a) <= 2 * min(endpoint, 1 - endpoint)


def test_verify_interval_system_deep():
    report = verify_system(build_system(1), depth=12, samples=100)
    assert report.ok
    assert report.cells_checked == 25  # 3 middle vertices + 2 per deeper level


def test_corrupted_anchor_reported():
    bad = IntervalSystem(anchor_overrides={F(1, 4): F(1)})
    report = verify_system(bad, depth=4, samples=10)
    assert not report.ok
    hits = [v for v in report.violations if v.condition == "factor-2-anchor-bound"]
    assert any(v.cell == F(1, 4) and v.witness == F(1, 8) for v in hits)
    # the witness value: |1/8 - 1| - 2 * 1/8 = 5/8 > 0
    assert any("5/8" in v.detail for v in hits)


def test_pou_at_vertex_is_single_peak():
    sys1 = build_system(1)
    for v in sys1.vertices_up_to(6):
        assert sys1.pou_eval(v) == [(v, F(1))]


def test_pou_midway_splits_evenly():
    sys1 = build_system(1)
    u, w = F(1, 4), F(7, 16)
    mid = (u + w) / 2
    assert sorted(sys1.pou_eval(mid)) == [(u, HALF), (w, HALF)]


def test_pou_requires_interior():
    sys1 = build_system(1)
    with pytest.raises(ValidationError, match="interior"):
        sys1.pou_eval(F(0))


def test_pou_weights_sum_to_one_everywhere():
    sys1 = build_system(1)
    rng = SeededRng(13)
    for _ in range(300):
        x = rng.fraction(F(1, 200), F(199, 200), 200)
        entries = sys1.pou_eval(x)
        assert 1 <= len(entries) <= 2
        assert sum(w for _, w in entries) == 1
        assert all(w > 0 for _, w in entries)


# n = 2 mesh -----------------------------------------------------------------


def test_mesh_tiles_exactly():
    sys2 = build_system(2)
    tris = []
    for k in range(1, 6):
        tris.extend(sys2._ring_triangles(k))
    area = sum(abs(_cross(t[0], t[1], t[2])) for t in tris) / 2
    t5 = F(1, 2**6)
    assert area == (1 - 2 * t5) ** 2
    assert all(_cross(t[0], t[1], t[2]) != 0 for t in tris)


def test_mesh_is_conforming():
    sys2 = build_system(2)
    tris = []
    for k in range(1, 6):
        tris.extend(sys2._ring_triangles(k))
    t5 = F(1, 2**6)
    edges = Counter()
    for t in tris:
        for i in range(3):
            edges[tuple(sorted((t[i], t[(i + 1) % 3])))] += 1

    def on_frontier(e):
        gap = lambda p: min(p[0], 1 - p[0], p[1], 1 - p[1])
        return gap(e[0]) == t5 and gap(e[1]) == t5 and (e[0][0] == e[1][0] or e[0][1] == e[1][1])

    for e, count in edges.items():
        assert count == (1 if on_frontier(e) else 2), e


def test_generic_point_in_three_stars():
    sys2 = build_system(2)
    # strictly inside some triangle: all three barycentrics positive
    entries = sys2.pou_eval((F(33, 100), F(41, 100)))
    assert len(entries) == 3
    assert sum(w for _, w in entries) == 1


def test_pou_sum_at_center_cross_point():
    sys2 = build_system(2)
    entries = sys2.pou_eval((F(1, 3), F(1, 3)))
    assert sum(w for _, w in entries) == 1


def test_square_vertex_is_single_peak():
    sys2 = build_system(2)
    for v in [(HALF, HALF), (F(1, 4), F(1, 4)), (F(3, 16), F(1, 8)), (F(1, 8), F(5, 8))]:
        assert sys2.pou_eval(v) == [(v, F(1))]


def test_square_anchor_tie_break():
    sys2 = build_system(2)
    assert sys2.anchor((HALF, HALF)) == (F(0), HALF)
    assert sys2.anchor((F(1, 4), F(1, 4))) == (F(0), F(1, 4))
    assert sys2.anchor((F(5, 8), HALF)) == (F(1), HALF)
    assert sys2.anchor((HALF, F(1, 8))) == (HALF, F(0))


def test_verify_square_system():
    report = verify_system(build_system(2), depth=4, samples=100)
    assert report.ok


def test_square_reconstruction_from_weights():
    sys2 = build_system(2)
    rng = SeededRng(3)
    for _ in range(200):
        x = sys2.interior_sample(rng)
        entries = sys2.pou_eval(x)
        assert sum(w * v[0] for v, w in entries) == x[0]
        assert sum(w * v[1] for v, w in entries) == x[1]


# extension ------------------------------------------------------------------


def test_constant_data_extends_constantly(two):
    sys1 = build_system(1)
    alpha = from_pairs(two, [(F(0), "y"), (F(1, 3), "x")])
    data = BoundaryData(sys1, {F(0): alpha, F(1): alpha})
    rng = SeededRng(8)
    for _ in range(50):
        x = rng.fraction(F(1, 64), F(63, 64), 64)
        assert extend(sys1, data, x) == alpha
    assert extend(sys1, data, F(0)) == alpha


def test_single_star_point_takes_its_anchor_value(two):
    sys1 = build_system(1)
    data = BoundaryData(sys1, {F(0): constant(two, "x"), F(1): constant(two, "y")})
    # 1/4 is a vertex anchored at 0: the hat peak gives it full weight
    assert extend(sys1, data, F(1, 4)) == constant(two, "x")


def test_two_constant_extension_unfolds_the_splice(two):
    sys1 = build_system(1)
    fx, fy = constant(two, "x"), constant(two, "y")
    data = BoundaryData(sys1, {F(0): fx, F(1): fy})
    # between the 0-anchored vertex 1/2 and the 1-anchored vertex 9/16
    u = HALF + F(1, 64)
    w = sys1.hat(HALF, u)
    expected = e1(fx, fy, w)
    assert extend(sys1, data, u) == expected
    assert expected == from_pairs(two, [(F(0), "x"), (w, "y")])


def test_extension_boundary_agreement(two):
    sys1 = build_system(1)
    fx, fy = constant(two, "x"), constant(two, "y")
    data = BoundaryData(sys1, {F(0): fx, F(1): fy})
    assert extend(sys1, data, F(0)) == fx
    assert extend(sys1, data, F(1)) == fy


def test_extension_needs_boundary_data(two):
    sys1 = build_system(1)
    data = BoundaryData(sys1, {F(0): constant(two, "x")})
    with pytest.raises(ValidationError, match="no boundary value"):
        extend(sys1, data, F(1))


def test_mixed_space_boundary_data_rejected(two, three):
    sys1 = build_system(1)
    with pytest.raises(ValidationError, match="mixes"):
        BoundaryData(sys1, {F(0): constant(two, "x"), F(1): constant(three, "x")})


def test_square_extension_constant(two):
    sys2 = build_system(2)
    alpha = from_pairs(two, [(F(0), "x"), (F(1, 5), "y")])
    data = tabulate_boundary(sys2, lambda p: alpha, depth=5)
    rng = SeededRng(4)
    for _ in range(25):
        x = (rng.fraction(F(1, 16), F(15, 16), 16), rng.fraction(F(1, 16), F(15, 16), 16))
        assert extend(sys2, data, x) == alpha


# continuity probes ----------------------------------------------------------


def test_dyadic_path_toward_zero():
    sys1 = build_system(1)
    assert dyadic_path(sys1, F(0), 4) == [F(1, 2), F(1, 4), F(1, 8), F(1, 16)]
    assert dyadic_path(sys1, F(1), 3) == [F(1, 2), F(3, 4), F(7, 8)]


def test_probe_constant_data_all_zero(two):
    sys1 = build_system(1)
    alpha = constant(two, "x")
    data = BoundaryData(sys1, {F(0): alpha, F(1): alpha})
    report = boundary_continuity_probe(sys1, data, F(0), dyadic_path(sys1, F(0), 8), F(1, 100))
    assert report.tail_below_tol
    assert all(s.distance == 0 for s in report.samples)


def test_probe_two_constant_data_reaches_zero(two):
    sys1 = build_system(1)
    data = BoundaryData(sys1, {F(0): constant(two, "x"), F(1): constant(two, "y")})
    report = boundary_continuity_probe(sys1, data, F(0), dyadic_path(sys1, F(0), 12), F(1, 100))
    assert report.tail_below_tol
    # deep dyadic points are vertices anchored only at 0
    assert [s.distance for s in report.samples][1:] == [F(0)] * 11


def test_square_probe_along_midline(two):
    sys2 = build_system(2)
    p = (F(0), HALF)
    path = dyadic_path(sys2, p, 10)
    g, h = constant(two, "x"), constant(two, "y")
    needed = {p}
    for x in path:
        needed.update(sys2.anchor(v) for v, _ in sys2.pou_eval(x))
    data = BoundaryData(sys2, {a: (g if a == p else h) for a in needed})
    report = boundary_continuity_probe(sys2, data, p, path, F(1, 100))
    assert report.tail_below_tol
    assert report.samples[-1].distance == 0


# the shrink falsifier --------------------------------------------------------


def test_shrink_probe_rejects_bad_radii(two):
    z = constant(two, "x")
    fam = sample_family(two, 1, 0)
    with pytest.raises(ValidationError):
        shrink_probe(z, fam, F(1, 4), F(1, 2), 5, 0)


def test_shrink_probe_diagonal_samples_stay_inside(two):
    z = constant(two, "x")
    fam = sample_family(two, 2, 5)
    report = shrink_probe(z, fam, F(1, 2), F(1, 1000), 50, 3)
    # a tiny inner radius forces every sample to be z itself
    assert report.ok
    assert report.samples_run == 50


def test_shrink_probe_counterexamples_verify(two):
    # with inner = outer, splices of two admissible perturbations can leave
    # the ball; every reported counterexample must recheck exactly
    z = constant(two, "x")
    fam = sample_family(two, 3, 9)
    found = None
    for seed in range(40):
        report = shrink_probe(z, fam, F(1, 16), F(1, 16), 40, seed, tuple_size=3)
        if not report.ok:
            found = report
            break
    assert found is not None, "no counterexample found over 40 seeds"
    for ce in found.counterexamples:
        from hmstep.equiconnect import SimplexWeights, e_n

        image = e_n(list(ce.points), SimplexWeights(ce.weights))
        assert pseudometric(fam, image, z) == ce.image_distance
        assert ce.image_distance >= F(1, 16)
