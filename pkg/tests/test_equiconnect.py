from fractions import Fraction

import pytest

from hmstep import (
    SimplexWeights,
    TestFunctional,
    ValidationError,
    Window,
    WindowedFunctional,
    canonicalize,
    check_certificate,
    constant,
    e1,
    e_n,
    from_pairs,
    hm_midpoint,
    make_certificate,
    project,
    pushforward,
    window_average,
)
from hmstep.rng import SeededRng
from hmstep.suites import random_family, random_map, random_space, random_stepfn

F = Fraction


# the splice ----------------------------------------------------------------


def test_splice_endpoints(two):
    alpha = from_pairs(two, [(F(0), "x"), (F(1, 3), "y")])
    beta = constant(two, "y")
    assert e1(alpha, beta, 1) == alpha
    assert e1(alpha, beta, 0) == beta


def test_splice_of_constants(two):
    got = e1(constant(two, "x"), constant(two, "y"), F(1, 3))
    assert got == from_pairs(two, [(F(0), "x"), (F(1, 3), "y")])


def test_splice_idempotence(two):
    rng = SeededRng(31)
    for _ in range(100):
        alpha = random_stepfn(rng, two)
        assert e1(alpha, alpha, rng.unit_fraction()) == alpha


def test_splice_time_validation(two):
    with pytest.raises(ValidationError, match="outside"):
        e1(constant(two, "x"), constant(two, "y"), F(3, 2))


def test_splice_keeps_interior_structure(two):
    alpha = from_pairs(two, [(F(0), "x"), (F(1, 4), "y")])
    beta = from_pairs(two, [(F(0), "y"), (F(3, 4), "x")])
    got = e1(alpha, beta, F(1, 2))
    assert got == from_pairs(two, [(F(0), "x"), (F(1, 4), "y"), (F(3, 4), "x")])


# simplex weights -----------------------------------------------------------


@pytest.mark.parametrize(
    "weights",
    [(), (F(1, 2), F(1, 4)), (F(3, 2), F(-1, 2))],
)
def test_simplex_weights_validation(weights):
    with pytest.raises(ValidationError):
        SimplexWeights(weights)


# the iterated splice -------------------------------------------------------


def test_iterated_on_equal_points(two):
    a = from_pairs(two, [(F(0), "y"), (F(2, 3), "x")])
    w = SimplexWeights((F(1, 6), F(1, 2), F(1, 3)))
    assert e_n([a, a, a], w) == a


def test_vertex_weights_select_the_point(two):
    pts = [constant(two, "x"), from_pairs(two, [(F(0), "x"), (F(1, 2), "y")]), constant(two, "y")]
    for j in range(3):
        w = [F(0)] * 3
        w[j] = F(1)
        assert e_n(pts, SimplexWeights(tuple(w))) == pts[j]


def test_two_point_halving(two):
    got = e_n([constant(two, "x"), constant(two, "y")], SimplexWeights((F(1, 2), F(1, 2))))
    assert got == from_pairs(two, [(F(0), "x"), (F(1, 2), "y")])


def test_length_mismatch(two):
    with pytest.raises(ValidationError, match="one weight per"):
        e_n([constant(two, "x")], SimplexWeights((F(1, 2), F(1, 2))))


def test_zero_prefix_convention(two):
    # an all-zero weight prefix hands the state to each new point in turn
    pts = [constant(two, "x"), constant(two, "y")]
    got = e_n(pts, SimplexWeights((F(0), F(1))))
    assert got == constant(two, "y")


# midpoint ------------------------------------------------------------------


def test_midpoint_of_self(two, phi01):
    alpha = from_pairs(two, [(F(0), "x"), (F(1, 3), "y")])
    coords = [WindowedFunctional(phi01, Window(0, 1))]
    assert hm_midpoint(alpha, alpha, coords) == alpha


def test_midpoint_of_constants(two, phi01):
    coords = [WindowedFunctional(phi01, Window(0, 1))]
    gamma = hm_midpoint(constant(two, "x"), constant(two, "y"), coords)
    assert gamma == from_pairs(two, [(F(0), "x"), (F(1, 2), "y")])
    assert window_average(coords[0], gamma) == F(1, 2)


def test_midpoint_worked_instance(two, phi01):
    alpha = from_pairs(two, [(F(0), "x"), (F(1, 2), "y")])
    beta = constant(two, "y")
    coords = [WindowedFunctional(phi01, Window(0, 1))]
    gamma = hm_midpoint(alpha, beta, coords)
    assert gamma == from_pairs(two, [(F(0), "x"), (F(1, 4), "y")])
    assert window_average(coords[0], gamma) == F(3, 4)


def test_midpoint_projection_is_exact_average():
    rng = SeededRng(77)
    for _ in range(200):
        space = random_space(rng)
        alpha = random_stepfn(rng, space)
        beta = random_stepfn(rng, space)
        coords = random_family(rng, space, rng.int_in(1, 4))
        gamma = hm_midpoint(alpha, beta, coords)
        pa, pb = project(alpha, coords), project(beta, coords)
        assert project(gamma, coords) == tuple((a + b) / 2 for a, b in zip(pa, pb))


def test_midpoint_needs_coords(two):
    with pytest.raises(ValidationError, match="nonempty"):
        hm_midpoint(constant(two, "x"), constant(two, "y"), [])


# certificates --------------------------------------------------------------


def test_certificate_worked_instance(two):
    phi = TestFunctional.from_mapping(two, {"x": 0, "y": 1})  # c = 1
    cert = make_certificate(phi, F(1, 2))
    assert cert.n == 5
    assert cert.v_threshold == F(1, 100)
    assert cert.e_threshold == F(1, 10)
    assert cert.grid == tuple(F(i, 5) for i in range(6))


def test_certificate_trivial_for_zero_functional(two):
    phi = TestFunctional.from_mapping(two, {"x": 0, "y": 0})
    cert = make_certificate(phi, F(7, 3))
    assert cert.n == 1 and cert.c == 0


def test_certificate_strict_inequality(two):
    phi = TestFunctional.from_mapping(two, {"x": 0, "y": 1})
    assert make_certificate(phi, F(2)).n == 2  # 1/1 is not < 1, so n = 2
    with pytest.raises(ValidationError, match="positive"):
        make_certificate(phi, 0)


def test_check_certificate_on_equal_inputs(two, phi01):
    cert = make_certificate(phi01, F(1, 2))
    alpha = from_pairs(two, [(F(0), "x"), (F(1, 5), "y")])
    beta = constant(two, "y")
    res = check_certificate(cert, alpha, beta, F(1, 3), alpha, beta, F(1, 3))
    assert res.in_v and res.in_e and res.conclusion


def test_check_certificate_detects_far_cells(two, phi01):
    cert = make_certificate(phi01, F(1, 2))
    a1 = constant(two, "x")
    a2 = constant(two, "y")  # every cell average differs by 1 >= 1/100
    res = check_certificate(cert, a1, a1, F(1, 2), a2, a1, F(1, 2))
    assert not res.in_v


def test_check_certificate_space_mismatch(two, three, phi01):
    cert = make_certificate(phi01, F(1, 2))
    with pytest.raises(ValidationError, match="different spaces"):
        check_certificate(
            cert,
            constant(three, "x"),
            constant(three, "x"),
            0,
            constant(three, "x"),
            constant(three, "x"),
            0,
        )


def test_splice_naturality():
    rng = SeededRng(6)
    for _ in range(100):
        dom = random_space(rng)
        cod = random_space(rng)
        m = random_map(rng, dom, cod)
        alpha = random_stepfn(rng, dom)
        beta = random_stepfn(rng, dom)
        t = rng.unit_fraction()
        assert pushforward(m, e1(alpha, beta, t)) == e1(
            pushforward(m, alpha), pushforward(m, beta), t
        )
