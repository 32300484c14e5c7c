from fractions import Fraction

import pytest

from hmstep import (
    TestFunctional,
    ValidationError,
    Window,
    WindowedFunctional,
    canonicalize,
    constant,
    convex_midpoint_vector,
    from_pairs,
    indicator,
    project,
    pseudometric,
    sample_family,
    window_average,
)
from hmstep.rng import SeededRng
from hmstep.suites import random_family, random_space, random_stepfn

F = Fraction


@pytest.mark.parametrize("a, b", [(F(1, 2), F(1, 2)), (F(3, 4), F(1, 4)), (F(-1, 8), F(1, 2)), (F(1, 2), F(9, 8))])
def test_window_validation(a, b):
    with pytest.raises(ValidationError):
        Window(a, b)


def test_average_of_constant(two, phi01):
    wf = WindowedFunctional(phi01, Window(F(1, 8), F(5, 8)))
    assert window_average(wf, constant(two, "x")) == 0
    assert window_average(wf, constant(two, "y")) == 1


def test_average_full_window(two, phi01):
    alpha = from_pairs(two, [(F(0), "x"), (F(1, 2), "y")])
    wf = WindowedFunctional(phi01, Window(0, 1))
    assert window_average(wf, alpha) == F(1, 2)


def test_average_inner_window(two, phi01):
    alpha = from_pairs(two, [(F(0), "x"), (F(1, 2), "y")])
    wf = WindowedFunctional(phi01, Window(F(1, 4), F(3, 4)))
    assert window_average(wf, alpha) == F(1, 2)


def test_average_space_mismatch(two, three, phi01):
    wf = WindowedFunctional(phi01, Window(0, 1))
    with pytest.raises(ValidationError, match="different spaces"):
        window_average(wf, constant(three, "x"))


def test_pseudometric_examples(two, phi01):
    wf = WindowedFunctional(phi01, Window(0, 1))
    f = constant(two, "x")
    g = constant(two, "y")
    assert pseudometric([wf], f, f) == 0
    assert pseudometric([wf], f, g) == 1
    half = WindowedFunctional(phi01, Window(0, F(1, 2)))
    alpha = from_pairs(two, [(F(0), "x"), (F(1, 4), "y")])
    vals = [abs(window_average(w, alpha) - window_average(w, f)) for w in (wf, half)]
    assert pseudometric([wf, half], alpha, f) == max(vals)


def test_pseudometric_needs_family(two):
    with pytest.raises(ValidationError, match="nonempty"):
        pseudometric([], constant(two, "x"), constant(two, "x"))


def test_project_singleton(two, phi01):
    wf = WindowedFunctional(phi01, Window(0, 1))
    assert project(constant(two, "x"), [wf]) == (0,)


def test_project_two_windows(two, phi01):
    family = [
        WindowedFunctional(phi01, Window(0, F(1, 2))),
        WindowedFunctional(phi01, Window(F(1, 2), 1)),
    ]
    alpha = from_pairs(two, [(F(0), "x"), (F(1, 2), "y")])
    assert project(alpha, family) == (0, 1)


def test_project_matches_pseudometric():
    rng = SeededRng(99)
    for _ in range(100):
        space = random_space(rng)
        fam = random_family(rng, space, rng.int_in(1, 4))
        f = random_stepfn(rng, space)
        g = random_stepfn(rng, space)
        pf, pg = project(f, fam), project(g, fam)
        assert max(abs(a - b) for a, b in zip(pf, pg)) == pseudometric(fam, f, g)


def test_midpoint_vector():
    assert convex_midpoint_vector((F(1), F(0)), (F(0), F(1))) == (F(1, 2), F(1, 2))
    assert convex_midpoint_vector((F(1, 3),), (F(1, 2),)) == (F(5, 12),)
    u = (F(1, 7), F(2, 7))
    assert convex_midpoint_vector(u, u) == u
    with pytest.raises(ValidationError, match="lengths"):
        convex_midpoint_vector((F(0),), (F(0), F(1)))


def test_splitting_identity(two, phi01):
    rng = SeededRng(5)
    full = WindowedFunctional(phi01, Window(0, 1))
    for _ in range(100):
        alpha = random_stepfn(rng, two)
        t = rng.fraction(F(1, 16), F(15, 16), 32)
        left = WindowedFunctional(phi01, Window(0, t))
        right = WindowedFunctional(phi01, Window(t, 1))
        assert window_average(full, alpha) == t * window_average(left, alpha) + (
            1 - t
        ) * window_average(right, alpha)


def test_sample_family_deterministic(two):
    assert sample_family(two, 3, 17) == sample_family(two, 3, 17)


def test_sample_family_single_window_is_full(two):
    fam = sample_family(two, 1, 3)
    assert all(wf.window == Window(0, 1) for wf in fam)


def test_sample_family_size(two):
    assert len(sample_family(two, 2, 0)) == 4  # 2 points x 2 windows
    with pytest.raises(ValidationError):
        sample_family(two, 0, 0)


def test_sample_family_windows_are_dyadic(two):
    for wf in sample_family(two, 6, 11):
        for end in (wf.window.a, wf.window.b):
            assert end.denominator & (end.denominator - 1) == 0


def test_indicator(two):
    ind = indicator(two, "y")
    assert ind.value("y") == 1
    assert ind.value("x") == 0
