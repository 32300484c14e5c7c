from fractions import Fraction

import pytest

from hmstep import TestFunctional, validate_space


@pytest.fixture
def two():
    """Two points at distance 1."""
    return validate_space(["x", "y"], [[0, 1], [1, 0]])


@pytest.fixture
def three():
    return validate_space(
        ["x", "y", "z"],
        [
            [0, Fraction(1, 2), 1],
            [Fraction(1, 2), 0, Fraction(3, 4)],
            [1, Fraction(3, 4), 0],
        ],
    )


@pytest.fixture
def phi01(two):
    """phi(x) = 0, phi(y) = 1."""
    return TestFunctional.from_mapping(two, {"x": 0, "y": 1})
