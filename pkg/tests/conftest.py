import pytest

from qpdim.ring import make_ring

P = 101


@pytest.fixture
def xy():
    """k[x,y]/(xy), graded."""
    return make_ring(P, ["x", "y"], ["x*y"], regime="graded", regular_sequence=True)


@pytest.fixture
def m2():
    """k[x,y]/(x^2,xy,y^2): the square of the maximal ideal is zero."""
    return make_ring(P, ["x", "y"], ["x^2", "x*y", "y^2"])


@pytest.fixture
def x4():
    return make_ring(P, ["x"], ["x^4"])


@pytest.fixture
def wxyz():
    return make_ring(P, ["w", "x", "y", "z"], ["x^2", "y^2", "w^2", "z^2", "w*z"])


@pytest.fixture
def poly2():
    """k[x,y], graded."""
    return make_ring(P, ["x", "y"], [], regime="graded")

