import itertools

import numpy as np
import pytest

from qpdim.ring import GeneratorInM, NonHomogeneous, NotLocal, NotZeroDimensional, make_ring, ring_from_descriptor


def test_graded_xy_has_two_dims_per_degree(xy):
    assert xy.hilbert(6) == [1, 2, 2, 2, 2, 2, 2]
    assert not xy.finite


def test_square_zero_ring(m2):
    assert m2.dim == 3
    assert sorted(str(s) for s in m2.socle()) == ["x", "y"]


def test_four_variable_ring():
    R = make_ring(101, ["x", "y", "u", "v"], ["x^2", "x*y", "y^2", "x*u", "y*v", "x*v - y*u", "u^2", "u*v", "v^2"])
    assert R.dim == 6 and R.edim() == 4


def test_jordan_block(x4):
    (a,) = x4.variable_actions()
    order = [x4.index[(i,)] for i in range(4)]
    a = a[np.ix_(order, order)]
    assert a.tolist() == [[0, 0, 0, 0], [1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]]


def test_actions_commute_and_kill_ideal(m2, wxyz):
    for R in (m2, wxyz):
        acts = R.variable_actions()
        fld = R.field
        for a, b in itertools.combinations(acts, 2):
            assert fld.is_zero(fld._mod(fld.matmul(a, b) - fld.matmul(b, a)))
        for g in R.ideal:
            assert fld.is_zero(R.mult_matrix(g))


def test_square_zero_actions(m2):
    x, y = m2.variable_actions()
    f = m2.field
    assert f.is_zero(f.matmul(x, x)) and f.is_zero(f.matmul(x, y)) and f.is_zero(f.matmul(y, y))


def test_socles(x4):
    assert [str(s) for s in x4.socle()] == ["x^3"]
    k = make_ring(101, [], [])
    assert [str(s) for s in k.socle()] == ["1"]


def test_annihilators(x4, m2):
    # oracle: a*x^2 = 0 in k[x]/(x^4) exactly when a has no terms of degree < 2
    assert sorted(str(s) for s in x4.annihilator(["x^2"])) == ["x^2", "x^3"]
    assert x4.annihilator([1]) == []
    assert {str(s) for s in m2.annihilator(["x", "y"])} == {str(s) for s in m2.socle()}


def test_units(x4):
    u = x4.parse("1 + x")
    assert x4.mul(u, x4.inverse(u)) == x4.one()
    with pytest.raises(ZeroDivisionError):
        x4.inverse(x4.parse("x"))


def test_validation():
    with pytest.raises(GeneratorInM):
        make_ring(101, ["x", "y"], ["x", "y^2"])
    with pytest.raises(NonHomogeneous):
        make_ring(101, ["x", "y"], ["x^2 - y^3"], regime="graded")
    with pytest.raises(NotZeroDimensional):
        make_ring(101, ["x", "y"], ["x*y"])
    with pytest.raises(NotLocal):
        make_ring(101, ["x"], ["x^2 - x^3"])


def test_dimension_counts(wxyz):
    assert wxyz.dim == sum(wxyz.hilbert(10)) == 12


def test_descriptor_round_trip(m2):
    d = m2.descriptor()
    assert set(d) == {"field", "vars", "ideal", "regime"}
    assert ring_from_descriptor(d).dim == 3
