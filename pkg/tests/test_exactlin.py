import random
from fractions import Fraction

import numpy as np
import pytest
from sympy import GF, QQ
from sympy.polys.matrices import DomainMatrix

from qpdim.exactlin import Field, FieldError, kernel_basis, rank, rref, solve


def sympy_rank(m, p):
    dom = GF(p) if p else QQ
    rows = [[dom(int(x)) if p else dom(Fraction(x).numerator, Fraction(x).denominator) for x in row] for row in m.tolist()]
    return DomainMatrix(rows, m.shape, dom).rank()


@pytest.mark.parametrize("p", [2, 101, 32003, (1 << 31) - 1, 0])
def test_rank_matches_sympy(p):
    f = Field(p)
    rng = random.Random(p)
    for _ in range(10):
        r, c = rng.randint(1, 8), rng.randint(1, 8)
        m = f.random_matrix(rng, r, c)
        if rng.random() < 0.5 and r > 1:
            m[-1] = m[0]
        assert f.rank(m) == sympy_rank(m, p)


def test_identity_rref():
    f = Field(101)
    r, piv, k = rref(f.eye(2), f)
    assert (r == f.eye(2)).all() and piv == [0, 1] and k == 2


def test_dependent_rows():
    f = Field(101)
    r, piv, k = rref(f.array([[1, 2], [2, 4]]), f)
    assert r.tolist() == [[1, 2], [0, 0]] and k == 1 and piv == [0]


def test_rank_of_transpose():
    f = Field(101)
    m = f.random_matrix(random.Random(3), 20, 30)
    assert rank(m, f) == rank(m.T.copy(), f) == sympy_rank(m, 101)


def test_kernel_examples():
    f = Field(101)
    assert kernel_basis(f.eye(3), f).shape == (3, 0)
    assert kernel_basis(f.zeros(3, 3), f).shape == (3, 3)
    k = kernel_basis(f.array([[1, 1]]), f)
    assert k.shape == (2, 1) and f.signed(k[0, 0]) == -f.signed(k[1, 0])


def test_solve_examples():
    f = Field(101)
    b = f.array([[3], [4]])
    assert (solve(f.eye(2), b, f) == b).all()
    assert solve(f.array([[1], [0]]), f.array([[0], [1]]), f) is None


@pytest.mark.parametrize("p", [101, 0])
def test_solve_consistent_random(p):
    f = Field(p)
    rng = random.Random(11)
    for _ in range(20):
        a = f.random_matrix(rng, 6, 4)
        x0 = f.random_matrix(rng, 4, 2)
        b = f.matmul(a, x0)
        x = solve(a, b, f)
        assert x is not None and f.is_zero(f.matmul(a, x) - b if not p else f._mod(f.matmul(a, x) - b))


def test_rational_arithmetic_is_exact():
    f = Field(0)
    m = f.array([[Fraction(1, 3), Fraction(1, 6)], [1, Fraction(1, 2)]])
    r, piv = f.rref(m)
    assert r.tolist() == [[1, Fraction(1, 2)], [0, 0]]
    assert all(isinstance(x, Fraction) for x in r.ravel())


def test_large_prime_uses_python_ints():
    p = (1 << 61) - 1
    f = Field(p)
    a = f.array([[p - 1, 2], [3, p - 5]])
    assert f.rank(a) == sympy_rank(a, p)
    inv = f.inverse(a)
    assert f.matmul(a, inv).tolist() == [[1, 0], [0, 1]]


@pytest.mark.parametrize("bad", [4, -3, 1])
def test_bad_characteristic(bad):
    with pytest.raises(FieldError):
        Field(bad)


def test_rref_idempotent_and_kernel_exact():
    f = Field(101)
    rng = random.Random(5)
    for _ in range(100):
        r, c = rng.randint(1, 7), rng.randint(1, 7)
        m = f.random_matrix(rng, r, c)
        red, _ = f.rref(m)
        assert (f.rref(red)[0] == red).all()
        k = f.kernel_basis(m)
        assert f.is_zero(f.matmul(m, k))
        assert f.rank(m) + k.shape[1] == c
