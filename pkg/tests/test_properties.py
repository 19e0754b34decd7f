"""Seed-fixed property checks over small random monomial Artinian algebras."""
import itertools
import random

import numpy as np
import pytest

from qpdim.chaincomplex import ChainMap, cone, homology, minimalize, shift_truncate
from qpdim.exactlin import Field
from qpdim.fpmodule import cyclic_module, derived_table, minimal_resolution
from qpdim.koszul import koszul_complex, koszul_homology
from qpdim.polyring import monomials_of_degree
from qpdim.ring import make_ring

from helpers import pad_trivially

CASES = 100
NAMES = ["x", "y", "z"]


def monomial_str(e):
    parts = [f"{NAMES[i]}^{a}" if a > 1 else NAMES[i] for i, a in enumerate(e) if a]
    return "*".join(parts)


def random_algebra(rng: random.Random, regime="artinian"):
    """k[x_1..x_n]/I with I monomial, inside m^2, and dim R <= 12."""
    while True:
        n = rng.randint(1, 3)
        gens = {tuple(rng.randint(2, 4) if j == i else 0 for j in range(n)) for i in range(n)}
        extra = [m for d in (2, 3) for m in monomials_of_degree(n, d)]
        gens |= set(rng.sample(extra, min(len(extra), rng.randint(0, 3))))
        R = make_ring(101, NAMES[:n], [monomial_str(e) for e in sorted(gens)], regime=regime)
        if len(R.basis_upto(None)) <= 12:
            return R


def random_element(rng, R, low=1):
    basis = [m for m in R.basis_upto(None) if sum(m) >= low]
    if not basis:
        return R.zero()
    return R.poly.poly({m: rng.randrange(1, 101) for m in rng.sample(basis, min(2, len(basis)))})


def random_module(rng, R, low=0):
    return cyclic_module(R, [random_element(rng, R) for _ in range(rng.randint(low, 2))])


def cases(name):
    for seed in range(CASES):
        rng = random.Random(f"{name}-{seed}")
        yield seed, rng, random_algebra(rng)


def products_vanish(c):
    R = c.ring
    for i in range(c.lo + 2, c.hi + 1):
        a, b = c.d(i - 1), c.d(i)
        for r in range(c.rank(i - 2)):
            for s in range(c.rank(i)):
                total = R.zero()
                for t in range(c.rank(i - 1)):
                    total = total + a[r][t] * b[t][s]
                if R.nf(total):
                    return False
    return True


def test_d_squared_after_every_constructor():
    for seed, rng, R in cases("dd"):
        seq = [random_element(rng, R) for _ in range(rng.randint(1, 3))]
        K = koszul_complex(R, seq)
        P = minimal_resolution(random_module(rng, R, 1), 3).complex
        built = [K, P, shift_truncate(K, rng.randint(-2, 2)), shift_truncate(P, 0, (0, 2)), pad_trivially(P, 1)]
        built.append(minimalize(built[-1]))
        ident = {i: [[R.one() if a == b else R.zero() for b in range(K.rank(i))] for a in range(K.rank(i))] for i in range(K.lo, K.hi + 1)}
        built.append(cone(ChainMap(K, K, ident)))
        for c in built:
            c.verify()
            assert products_vanish(c), seed


def test_euler_characteristic():
    for seed, rng, R in cases("euler"):
        seq = [random_element(rng, R) for _ in range(rng.randint(1, 3))]
        for c in (koszul_complex(R, seq), minimal_resolution(random_module(rng, R), 2).complex):
            h = homology(c).dims
            lhs = sum((-1) ** i * c.rank(i) * R.dim for i in range(c.lo, c.hi + 1))
            assert lhs == sum((-1) ** i * d for i, d in h.items()), seed


def test_koszul_edge_dimensions():
    for seed, rng, R in cases("edge"):
        m = random_module(rng, R)
        seq = [random_element(rng, R) for _ in range(rng.randint(1, 3))]
        rep = koszul_homology(R, seq, m)
        f = R.field
        mats = [m.poly_matrix(R.element(s)) for s in seq]
        assert rep.dims[0] == m.dim - f.rank(np.concatenate(mats, axis=1)), seed
        assert rep.dims[len(seq)] == f.kernel_basis(np.concatenate(mats, axis=0)).shape[1], seed


def test_tor_balance():
    for seed, rng, R in cases("balance"):
        m, n = random_module(rng, R), random_module(rng, R)
        assert derived_table(m, n, "Tor", 3).dims == derived_table(n, m, "Tor", 3).dims, seed


def test_minimalize_preserves_homology():
    for seed, rng, R in cases("minimal"):
        P = minimal_resolution(random_module(rng, R, 1), 3).complex
        Q = pad_trivially(P, rng.randint(P.lo, P.hi - 1))
        M = minimalize(Q)
        assert homology(M).dims == {i: d for i, d in homology(Q).dims.items() if i in homology(M).dims}, seed
        assert [r for r in M.ranks] == [P.rank(i) for i in range(M.lo, M.hi + 1)], seed


def test_graded_stability():
    for seed in range(CASES):
        rng = random.Random(f"stable-{seed}")
        R = random_algebra(rng, "graded")
        gens_m = [monomial_str(e) for e in rng.sample([m for m in R.basis_upto(None) if sum(m) >= 1], 1)]
        gens_n = [monomial_str(e) for e in rng.sample([m for m in R.basis_upto(None) if sum(m) >= 1], 1)]
        b = rng.randint(4, 6)
        lo = derived_table(cyclic_module(R, gens_m, b), cyclic_module(R, gens_n, b), "Tor", 2)
        hi = derived_table(cyclic_module(R, gens_m, b + 2), cyclic_module(R, gens_n, b + 2), "Tor", 2)
        for a, c in zip(lo.hilbert, hi.hilbert):
            assert a == {d: v for d, v in c.items() if d <= b}, seed


@pytest.mark.parametrize("p", [2, 101, 0])
def test_rank_nullity(p):
    f = Field(p)
    rng = random.Random(p)
    for _ in range(CASES):
        m = f.random_matrix(rng, rng.randint(1, 9), rng.randint(1, 9))
        if rng.random() < 0.3:
            m[:, -1] = m[:, 0]
        k = f.kernel_basis(m)
        assert f.rank(m) + k.shape[1] == m.shape[1]
        assert f.is_zero(f.matmul(m, k))


def test_module_action_rank_nullity():
    for seed, rng, R in cases("rn"):
        m = random_module(rng, R)
        a = m.poly_matrix(random_element(rng, R))
        f = R.field
        assert f.rank(a) + f.kernel_basis(a).shape[1] == m.dim, seed
