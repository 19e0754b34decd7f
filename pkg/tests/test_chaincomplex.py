import pytest

from qpdim.chaincomplex import (
    ChainMap,
    DSquareNonzero,
    NotAChainMap,
    cone,
    hom_into_module,
    homology,
    make_complex,
    minimalize,
    shift_truncate,
)
from qpdim.fpmodule import direct_sum, iso_test, minimal_resolution, regular_module
from qpdim.fpmodule.iso import ISOMORPHIC
from qpdim.koszul import koszul_complex
from qpdim.qpdcore import verify_qpr

from helpers import k_of, pad_trivially, quotient


def line(ring):
    return make_complex(ring, 0, [1, 1], [[["x"]]])


def test_d_squared_checked(poly2):
    with pytest.raises(DSquareNonzero):
        make_complex(poly2, 0, [1, 1, 1], [[["y"]], [["x"]]])


def test_line_complex_homology(xy):
    rep = homology(line(xy), bound=12)
    m = quotient(xy, ["x"], 12)
    assert iso_test(rep.modules[0], m).verdict == ISOMORPHIC
    assert iso_test(rep.modules[1], m).verdict == ISOMORPHIC
    assert rep.modules[1].min_degree() == 2


def test_koszul_homology_dims_match_oracle(m2):
    rep = homology(koszul_complex(m2, ["x", "y"]))
    # oracle: H_0 = k, H_2 = (0 : m) = socle, and the Euler characteristic is 3 - 6 + 3 = 0
    h0, h2 = 1, len(m2.socle())
    h1 = h0 + h2 - (1 - 2 + 1) * m2.dim
    assert [rep.dims[i] for i in range(3)] == [h0, h1, h2] == [1, 3, 2]


def test_zero_differentials(m2):
    c = make_complex(m2, 0, [2, 1], [[[0], [0]]])
    assert homology(c).dims == {0: 2 * m2.dim, 1: m2.dim}


def test_minimalize_cancels_units(m2):
    P = minimal_resolution(k_of(m2), 3).complex
    Q = pad_trivially(P, 1)
    assert not Q.is_minimal()
    mq = minimalize(Q)
    assert mq.ranks == P.ranks and mq.is_minimal()
    assert homology(mq).dims == homology(Q).dims
    assert minimalize(P).ranks == P.ranks


def test_minimalize_identity_block(m2):
    c = make_complex(m2, 0, [1, 1], [[[1]]])
    assert homology(c).dims == {0: 0, 1: 0}
    assert minimalize(c).sup is None


def test_cone_of_identity_is_exact(m2):
    C = koszul_complex(m2, ["x", "y"])
    ident = {i: [[m2.one() if r == s else m2.zero() for s in range(C.rank(i))] for r in range(C.rank(i))] for i in range(3)}
    K = cone(ChainMap(C, C, ident))
    assert not any(homology(K).dims.values())


def test_cone_of_zero(m2):
    C = koszul_complex(m2, ["x", "y"])
    K = cone(ChainMap(C, C, {}))
    h, hc = homology(K).dims, homology(C).dims
    for i in range(K.lo, K.hi + 1):
        assert h[i] == hc.get(i, 0) + hc.get(i - 1, 0)


def test_chain_map_checked(xy):
    C = line(xy)
    with pytest.raises(NotAChainMap):
        ChainMap(C, C, {0: [[xy.one()]]}).check()


def test_shift(m2):
    C = koszul_complex(m2, ["x", "y"])
    assert shift_truncate(C, 0).diffs == C.diffs
    S = shift_truncate(C, 3)
    hs, hc = homology(S).dims, homology(C).dims
    assert all(hs[i] == hc[i - 3] for i in range(3, 6))


def test_truncated_koszul_is_a_qpr_of_k(m2):
    T = shift_truncate(koszul_complex(m2, ["x", "y"]), 0, (0, 1))
    cert = verify_qpr(T, k_of(m2))
    assert cert and cert.qpl_from_complex == 1


def test_hom_into_module(xy, m2):
    n = quotient(xy, ["x"], 10)
    single = make_complex(xy, 0, [1], [])
    assert hom_into_module(single, n)[0].dim == n.dim
    h = hom_into_module(line(xy), n)
    assert iso_test(h[0], n.truncate(9)).verdict == ISOMORPHIC
    assert h[1].hilbert() == {d: 1 for d in range(-1, 10)}
    zero = quotient(m2, ["1"])
    assert zero.dim == 0
    assert all(x.dim == 0 for x in hom_into_module(koszul_complex(m2, ["x", "y"]), zero).values())


def test_homology_with_regular_coefficients(m2, x4):
    for C in (koszul_complex(m2, ["x", "y"]), minimal_resolution(quotient(x4, ["x^2"]), 3).complex):
        R = regular_module(C.ring)
        assert homology(C, coefficients=R).dims == homology(C).dims


def test_euler_characteristic(m2, wxyz):
    for R in (m2, wxyz):
        C = koszul_complex(R, [R.var(i) for i in range(R.nvars)][:3])
        h = homology(C).dims
        assert sum((-1) ** i * r * R.dim for i, r in enumerate(C.ranks)) == sum((-1) ** i * h[i] for i in h)


def test_descriptor(xy):
    d = line(xy).descriptor("ring.json")
    assert d == {"ring": "ring.json", "lo": 0, "ranks": [1, 1], "twists": [[0], [1]], "differentials": [[["x"]]]}
