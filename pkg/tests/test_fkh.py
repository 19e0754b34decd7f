import pytest

from qpdim.fkh import (
    NonMinimalGenerators,
    NotRegular,
    check_fkh_qpd,
    check_tor_ext_sym_fkh,
    ideal_koszul_homology,
    is_fkh,
    link,
    quasi_gorenstein,
)
from qpdim.fpmodule import iso_test
from qpdim.fpmodule.iso import ISOMORPHIC

from helpers import k_of, quotient


def test_koszul_homology_of_ideals(wxyz, x4, m2):
    h = ideal_koszul_homology(wxyz, ["x", "y"])
    assert h[0].dim == 3
    h = ideal_koszul_homology(x4, ["x^2"])
    s = quotient(x4, ["x^2"])
    assert iso_test(h[0], s).verdict == iso_test(h[1], s).verdict == ISOMORPHIC
    h = ideal_koszul_homology(m2, ["x", "y"])
    assert [h[i].dim for i in range(3)] == [1, 3, 2]


def test_non_minimal_generators(x4, m2):
    with pytest.raises(NonMinimalGenerators):
        ideal_koszul_homology(x4, ["x", "x^2"])
    with pytest.raises(NonMinimalGenerators):
        ideal_koszul_homology(m2, ["x", "2*x"])


def test_fkh_census(wxyz):
    for gens in (["x", "y"], ["w", "z"]):
        rep = is_fkh(wxyz, gens)
        assert rep.fkh and all(h.free for h in rep.homology) and rep.grade == 0


def test_not_fkh(m2):
    rep = is_fkh(m2, ["x"])
    # oracle: H_1 = (0 : x) = m has dimension 2 and needs 2 generators, but S^2 has dimension 4
    assert not rep.fkh and rep.homology[1].dim == 2 and rep.quotient_dim == 2


def test_fkh_report_json(wxyz):
    d = is_fkh(wxyz, ["x", "y"]).to_json()
    assert set(d) == {"ideal", "grade", "homology", "fkh"}
    assert [h["rank"] for h in d["homology"]] == [1, 2, 1]


def test_fkh_qpd(wxyz, x4, poly2):
    assert check_fkh_qpd(wxyz, ["w", "z"]).qpd == 0
    assert check_fkh_qpd(x4, ["x^2"]).qpd == 0
    r = check_fkh_qpd(poly2, ["x"])
    assert r.qpd == r.grade == 1


def test_self_link(x4):
    r = link(x4, [], ["x^2"])
    assert r.linked == ["x^2"] and r.double_link


def test_degenerate_link(poly2):
    r = link(poly2, ["x"], ["x", "y"])
    assert r.linked == ["x"] and not r.double_link


def test_link_needs_regular_sequence(xy):
    with pytest.raises(NotRegular):
        link(xy, ["x"], ["x", "y"])


def test_quasi_gorenstein(x4, m2, poly2):
    r = quasi_gorenstein(x4, ["x^2"])
    assert r.passed and r.grade == 0 and r.duality == {0: True, 1: True}
    assert not quasi_gorenstein(m2, ["x", "y"]).quasi_gorenstein
    r = quasi_gorenstein(poly2, ["x"])
    assert r.quasi_gorenstein and r.grade == 1


def test_tor_ext_symmetry(x4):
    for n in (quotient(x4, ["x^2"]), quotient(x4, []), k_of(x4)):
        s = check_tor_ext_sym_fkh(x4, ["x^2"], n, 12)
        assert s.agree and s.label == "EMPIRICAL" and s.reflexivity.passed
