import random

import numpy as np
import pytest

from qpdim.chaincomplex import make_complex
from qpdim.fpmodule import direct_sum, hom_basis, regular_module, syzygy
from qpdim.koszul import koszul_complex
from qpdim.qpdcore import (
    NotGorenstein,
    check_ab,
    check_ar,
    check_depth_formula,
    check_ext_symmetry,
    check_vanishing_gap,
    qpd_eval,
    qpl_upper,
    qpr_base_change,
    qpr_koszul_residue,
    qpr_periodic,
    verify_qpr,
)
from qpdim.ring import make_ring

from helpers import k_of, quotient

B = 12


def line(ring):
    return make_complex(ring, 0, [1, 1], [[["x"]]])


def test_verify_rejects_wrong_module(xy):
    f = verify_qpr(line(xy), k_of(xy, B))
    assert not f and f.reason in ("NonIntegerMultiplicity", "IsoRefuted") and f.index == 0


def test_verify_rejects_exact_complex(m2):
    f = verify_qpr(make_complex(m2, 0, [1, 1], [[[1]]]), k_of(m2))
    assert not f and f.reason == "AllZero"


def test_koszul_residue_certificates(x4, poly2):
    assert qpr_koszul_residue(x4).multiplicity_list() == [1, 1]
    assert qpr_koszul_residue(poly2, 10).multiplicity_list() == [1, 0, 0]


def test_periodic(xy, x4, m2):
    c = qpr_periodic(quotient(xy, ["x"], B))
    assert c and c.period == 2 and c.qpd_from_complex == 0 and c.multiplicity_list() == [1, 1]
    c = qpr_periodic(quotient(x4, ["x^2"]))
    assert c and c.period == 1 and c.complex.ranks == [1, 1] and c.qpd_from_complex == 0
    assert qpr_periodic(regular_module(m2)).reason == "NotDetected"


def test_base_change_free_module(xy):
    c = qpr_base_change(xy, quotient(xy, [], B))
    assert c and c.multiplicity_list() == [1, 1]


def test_qpd_verdicts(xy, m2, x4):
    v = qpd_eval(quotient(xy, ["x"], B))
    assert v.finite and v.value == 0
    v = qpd_eval(quotient(m2, ["x"]))
    assert v.verdict == "infinite"
    r, n, _ = v.obstruction
    assert str(r) in {str(s) for s in m2.socle()} and np.any(n)
    for R in (m2, x4):
        v = qpd_eval(k_of(R))
        assert v.finite and v.value == 0


def test_qpd_of_free_and_finite_pd(poly2, m2):
    assert qpd_eval(regular_module(m2)).value == 0
    v = qpd_eval(k_of(poly2, 10))
    assert v.finite and v.value == 2 and v.route == "resolution"


def test_qpl(m2):
    assert qpl_upper(k_of(make_ring(101, ["x"], ["x^2"]))).value == 1
    assert qpl_upper(k_of(m2)).value == 1
    assert qpl_upper(regular_module(m2)).value == 0


def test_ab(m2, poly2, xy):
    a = check_ab(qpr_koszul_residue(m2))
    assert a.holds and (a.lhs, a.rhs) == (0, 0)
    a = check_ab(qpr_koszul_residue(poly2, 10))
    assert a.holds and a.lhs == 2
    a = check_ab(verify_qpr(line(xy), quotient(xy, ["x"], B)))
    assert a.holds and a.lhs == 0


def test_depth_formula_cases(xy):
    m = quotient(xy, ["x"], B)
    c = check_depth_formula(m, quotient(xy, ["y"], B), 8)
    assert not c.applicable and c.holds is None and c.tor_dims[1] == 1
    c = check_depth_formula(m, quotient(xy, [], B), 8)
    assert c.applicable and c.holds


def test_vanishing_gap_free_target(xy):
    cert = verify_qpr(line(xy), quotient(xy, ["x"], B))
    g = check_vanishing_gap(cert, 1, quotient(xy, [], B))
    assert g.status == "Verified"


def test_vanishing_gap_for_ext(xy):
    cert = verify_qpr(line(xy), quotient(xy, ["x"], B))
    g = check_vanishing_gap(cert, 1, quotient(xy, ["x-y"], B), kind="Ext", window_extra=4)
    assert g.status in ("Verified", "HypothesisFails") and len(g.window) == g.gap + 1


def test_ar_nonregular_ring():
    R = make_ring(101, ["x"], ["x^2"])
    a = check_ar(qpr_koszul_residue(R))
    assert a.first_nonzero == 1 and not a.free


def test_ext_symmetry_needs_gorenstein(m2):
    with pytest.raises(NotGorenstein):
        check_ext_symmetry(k_of(m2), k_of(m2))


def test_direct_sum_and_free_summand(xy, x4):
    m = quotient(xy, ["x"], B)
    assert qpd_eval(direct_sum([m, quotient(xy, [], B)])).value == qpd_eval(m).value == 0
    a, b = quotient(x4, ["x^2"]), k_of(x4)
    assert qpd_eval(direct_sum([a, b])).value == max(qpd_eval(a).value, qpd_eval(b).value)


def test_syzygy_drops_qpd(poly2, xy):
    for m in (k_of(poly2, 10), quotient(xy, ["x"], B)):
        q = qpd_eval(m).value
        assert qpd_eval(syzygy(m)).value == max(q - 1, 0)


def test_finite_qpd_module_embeds_in_free(x4):
    # M nonfree with finite qpd and depth M = depth R = 0 is a first syzygy
    m = quotient(x4, ["x^2"])
    assert qpd_eval(m).finite
    maps = hom_basis(m, regular_module(x4), None)
    f = x4.field
    rng = random.Random(0)
    phi = sum(f.scalar(rng.randrange(1, 101)) * p for p in maps)
    assert f.rank(f.asarray(phi) % 101) == m.dim


def test_certificate_descriptor(xy):
    cert = verify_qpr(line(xy), quotient(xy, ["x"], B))
    d = cert.descriptor("ring.json")
    assert d["multiplicities"] == [1, 1] and d["ranks"] == [1, 1]
