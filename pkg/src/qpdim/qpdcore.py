"""Quasi-projective resolutions: certificates, constructors, the qpd
evaluator, and checkers for the consequences of a finite certificate.

A quasi-projective resolution (QPR) of M is a bounded complex P of finite
free modules whose homology is a direct sum of copies of M in each degree,
and not exact.  Constructors here build candidate complexes; every one of
them is accepted only after ``verify_qpr`` has matched each H_i(P) with
M^{a_i} through a verified isomorphism.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from .chaincomplex import FreeComplex, hom_into_module, homology, minimalize, shift_truncate
from .fpmodule.derived import EXT, TOR, derived_table
from .fpmodule.iso import ISOMORPHIC, NOT_ISOMORPHIC, IsoResult, iso_test
from .fpmodule.modules import (
    ModulePresentation,
    VectorizedModule,
    direct_sum,
    free_split,
    residue_field,
    vectorize,
)
from .fpmodule.resolution import minimal_resolution, presentation_of
from .koszul import depth, koszul_complex, koszul_homology
from .ring import QuotientRing, RingError

__all__ = [
    "QPRCertificate",
    "QPRFailure",
    "verify_qpr",
    "qpr_koszul_residue",
    "qpr_periodic",
    "qpr_base_change",
    "QpdVerdict",
    "qpd_eval",
    "QplBound",
    "qpl_upper",
    "check_ab",
    "check_depth_formula",
    "check_vanishing_gap",
    "check_ar",
    "check_ext_symmetry",
    "tensor_presentation",
    "TheoremViolation",
    "NotGorenstein",
]

NON_INTEGER = "NonIntegerMultiplicity"
ISO_UNKNOWN = "IsoUnknown"
ISO_REFUTED = "IsoRefuted"
ALL_ZERO = "AllZero"

FINITE = "finite"
INFINITE = "infinite"
UNKNOWN_VERDICT = "unknown"


class TheoremViolation(AssertionError):
    """A computed value contradicts a proved identity; this is a bug."""


class NotGorenstein(RingError):
    pass


def _zero_module(ring: QuotientRing) -> VectorizedModule:
    return VectorizedModule(ring, [ring.field.zeros(0, 0) for _ in range(ring.nvars)], dim=0)


@dataclass
class QPRCertificate:
    complex: FreeComplex
    module: VectorizedModule
    multiplicities: dict[int, int]
    shifts: dict[int, list[int]]
    homology_dims: dict[int, int]
    witnesses: dict[int, IsoResult] = dc_field(repr=False)
    period: int | None = None

    def __bool__(self):
        return True

    @property
    def sup(self) -> int:
        return self.complex.sup

    @property
    def inf(self) -> int:
        return self.complex.inf

    @property
    def hsup(self) -> int:
        return max(i for i, a in self.multiplicities.items() if a)

    @property
    def hinf(self) -> int:
        return min(i for i, a in self.multiplicities.items() if a)

    @property
    def qpd_from_complex(self) -> int:
        return self.sup - self.hsup

    @property
    def qpl_from_complex(self) -> int:
        return self.sup - self.inf

    def multiplicity_list(self) -> list[int]:
        return [self.multiplicities.get(i, 0) for i in range(self.complex.lo, self.complex.hi + 1)]

    def descriptor(self, ring_path: str = "ring.json") -> dict:
        d = self.complex.descriptor(ring_path)
        d["multiplicities"] = self.multiplicity_list()
        return d


@dataclass
class QPRFailure:
    reason: str
    index: int | None = None
    detail: str = ""

    def __bool__(self):
        return False


def _graded_multiplicity(h: VectorizedModule, m: VectorizedModule) -> list[int] | None:
    """Shifts s_j with HS(H) = sum t^{s_j} HS(M) in the common window, or None."""
    if h.dim == 0:
        return []
    hm, hh = m.hilbert(), h.hilbert()
    m0 = min(hm)
    lead = hm[m0]
    lowest = min(hh)
    top = min(h.trunc, m.trunc + lowest - m0)
    resid = {d: c for d, c in hh.items() if d <= top}
    shifts = []
    for d in range(lowest, top + 1):
        r = resid.get(d, 0)
        if r < 0 or r % lead:
            return None
        if r:
            s = d - m0
            k = r // lead
            shifts.extend([s] * k)
            for e, c in hm.items():
                if e + s <= top:
                    resid[e + s] = resid.get(e + s, 0) - k * c
    if any(v for v in resid.values()):
        return None
    return shifts


def verify_qpr(
    c: FreeComplex,
    m: VectorizedModule,
    trials: int = 64,
    seed: int = 0,
    bound: int | None = None,
) -> QPRCertificate | QPRFailure:
    """Check that every H_i(c) is a direct sum of copies of M, with witnesses."""
    if bound is not None and m.graded:
        m = m.at_bound(bound)
    if m.dim == 0:
        return QPRFailure(ALL_ZERO, None, "the module is zero")
    rep = homology(c, bound=m.trunc if m.graded else None)
    mult, shifts, wit = {}, {}, {}
    for i in range(c.lo, c.hi + 1):
        h = rep.modules[i]
        if m.graded:
            s = _graded_multiplicity(h, m)
            if s is None:
                return QPRFailure(NON_INTEGER, i, f"Hilbert function of H_{i} is not a sum of shifted copies")
        else:
            if h.dim % m.dim:
                return QPRFailure(NON_INTEGER, i, f"dim H_{i} = {h.dim} is not a multiple of {m.dim}")
            s = [0] * (h.dim // m.dim)
        mult[i], shifts[i] = len(s), s
        if not s:
            continue
        expected = direct_sum([m.shift(a) for a in s]) if m.graded else direct_sum([m] * len(s))
        res = iso_test(expected, h, trials=trials, seed=seed)
        if res.verdict == NOT_ISOMORPHIC:
            return QPRFailure(ISO_REFUTED, i, res.reason)
        if res.verdict != ISOMORPHIC:
            return QPRFailure(ISO_UNKNOWN, i, res.reason)
        wit[i] = res
    if not any(mult.values()):
        return QPRFailure(ALL_ZERO, None, "the complex is exact")
    return QPRCertificate(c, m, mult, shifts, dict(rep.dims), wit)


def qpr_koszul_residue(ring: QuotientRing, bound: int | None = None, trials: int = 64, seed: int = 0):
    """The Koszul complex on the variables, as a QPR of the residue field."""
    k = residue_field(ring, bound)
    K = koszul_complex(ring, [ring.var(i) for i in range(ring.nvars)])
    return verify_qpr(K, k, trials, seed)


def qpr_periodic(
    m: VectorizedModule,
    max_period: int = 4,
    bound: int | None = None,
    trials: int = 64,
    seed: int = 0,
):
    """Find r with Ω^r M ≅ M and truncate the minimal resolution at max{1, r-1}."""
    if bound is not None and m.graded:
        m = m.at_bound(bound)
    res = minimal_resolution(m, max_period)
    for r, omega in enumerate(res.syzygies, start=1):
        if iso_test(omega, m, trials=trials, seed=seed).verdict == ISOMORPHIC:
            s = max(1, r - 1)
            full = res.complex if res.complex.hi >= s else minimal_resolution(m, s).complex
            P = shift_truncate(full, 0, (0, s))
            cert = verify_qpr(P, m, trials, seed)
            if cert:
                cert.period = r
            return cert
    return QPRFailure("NotDetected", None, f"no period up to {max_period}")


def qpr_base_change(
    ring: QuotientRing,
    m: VectorizedModule,
    seq: list | None = None,
    bound: int | None = None,
    trials: int = 64,
    seed: int = 0,
):
    """A minimal resolution over the polynomial ring, reduced modulo a regular sequence.

    The ring must be graded and equal to k[x]/(seq) with seq regular on
    k[x]; the homology of the result is Tor^Q(M, R), free over M.
    """
    if not ring.graded:
        raise RingError("base change needs the graded regime")
    seq = [ring.poly.parse(f) if isinstance(f, str) else f for f in (seq if seq is not None else ring.ideal)]
    Q = ring.ambient()
    if bound is not None:
        m = m.at_bound(bound)
    T = m.trunc
    kh = koszul_homology(Q, seq, bound=T)
    if any(d for i, d in kh.dims.items() if i > 0):
        return QPRFailure("NotRegular", None, "the sequence is not regular on the polynomial ring")
    pres = m.presentation or presentation_of(m)
    g = len(pres.generator_degrees)
    rows = [list(r) for r in pres.relations]
    for j in range(g):
        for f in seq:
            row = [Q.zero() for _ in range(g)]
            row[j] = f
            rows.append(row)
    MQ = vectorize(ModulePresentation(Q, list(pres.generator_degrees), rows), T)
    resQ = minimal_resolution(MQ, Q.nvars + 1)
    if not resQ.terminated:
        return QPRFailure("NotTerminated", None, "resolution over the polynomial ring did not stop")
    cQ = resQ.complex
    P = FreeComplex(ring, cQ.lo, cQ.ranks, cQ.twists, [[[ring.element(x) for x in row] for row in d] for d in cQ.diffs])
    return verify_qpr(P, m, trials, seed)


@dataclass
class QpdVerdict:
    verdict: str
    value: int | None
    depth_ring: int
    depth_module: float
    certificate: QPRCertificate | None = None
    route: str | None = None
    obstruction: object = None  # (socle element, module vector) for the infinite verdict
    notes: list[str] = dc_field(default_factory=list)

    @property
    def finite(self) -> bool:
        return self.verdict == FINITE

    def ab_crosscheck(self) -> tuple[int, float]:
        return self.depth_ring, self.depth_module


def _socle_obstruction(m: VectorizedModule):
    """An element r of Soc R and n in the non-free part N of M with r n != 0."""
    ring = m.ring
    f, n, inc = free_split(m)
    if n.dim == 0:
        return None
    for r in ring.socle():
        act = n.poly_matrix(r)
        cols = np.flatnonzero(np.any(act != 0, axis=0))
        if cols.size:
            return r, inc[:, int(cols[0])], f
    return None


def _check_consistent(cert: QPRCertificate, value: int) -> QPRCertificate:
    P = minimalize(cert.complex)
    if P.sup is None or P.sup - cert.hsup != value:
        raise TheoremViolation(
            f"minimal certificate gives sup - hsup = {None if P.sup is None else P.sup - cert.hsup}, "
            f"but depth R - depth M = {value}"
        )
    return cert


def qpd_eval(
    m: VectorizedModule,
    steps: int = 6,
    max_period: int = 4,
    bound: int | None = None,
    trials: int = 64,
    seed: int = 0,
) -> QpdVerdict:
    """qpd of M: Finite with a certificate, Infinite with an obstruction, or Unknown.

    Tries, in order: free modules and finite resolutions, the socle
    obstruction over finite rings, periodic syzygies, the Koszul complex
    when M is the residue field, and base change from the polynomial ring.
    """
    ring = m.ring
    if bound is not None and m.graded:
        m = m.at_bound(bound)
    dR = depth(ring, m.trunc).value
    dM = depth(m).value
    if m.dim == 0:
        return QpdVerdict(UNKNOWN_VERDICT, None, dR, dM, notes=["zero module"])
    finite_value = None if math.isinf(dM) else int(dR - dM)

    def finite(cert, route):
        _check_consistent(cert, finite_value)
        return QpdVerdict(FINITE, finite_value, dR, dM, cert, route)

    res = minimal_resolution(m, steps)
    if res.terminated:
        cert = verify_qpr(res.complex, m, trials, seed)
        if cert:
            if res.pd != finite_value:
                raise TheoremViolation(f"pd = {res.pd} but depth R - depth M = {finite_value}")
            return finite(cert, "free" if res.pd == 0 else "resolution")
    if ring.finite and not ring.graded:
        obs = _socle_obstruction(m)
        if obs is not None:
            return QpdVerdict(INFINITE, None, dR, dM, None, "socle", obs)
    cert = qpr_periodic(m, max_period, None, trials, seed)
    if cert:
        return finite(cert, "periodic")
    k = residue_field(ring, m.trunc)
    if iso_test(m, k, trials=trials, seed=seed).verdict == ISOMORPHIC:
        cert = qpr_koszul_residue(ring, m.trunc, trials, seed)
        if cert:
            return finite(cert, "koszul")
    if ring.graded and ring.regular_sequence and ring.ideal:
        cert = qpr_base_change(ring, m, None, None, trials, seed)
        if cert:
            return finite(cert, "base-change")
    return QpdVerdict(UNKNOWN_VERDICT, None, dR, dM, notes=["no constructor produced a certificate"])


@dataclass
class QplBound:
    value: int | None
    certificate: QPRCertificate | None
    candidates: list[tuple[str, int]]


def _with_truncations(name: str, c: FreeComplex, m, trials, seed):
    out = []
    cert = verify_qpr(c, m, trials, seed)
    if cert:
        out.append((name, cert))
    for top in range(c.lo + 1, c.hi):
        P = shift_truncate(c, 0, (c.lo, top))
        cert = verify_qpr(P, m, trials, seed)
        if cert:
            out.append((f"{name}-truncated-{top}", cert))
    return out


def qpl_upper(
    m: VectorizedModule,
    steps: int = 6,
    max_period: int = 4,
    bound: int | None = None,
    trials: int = 64,
    seed: int = 0,
) -> QplBound:
    """Smallest sup - inf over every certificate the constructors find (an upper bound)."""
    ring = m.ring
    if bound is not None and m.graded:
        m = m.at_bound(bound)
    found = []
    res = minimal_resolution(m, steps)
    if res.terminated:
        found += _with_truncations("resolution", res.complex, m, trials, seed)
    else:
        for r, omega in enumerate(res.syzygies[:max_period], start=1):
            if iso_test(omega, m, trials=trials, seed=seed).verdict == ISOMORPHIC:
                top = max(1, r - 1)
                P = shift_truncate(res.complex, 0, (0, top))
                found += _with_truncations("periodic", P, m, trials, seed)
                break
    k = residue_field(ring, m.trunc)
    if iso_test(m, k, trials=trials, seed=seed).verdict == ISOMORPHIC:
        K = koszul_complex(ring, [ring.var(i) for i in range(ring.nvars)])
        found += _with_truncations("koszul", K, m, trials, seed)
    if ring.graded and ring.regular_sequence and ring.ideal:
        cert = qpr_base_change(ring, m, None, None, trials, seed)
        if cert:
            found.append(("base-change", cert))
    best, cands = None, []
    for name, cert in found:
        P = minimalize(cert.complex)
        length = P.sup - P.inf
        cands.append((name, length))
        if best is None or length < best[0]:
            best = (length, cert)
    if best is None:
        return QplBound(None, None, cands)
    return QplBound(best[0], best[1], cands)


@dataclass
class ABCheck:
    lhs: int
    rhs: float
    holds: bool


def check_ab(cert: QPRCertificate) -> ABCheck:
    """sup - hsup of the minimalized certificate against depth R - depth M."""
    m = cert.module
    P = minimalize(cert.complex)
    lhs = P.sup - cert.hsup
    rhs = depth(m.ring, m.trunc).value - depth(m).value
    return ABCheck(lhs, rhs, lhs == rhs)


def tensor_presentation(p: ModulePresentation, q: ModulePresentation) -> ModulePresentation:
    """Presentation of M (x) N from presentations of M and N."""
    ring = p.ring
    gp, gq = len(p.generator_degrees), len(q.generator_degrees)
    degs = [a + b for a in p.generator_degrees for b in q.generator_degrees]
    rows = []
    for row in p.relations:
        for j in range(gq):
            r = [ring.zero()] * (gp * gq)
            for i, f in enumerate(row):
                r[i * gq + j] = f
            rows.append(r)
    for row in q.relations:
        for i in range(gp):
            r = [ring.zero()] * (gp * gq)
            for j, f in enumerate(row):
                r[i * gq + j] = f
            rows.append(r)
    return ModulePresentation(ring, degs, rows)


@dataclass
class DepthFormulaCheck:
    applicable: bool
    tor_dims: list[int]
    depth_m: float = 0
    depth_n: float = 0
    depth_ring: float = 0
    depth_tensor: float = 0

    @property
    def holds(self) -> bool | None:
        if not self.applicable:
            return None
        return self.depth_m + self.depth_n == self.depth_ring + self.depth_tensor


def check_depth_formula(m: VectorizedModule, n: VectorizedModule, window: int = 8, bound: int | None = None) -> DepthFormulaCheck:
    """If Tor_i(M, N) = 0 for 1 <= i <= window: depth M + depth N = depth R + depth(M (x) N)."""
    ring = m.ring
    t = derived_table(m, n, TOR, window, bound)
    tor = t.dims[1:]
    if any(tor):
        return DepthFormulaCheck(False, tor)
    if m.presentation is None:
        m.presentation = presentation_of(m)
    if n.presentation is None:
        n.presentation = presentation_of(n)
    mn = vectorize(tensor_presentation(m.presentation, n.presentation), t.trunc)
    return DepthFormulaCheck(
        True,
        tor,
        depth(m, t.trunc).value,
        depth(n, t.trunc).value,
        depth(ring, t.trunc).value,
        depth(mn).value,
    )


HYPOTHESIS_FAILS = "HypothesisFails"
VERIFIED = "Verified"
CONCLUSION_FAILS = "ConclusionFails"


@dataclass
class VanishingGap:
    status: str
    gap: int
    window: list[int]
    tail: list[int]
    verified_to: int


def check_vanishing_gap(
    cert: QPRCertificate,
    n: int,
    module: VectorizedModule,
    kind: str = TOR,
    window_extra: int = 8,
    bound: int | None = None,
) -> VanishingGap:
    """Vanishing on n..n+l forces vanishing from n on, with l computed from the certificate.

    Tor: l = max{hsup P - hinf P, hsup(P (x) N) - hinf P - 1};
    Ext: l = max{hsup P - hinf P, -hinf Hom(P, N) - hinf P - 1}.
    """
    P, m = cert.complex, cert.module
    if bound is not None and module.graded:
        module = module.at_bound(bound)
    span = cert.hsup - cert.hinf
    if kind == TOR:
        other = homology(P, coefficients=module).hsup
        second = -math.inf if other is None else other - cert.hinf - 1
    else:
        cohom = hom_into_module(P, module)
        nz = [i for i, h in cohom.items() if h.dim]
        # hinf of Hom(P, N) as a homological complex is minus the top cohomological index
        second = -math.inf if not nz else max(nz) - cert.hinf - 1
    gap = int(max(span, second))
    top = n + gap + window_extra
    table = derived_table(m, module, kind, top, bound).dims
    window = table[n : n + gap + 1]
    tail = table[n:]
    if any(window):
        return VanishingGap(HYPOTHESIS_FAILS, gap, window, tail, top)
    status = VERIFIED if not any(tail) else CONCLUSION_FAILS
    return VanishingGap(status, gap, window, tail, top)


@dataclass
class ARCheck:
    bound: int
    ext_dims: list[int]
    free: bool
    first_nonzero: int | None

    @property
    def consistent(self) -> bool:
        """Vanishing of Ext^1..Ext^{q+1}(M, M) must force M free."""
        return self.first_nonzero is not None or self.free


def check_ar(cert: QPRCertificate, bound: int | None = None) -> ARCheck:
    """Ext^i(M, M) for 1 <= i <= qpl + 1, with qpl bounded by sup - inf of the certificate."""
    m = cert.module
    q = cert.qpl_from_complex
    exts = derived_table(m, m, EXT, q + 1, bound).dims[1:]
    free = minimal_resolution(m, 0).terminated
    first = next((i + 1 for i, d in enumerate(exts) if d), None)
    out = ARCheck(q, exts, free, first)
    if not out.consistent:
        raise TheoremViolation(f"Ext^1..Ext^{q + 1}(M, M) vanish but M is not free")
    return out


@dataclass
class ExtSymmetry:
    applicable: bool
    ext_mn: list[int]
    ext_nm: list[int]
    tail_mn_vanishes: bool | None = None
    tail_nm_vanishes: bool | None = None
    label: str = "EMPIRICAL"

    @property
    def agree(self) -> bool | None:
        if not self.applicable:
            return None
        return self.tail_mn_vanishes == self.tail_nm_vanishes


def tail_vanishes(dims: list[int]) -> bool:
    """Judged on the upper half of the window."""
    half = len(dims) // 2
    return not any(dims[half:])


def check_ext_symmetry(
    m: VectorizedModule,
    n: VectorizedModule,
    window: int = 12,
    bound: int | None = None,
    gorenstein: bool | None = None,
    trials: int = 64,
    seed: int = 0,
) -> ExtSymmetry:
    """Over a Gorenstein ring with qpd M finite, compare the tails of Ext(M, N) and Ext(N, M)."""
    ring = m.ring
    if gorenstein is None:
        if not ring.finite:
            raise NotGorenstein("cannot detect the Gorenstein property of an infinite ring; pass gorenstein=True")
        gorenstein = ring.is_gorenstein()
    if not gorenstein:
        raise NotGorenstein(f"{ring!r} is not Gorenstein")
    v = qpd_eval(m, bound=bound, trials=trials, seed=seed)
    if not v.finite:
        return ExtSymmetry(False, [], [])
    a = derived_table(m, n, EXT, window, bound).dims[1:]
    b = derived_table(n, m, EXT, window, bound).dims[1:]
    return ExtSymmetry(True, a, b, tail_vanishes(a), tail_vanishes(b))
