"""Ideals with free Koszul homology, linkage by colon ideals, and
quasi-Gorenstein duality.

Koszul homology H_i(I) is computed on a minimal generating set of I and
carried as an R-module killed by I, i.e. as a module over S = R/I.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chaincomplex import minimalize
from .fpmodule.derived import EXT, TOR, ReflexivityReport, derived_table, reflexivity_probe
from .fpmodule.iso import ISOMORPHIC, iso_test
from .fpmodule.modules import VectorizedModule, cyclic_module, minimal_generators, regular_module
from .koszul import depth, grade, koszul_complex, koszul_homology, ring_module
from .polyring import Polynomial
from .qpdcore import QPRCertificate, TheoremViolation, tail_vanishes, verify_qpr
from .ring import QuotientRing, RingError

__all__ = [
    "NonMinimalGenerators",
    "NotRegular",
    "ideal_koszul_homology",
    "FKHReport",
    "is_fkh",
    "check_fkh_qpd",
    "LinkageResult",
    "link",
    "colon",
    "QuasiGorensteinReport",
    "quasi_gorenstein",
    "check_tor_ext_sym_fkh",
]


class NonMinimalGenerators(RingError):
    pass


class NotRegular(RingError):
    pass


def _elements(ring: QuotientRing, gens) -> list[Polynomial]:
    return [ring.element(g) for g in gens]


def _default_bound(ring: QuotientRing, polys: list[Polynomial]) -> int | None:
    if ring.finite:
        return None
    degs = [max(f.degree(), 0) for f in polys] + [g.degree() for g in ring.ideal]
    return 2 * max(degs + [1]) + 6


def _span(R: VectorizedModule, polys: list[Polynomial]) -> np.ndarray:
    """Columns spanning the ideal generated by polys inside the regular module."""
    ring = R.ring
    fld = R.field
    if not polys:
        return fld.zeros(R.dim, 0)
    cols = np.stack([ring.to_vector(f, R.labels, strict=False) for f in polys], axis=1)
    return R.span_closure(fld.asarray(cols))


def _check_minimal(ring: QuotientRing, gens: list[Polynomial], bound: int | None):
    R = regular_module(ring, bound)
    fld = ring.field
    mI = _span(R, [ring.mul(ring.var(i), g) for i in range(ring.nvars) for g in gens])
    G = fld.asarray(np.stack([ring.to_vector(g, R.labels, strict=False) for g in gens], axis=1))
    both = np.concatenate([mI, G], axis=1)
    if fld.rank(both) - fld.rank(mI) != len(gens):
        raise NonMinimalGenerators(f"{[str(g) for g in gens]} is not a minimal generating set")


def ideal_koszul_homology(ring: QuotientRing, gens, bound: int | None = None) -> dict[int, VectorizedModule]:
    """H_i(I) for a minimal generating set of I, i = 0..len(gens)."""
    gens = _elements(ring, gens)
    if any(not g for g in gens):
        raise NonMinimalGenerators("zero generator")
    if bound is None:
        bound = _default_bound(ring, gens)
    _check_minimal(ring, gens, bound)
    return koszul_homology(ring, gens, bound=bound).modules


@dataclass
class HomologyEntry:
    i: int
    dim: int
    free: bool
    rank: int | None


@dataclass
class FKHReport:
    ideal: list[str]
    grade: int
    homology: list[HomologyEntry]
    quotient_dim: int

    @property
    def fkh(self) -> bool:
        return all(h.free for h in self.homology)

    def __bool__(self):
        return self.fkh

    def to_json(self) -> dict:
        return {
            "ideal": self.ideal,
            "grade": self.grade,
            "homology": [{"i": h.i, "dim": h.dim, "free": h.free, "rank": h.rank} for h in self.homology],
            "fkh": self.fkh,
        }


def _is_free_over(h: VectorizedModule, s: VectorizedModule) -> tuple[bool, int]:
    """Is H free over S = R/I?  A minimal cover S^ν -> H is onto, so compare sizes."""
    if h.dim == 0:
        return True, 0
    mg = minimal_generators(h)
    if not h.graded:
        return h.dim == mg.count * s.dim, mg.count
    hs = s.hilbert()
    expected: dict[int, int] = {}
    for d in mg.degrees:
        for e, c in hs.items():
            if e + d <= h.trunc:
                expected[e + d] = expected.get(e + d, 0) + c
    got = {d: c for d, c in h.hilbert().items() if c}
    return got == {d: c for d, c in expected.items() if c}, mg.count


def is_fkh(ring: QuotientRing, gens, bound: int | None = None) -> FKHReport:
    """Koszul homology of I on minimal generators, each module tested for freeness over R/I."""
    gens = _elements(ring, gens)
    if bound is None:
        bound = _default_bound(ring, gens)
    hs = ideal_koszul_homology(ring, gens, bound)
    s = cyclic_module(ring, gens, bound)
    entries = []
    for i in sorted(hs):
        free, nu = _is_free_over(hs[i], s)
        entries.append(HomologyEntry(i, hs[i].dim, free, nu if free else None))
    g = grade(ring, gens, bound=bound).value
    return FKHReport([str(f) for f in gens], int(g), entries, s.dim)


@dataclass
class FKHQpd:
    certificate: QPRCertificate
    qpd: int
    grade: int
    depth_difference: int

    @property
    def holds(self) -> bool:
        return self.qpd == self.grade == self.depth_difference


def check_fkh_qpd(ring: QuotientRing, gens, bound: int | None = None, trials: int = 64, seed: int = 0) -> FKHQpd:
    """The Koszul complex of an FKH ideal is a QPR of R/I with qpd = grade I."""
    gens = _elements(ring, gens)
    if bound is None:
        bound = _default_bound(ring, gens)
    rep = is_fkh(ring, gens, bound)
    if not rep.fkh:
        raise RingError(f"{rep.ideal} does not have free Koszul homology")
    s = cyclic_module(ring, gens, bound)
    K = koszul_complex(ring, gens)
    cert = verify_qpr(K, s, trials, seed)
    if not cert:
        raise TheoremViolation(f"Koszul complex of an FKH ideal failed verification: {cert}")
    ranks = {h.i: h.rank for h in rep.homology}
    if cert.multiplicities != ranks:
        raise TheoremViolation(f"multiplicities {cert.multiplicities} differ from free ranks {ranks}")
    P = minimalize(cert.complex)
    qpd = P.sup - cert.hsup
    dd = depth(ring, s.trunc).value - depth(s).value
    out = FKHQpd(cert, qpd, rep.grade, int(dd))
    if not out.holds:
        raise TheoremViolation(f"qpd {qpd}, grade {rep.grade}, depth R - depth R/I {dd}")
    return out


def _restrict(R: VectorizedModule, top: int | None) -> np.ndarray:
    if top is None or not R.graded:
        return np.arange(R.dim)
    return np.flatnonzero(np.asarray(R.degrees) <= top)


def colon(ring: QuotientRing, seq: list[Polynomial], gens: list[Polynomial], bound: int | None) -> tuple[list[Polynomial], int | None]:
    """Generators of ((seq) : (gens)), exact in degrees up to the returned window."""
    R = regular_module(ring, bound)
    fld = ring.field
    _, pi = R.quotient(_span(R, seq))
    top = None if bound is None else bound - max([max(g.degree(), 0) for g in gens] + [0])
    cols = _restrict(R, top)
    blocks = [fld.matmul(pi, R.poly_matrix(g))[:, cols] for g in gens]
    mat = np.concatenate(blocks, axis=0) if blocks else fld.zeros(0, len(cols))
    ker = fld.kernel_basis(mat)
    full = fld.zeros(R.dim, ker.shape[1])
    full[cols] = ker
    sub, inc = R.sub(full)
    mg = minimal_generators(sub)
    vecs = fld.matmul(inc, mg.vectors)
    return [ring.from_vector(vecs[:, j], R.labels) for j in range(mg.count)], top


@dataclass
class LinkageResult:
    sequence: list[str]
    ideal: list[str]
    linked: list[str]
    double_link: bool
    window: int | None


def _same_ideal(ring, a: list[Polynomial], b: list[Polynomial], bound, top) -> bool:
    R = regular_module(ring, bound)
    fld = ring.field
    cols = _restrict(R, top)
    sa, sb = _span(R, a)[cols], _span(R, b)[cols]
    ra, rb = fld.rank(sa), fld.rank(sb)
    return ra == rb == fld.rank(np.concatenate([sa, sb], axis=1))


def link(ring: QuotientRing, seq, gens, bound: int | None = None) -> LinkageResult:
    """J = ((x) : I), with the flag ((x) : J) = I."""
    seq, gens = _elements(ring, seq), _elements(ring, gens)
    if any(ring.is_unit(g) for g in gens):
        raise RingError("the ideal must be proper")
    if bound is None:
        bound = _default_bound(ring, seq + gens)
    if seq:
        kh = koszul_homology(ring, seq, bound=bound)
        if any(d for i, d in kh.dims.items() if i > 0):
            raise NotRegular(f"{[str(f) for f in seq]} is not a regular sequence")
    J, top = colon(ring, seq, gens, bound)
    I2, top2 = colon(ring, seq, J, bound) if J else ([ring.one()], None)
    window = None if top is None else min(top, top2 if top2 is not None else top)
    contained = _same_ideal(ring, gens + seq, gens, bound, window) and _same_ideal(ring, J + seq, J, bound, window)
    double = contained and _same_ideal(ring, I2, gens, bound, window)
    return LinkageResult([str(f) for f in seq], [str(f) for f in gens], [str(f) for f in J], double, window)


@dataclass
class QuasiGorensteinReport:
    grade: int
    ext_dims: list[int]
    ext_is_quotient: bool
    duality: dict[int, bool] | None

    @property
    def quasi_gorenstein(self) -> bool:
        vanish = all(d == 0 for i, d in enumerate(self.ext_dims) if i != self.grade)
        return vanish and self.ext_is_quotient

    @property
    def passed(self) -> bool:
        return self.quasi_gorenstein and (self.duality is None or all(self.duality.values()))


def quasi_gorenstein(
    ring: QuotientRing,
    gens,
    window: int = 4,
    bound: int | None = None,
    trials: int = 64,
    seed: int = 0,
) -> QuasiGorensteinReport:
    """Ext^i(R/I, R) = 0 for i != g and Ext^g(R/I, R) = R/I; with FKH also H_i = H_{n-g-i}."""
    gens = _elements(ring, gens)
    if bound is None:
        bound = _default_bound(ring, gens)
    s = cyclic_module(ring, gens, bound)
    g = int(grade(ring, gens, bound=bound).value)
    R = ring_module(ring, bound)
    t = derived_table(s, R, EXT, max(window, g))
    ok = g < len(t.modules) and iso_test(s, t.modules[g], trials=trials, seed=seed).verdict == ISOMORPHIC
    duality = None
    rep = is_fkh(ring, gens, bound)
    if rep.fkh:
        hs = ideal_koszul_homology(ring, gens, bound)
        n = len(gens)
        duality = {}
        for i in range(n - g + 1):
            j = n - g - i
            duality[i] = iso_test(hs[i], hs[j], trials=trials, seed=seed).verdict == ISOMORPHIC
    return QuasiGorensteinReport(g, t.dims, ok, duality)


@dataclass
class TorExtSymmetry:
    reflexivity: ReflexivityReport | None
    tor: list[int]
    ext: list[int]
    label: str = "EMPIRICAL"

    @property
    def agree(self) -> bool:
        return tail_vanishes(self.tor) == tail_vanishes(self.ext)


def check_tor_ext_sym_fkh(
    ring: QuotientRing,
    gens,
    m: VectorizedModule,
    window: int = 12,
    bound: int | None = None,
    probe_window: int = 4,
) -> TorExtSymmetry:
    """Compare the tails of Tor_i(R/I, M) and Ext^i(R/I, M) for an FKH ideal."""
    gens = _elements(ring, gens)
    if not is_fkh(ring, gens, bound):
        raise RingError("the ideal does not have free Koszul homology")
    s = cyclic_module(ring, gens, bound if bound is not None else m.trunc)
    probe = reflexivity_probe(s, probe_window) if ring.finite else None
    tor = derived_table(s, m, TOR, window, bound).dims[1:]
    ext = derived_table(s, m, EXT, window, bound).dims[1:]
    return TorExtSymmetry(probe, tor, ext)
