"""Bounded complexes of finite free modules with matrices of ring elements.

A complex F has modules F_lo .. F_hi of given ranks; ``d(i)`` is the
matrix of F_i -> F_{i-1} (rows index F_{i-1}).  In the graded regime each
basis element carries a twist and entries are homogeneous of degree
twist(column) - twist(row).
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .fpmodule.modules import FreeTensor, VectorizedModule, pivots_of, regular_module
from .polyring import Polynomial
from .ring import QuotientRing, RingError

__all__ = [
    "FreeComplex",
    "ChainMap",
    "HomologyReport",
    "DSquareNonzero",
    "NotAChainMap",
    "ComplexError",
    "make_complex",
    "homology",
    "minimalize",
    "cone",
    "shift_truncate",
    "hom_into_module",
    "pmatmul",
    "complex_bound",
]


class ComplexError(ValueError):
    pass


class DSquareNonzero(ComplexError):
    pass


class NotAChainMap(ComplexError):
    pass


Matrix = list[list[Polynomial]]


def pmatmul(ring: QuotientRing, a: Matrix, b: Matrix, inner: int | None = None) -> Matrix:
    """Product of matrices of ring elements, reduced to normal form."""
    rows = len(a)
    inner = len(b) if inner is None else inner
    cols = len(b[0]) if b else 0
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            acc = ring.zero()
            for k in range(inner):
                if a[i][k] and b[k][j]:
                    acc = acc + a[i][k] * b[k][j]
            row.append(ring.nf(acc))
        out.append(row)
    return out


def _zero_matrix(ring: QuotientRing, r: int, c: int) -> Matrix:
    return [[ring.zero() for _ in range(c)] for _ in range(r)]


class FreeComplex:
    def __init__(
        self,
        ring: QuotientRing,
        lo: int,
        ranks: list[int],
        twists: list[list[int]] | None = None,
        differentials: list[Matrix] | None = None,
        check: bool = True,
    ):
        self.ring = ring
        self.lo = lo
        self.ranks = list(ranks)
        n = len(self.ranks)
        diffs = differentials if differentials is not None else [None] * max(n - 1, 0)
        if len(diffs) != max(n - 1, 0):
            raise ComplexError(f"expected {max(n - 1, 0)} differentials, got {len(diffs)}")
        self.diffs: list[Matrix] = []
        for k, d in enumerate(diffs):
            r, c = self.ranks[k], self.ranks[k + 1]
            if d is None:
                d = _zero_matrix(ring, r, c)
            if r == 0 or c == 0:
                d = _zero_matrix(ring, r, c)
            if len(d) != r or any(len(row) != c for row in d):
                raise ComplexError(f"d_{lo + k + 1} has the wrong shape for ranks {r}x{c}")
            d = [[ring.element(x) for x in row] for row in d]
            self.diffs.append(d)
        self.twists = self._twists(twists)
        if check:
            self.verify()

    # shape

    @property
    def hi(self) -> int:
        return self.lo + len(self.ranks) - 1

    def rank(self, i: int) -> int:
        k = i - self.lo
        return self.ranks[k] if 0 <= k < len(self.ranks) else 0

    def twist(self, i: int) -> list[int]:
        k = i - self.lo
        return self.twists[k] if 0 <= k < len(self.ranks) else []

    def d(self, i: int) -> Matrix:
        """The matrix of F_i -> F_{i-1}."""
        k = i - self.lo - 1
        if 0 <= k < len(self.diffs):
            return self.diffs[k]
        return _zero_matrix(self.ring, self.rank(i - 1), self.rank(i))

    @property
    def sup(self) -> int | None:
        nz = [self.lo + k for k, r in enumerate(self.ranks) if r]
        return max(nz) if nz else None

    @property
    def inf(self) -> int | None:
        nz = [self.lo + k for k, r in enumerate(self.ranks) if r]
        return min(nz) if nz else None

    def length(self) -> int | None:
        return None if self.sup is None else self.sup - self.inf

    def max_twist(self) -> int:
        return max((a for t in self.twists for a in t), default=0)

    def is_minimal(self) -> bool:
        return not any(self.ring.is_unit(x) for d in self.diffs for row in d for x in row if x)

    def __repr__(self):
        return f"FreeComplex(lo={self.lo}, ranks={self.ranks})"

    def _twists(self, twists):
        ring = self.ring
        if twists is not None:
            if len(twists) != len(self.ranks) or any(len(t) != r for t, r in zip(twists, self.ranks)):
                raise ComplexError("twists do not match ranks")
            tw = [list(map(int, t)) for t in twists]
        elif not ring.graded:
            tw = [[0] * r for r in self.ranks]
        else:
            tw = [[0] * self.ranks[0]] if self.ranks else []
            for k, d in enumerate(self.diffs):
                col_tw = []
                for l in range(self.ranks[k + 1]):
                    t = 0
                    for j in range(self.ranks[k]):
                        if d[j][l]:
                            t = tw[k][j] + d[j][l].degree()
                            break
                    col_tw.append(t)
                tw.append(col_tw)
        if ring.graded:
            for k, d in enumerate(self.diffs):
                for j, row in enumerate(d):
                    for l, x in enumerate(row):
                        if x and (not x.is_homogeneous() or x.degree() != tw[k + 1][l] - tw[k][j]):
                            raise ComplexError(
                                f"entry ({j},{l}) of d_{self.lo + k + 1} is not homogeneous of the twist degree"
                            )
        return tw

    def verify(self):
        """Check d∘d = 0 exactly, using the action on the generators."""
        ring = self.ring
        if len(self.ranks) < 3:
            return
        T = self.max_twist() if ring.graded else None
        R = regular_module(ring, T)
        frees = {i: FreeTensor(R, self.twist(i), T) for i in range(self.lo, self.hi + 1)}
        for i in range(self.lo + 2, self.hi + 1):
            if not self.rank(i) or not self.rank(i - 2):
                continue
            top, mid, bot = frees[i], frees[i - 1], frees[i - 2]
            cols = np.stack([mid.from_column([row[l] for row in self.d(i)]) for l in range(self.rank(i))], axis=1)
            prod = ring.field.matmul(bot.map_from(mid, self.d(i - 1)), cols)
            if np.any(prod):
                raise DSquareNonzero(f"d_{i - 1} d_{i} != 0")

    def descriptor(self, ring_path: str = "ring.json") -> dict:
        return {
            "ring": ring_path,
            "lo": self.lo,
            "ranks": list(self.ranks),
            "twists": [list(t) for t in self.twists] if self.ring.graded else None,
            "differentials": [[[str(x) for x in row] for row in d] for d in self.diffs],
        }


def make_complex(
    ring: QuotientRing,
    lo: int,
    ranks: list[int],
    differentials: list[Matrix],
    twists: list[list[int]] | None = None,
) -> FreeComplex:
    """Build a complex from entry strings or polynomials; rejects d∘d != 0."""
    return FreeComplex(ring, lo, ranks, twists, differentials)


def complex_bound(c: FreeComplex) -> int:
    return 2 * c.max_twist() + 6


@dataclass
class HomologyReport:
    modules: dict[int, VectorizedModule]
    dims: dict[int, int]
    hilbert: dict[int, dict[int, int]] = dc_field(default_factory=dict)

    @property
    def hsup(self) -> int | None:
        nz = [i for i, d in self.dims.items() if d]
        return max(nz) if nz else None

    @property
    def hinf(self) -> int | None:
        nz = [i for i, d in self.dims.items() if d]
        return min(nz) if nz else None


def _coefficients(c: FreeComplex, coefficients: VectorizedModule | None, bound: int | None) -> VectorizedModule:
    ring = c.ring
    if coefficients is not None:
        if bound is not None and coefficients.graded:
            return coefficients.at_bound(bound)
        return coefficients
    if ring.graded:
        return regular_module(ring, complex_bound(c) if bound is None else bound)
    return regular_module(ring, None)


def chain_groups(c: FreeComplex, n: VectorizedModule) -> tuple[dict, dict]:
    """The modules F_i (x) N and the k-matrices of the differentials."""
    T = n.trunc
    groups = {i: FreeTensor(n, c.twist(i), T) for i in range(c.lo - 1, c.hi + 2)}
    mats = {}
    for i in range(c.lo, c.hi + 2):
        mats[i] = groups[i - 1].map_from(groups[i], c.d(i))
    return groups, mats


def homology(
    c: FreeComplex,
    coefficients: VectorizedModule | None = None,
    bound: int | None = None,
) -> HomologyReport:
    """H_i(F (x) N) as modules, for N = R unless coefficients are given."""
    n = _coefficients(c, coefficients, bound)
    fld = c.ring.field
    groups, mats = chain_groups(c, n)
    mods, dims, hil = {}, {}, {}
    for i in range(c.lo, c.hi + 1):
        Ci = groups[i]
        Z = fld.kernel_basis(mats[i])
        W, inc = Ci.sub(Z)
        piv = pivots_of(inc)
        B = mats[i + 1][piv] if piv else fld.zeros(0, mats[i + 1].shape[1])
        H, _ = W.quotient(B)
        mods[i] = H
        dims[i] = H.dim
        hil[i] = H.hilbert()
    return HomologyReport(mods, dims, hil)


@dataclass
class ChainMap:
    """f: C -> D given by matrices maps[i] (rows index D_i, columns C_i)."""

    source: FreeComplex
    target: FreeComplex
    maps: dict[int, Matrix]

    def at(self, i: int) -> Matrix:
        if i in self.maps:
            return self.maps[i]
        return _zero_matrix(self.source.ring, self.target.rank(i), self.source.rank(i))

    def check(self):
        ring = self.source.ring
        lo = min(self.source.lo, self.target.lo)
        hi = max(self.source.hi, self.target.hi)
        for i in range(lo, hi + 1):
            left = pmatmul(ring, self.target.d(i), self.at(i), self.target.rank(i))
            right = pmatmul(ring, self.at(i - 1), self.source.d(i), self.source.rank(i - 1))
            if any(a != b for ra, rb in zip(left, right) for a, b in zip(ra, rb)):
                raise NotAChainMap(f"square at degree {i} does not commute")


def cone(f: ChainMap) -> FreeComplex:
    """Cone_i = C_{i-1} (+) D_i with differential [[-d_C, 0], [f, d_D]]."""
    f.check()
    C, D = f.source, f.target
    ring = C.ring
    lo = min(C.lo + 1, D.lo)
    hi = max(C.hi + 1, D.hi)
    ranks, twists, diffs = [], [], []
    for i in range(lo, hi + 1):
        ranks.append(C.rank(i - 1) + D.rank(i))
        twists.append(C.twist(i - 1) + D.twist(i))
    for i in range(lo + 1, hi + 1):
        rc, rd = C.rank(i - 2), D.rank(i - 1)
        cc, cd = C.rank(i - 1), D.rank(i)
        m = _zero_matrix(ring, rc + rd, cc + cd)
        dc, dd, fi = C.d(i - 1), D.d(i), f.at(i - 1)
        for r in range(rc):
            for s in range(cc):
                m[r][s] = -dc[r][s]
        for r in range(rd):
            for s in range(cc):
                m[rc + r][s] = fi[r][s]
            for s in range(cd):
                m[rc + r][cc + s] = dd[r][s]
        diffs.append(m)
    return FreeComplex(ring, lo, ranks, twists, diffs)


def shift_truncate(c: FreeComplex, shift: int = 0, keep: tuple[int, int] | None = None) -> FreeComplex:
    """X[j]_i = X_{i-j} with differential (-1)^j d, then keep degrees in [a, b]."""
    ring = c.ring
    sign = -1 if shift % 2 else 1
    lo = c.lo + shift
    hi = c.hi + shift
    a, b = (lo, hi) if keep is None else keep
    a, b = max(a, lo), min(b, hi)
    if a > b:
        return FreeComplex(ring, a, [0], [[]], [])
    ranks = [c.rank(i - shift) for i in range(a, b + 1)]
    twists = [c.twist(i - shift) for i in range(a, b + 1)]
    diffs = []
    for i in range(a + 1, b + 1):
        d = c.d(i - shift)
        diffs.append([[x if sign > 0 else -x for x in row] for row in d])
    return FreeComplex(ring, a, ranks, twists, diffs)


def minimalize(c: FreeComplex) -> FreeComplex:
    """Cancel unit entries until every differential has entries in m.

    Works from the lowest homological degree up, taking the leftmost unit
    (smallest column, then smallest row) each time; the result is homotopy
    equivalent to the input.
    """
    ring = c.ring
    ranks = list(c.ranks)
    twists = [list(t) for t in c.twists]
    diffs = [[list(row) for row in d] for d in c.diffs]
    changed = True
    while changed:
        changed = False
        for k, d in enumerate(diffs):
            hit = None
            for col in range(ranks[k + 1]):
                for row in range(ranks[k]):
                    if d[row][col] and ring.is_unit(d[row][col]):
                        hit = (row, col)
                        break
                if hit:
                    break
            if hit is None:
                continue
            r, s = hit
            uinv = ring.inverse(d[r][s])
            new = []
            for j in range(ranks[k]):
                if j == r:
                    continue
                g = ring.nf(d[j][s] * uinv) if d[j][s] else None
                row = []
                for l in range(ranks[k + 1]):
                    if l == s:
                        continue
                    x = d[j][l]
                    if g is not None and d[r][l]:
                        x = ring.nf(x - g * d[r][l])
                    row.append(x)
                new.append(row)
            diffs[k] = new
            if k + 1 < len(diffs):
                diffs[k + 1] = [row for j, row in enumerate(diffs[k + 1]) if j != s]
            if k > 0:
                diffs[k - 1] = [[x for l, x in enumerate(row) if l != r] for row in diffs[k - 1]]
            ranks[k + 1] -= 1
            ranks[k] -= 1
            del twists[k + 1][s]
            del twists[k][r]
            changed = True
            break
    return FreeComplex(ring, c.lo, ranks, twists, diffs)


def hom_into_module(c: FreeComplex, n: VectorizedModule) -> dict[int, VectorizedModule]:
    """H^i(Hom_R(F, N)) for i = lo..hi, as modules.

    Hom(F_i, N) is a sum of copies N(a) for the twists a of F_i.  When
    graded, each cohomology module is cut to the degrees where the
    truncation of N leaves every relevant Hom group complete.
    """
    fld = c.ring.field
    groups = {i: FreeTensor(n, [-a for a in c.twist(i)], None) for i in range(c.lo - 1, c.hi + 2)}
    cob = {}
    for i in range(c.lo, c.hi + 2):
        # delta^i : Hom(F_{i-1}, N) -> Hom(F_i, N), phi -> phi o d_i
        src, tgt = groups[i - 1], groups[i]
        m = fld.zeros(tgt.dim, src.dim)
        d = c.d(i)
        for j in range(src.rank):
            for l in range(tgt.rank):
                if d[j][l]:
                    m[tgt.block(l), src.block(j)] = n.poly_matrix(d[j][l])
        cob[i] = m
    out = {}
    for i in range(c.lo, c.hi + 1):
        Ci = groups[i]
        Z = fld.kernel_basis(cob[i + 1])
        W, inc = Ci.sub(Z)
        piv = pivots_of(inc)
        B = cob[i][piv] if piv else fld.zeros(0, cob[i].shape[1])
        H, _ = W.quotient(B)
        if n.graded and n.trunc is not None:
            top = max(c.twist(i - 1) + c.twist(i) + c.twist(i + 1), default=0)
            H = H.truncate(n.trunc - top)
            H.trunc = n.trunc - top
        out[i] = H
    return out
