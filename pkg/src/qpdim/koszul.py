"""Koszul complexes, Koszul homology, and depth / grade read off from it."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .chaincomplex import FreeComplex, HomologyReport, homology
from .fpmodule.modules import ModulePresentation, VectorizedModule, vectorize
from .ring import QuotientRing, RingError

__all__ = [
    "koszul_complex",
    "koszul_homology",
    "depth_grade",
    "depth",
    "grade",
    "ring_module",
    "DepthGrade",
    "UnstableTruncation",
    "KoszulAnnihilationError",
]


class UnstableTruncation(RuntimeError):
    """The answer changed when the degree bound was raised."""


class KoszulAnnihilationError(ArithmeticError):
    pass


def koszul_complex(ring: QuotientRing, seq: list) -> FreeComplex:
    """K(x_1..x_e): K_i has basis the i-subsets, d(e_S) = sum_k (-1)^k x_{s_k} e_{S - s_k}."""
    xs = [ring.element(f) for f in seq]
    e = len(xs)
    if ring.graded and any(x and not x.is_homogeneous() for x in xs):
        raise RingError("graded Koszul complex needs homogeneous elements")
    degs = [max(x.degree(), 0) for x in xs]
    subsets = [list(itertools.combinations(range(e), i)) for i in range(e + 1)]
    index = [{s: k for k, s in enumerate(level)} for level in subsets]
    ranks = [len(level) for level in subsets]
    twists = [[sum(degs[j] for j in s) for s in level] for level in subsets]
    diffs = []
    for i in range(1, e + 1):
        d = [[ring.zero() for _ in subsets[i]] for _ in subsets[i - 1]]
        for col, s in enumerate(subsets[i]):
            for k, j in enumerate(s):
                row = index[i - 1][s[:k] + s[k + 1 :]]
                d[row][col] = xs[j] if k % 2 == 0 else -xs[j]
        diffs.append(d)
    return FreeComplex(ring, 0, ranks, twists if ring.graded else None, diffs)


def ring_module(ring: QuotientRing, bound: int | None = None) -> VectorizedModule:
    """R as a module over itself, re-truncatable at other bounds."""
    return vectorize(ModulePresentation(ring, [0], []), bound if ring.graded else None)


def koszul_homology(
    ring: QuotientRing,
    seq: list,
    coefficients: VectorizedModule | None = None,
    bound: int | None = None,
) -> HomologyReport:
    """H_i(seq; N), checked to be annihilated by the sequence."""
    K = koszul_complex(ring, seq)
    n = coefficients if coefficients is not None else ring_module(ring, bound)
    rep = homology(K, coefficients=n, bound=bound)
    fld = ring.field
    for i, h in rep.modules.items():
        for f in seq:
            f = ring.element(f)
            if h.dim and fld.rank(h.poly_matrix(f)):
                raise KoszulAnnihilationError(f"{f} does not kill H_{i}")
    return rep


@dataclass
class DepthGrade:
    value: float  # an int, or math.inf for the zero module
    hsup: int | None
    dims: dict[int, int]
    stable: bool | None  # None when no second truncation was available

    def __int__(self):
        return int(self.value)


def _koszul_value(ring, seq, m, bound) -> tuple[float, int | None, dict]:
    rep = koszul_homology(ring, seq, m, bound)
    h = rep.hsup
    if h is None:
        return math.inf, None, rep.dims
    return len(seq) - h, h, rep.dims


def depth_grade(ring: QuotientRing, seq: list, m: VectorizedModule | None = None, bound: int | None = None) -> DepthGrade:
    """grade((seq), M) = e - max{i : H_i(seq; M) != 0}.

    Over a graded ring the computation is repeated two degrees higher and
    must agree, otherwise UnstableTruncation is raised.
    """
    m = m if m is not None else ring_module(ring, bound)
    if bound is not None and m.graded:
        m = m.at_bound(bound)
    value, h, dims = _koszul_value(ring, seq, m, None)
    stable = None
    if ring.graded and not ring.finite and m.presentation is not None and m.trunc is not None:
        m2 = m.at_bound(m.trunc + 2)
        value2, h2, _ = _koszul_value(ring, seq, m2, None)
        if value2 != value:
            raise UnstableTruncation(f"grade {value} at degree {m.trunc} but {value2} at {m.trunc + 2}")
        stable = True
    elif not ring.graded or ring.finite:
        stable = True
    return DepthGrade(value, h, dims, stable)


def depth(m: VectorizedModule | QuotientRing, bound: int | None = None) -> DepthGrade:
    """depth of M (or of the ring) via Koszul homology on all variables."""
    if isinstance(m, QuotientRing):
        ring, mod = m, None
    else:
        ring, mod = m.ring, m
    return depth_grade(ring, [ring.var(i) for i in range(ring.nvars)], mod, bound)


def grade(ring: QuotientRing, ideal: list, m: VectorizedModule | None = None, bound: int | None = None) -> DepthGrade:
    return depth_grade(ring, list(ideal), m, bound)
