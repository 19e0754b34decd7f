"""Minimal free resolutions, syzygies, presentations and the transpose."""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from ..chaincomplex import FreeComplex
from .modules import (
    ModulePresentation,
    VectorizedModule,
    cover_matrix,
    free_module,
    minimal_generators,
    vectorize,
)

__all__ = [
    "Resolution",
    "minimal_resolution",
    "syzygy",
    "syzygy_power",
    "presentation_of",
    "transpose",
]


@dataclass
class Resolution:
    module: VectorizedModule
    complex: FreeComplex
    terminated: bool
    trunc: int | None
    syzygies: list[VectorizedModule] = dc_field(default_factory=list)

    @property
    def betti(self) -> list[int]:
        return list(self.complex.ranks)

    def graded_betti(self) -> list[dict[int, int]]:
        out = []
        for t in self.complex.twists:
            row: dict[int, int] = {}
            for a in t:
                row[a] = row.get(a, 0) + 1
            out.append(dict(sorted(row.items())))
        return out

    @property
    def pd(self) -> int | None:
        """Projective dimension when the resolution stopped, else None."""
        if not self.terminated:
            return None
        nz = [i for i, r in enumerate(self.complex.ranks) if r]
        return max(nz) if nz else 0


def minimal_resolution(m: VectorizedModule, steps: int, degree_bound: int | None = None) -> Resolution:
    """F_0 <- F_1 <- ... <- F_steps, each step covering the previous kernel minimally.

    ``terminated`` is True when the next syzygy is zero (in degrees up to the
    truncation, when graded).
    """
    if degree_bound is not None and m.graded:
        m = m.at_bound(degree_bound)
    ring = m.ring
    fld = ring.field
    T = m.trunc
    mg = minimal_generators(m)
    F = free_module(ring, mg.degrees, T)
    twists = [mg.degrees]
    diffs = []
    syz = []
    K = fld.kernel_basis(cover_matrix(m, mg.vectors, F))
    terminated = False
    for _ in range(steps):
        if K.shape[1] == 0:
            terminated = True
            break
        Kmod, inc = F.sub(K)
        syz.append(Kmod)
        g = minimal_generators(Kmod)
        vecs = fld.matmul(inc, g.vectors)
        cols = [F.to_column(vecs[:, j]) for j in range(g.count)]
        d = [[cols[l][j] for l in range(g.count)] for j in range(F.rank)]
        nxt = free_module(ring, g.degrees, T)
        K = fld.kernel_basis(F.map_from(nxt, d))
        diffs.append(d)
        twists.append(g.degrees)
        F = nxt
    else:
        terminated = K.shape[1] == 0
    ranks = [len(t) for t in twists]
    c = FreeComplex(ring, 0, ranks, twists, diffs)
    return Resolution(m, c, terminated, T, syz)


def syzygy(m: VectorizedModule, degree_bound: int | None = None) -> VectorizedModule:
    """First syzygy module Ω M = ker(F_0 -> M) of a minimal cover."""
    return syzygy_power(m, 1, degree_bound)


def syzygy_power(m: VectorizedModule, r: int, degree_bound: int | None = None) -> VectorizedModule:
    if r == 0:
        return m if degree_bound is None else m.at_bound(degree_bound)
    res = minimal_resolution(m, r, degree_bound)
    if len(res.syzygies) >= r:
        return res.syzygies[r - 1]
    ring = m.ring
    return VectorizedModule(ring, [ring.field.zeros(0, 0) for _ in range(ring.nvars)], dim=0, trunc=res.trunc)


def presentation_of(m: VectorizedModule) -> ModulePresentation:
    """A minimal presentation: minimal generators and generating relations."""
    res = minimal_resolution(m, 1)
    c = res.complex
    d = c.d(1)
    rows = [[d[j][l] for j in range(c.rank(0))] for l in range(c.rank(1))]
    return ModulePresentation(m.ring, list(c.twist(0)), rows)


def transpose(m: VectorizedModule, degree_bound: int | None = None) -> VectorizedModule:
    """Auslander transpose: the cokernel of the dual of a minimal presentation."""
    res = minimal_resolution(m, 1)
    c = res.complex
    d = c.d(1)
    gens = [-a for a in c.twist(1)]
    rows = [list(d[j]) for j in range(c.rank(0))]
    p = ModulePresentation(m.ring, gens, rows)
    return vectorize(p, degree_bound if degree_bound is not None else m.trunc)
