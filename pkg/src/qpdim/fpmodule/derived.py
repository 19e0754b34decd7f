"""Tor and Ext tables from minimal resolutions, and a reflexivity probe."""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from ..chaincomplex import FreeComplex, hom_into_module, homology
from ..ring import RingError
from .modules import VectorizedModule, hom_module, regular_module
from .resolution import minimal_resolution

__all__ = ["DerivedTable", "derived_table", "tor_table", "ext_table", "ReflexivityReport", "reflexivity_probe"]

TOR = "Tor"
EXT = "Ext"


@dataclass
class DerivedTable:
    kind: str
    dims: list[int]
    modules: list[VectorizedModule]
    trunc: int | None = None
    hilbert: list[dict[int, int]] = dc_field(default_factory=list)

    def nonzero(self) -> list[int]:
        return [i for i, d in enumerate(self.dims) if d]


def _common_bound(m: VectorizedModule, n: VectorizedModule, degree_bound: int | None) -> int | None:
    if not m.graded:
        return None
    if degree_bound is not None:
        return degree_bound
    ts = [t for t in (m.trunc, n.trunc) if t is not None]
    return min(ts) if ts else None


def derived_table(
    m: VectorizedModule,
    n: VectorizedModule,
    kind: str,
    max_index: int,
    degree_bound: int | None = None,
    resolution: FreeComplex | None = None,
) -> DerivedTable:
    """dim Tor_i(M, N) or dim Ext^i(M, N) for i = 0..max_index.

    The resolution of M defaults to the minimal one; any free resolution
    may be passed instead and gives the same answer.  Graded results count
    dimensions in degrees up to the truncation (for Ext, the part of that
    window where every Hom group involved is complete).
    """
    if kind not in (TOR, EXT):
        raise ValueError(f"kind must be {TOR!r} or {EXT!r}")
    bound = _common_bound(m, n, degree_bound)
    if bound is not None:
        m, n = m.at_bound(bound), n.at_bound(bound)
        if n.trunc is not None and n.trunc > bound:
            n = n.truncate(bound)
    P = resolution if resolution is not None else minimal_resolution(m, max_index + 1, bound).complex
    if kind == TOR:
        rep = homology(P, coefficients=n)
        mods = rep.modules
    else:
        mods = hom_into_module(P, n)
    zero = VectorizedModule(m.ring, [m.field.zeros(0, 0) for _ in range(m.ring.nvars)], dim=0)
    out = [mods.get(i, zero) for i in range(max_index + 1)]
    return DerivedTable(kind, [x.dim for x in out], out, bound, [x.hilbert() for x in out])


def tor_table(m, n, max_index, degree_bound=None) -> DerivedTable:
    return derived_table(m, n, TOR, max_index, degree_bound)


def ext_table(m, n, max_index, degree_bound=None) -> DerivedTable:
    return derived_table(m, n, EXT, max_index, degree_bound)


@dataclass
class ReflexivityReport:
    reflexive: bool
    ext_m: list[int]
    ext_dual: list[int]

    @property
    def passed(self) -> bool:
        return self.reflexive and not any(self.ext_m) and not any(self.ext_dual)


def _evaluation_is_iso(m: VectorizedModule, dual: VectorizedModule, bidual: VectorizedModule) -> bool:
    fld = m.field
    if bidual.dim != m.dim:
        return False
    if m.dim == 0:
        return True
    phis = dual.labels  # R-valued maps on M, in M's coordinates
    psis = bidual.labels  # R-valued maps on M*, in M*'s coordinates
    flat = np.stack([p.reshape(-1) for p in psis], axis=1)
    cols = []
    for c in range(m.dim):
        ev = np.stack([phi[:, c] for phi in phis], axis=1) if phis else fld.zeros(psis[0].shape[0], 0)
        x = fld.solve(flat, ev.reshape(-1, 1))
        if x is None:
            return False
        cols.append(x[:, 0])
    return fld.rank(np.stack(cols, axis=1)) == m.dim


def reflexivity_probe(m: VectorizedModule, window: int = 4) -> ReflexivityReport:
    """Check M ≅ M** and Ext^i(M, R) = Ext^i(M*, R) = 0 for 1 <= i <= window.

    A finite-window test of total reflexivity (finite rings only).
    """
    ring = m.ring
    if not ring.finite:
        raise RingError("reflexivity probe needs a finite-dimensional ring")
    R = regular_module(ring, None)
    dual = hom_module(m, R)
    bidual = hom_module(dual, R)
    refl = _evaluation_is_iso(m, dual, bidual)
    ext_m = derived_table(m, R, EXT, window).dims[1:]
    ext_d = derived_table(dual, R, EXT, window).dims[1:] if dual.dim else [0] * window
    return ReflexivityReport(refl, ext_m, ext_d)
