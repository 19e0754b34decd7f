"""Deciding M ≅ N: invariants first, then a search through Hom(M, N)."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

import numpy as np

from .modules import VectorizedModule, annihilator_ideal, hom_basis, is_homomorphism, minimal_generators

__all__ = ["IsoResult", "iso_test", "align", "ISOMORPHIC", "NOT_ISOMORPHIC", "UNKNOWN"]

ISOMORPHIC = "Isomorphic"
NOT_ISOMORPHIC = "NotIsomorphic"
UNKNOWN = "Unknown"

EXHAUSTIVE_DIM = 4
EXHAUSTIVE_FIELD = 5


@dataclass
class IsoResult:
    verdict: str
    witness: np.ndarray | None = None
    shift: int = 0
    reason: str = ""

    @property
    def isomorphic(self) -> bool:
        return self.verdict == ISOMORPHIC

    def __bool__(self):
        return self.isomorphic


def align(m: VectorizedModule, n: VectorizedModule) -> tuple[VectorizedModule, VectorizedModule, int]:
    """Match lowest degrees and truncate both to a common window.

    Returns M', N' and the shift s so that a degree-s map M' -> N' is the
    candidate isomorphism.  Ungraded modules pass through with s = 0.
    """
    if not m.graded or not m.dim or not n.dim:
        return m, n, 0
    s = n.min_degree() - m.min_degree()
    tm = m.trunc if m.trunc is not None else 10**9
    tn = n.trunc if n.trunc is not None else 10**9
    top = min(tm, tn - s)
    return m.truncate(top), n.truncate(top + s), s


def _invariants(m: VectorizedModule, shift: int = 0) -> dict:
    inv = {"dim": m.dim, "nu": minimal_generators(m).count}
    if m.graded:
        inv["hilbert"] = {d + shift: c for d, c in m.hilbert().items()}
        inv["gens"] = sorted(d + shift for d in minimal_generators(m).degrees)
    else:
        inv["radical"] = m.radical_filtration()
        inv["socle"] = m.socle_filtration()
    return inv


def _annihilator_key(m: VectorizedModule):
    if m.graded and not m.ring.finite:
        return None
    ring = m.ring
    basis = ring.basis_upto(None)
    vecs = [ring.to_vector(f, basis) for f in annihilator_ideal(m)]
    if not vecs:
        return ()
    rows = ring.field.row_basis(np.stack(vecs, axis=0))
    return tuple(map(tuple, rows.tolist()))


def _invertible(phi: np.ndarray, m: VectorizedModule, n: VectorizedModule) -> bool:
    return phi.shape[0] == phi.shape[1] and m.field.rank(phi) == m.dim and is_homomorphism(phi, m, n)


def _combine(fld, basis: list[np.ndarray], coeffs) -> np.ndarray:
    out = fld.zeros(*basis[0].shape)
    for c, b in zip(coeffs, basis):
        if c:
            out = out + b * c
    return fld._mod(out) if fld.char else out


def iso_test(
    m: VectorizedModule,
    n: VectorizedModule,
    trials: int = 64,
    seed: int = 0,
    check_hom_dims: bool = True,
) -> IsoResult:
    """Decide whether M ≅ N (up to a degree shift when graded).

    Invariant mismatches and exhausted finite searches give NotIsomorphic;
    Isomorphic always carries a verified witness; otherwise Unknown.
    """
    fld = m.field
    if m.dim == 0 and n.dim == 0:
        return IsoResult(ISOMORPHIC, fld.zeros(0, 0), 0, "both zero")
    if m.dim == 0 or n.dim == 0:
        return IsoResult(NOT_ISOMORPHIC, reason="one module is zero")
    m, n, s = align(m, n)
    im, inn = _invariants(m, s), _invariants(n)
    for key in im:
        if im[key] != inn[key]:
            return IsoResult(NOT_ISOMORPHIC, shift=s, reason=f"invariant {key} differs")
    if _annihilator_key(m) != _annihilator_key(n):
        return IsoResult(NOT_ISOMORPHIC, shift=s, reason="annihilators differ")
    basis = hom_basis(m, n, s)
    h = len(basis)
    if h == 0:
        return IsoResult(NOT_ISOMORPHIC, shift=s, reason="Hom(M, N) = 0")
    if h == 1:
        if _invertible(basis[0], m, n):
            return IsoResult(ISOMORPHIC, basis[0], s, "one-dimensional Hom")
        return IsoResult(NOT_ISOMORPHIC, shift=s, reason="the only maps are singular")
    if check_hom_dims:
        dims = {
            "End(M)": len(hom_basis(m, m, 0)),
            "End(N)": len(hom_basis(n, n, 0)),
            "Hom(N,M)": len(hom_basis(n, m, -s)),
        }
        for k, v in dims.items():
            if v != h:
                return IsoResult(NOT_ISOMORPHIC, shift=s, reason=f"dim {k} = {v} but dim Hom(M,N) = {h}")
    q = fld.size
    if m.dim < EXHAUSTIVE_DIM and q is not None and q <= EXHAUSTIVE_FIELD:
        for coeffs in itertools.product(range(q), repeat=h):
            if not any(coeffs):
                continue
            phi = _combine(fld, basis, coeffs)
            if _invertible(phi, m, n):
                return IsoResult(ISOMORPHIC, phi, s, "exhaustive search")
        return IsoResult(NOT_ISOMORPHIC, shift=s, reason="exhaustive search found no isomorphism")
    rng = random.Random(seed)
    for _ in range(trials):
        coeffs = [fld.random_scalar(rng) for _ in range(h)]
        phi = _combine(fld, basis, coeffs)
        if _invertible(phi, m, n):
            return IsoResult(ISOMORPHIC, phi, s, "random element of Hom")
    return IsoResult(UNKNOWN, shift=s, reason=f"{trials} random maps were all singular")
