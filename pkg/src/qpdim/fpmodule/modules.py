"""Finitely generated modules as k-vector spaces with variable actions.

A module is a k-basis together with one matrix per ring variable.  In the
graded regime every basis vector is homogeneous and the module is the
quotient M / M_{>trunc}; all constructions commute with that quotient, so
anything computed in degrees <= trunc is exact.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from ..exactlin import Field
from ..polyring import Polynomial
from ..ring import QuotientRing, RingError

__all__ = [
    "VectorizedModule",
    "FreeTensor",
    "ModulePresentation",
    "regular_module",
    "free_module",
    "vectorize",
    "cyclic_module",
    "residue_field",
    "direct_sum",
    "minimal_generators",
    "MinimalGenerators",
    "free_split",
    "hom_basis",
    "hom_module",
    "tensor",
    "annihilator_ideal",
    "default_bound",
]


class VectorizedModule:
    def __init__(
        self,
        ring: QuotientRing,
        actions: list[np.ndarray],
        degrees=None,
        trunc: int | None = None,
        dim: int | None = None,
        labels: list | None = None,
        presentation: "ModulePresentation | None" = None,
    ):
        self.ring = ring
        self.field: Field = ring.field
        self.actions = list(actions)
        if dim is None:
            if not self.actions:
                raise ValueError("dimension needed when the ring has no variables")
            dim = self.actions[0].shape[0]
        self.dim = dim
        self.degrees = np.zeros(dim, dtype=np.int64) if degrees is None else np.asarray(degrees, dtype=np.int64)
        self.trunc = trunc if ring.graded else None
        self.labels = labels
        self.presentation = presentation
        self._mono: dict[tuple, np.ndarray] = {}

    def __repr__(self):
        extra = f", trunc={self.trunc}" if self.trunc is not None else ""
        return f"VectorizedModule(dim={self.dim}{extra})"

    @property
    def graded(self) -> bool:
        return self.ring.graded

    def is_zero(self) -> bool:
        return self.dim == 0

    def min_degree(self) -> int | None:
        return int(self.degrees.min()) if self.dim else None

    def hilbert(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for d in self.degrees.tolist():
            out[d] = out.get(d, 0) + 1
        return dict(sorted(out.items()))

    # ring elements acting

    def mono_matrix(self, e: tuple) -> np.ndarray:
        if e in self._mono:
            return self._mono[e]
        fld = self.field
        i = next((k for k, x in enumerate(e) if x), None)
        if i is None:
            m = fld.eye(self.dim)
        else:
            rest = list(e)
            rest[i] -= 1
            m = fld.matmul(self.actions[i], self.mono_matrix(tuple(rest)))
        self._mono[e] = m
        return m

    def poly_matrix(self, f: Polynomial) -> np.ndarray:
        fld = self.field
        out = fld.zeros(self.dim, self.dim)
        for e, c in f.terms.items():
            if self.graded and self.trunc is not None and self.dim and sum(e) > self.trunc - self.min_degree():
                continue
            out = out + self.mono_matrix(e) * c
        return fld._mod(out) if fld.char else out

    def m_image(self) -> np.ndarray:
        """Canonical column basis of mM."""
        if not self.actions or not self.dim:
            return self.field.zeros(self.dim, 0)
        return self.field.column_basis(np.concatenate(self.actions, axis=1))

    def radical_filtration(self) -> list[int]:
        """dim m^j M for j = 0, 1, ... until zero."""
        fld = self.field
        cur = fld.eye(self.dim)
        dims = [self.dim]
        while cur.shape[1] and self.actions:
            cur = fld.column_basis(np.concatenate([fld.matmul(a, cur) for a in self.actions], axis=1))
            dims.append(cur.shape[1])
            if len(dims) > self.dim + 2:
                break
        return dims

    def socle_basis(self) -> np.ndarray:
        if not self.actions:
            return self.field.eye(self.dim)
        return self.field.kernel_basis(np.concatenate(self.actions, axis=0))

    def socle_filtration(self) -> list[int]:
        """dims of the socle series 0 ⊂ soc ⊂ soc^2 ⊂ ... (stops when stable)."""
        fld = self.field
        dims = []
        cur = fld.zeros(self.dim, 0)
        while True:
            # soc^{j+1} = {v : m v in soc^j}
            if cur.shape[1]:
                r, piv = fld.rref(cur.T)
                q = [c for c in range(self.dim) if c not in set(piv)]
                pi = fld.zeros(len(q), self.dim)
                for i, c in enumerate(q):
                    pi[i, c] = 1
                if piv:
                    pi[:, piv] = fld._mod(pi[:, piv] - r[: len(piv)][:, q].T)
            else:
                pi = fld.eye(self.dim)
            if not self.actions:
                nxt = fld.eye(self.dim)
            else:
                nxt = fld.kernel_basis(np.concatenate([fld.matmul(pi, a) for a in self.actions], axis=0))
            dims.append(nxt.shape[1])
            if nxt.shape[1] == cur.shape[1]:
                return dims[:-1] if len(dims) > 1 else dims
            cur = nxt

    # sub and quotient modules

    def span_closure(self, cols: np.ndarray) -> np.ndarray:
        """Canonical column basis of the submodule generated by the columns."""
        fld = self.field
        if cols.shape[1] == 0:
            return fld.zeros(self.dim, 0)
        basis = fld.column_basis(cols)
        while True:
            if not self.actions:
                return basis
            grown = fld.column_basis(
                np.concatenate([basis] + [fld.matmul(a, basis) for a in self.actions], axis=1)
            )
            if grown.shape[1] == basis.shape[1]:
                return basis
            basis = grown

    def sub(self, cols: np.ndarray, closed: bool = True) -> tuple["VectorizedModule", np.ndarray]:
        """Submodule spanned by the columns (closed under the action unless told otherwise).

        Returns the module and its inclusion matrix, whose columns are the
        canonical basis; the coordinates of a vector of the submodule are its
        entries at the pivot rows of the inclusion.
        """
        fld = self.field
        basis = fld.column_basis(cols) if closed else self.span_closure(cols)
        piv = pivots_of(basis)
        acts = [fld.matmul(a, basis)[piv] for a in self.actions]
        deg = self.degrees[piv] if len(piv) else np.zeros(0, dtype=np.int64)
        return (
            VectorizedModule(self.ring, acts, deg, self.trunc, dim=basis.shape[1]),
            basis,
        )

    def quotient(self, cols: np.ndarray) -> tuple["VectorizedModule", np.ndarray]:
        """M / <cols>; returns the module and the projection matrix."""
        fld = self.field
        basis = self.span_closure(cols)
        piv = pivots_of(basis)
        pset = set(piv)
        keep = [c for c in range(self.dim) if c not in pset]
        pi = fld.zeros(len(keep), self.dim)
        for i, c in enumerate(keep):
            pi[i, c] = 1
        if piv:
            rows = basis.T  # reduced echelon rows
            pi[:, piv] = fld._mod(pi[:, piv] - rows[:, keep].T)
        acts = [fld.matmul(pi, a)[:, keep] for a in self.actions]
        deg = self.degrees[keep] if keep else np.zeros(0, dtype=np.int64)
        return VectorizedModule(self.ring, acts, deg, self.trunc, dim=len(keep)), pi

    def truncate(self, bound: int) -> "VectorizedModule":
        """M / M_{>bound} (graded only)."""
        if not self.graded:
            return self
        keep = np.flatnonzero(self.degrees <= bound)
        acts = [a[np.ix_(keep, keep)] for a in self.actions]
        t = bound if self.trunc is None else min(bound, self.trunc)
        return VectorizedModule(self.ring, acts, self.degrees[keep], t, dim=len(keep))

    def shift(self, s: int) -> "VectorizedModule":
        """M(-s): every degree raised by s."""
        t = None if self.trunc is None else self.trunc + s
        return VectorizedModule(self.ring, self.actions, self.degrees + s, t, dim=self.dim)

    def at_bound(self, bound: int) -> "VectorizedModule":
        """Re-vectorize from the stored presentation at another truncation."""
        if not self.graded or self.presentation is None:
            return self
        return vectorize(self.presentation, bound)


def pivots_of(basis: np.ndarray) -> list[int]:
    """Pivot rows of a canonical column basis (transpose of an rref)."""
    out = []
    for j in range(basis.shape[1]):
        nz = np.flatnonzero(basis[:, j])
        out.append(int(nz[0]))
    return out


def regular_module(ring: QuotientRing, trunc: int | None = None) -> VectorizedModule:
    basis = ring.basis_upto(trunc)
    acts = ring.variable_actions(basis)
    deg = [sum(m) for m in basis]
    return VectorizedModule(ring, acts, deg, trunc, dim=len(basis), labels=basis)


class FreeTensor(VectorizedModule):
    """The sum of twisted copies N(-a_j), truncated at ``trunc`` when graded."""

    def __init__(self, base: VectorizedModule, twists: list[int], trunc: int | None = None):
        self.base = base
        self.twists = list(twists)
        fld = base.field
        sel = []
        for a in self.twists:
            if base.graded and trunc is not None:
                sel.append(np.flatnonzero(base.degrees + a <= trunc))
            else:
                sel.append(np.arange(base.dim))
        self.sel = sel
        self.offsets = np.cumsum([0] + [len(s) for s in sel]).tolist()
        n = self.offsets[-1]
        acts = []
        for a in base.actions:
            big = fld.zeros(n, n)
            for j, s in enumerate(sel):
                o = self.offsets[j]
                big[o : o + len(s), o : o + len(s)] = a[np.ix_(s, s)]
            acts.append(big)
        deg = np.concatenate([base.degrees[s] + a for s, a in zip(sel, self.twists)]) if sel else np.zeros(0)
        labels = None
        if base.labels is not None:
            labels = [(j, base.labels[b]) for j, s in enumerate(sel) for b in s.tolist()]
        super().__init__(base.ring, acts, deg, trunc, dim=n, labels=labels)

    @property
    def rank(self) -> int:
        return len(self.twists)

    def block(self, j: int) -> slice:
        return slice(self.offsets[j], self.offsets[j + 1])

    def to_column(self, v) -> list[Polynomial]:
        """A vector of a free module as a column of ring elements."""
        ring = self.ring
        out = []
        for j, s in enumerate(self.sel):
            seg = v[self.block(j)]
            out.append(ring.from_vector(seg, [self.base.labels[b] for b in s.tolist()]))
        return out

    def from_column(self, col: list[Polynomial]) -> np.ndarray:
        ring = self.ring
        v = self.field.zeros(self.dim, 1)[:, 0]
        for j, f in enumerate(col):
            idx = {self.base.labels[b]: k for k, b in enumerate(self.sel[j].tolist())}
            v[self.block(j)] = ring.to_vector(f, [None] * len(idx), idx, strict=not self.graded)
        return v

    def map_from(self, src: "FreeTensor", matrix: list[list[Polynomial]]) -> np.ndarray:
        """k-matrix of the map src -> self given by a matrix of ring elements."""
        fld = self.field
        out = fld.zeros(self.dim, src.dim)
        base = self.base
        for j in range(self.rank):
            for l in range(src.rank):
                f = matrix[j][l]
                if not f:
                    continue
                blk = base.poly_matrix(f)[np.ix_(self.sel[j], src.sel[l])]
                out[self.block(j), src.block(l)] = blk
        return out


def free_module(ring: QuotientRing, twists: list[int], trunc: int | None = None) -> FreeTensor:
    return FreeTensor(regular_module(ring, trunc), twists, trunc)


def default_bound(ring: QuotientRing, degrees: list[int], relations: list[list[Polynomial]]) -> int:
    """Twice the largest relation degree plus six."""
    top = 0
    for row in relations:
        for a, f in zip(degrees, row):
            if f:
                top = max(top, f.degree() + a)
    top = max([top] + list(degrees) + [g.degree() for g in ring.ideal])
    return 2 * top + 6


@dataclass
class ModulePresentation:
    """coker(R^r -> R^g): generators with degrees, relations as rows of ring elements."""

    ring: QuotientRing
    generator_degrees: list[int]
    relations: list[list[Polynomial]] = dc_field(default_factory=list)

    def __post_init__(self):
        g = len(self.generator_degrees)
        rows = []
        for row in self.relations:
            row = [self.ring.element(f) for f in row]
            if len(row) != g:
                raise ValueError(f"relation of length {len(row)} for {g} generators")
            rows.append(row)
        self.relations = rows
        if self.ring.graded:
            for row in rows:
                degs = {f.degree() + a for f, a in zip(row, self.generator_degrees) if f}
                if len(degs) > 1 or any(not f.is_homogeneous() for f in row):
                    raise RingError(f"relation {[str(f) for f in row]} is not homogeneous")

    def descriptor(self, ring_path: str = "ring.json") -> dict:
        return {
            "ring": ring_path,
            "generators": [{"degree": d} for d in self.generator_degrees],
            "relations": [[str(f) for f in row] for row in self.relations],
        }


def vectorize(p: ModulePresentation, bound: int | None = None) -> VectorizedModule:
    """Cokernel of the relations as a vectorized module (truncated when graded)."""
    ring = p.ring
    trunc = None
    if ring.graded:
        trunc = default_bound(ring, p.generator_degrees, p.relations) if bound is None else bound
    F = free_module(ring, p.generator_degrees, trunc)
    fld = ring.field
    cols = [F.from_column(row) for row in p.relations]
    rel = np.stack(cols, axis=1) if cols else fld.zeros(F.dim, 0)
    M, _ = F.quotient(rel)
    M.presentation = p
    return M


def cyclic_module(ring: QuotientRing, ideal: list, bound: int | None = None) -> VectorizedModule:
    """R / (ideal)."""
    rows = [[ring.element(f)] for f in ideal]
    return vectorize(ModulePresentation(ring, [0], rows), bound)


def residue_field(ring: QuotientRing, bound: int | None = None) -> VectorizedModule:
    return cyclic_module(ring, [ring.var(i) for i in range(ring.nvars)], bound)


def direct_sum(mods: list[VectorizedModule]) -> VectorizedModule:
    if not mods:
        raise ValueError("empty direct sum")
    ring = mods[0].ring
    fld = ring.field
    n = sum(m.dim for m in mods)
    acts = []
    for x in range(ring.nvars):
        big = fld.zeros(n, n)
        o = 0
        for m in mods:
            big[o : o + m.dim, o : o + m.dim] = m.actions[x]
            o += m.dim
        acts.append(big)
    deg = np.concatenate([m.degrees for m in mods])
    truncs = [m.trunc for m in mods if m.trunc is not None]
    return VectorizedModule(ring, acts, deg, min(truncs) if truncs else None, dim=n)


@dataclass
class MinimalGenerators:
    count: int
    vectors: np.ndarray  # columns, homogeneous when graded
    degrees: list[int]


def minimal_generators(m: VectorizedModule) -> MinimalGenerators:
    """A minimal generating set: basis vectors completing mM to M."""
    fld = m.field
    mm = m.m_image()
    piv = set(pivots_of(mm))
    keep = [c for c in range(m.dim) if c not in piv]
    vec = fld.zeros(m.dim, len(keep))
    for j, c in enumerate(keep):
        vec[c, j] = 1
    return MinimalGenerators(len(keep), vec, [int(m.degrees[c]) for c in keep])


def cover_matrix(m: VectorizedModule, gens: np.ndarray, F: FreeTensor) -> np.ndarray:
    """k-matrix of F -> M sending the j-th basis element to the j-th generator."""
    fld = m.field
    out = fld.zeros(m.dim, F.dim)
    for j in range(F.rank):
        g = gens[:, j : j + 1]
        for k, b in enumerate(F.sel[j].tolist()):
            mono = F.base.labels[b]
            out[:, F.offsets[j] + k] = fld.matmul(m.mono_matrix(mono), g)[:, 0]
    return out


class _Presented:
    """Generators, cover, lift and relations of a vectorized module."""

    def __init__(self, m: VectorizedModule):
        fld = m.field
        self.module = m
        mg = minimal_generators(m)
        self.gens = mg
        self.F = free_module(m.ring, mg.degrees, m.trunc)
        self.cover = cover_matrix(m, mg.vectors, self.F)
        self.lift = fld.solve(self.cover, fld.eye(m.dim))
        K = fld.kernel_basis(self.cover)
        if K.shape[1]:
            Kmod, inc = self.F.sub(K)
            rel = minimal_generators(Kmod)
            self.relations = fld.matmul(inc, rel.vectors)
        else:
            self.relations = K
        self.relation_columns = [self.F.to_column(self.relations[:, j]) for j in range(self.relations.shape[1])]


def hom_basis(m: VectorizedModule, n: VectorizedModule, shift: int | None = 0) -> list[np.ndarray]:
    """k-basis of R-linear maps M -> N (of degree ``shift`` when graded).

    Graded modules should already be truncated compatibly (N at M's
    truncation plus shift); see ``align``.  ``shift=None`` allows maps of
    every degree.
    """
    fld = m.field
    if m.dim == 0 or n.dim == 0:
        return []
    P = _Presented(m)
    gdeg = P.gens.degrees
    allowed = []
    for d in gdeg:
        if m.graded and shift is not None:
            allowed.append(np.flatnonzero(n.degrees == d + shift))
        else:
            allowed.append(np.arange(n.dim))
    offs = np.cumsum([0] + [len(a) for a in allowed]).tolist()
    nunk = offs[-1]
    if nunk == 0:
        return []
    rows = []
    for col in P.relation_columns:
        blk = fld.zeros(n.dim, nunk)
        for j, f in enumerate(col):
            if f:
                blk[:, offs[j] : offs[j + 1]] = n.poly_matrix(f)[:, allowed[j]]
        rows.append(blk)
    if rows:
        sol = fld.kernel_basis(np.concatenate(rows, axis=0))
    else:
        sol = fld.eye(nunk)
    out = []
    for s in range(sol.shape[1]):
        u = sol[:, s]
        psi = fld.zeros(n.dim, P.F.dim)
        for j in range(P.F.rank):
            nj = fld.zeros(n.dim, 1)
            nj[allowed[j], 0] = u[offs[j] : offs[j + 1]]
            for k, b in enumerate(P.F.sel[j].tolist()):
                mono = P.F.base.labels[b]
                psi[:, P.F.offsets[j] + k] = fld.matmul(n.mono_matrix(mono), nj)[:, 0]
        out.append(fld.matmul(psi, P.lift))
    return out


def is_homomorphism(phi: np.ndarray, m: VectorizedModule, n: VectorizedModule) -> bool:
    fld = m.field
    return all(
        np.array_equal(fld.matmul(phi, a), fld.matmul(b, phi)) for a, b in zip(m.actions, n.actions)
    )


def hom_module(m: VectorizedModule, n: VectorizedModule) -> VectorizedModule:
    """Hom_R(M, N) with R acting through N (Artinian regime)."""
    if m.graded and not m.ring.finite:
        raise RingError("hom_module needs a finite-dimensional ring; use derived_table for graded Ext")
    fld = m.field
    basis = hom_basis(m, n, None)
    if not basis:
        return VectorizedModule(m.ring, [fld.zeros(0, 0) for _ in range(m.ring.nvars)], dim=0, labels=[])
    flat = np.stack([b.reshape(-1) for b in basis], axis=1)
    ambient = VectorizedModule(
        m.ring,
        [kron(fld, a, fld.eye(m.dim)) for a in n.actions],
        dim=n.dim * m.dim,
    )
    mod, inc = ambient.sub(flat)
    mod.labels = [inc[:, j].reshape(n.dim, m.dim) for j in range(inc.shape[1])]
    return mod


def _kron(fld: Field, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out = fld.zeros(a.shape[0] * b.shape[0], a.shape[1] * b.shape[1])
    for i in range(a.shape[0]):
        for j in range(a.shape[1]):
            if a[i, j]:
                out[i * b.shape[0] : (i + 1) * b.shape[0], j * b.shape[1] : (j + 1) * b.shape[1]] = fld._mod(b * a[i, j]) if fld.char else b * a[i, j]
    return out


def kron(fld: Field, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return fld._mod(np.kron(a, b)) if fld.fast else _kron(fld, a, b)


def tensor(m: VectorizedModule, n: VectorizedModule) -> VectorizedModule:
    """M (x)_R N."""
    fld = m.field
    ring = m.ring
    idx = [(a, b) for a in range(m.dim) for b in range(n.dim)]
    trunc = None
    if m.graded and (m.trunc is not None or n.trunc is not None) and m.dim and n.dim:
        big = 10**9
        tm = big if m.trunc is None else m.trunc
        tn = big if n.trunc is None else n.trunc
        trunc = min(tm + n.min_degree(), tn + m.min_degree())
    keep = [
        k for k, (a, b) in enumerate(idx) if trunc is None or m.degrees[a] + n.degrees[b] <= trunc
    ]
    keep = np.asarray(keep, dtype=np.int64)
    ex, ey = fld.eye(n.dim), fld.eye(m.dim)
    left = [kron(fld, a, ex)[np.ix_(keep, keep)] for a in m.actions]
    right = [kron(fld, ey, b)[np.ix_(keep, keep)] for b in n.actions]
    deg = np.asarray([m.degrees[idx[k][0]] + n.degrees[idx[k][1]] for k in keep.tolist()], dtype=np.int64)
    amb = VectorizedModule(ring, left, deg, trunc, dim=len(keep))
    if left:
        rel = np.concatenate([fld._mod(l - r) if fld.char else l - r for l, r in zip(left, right)], axis=1)
    else:
        rel = fld.zeros(len(keep), 0)
    q, _ = amb.quotient(rel)
    return q


def annihilator_ideal(m: VectorizedModule, bound: int | None = None) -> list[Polynomial]:
    """k-basis of ann_R(M) (in degrees where the truncation is exact, when graded)."""
    ring = m.ring
    fld = m.field
    mg = minimal_generators(m)
    if m.graded and not ring.finite:
        top = (m.trunc or 0) - (max(mg.degrees) if mg.degrees else 0)
        if bound is not None:
            top = min(top, bound)
        basis = ring.basis_upto(max(top, -1))
    else:
        basis = ring.basis_upto(None)
    if not basis:
        return []
    cols = []
    for b in basis:
        cols.append(fld.matmul(m.mono_matrix(b), mg.vectors).reshape(-1))
    mat = np.stack(cols, axis=1) if cols else fld.zeros(0, len(basis))
    k = fld.kernel_basis(mat)
    return [ring.from_vector(k[:, j], basis) for j in range(k.shape[1])]


def free_split(m: VectorizedModule) -> tuple[int, VectorizedModule, np.ndarray]:
    """Write M = R^f (+) N with N free of free summands (finite rings).

    Returns f, N and the inclusion of N in M.  The number f is the rank of
    the pairing Hom(M, R) x M -> R -> k.
    """
    ring = m.ring
    if not ring.finite:
        raise RingError("free summand splitting needs a finite-dimensional ring")
    fld = m.field
    R = regular_module(ring, None)
    maps = hom_basis(m, R, None) if m.dim else []
    mg = minimal_generators(m)
    one = R.labels.index(ring.poly.one_monomial())
    if not maps or not mg.count:
        return 0, m, fld.eye(m.dim)
    P = fld.zeros(len(maps), mg.count)
    for i, phi in enumerate(maps):
        P[i] = fld.matmul(phi, mg.vectors)[one]
    f = fld.rank(P)
    if f == 0:
        return 0, m, fld.eye(m.dim)
    _, rowpiv = fld.rref(P.T)
    stacked = np.concatenate([maps[i] for i in rowpiv[:f]], axis=0)
    K = fld.kernel_basis(stacked)
    n, inc = m.sub(K)
    if n.dim != m.dim - f * R.dim:
        raise ArithmeticError("free summand split failed")
    return f, n, inc
