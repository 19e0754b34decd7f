"""Quotient rings R = k[x]/I with an explicit monomial basis.

Two regimes.  ``artinian``: I is zero-dimensional and m-primary, R has a
finite standard-monomial basis and all computations are exact.
``graded``: I is homogeneous and R is handled one degree at a time, up to
a truncation degree chosen by the caller.
"""
from __future__ import annotations

from functools import cached_property
from typing import Iterable

import numpy as np

from .exactlin import Field
from .polyring import (
    DEFAULT_DEGREE_CAP,
    GroebnerBasis,
    NotZeroDimensional,
    PolyRing,
    Polynomial,
    groebner,
    monomials_of_degree,
    normal_form,
    standard_monomials,
)

__all__ = [
    "QuotientRing",
    "make_ring",
    "RingError",
    "GeneratorInM",
    "NonHomogeneous",
    "NotLocal",
    "NotZeroDimensional",
]

ARTINIAN = "artinian"
GRADED = "graded"


class RingError(ValueError):
    pass


class GeneratorInM(RingError):
    """An ideal generator has a constant or linear term, so I is not inside m^2."""


class NonHomogeneous(RingError):
    pass


class NotLocal(RingError):
    """The quotient is finite but some variable is not nilpotent."""


class QuotientRing:
    def __init__(
        self,
        poly: PolyRing,
        ideal: list[Polynomial],
        regime: str,
        degree_cap: int = DEFAULT_DEGREE_CAP,
        criteria: bool = False,
        regular_sequence: bool = False,
    ):
        if regime not in (ARTINIAN, GRADED):
            raise RingError(f"unknown regime {regime!r}")
        self.poly = poly
        self.field: Field = poly.field
        self.names = poly.names
        self.nvars = poly.nvars
        self.ideal = [g for g in ideal if g]
        self.regime = regime
        self.regular_sequence = regular_sequence
        for g in self.ideal:
            if g.low_degree() < 2:
                raise GeneratorInM(f"generator {g} is not in m^2")
            if regime == GRADED and not g.is_homogeneous():
                raise NonHomogeneous(f"generator {g} is not homogeneous")
        self.gb: GroebnerBasis | None = (
            groebner(self.ideal, degree_cap=degree_cap, criteria=criteria) if self.ideal else None
        )
        self._degree_basis: dict[int, list[tuple]] = {}
        if regime == ARTINIAN:
            if self.gb is None:
                if self.nvars:
                    raise NotZeroDimensional("quotient is infinite dimensional")
                self.basis = [()]
            else:
                self.basis = standard_monomials(self.gb)
            self.index = {m: i for i, m in enumerate(self.basis)}
            for i in range(self.nvars):
                if self.nf(self.poly.var(i) ** len(self.basis)):
                    raise NotLocal(f"variable {self.names[i]} is not nilpotent")

    # basics

    @property
    def graded(self) -> bool:
        return self.regime == GRADED

    @cached_property
    def finite(self) -> bool:
        return self.regime == ARTINIAN or (self.gb is not None and self.gb.is_zero_dimensional()) or not self.nvars

    @property
    def dim(self) -> int:
        if self.regime != ARTINIAN:
            raise RingError("graded ring has no finite basis; use basis_upto")
        return len(self.basis)

    def __repr__(self):
        ideal = ", ".join(str(g) for g in self.ideal)
        return f"{self.field!r}[{','.join(self.names)}]/({ideal}) [{self.regime}]"

    def nf(self, f: Polynomial) -> Polynomial:
        return normal_form(f, self.gb) if self.gb is not None else f

    def parse(self, text: str) -> Polynomial:
        return self.nf(self.poly.parse(text))

    def element(self, f) -> Polynomial:
        if isinstance(f, str):
            return self.parse(f)
        if isinstance(f, Polynomial):
            return self.nf(f)
        return self.poly.constant(f)

    def var(self, i) -> Polynomial:
        return self.poly.var(i)

    def zero(self) -> Polynomial:
        return self.poly.zero()

    def one(self) -> Polynomial:
        return self.poly.one()

    def mul(self, f: Polynomial, g: Polynomial) -> Polynomial:
        return self.nf(f * g)

    def is_unit(self, f: Polynomial) -> bool:
        """Units of the local (or graded-local) ring: nonzero constant term."""
        return bool(self.nf(f).constant_term())

    def inverse(self, f: Polynomial) -> Polynomial:
        f = self.nf(f)
        if not self.is_unit(f):
            raise ZeroDivisionError(f"{f} is not a unit")
        fld = self.field
        if f.degree() == 0:
            return self.poly.constant(fld.inv(f.constant_term()))
        if self.regime != ARTINIAN:
            raise RingError("non-constant unit in a graded ring")
        m = self.mult_matrix(f)
        e = fld.zeros(self.dim, 1)
        e[self.index[self.poly.one_monomial()], 0] = 1
        x = fld.solve(m, e)
        return self.from_vector(x[:, 0], self.basis)

    # bases

    def basis_in_degree(self, d: int) -> list[tuple]:
        if d < 0:
            return []
        if d not in self._degree_basis:
            if self.gb is None:
                ms = sorted(monomials_of_degree(self.nvars, d), key=self.poly.key)
            else:
                ms = standard_monomials(self.gb, d)
            self._degree_basis[d] = ms
        return self._degree_basis[d]

    def basis_upto(self, bound: int | None) -> list[tuple]:
        """Standard monomials of degree <= bound (all of them when bound is None)."""
        if self.regime == ARTINIAN:
            return list(self.basis) if bound is None else [m for m in self.basis if sum(m) <= bound]
        if bound is None:
            if not self.finite:
                raise NotZeroDimensional("need a degree bound for an infinite graded ring")
            out, d = [], 0
            while True:
                layer = self.basis_in_degree(d)
                if not layer:
                    return out
                out.extend(layer)
                d += 1
        out = []
        for d in range(bound + 1):
            out.extend(self.basis_in_degree(d))
        return out

    def hilbert(self, bound: int) -> list[int]:
        """dim_k R_d for d = 0..bound (graded), or dims of standard monomials by degree."""
        if self.regime == ARTINIAN:
            h = [0] * (bound + 1)
            for m in self.basis:
                if sum(m) <= bound:
                    h[sum(m)] += 1
            return h
        return [len(self.basis_in_degree(d)) for d in range(bound + 1)]

    def to_vector(self, f: Polynomial, basis: list[tuple], index: dict | None = None, strict: bool = True) -> np.ndarray:
        """Coordinates of nf(f) in ``basis``; terms outside it are dropped unless ``strict``."""
        index = index if index is not None else {m: i for i, m in enumerate(basis)}
        v = self.field.zeros(len(basis), 1)[:, 0]
        for m, c in self.nf(f).terms.items():
            i = index.get(m)
            if i is None:
                if strict:
                    raise RingError(f"monomial {m} outside the basis")
                continue
            v[i] = c
        return v

    def from_vector(self, v, basis: list[tuple]) -> Polynomial:
        return self.poly.poly({m: c for m, c in zip(basis, v) if c})

    def mult_matrix(self, f: Polynomial, basis: list[tuple] | None = None) -> np.ndarray:
        """Matrix of multiplication by f on span(basis), dropping terms beyond it."""
        basis = self.basis if basis is None else basis
        index = {m: i for i, m in enumerate(basis)}
        fld = self.field
        out = fld.zeros(len(basis), len(basis))
        f = self.nf(f)
        for j, m in enumerate(basis):
            prod = self.nf(f.mul_term(m, 1))
            for t, c in prod.terms.items():
                i = index.get(t)
                if i is not None:
                    out[i, j] = c
        return out

    def variable_actions(self, basis: list[tuple] | None = None) -> list[np.ndarray]:
        """Commuting matrices of multiplication by each variable on span(basis)."""
        return [self.mult_matrix(self.var(i), basis) for i in range(self.nvars)]

    # invariants of Artinian rings

    def annihilator(self, elements) -> list[Polynomial]:
        """A k-basis of (0 :_R (elements))."""
        basis = self.basis_upto(None)
        fld = self.field
        mats = [self.mult_matrix(self.element(e), basis) for e in elements]
        if not mats:
            return [self.from_vector(fld.eye(len(basis))[:, j], basis) for j in range(len(basis))]
        k = fld.kernel_basis(np.concatenate(mats, axis=0))
        return [self.from_vector(k[:, j], basis) for j in range(k.shape[1])]

    def socle(self) -> list[Polynomial]:
        """A k-basis of (0 :_R m)."""
        if not self.nvars:
            return [self.one()]
        return self.annihilator([self.var(i) for i in range(self.nvars)])

    def is_gorenstein(self) -> bool:
        """Finite local ring with one-dimensional socle."""
        return self.finite and len(self.socle()) == 1

    def edim(self) -> int:
        return self.nvars

    def ambient(self) -> "QuotientRing":
        """The polynomial ring k[x] this ring is a quotient of, graded."""
        return QuotientRing(self.poly, [], GRADED)

    def descriptor(self) -> dict:
        return {
            "field": {"char": self.field.char},
            "vars": list(self.names),
            "ideal": [str(g) for g in self.ideal],
            "regime": self.regime,
        }


def make_ring(
    field: Field | int,
    variables: Iterable[str],
    ideal: Iterable[str | Polynomial] = (),
    regime: str = ARTINIAN,
    order: str = "degrevlex",
    degree_cap: int = DEFAULT_DEGREE_CAP,
    criteria: bool = False,
    regular_sequence: bool = False,
) -> QuotientRing:
    """Build k[variables]/ideal, validating the regime's preconditions."""
    if not isinstance(field, Field):
        field = Field(field)
    poly = PolyRing(field, variables, order)
    gens = [poly.parse(g) if isinstance(g, str) else g for g in ideal]
    return QuotientRing(poly, gens, regime, degree_cap, criteria, regular_sequence)


def ring_from_descriptor(d: dict, char: int | None = None) -> QuotientRing:
    c = d["field"]["char"] if char is None else char
    return make_ring(c, d["vars"], d.get("ideal", []), d.get("regime", ARTINIAN))
