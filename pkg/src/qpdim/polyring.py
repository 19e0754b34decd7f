"""Sparse multivariate polynomials, a small parser, and Groebner bases.

Monomials are exponent tuples.  Polynomials are dicts from monomial to a
nonzero field coefficient, wrapped so that the usual operators work.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Callable, Iterable

from .exactlin import Field

__all__ = [
    "PolyRing",
    "Polynomial",
    "GroebnerBasis",
    "ParseError",
    "UnknownVariable",
    "DegreeCapExceeded",
    "NotZeroDimensional",
    "groebner",
    "normal_form",
    "standard_monomials",
    "monomials_of_degree",
]

Monomial = tuple

DEFAULT_DEGREE_CAP = 30


class ParseError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at byte {offset}")
        self.offset = offset


class UnknownVariable(ParseError):
    pass


class DegreeCapExceeded(RuntimeError):
    pass


class NotZeroDimensional(ValueError):
    pass


def _degrevlex(e):
    return (sum(e), tuple(-x for x in reversed(e)))


def _lex(e):
    return e


ORDERS: dict[str, Callable] = {"degrevlex": _degrevlex, "lex": _lex}


def monomials_of_degree(nvars: int, d: int) -> list[Monomial]:
    """All exponent tuples of total degree d, in decreasing lex order."""
    if nvars == 0:
        return [()] if d == 0 else []
    out = []
    for combo in itertools.combinations_with_replacement(range(nvars), d):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return out


def _divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def _sub(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def _add(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


class PolyRing:
    """k[x_1..x_n] with a fixed monomial order."""

    def __init__(self, field: Field, names: Iterable[str], order: str = "degrevlex"):
        self.field = field
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate variable names")
        for n in self.names:
            if not n or not (n[0].isalpha() or n[0] == "_") or not all(c.isalnum() or c == "_" for c in n):
                raise ValueError(f"bad variable name {n!r}")
        if order not in ORDERS:
            raise ValueError(f"unknown monomial order {order!r}")
        self.order = order
        self.key = ORDERS[order]
        self.nvars = len(self.names)

    def __eq__(self, other):
        return (
            isinstance(other, PolyRing)
            and (self.field, self.names, self.order) == (other.field, other.names, other.order)
        )

    def __hash__(self):
        return hash((self.field, self.names, self.order))

    def one_monomial(self) -> Monomial:
        return (0,) * self.nvars

    def poly(self, terms: dict) -> "Polynomial":
        f = self.field
        clean = {}
        for m, c in terms.items():
            c = f.scalar(c)
            if c:
                clean[tuple(m)] = c
        return Polynomial(self, clean)

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.constant(1)

    def constant(self, c) -> "Polynomial":
        return self.poly({self.one_monomial(): c})

    def monomial(self, e: Monomial, c=1) -> "Polynomial":
        return self.poly({tuple(e): c})

    def var(self, i: int | str) -> "Polynomial":
        if isinstance(i, str):
            i = self.names.index(i)
        e = [0] * self.nvars
        e[i] = 1
        return self.monomial(tuple(e))

    def gens(self) -> list["Polynomial"]:
        return [self.var(i) for i in range(self.nvars)]

    def parse(self, text: str) -> "Polynomial":
        return _Parser(self, text).parse()

    def format_monomial(self, e: Monomial) -> str:
        parts = []
        for name, k in zip(self.names, e):
            if k == 1:
                parts.append(name)
            elif k > 1:
                parts.append(f"{name}^{k}")
        return "*".join(parts)


class Polynomial:
    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms

    # structure

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def lead(self) -> tuple[Monomial, object]:
        m = max(self.terms, key=self.ring.key)
        return m, self.terms[m]

    def lm(self) -> Monomial:
        return self.lead()[0]

    def lc(self):
        return self.lead()[1]

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self.terms), default=-1)

    def low_degree(self) -> int:
        return min((sum(m) for m in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self.terms}) <= 1

    def constant_term(self):
        return self.terms.get(self.ring.one_monomial(), self.ring.field.scalar(0))

    def sorted_terms(self) -> list[tuple[Monomial, object]]:
        return sorted(self.terms.items(), key=lambda t: self.ring.key(t[0]), reverse=True)

    # arithmetic

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise ValueError("polynomials from different rings")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        f = self.ring.field
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = f.add(out.get(m, 0), c)
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        f = self.ring.field
        return Polynomial(self.ring, {m: f.neg(c) for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Polynomial":
        f = self.ring.field
        c = f.scalar(c)
        if not c:
            return self.ring.zero()
        return Polynomial(self.ring, {m: f.mul(a, c) for m, a in self.terms.items()})

    def mul_term(self, e: Monomial, c) -> "Polynomial":
        f = self.ring.field
        return Polynomial(self.ring, {_add(m, e): f.mul(a, c) for m, a in self.terms.items()})

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        f = self.ring.field
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _add(m1, m2)
                s = f.add(out.get(m, 0), f.mul(c1, c2))
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return Polynomial(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = self.ring.one()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.constant(other)
        return isinstance(other, Polynomial) and self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __str__(self):
        if not self.terms:
            return "0"
        f = self.ring.field
        out = []
        for i, (m, c) in enumerate(self.sorted_terms()):
            c = f.signed(c)
            neg = c < 0
            a = -c if neg else c
            mono = self.ring.format_monomial(m)
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            if i == 0:
                out.append(("-" if neg else "") + body)
            else:
                out.append((" - " if neg else " + ") + body)
        return "".join(out)

    def __repr__(self):
        return f"Polynomial({self})"


class _Parser:
    def __init__(self, ring: PolyRing, text: str):
        self.ring = ring
        self.text = text
        self.i = 0
        # longest names first, so matching is greedy
        self.names = sorted(ring.names, key=len, reverse=True)

    def offset(self, i: int | None = None) -> int:
        i = self.i if i is None else i
        return len(self.text[:i].encode())

    def skip(self):
        while self.i < len(self.text) and self.text[self.i].isspace():
            self.i += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.i] if self.i < len(self.text) else ""

    def error(self, msg: str):
        raise ParseError(msg, self.offset())

    def parse(self) -> Polynomial:
        total = self.ring.zero()
        sign = 1
        if self.peek() in "+-" and self.peek():
            sign = -1 if self.peek() == "-" else 1
            self.i += 1
        total = total + self.term().scale(sign)
        while True:
            ch = self.peek()
            if not ch:
                return total
            if ch not in "+-":
                self.error(f"unexpected {ch!r}")
            self.i += 1
            t = self.term()
            total = total + (t if ch == "+" else -t)

    def integer(self) -> int:
        self.skip()
        j = self.i
        while self.i < len(self.text) and self.text[self.i].isdigit():
            self.i += 1
        if j == self.i:
            self.error("expected an integer")
        return int(self.text[j : self.i])

    def term(self) -> Polynomial:
        ch = self.peek()
        coeff = 1
        factors = []
        if ch.isdigit():
            n = self.integer()
            if self.peek() == "/":
                if self.ring.field.char:
                    self.error("rational coefficient in positive characteristic")
                self.i += 1
                d = self.integer()
                if d == 0:
                    self.i -= 1
                    self.error("zero denominator")
                coeff = Fraction(n, d)
            else:
                coeff = n
        else:
            factors.append(self.factor())
        while self.peek() == "*":
            self.i += 1
            factors.append(self.factor())
        e = [0] * self.ring.nvars
        for k, p in factors:
            e[k] += p
        return self.ring.monomial(tuple(e), coeff)

    def factor(self) -> tuple[int, int]:
        self.skip()
        for n in self.names:
            if self.text.startswith(n, self.i):
                self.i += len(n)
                power = 1
                if self.peek() == "^":
                    self.i += 1
                    power = self.integer()
                return self.ring.names.index(n), power
        if self.i < len(self.text) and (self.text[self.i].isalpha() or self.text[self.i] == "_"):
            j = self.i
            while j < len(self.text) and (self.text[j].isalnum() or self.text[j] == "_"):
                j += 1
            raise UnknownVariable(f"unknown variable {self.text[self.i:j]!r}", self.offset())
        self.error("expected a variable")


class GroebnerBasis:
    """Reduced Groebner basis; ``polys`` are monic and sorted by leading monomial."""

    def __init__(self, ring: PolyRing, polys: list[Polynomial]):
        self.ring = ring
        self.polys = polys
        self.leads = [g.lm() for g in polys]

    def __iter__(self):
        return iter(self.polys)

    def __len__(self):
        return len(self.polys)

    def reduce(self, f: Polynomial) -> Polynomial:
        return normal_form(f, self)

    def is_zero_dimensional(self) -> bool:
        n = self.ring.nvars
        pure = set()
        for m in self.leads:
            support = [i for i in range(n) if m[i]]
            if len(support) == 1:
                pure.add(support[0])
            elif not support:
                return True  # unit ideal
        return len(pure) == n

    def is_standard(self, m: Monomial) -> bool:
        return not any(_divides(l, m) for l in self.leads)


def normal_form(f: Polynomial, gb: GroebnerBasis | list[Polynomial]) -> Polynomial:
    """Fully reduced remainder of f modulo the basis."""
    polys = gb.polys if isinstance(gb, GroebnerBasis) else [g for g in gb if g]
    ring = f.ring
    key = ring.key
    fld = ring.field
    leads = [(g.lm(), fld.inv(g.lc()), g) for g in polys]
    p = dict(f.terms)
    rem: dict = {}
    while p:
        m = max(p, key=key)
        c = p[m]
        for lm, inv, g in leads:
            if _divides(lm, m):
                shift = _sub(m, lm)
                q = fld.neg(fld.mul(c, inv))
                for gm, gc in g.terms.items():
                    t = _add(gm, shift)
                    s = fld.add(p.get(t, 0), fld.mul(q, gc))
                    if s:
                        p[t] = s
                    else:
                        p.pop(t, None)
                break
        else:
            rem[m] = c
            del p[m]
    return Polynomial(ring, rem)


def _spoly(f: Polynomial, g: Polynomial) -> Polynomial:
    fld = f.ring.field
    (mf, cf), (mg, cg) = f.lead(), g.lead()
    l = _lcm(mf, mg)
    return f.mul_term(_sub(l, mf), fld.inv(cf)) - g.mul_term(_sub(l, mg), fld.inv(cg))


def groebner(
    gens: Iterable[Polynomial],
    degree_cap: int = DEFAULT_DEGREE_CAP,
    criteria: bool = False,
) -> GroebnerBasis:
    """Buchberger's algorithm, returning the reduced basis.

    With ``criteria`` the coprime-leads and chain criteria prune pairs; the
    naive loop is the default.  Any S-pair whose lcm exceeds ``degree_cap``
    aborts with DegreeCapExceeded.
    """
    gens = [g for g in gens if g]
    if not gens:
        raise ValueError("empty generator list")
    ring = gens[0].ring
    key = ring.key
    basis: list[Polynomial] = []
    for g in gens:
        g = normal_form(g, basis) if basis else g
        if g:
            basis.append(g)
    pairs = {(i, j) for j in range(len(basis)) for i in range(j)}
    done: set = set()

    def pair_key(ij):
        i, j = ij
        return (key(_lcm(basis[i].lm(), basis[j].lm())), ij)

    while pairs:
        ij = min(pairs, key=pair_key)
        pairs.discard(ij)
        i, j = ij
        li, lj = basis[i].lm(), basis[j].lm()
        l = _lcm(li, lj)
        if sum(l) > degree_cap:
            raise DegreeCapExceeded(f"S-pair of degree {sum(l)} exceeds cap {degree_cap}")
        if criteria:
            if all(a == 0 or b == 0 for a, b in zip(li, lj)):
                done.add(ij)
                continue
            chain = False
            for k in range(len(basis)):
                if k in (i, j) or not _divides(basis[k].lm(), l):
                    continue
                ik, jk = tuple(sorted((i, k))), tuple(sorted((j, k)))
                if ik not in pairs and jk not in pairs:
                    chain = True
                    break
            if chain:
                done.add(ij)
                continue
        done.add(ij)
        h = normal_form(_spoly(basis[i], basis[j]), basis)
        if h:
            if h.degree() > degree_cap:
                raise DegreeCapExceeded(f"basis element of degree {h.degree()} exceeds cap {degree_cap}")
            basis.append(h)
            n = len(basis) - 1
            pairs |= {(k, n) for k in range(n)}
    # minimalize and reduce
    basis.sort(key=lambda g: key(g.lm()))
    minimal: list[Polynomial] = []
    for g in basis:
        if not any(_divides(h.lm(), g.lm()) for h in minimal):
            minimal.append(g)
    reduced = []
    for idx, g in enumerate(minimal):
        others = minimal[:idx] + minimal[idx + 1 :]
        r = normal_form(g, others)
        reduced.append(r.scale(ring.field.inv(r.lc())))
    reduced.sort(key=lambda g: key(g.lm()))
    return GroebnerBasis(ring, reduced)


def standard_monomials(gb: GroebnerBasis, degree: int | None = None) -> list[Monomial]:
    """Monomials outside the leading-term ideal.

    With ``degree`` only that degree is returned; otherwise all of them,
    which requires a zero-dimensional ideal.
    """
    n = gb.ring.nvars
    key = gb.ring.key
    if degree is not None:
        return sorted((m for m in monomials_of_degree(n, degree) if gb.is_standard(m)), key=key)
    if not gb.is_zero_dimensional():
        raise NotZeroDimensional("quotient is infinite dimensional")
    out = []
    d = 0
    while True:
        layer = [m for m in monomials_of_degree(n, d) if gb.is_standard(m)]
        if not layer:
            break
        out.extend(layer)
        d += 1
    return sorted(out, key=key)
