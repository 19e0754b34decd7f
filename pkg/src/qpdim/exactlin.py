"""Exact dense linear algebra over GF(p) and the rationals.

Matrices are plain numpy arrays.  Over GF(p) with small p they are int64
and reduced mod p after every step (all products stay below 2**40); larger
primes use Python ints in an object array, and characteristic 0 uses
``Fraction`` entries.
"""
from __future__ import annotations

import random
from fractions import Fraction

import numpy as np

__all__ = [
    "Field",
    "FieldError",
    "rref",
    "rank",
    "kernel_basis",
    "solve",
]

SMALL_PRIME = 1 << 20
MAX_PRIME = 1 << 61


class FieldError(ValueError):
    pass


def _is_prime(n: int) -> bool:
    from sympy import isprime

    return bool(isprime(n))


class Field:
    """GF(p) for a prime ``p < 2**61``, or the rationals when ``char == 0``."""

    def __init__(self, char: int):
        char = int(char)
        if char < 0:
            raise FieldError(f"negative characteristic {char}")
        if char:
            if char >= MAX_PRIME:
                raise FieldError(f"characteristic {char} too large (need p < 2**61)")
            if not _is_prime(char):
                raise FieldError(f"{char} is not prime")
        self.char = char
        self.fast = 0 < char < SMALL_PRIME
        self.dtype = np.int64 if self.fast else object

    def __eq__(self, other):
        return isinstance(other, Field) and other.char == self.char

    def __hash__(self):
        return hash(("Field", self.char))

    def __repr__(self):
        return f"GF({self.char})" if self.char else "QQ"

    @property
    def size(self) -> int | None:
        return self.char or None

    # scalars

    def scalar(self, x):
        p = self.char
        if not p:
            return Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator % p == 0:
                raise ZeroDivisionError(f"denominator divisible by {p}")
            return x.numerator * pow(x.denominator, -1, p) % p
        return int(x) % p

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        if not self.char:
            return 1 / Fraction(a)
        return pow(int(a), -1, self.char)

    def mul(self, a, b):
        return a * b % self.char if self.char else a * b

    def add(self, a, b):
        return (a + b) % self.char if self.char else a + b

    def neg(self, a):
        return (-a) % self.char if self.char else -a

    def signed(self, a) -> int | Fraction:
        """Representative of smallest absolute value, for printing."""
        if not self.char:
            return a
        a = int(a)
        return a - self.char if a > self.char // 2 else a

    # arrays

    def _mod(self, a):
        if self.char:
            a %= self.char
        return a

    def zeros(self, r: int, c: int) -> np.ndarray:
        z = np.zeros((r, c), dtype=self.dtype)
        if not self.char and z.size:
            z[...] = Fraction(0)
        return z

    def eye(self, n: int) -> np.ndarray:
        m = self.zeros(n, n)
        for i in range(n):
            m[i, i] = 1 if self.char else Fraction(1)
        return m

    def array(self, rows, shape: tuple[int, int] | None = None) -> np.ndarray:
        rows = [list(r) for r in rows]
        if shape is None:
            shape = (len(rows), len(rows[0]) if rows else 0)
        m = self.zeros(*shape)
        for i, row in enumerate(rows):
            if len(row) != shape[1]:
                raise ValueError("ragged matrix")
            for j, x in enumerate(row):
                m[i, j] = self.scalar(x)
        return m

    def asarray(self, m) -> np.ndarray:
        """Coerce an existing array to this field's dtype and normal form."""
        m = np.asarray(m)
        if m.ndim != 2:
            raise ValueError("expected a 2-d array")
        if self.fast:
            return np.asarray(m, dtype=np.int64) % self.char
        out = self.zeros(*m.shape)
        for idx, x in np.ndenumerate(m):
            out[idx] = self.scalar(x)
        return out

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if a.shape[1] != b.shape[0]:
            raise ValueError(f"dimension mismatch {a.shape} @ {b.shape}")
        if a.shape[1] == 0:
            return self.zeros(a.shape[0], b.shape[1])
        return self._mod(a @ b)

    def is_zero(self, m: np.ndarray) -> bool:
        return not np.any(m)

    def random_matrix(self, rng: random.Random, r: int, c: int) -> np.ndarray:
        return self.array([[self.random_scalar(rng) for _ in range(c)] for _ in range(r)], (r, c))

    def random_scalar(self, rng: random.Random):
        if self.char:
            return rng.randrange(self.char)
        return Fraction(rng.randint(-9, 9), rng.randint(1, 4))

    def elements(self):
        """All field elements, or None for an infinite field."""
        return range(self.char) if self.char else None

    # elimination

    def rref(self, m: np.ndarray) -> tuple[np.ndarray, list[int]]:
        """Reduced row echelon form and pivot columns.

        The pivot in each column is the first nonzero entry at or below the
        current row, so the result is a deterministic function of ``m``.
        """
        a = np.array(m, dtype=self.dtype, copy=True)
        rows, cols = a.shape
        pivots: list[int] = []
        r = 0
        for c in range(cols):
            if r == rows:
                break
            nz = np.flatnonzero(a[r:, c])
            if nz.size == 0:
                continue
            k = r + int(nz[0])
            if k != r:
                a[[r, k]] = a[[k, r]]
            inv = self.inv(a[r, c])
            a[r] = self._mod(a[r] * inv)
            f = a[:, c].copy()
            f[r] = 0
            hit = np.flatnonzero(f)
            if hit.size:
                a[hit] = self._mod(a[hit] - np.outer(f[hit], a[r]))
            pivots.append(c)
            r += 1
        return a, pivots

    def rank(self, m: np.ndarray) -> int:
        if m.shape[0] > m.shape[1]:
            m = m.T
        return len(self.rref(m)[1])

    def row_basis(self, m: np.ndarray) -> np.ndarray:
        """Nonzero rows of the reduced echelon form (a canonical row-space basis)."""
        r, piv = self.rref(m)
        return r[: len(piv)]

    def column_basis(self, m: np.ndarray) -> np.ndarray:
        """Canonical basis of the column space, as columns."""
        return self.row_basis(m.T).T

    def kernel_basis(self, m: np.ndarray) -> np.ndarray:
        """Columns spanning the right null space; identity on the free columns."""
        cols = m.shape[1]
        r, piv = self.rref(m)
        free = [c for c in range(cols) if c not in set(piv)]
        k = self.zeros(cols, len(free))
        for j, f in enumerate(free):
            k[f, j] = 1
            for i, p in enumerate(piv):
                k[p, j] = self._mod(-r[i, f])
        return k

    def solve(self, a: np.ndarray, b: np.ndarray) -> np.ndarray | None:
        """Some X with ``a @ X == b``, or None when no solution exists."""
        if a.shape[0] != b.shape[0]:
            raise ValueError(f"dimension mismatch {a.shape} vs {b.shape}")
        n = a.shape[1]
        r, piv = self.rref(np.concatenate([a, b], axis=1))
        if piv and piv[-1] >= n:
            return None
        x = self.zeros(n, b.shape[1])
        for i, p in enumerate(piv):
            x[p] = r[i, n:]
        return x

    def inverse(self, m: np.ndarray) -> np.ndarray:
        n = m.shape[0]
        if m.shape != (n, n):
            raise ValueError("inverse of a non-square matrix")
        x = self.solve(m, self.eye(n))
        if x is None or self.rank(m) != n:
            raise ZeroDivisionError("singular matrix")
        return x


def rref(m: np.ndarray, field: Field) -> tuple[np.ndarray, list[int], int]:
    r, piv = field.rref(m)
    return r, piv, len(piv)


def rank(m: np.ndarray, field: Field) -> int:
    return field.rank(m)


def kernel_basis(m: np.ndarray, field: Field) -> np.ndarray:
    return field.kernel_basis(m)


def solve(a: np.ndarray, b: np.ndarray, field: Field) -> np.ndarray | None:
    return field.solve(a, b)
