"""Smith normal form over Z and over Z/p^k, and finitely generated abelian groups.

Two elimination routes are provided:

* :func:`smith_diagonal` works over the integers with Python ints. Pivots are
  chosen by smallest nonzero absolute value, ties broken by (row, column).
* :func:`smith_diagonal_local` works over the local ring Z/p^k with numpy
  int64 arrays. Pivots are chosen by smallest p-adic valuation, ties broken by
  (row, column).

A presentation that contains ``p^k * e_i`` for every generator has the same
cokernel as its reduction mod p^k, which is what makes the second route
legitimate for the group-ring quotients.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np


def _prime_power(m: int) -> tuple[int, int] | None:
    """Return (p, k) with m == p**k, or None."""
    if m < 2:
        return None
    p = 2
    while p * p <= m:
        if m % p == 0:
            break
        p += 1
    else:
        return m, 1
    k = 0
    while m % p == 0:
        m //= p
        k += 1
    return (p, k) if m == 1 else None


def _factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@dataclass(frozen=True)
class InvariantFactors:
    """A finitely generated abelian group Z^r + Z_{d_1} + ... + Z_{d_k}, d_1 | ... | d_k."""

    factors: tuple[int, ...] = ()
    free_rank: int = 0

    def __post_init__(self):
        for a, b in zip(self.factors, self.factors[1:]):
            if b % a:
                raise ValueError(f"factors {self.factors} are not a divisibility chain")
        if any(f < 2 for f in self.factors):
            raise ValueError("invariant factors must be >= 2")

    @classmethod
    def from_cyclic(cls, orders: Iterable[int], free_rank: int = 0) -> "InvariantFactors":
        """Normalize an arbitrary direct sum of cyclic groups Z_{n_i} (n_i = 0 means Z)."""
        elementary: dict[int, list[int]] = {}
        for n in orders:
            n = abs(int(n))
            if n == 0:
                free_rank += 1
                continue
            for p, e in _factorize(n).items():
                elementary.setdefault(p, []).append(p**e)
        length = max((len(v) for v in elementary.values()), default=0)
        chain = [1] * length
        for p, powers in elementary.items():
            powers.sort()
            for i, q in enumerate(powers):
                chain[length - len(powers) + i] *= q
        return cls(tuple(f for f in chain if f > 1), free_rank)

    @property
    def order(self) -> int | None:
        """Group order, or None when the group is infinite."""
        if self.free_rank:
            return None
        out = 1
        for f in self.factors:
            out *= f
        return out

    def counts(self) -> list[tuple[int, int]]:
        """[(cyclic order, multiplicity), ...] in ascending order."""
        return sorted(Counter(self.factors).items())

    def to_json(self) -> dict:
        return {
            "invariant_factors": [list(c) for c in self.counts()],
            "free_rank": self.free_rank,
            "order": self.order,
        }

    def __str__(self) -> str:
        parts = [f"Z_{n}^{m}" if m > 1 else f"Z_{n}" for n, m in self.counts()]
        if self.free_rank:
            parts.insert(0, f"Z^{self.free_rank}" if self.free_rank > 1 else "Z")
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class PresentationMatrix:
    """Abelian group presentation: generators are columns, relations are rows.

    If ``exponent`` is set, the relations ``exponent * e_i`` for every
    generator are part of the presentation (they are implied, not stored).
    """

    rows: tuple[tuple[int, ...], ...]
    ngens: int
    labels: tuple[str, ...] = field(default=())
    exponent: int | None = None

    def __post_init__(self):
        for r in self.rows:
            if len(r) != self.ngens:
                raise ValueError(f"relation of length {len(r)} for {self.ngens} generators")

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]], ngens: int, labels=(), exponent=None):
        return cls(tuple(tuple(int(v) for v in r) for r in rows), ngens, tuple(labels), exponent)

    def full_rows(self) -> list[list[int]]:
        """All relations including the implied exponent rows."""
        out = [list(r) for r in self.rows]
        if self.exponent is not None:
            for i in range(self.ngens):
                e = [0] * self.ngens
                e[i] = self.exponent
                out.append(e)
        return out

    def to_json(self) -> dict:
        return {
            "generators": list(self.labels) if self.labels else self.ngens,
            "exponent": self.exponent,
            "relations": [list(r) for r in self.rows],
        }


def smith_diagonal(matrix: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero diagonal entries of the Smith normal form of an integer matrix.

    The result is a divisibility chain of positive integers.
    """
    a = [[int(v) for v in row] for row in matrix]
    m = len(a)
    n = len(a[0]) if m else 0
    diag: list[int] = []
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = a[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        a[t], a[i] = a[i], a[t]
        if j != t:
            for row in a:
                row[t], row[j] = row[j], row[t]
        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, m):
                if a[i][t]:
                    q = a[i][t] // p
                    if q:
                        ri, rt = a[i], a[t]
                        for j in range(t, n):
                            ri[j] -= q * rt[j]
                    if a[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if a[t][j]:
                    q = a[t][j] // p
                    if q:
                        for row in a[t:]:
                            row[j] -= q * row[t]
                    if a[t][j]:
                        dirty = True
            if dirty:
                # a remainder is now smaller than the pivot; re-pivot on it
                best = None
                for i in range(t, m):
                    if a[i][t] and (best is None or abs(a[i][t]) < best[0]):
                        best = (abs(a[i][t]), i, t)
                for j in range(t, n):
                    if a[t][j] and (best is None or abs(a[t][j]) < best[0]):
                        best = (abs(a[t][j]), t, j)
                _, i, j = best
                a[t], a[i] = a[i], a[t]
                if j != t:
                    for row in a:
                        row[t], row[j] = row[j], row[t]
                continue
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if a[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            rb, rt = a[bad], a[t]
            for j in range(t, n):
                rt[j] += rb[j]
        diag.append(abs(a[t][t]))
        t += 1
    return diag


def _valuation(arr: np.ndarray, p: int, k: int) -> np.ndarray:
    v = np.full(arr.shape, k, dtype=np.int64)
    nz = arr != 0
    cur = arr.copy()
    val = np.zeros(arr.shape, dtype=np.int64)
    for _ in range(k):
        div = nz & (cur % p == 0)
        val += div
        cur = np.where(div, cur // p, cur)
    v[nz] = val[nz]
    return v


def smith_diagonal_local(matrix, p: int, k: int) -> list[int]:
    """Nonzero Smith diagonal of a matrix over Z/p^k, each entry a power p^v with v < k."""
    mod = p**k
    a = np.asarray(matrix, dtype=np.int64) % mod
    if a.ndim != 2:
        a = a.reshape(0, 0)
    diag: list[int] = []
    while a.size:
        vals = _valuation(a, p, k)
        vmin = int(vals.min())
        if vmin >= k:
            break
        flat = int(np.argmax(vals.ravel() == vmin))
        i, j = divmod(flat, a.shape[1])
        pv = p**vmin
        unit = int(a[i, j]) // pv
        a[i] = (a[i] * pow(unit, -1, mod)) % mod
        col = a[:, j] // pv
        col[i] = 0
        a = (a - np.outer(col, a[i])) % mod
        row = a[i] // pv
        row[j] = 0
        a = (a - np.outer(a[:, j], row)) % mod
        diag.append(pv)
        a = np.delete(np.delete(a, i, axis=0), j, axis=1)
    return diag


def smith_normal_form(pres: PresentationMatrix) -> InvariantFactors:
    """Invariant factors of the cokernel of a presentation."""
    pp = _prime_power(pres.exponent) if pres.exponent else None
    if pp is not None:
        p, k = pp
        rows = [list(r) for r in pres.rows] or np.zeros((0, pres.ngens), dtype=np.int64)
        diag = smith_diagonal_local(rows, p, k)
        orders = [d for d in diag if d > 1] + [pres.exponent] * (pres.ngens - len(diag))
        return InvariantFactors.from_cyclic(orders)
    diag = smith_diagonal(pres.full_rows()) if pres.rows or pres.exponent else []
    orders = [d for d in diag if d > 1]
    return InvariantFactors.from_cyclic(orders, free_rank=pres.ngens - len(diag))


def subgroup_structure(vectors: Sequence[Sequence[int]], modulus: int) -> InvariantFactors:
    """Isomorphism type of the subgroup of (Z_modulus)^N generated by ``vectors``."""
    pp = _prime_power(modulus)
    if pp is not None and len(vectors):
        diag = smith_diagonal_local(vectors, *pp)
    elif len(vectors):
        diag = smith_diagonal([[v % modulus for v in row] for row in vectors])
    else:
        diag = []
    from math import gcd

    return InvariantFactors.from_cyclic(modulus // gcd(d, modulus) for d in diag)


def in_span(vector: Sequence[int], rows: Sequence[Sequence[int]], modulus: int) -> bool:
    """Whether ``vector`` lies in the Z_modulus-span of ``rows``.

    Adjoins the vector as an extra relation and compares quotient orders.
    """
    n = len(vector)
    base = PresentationMatrix.from_rows(rows, n, exponent=modulus)
    extended = PresentationMatrix.from_rows(list(rows) + [list(vector)], n, exponent=modulus)
    return smith_normal_form(base).order == smith_normal_form(extended).order
