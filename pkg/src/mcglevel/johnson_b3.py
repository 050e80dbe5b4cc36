"""Johnson's Boolean polynomial modules B^n over Z_2.

A BPoly is a set of squarefree monomials, each a frozenset of basis indices
1..2g (X_i = A_i, X_{g+i} = B_i). The empty monomial is the constant 1.
Coefficients live in Z_2, so a polynomial is just its support and addition is
symmetric difference.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb

import numpy as np

from .errors import DegreeOverflow, GenusMismatch
from .z2homology import Z2Class, pair_bits

MAX_DEGREE = 3


@dataclass(frozen=True)
class BPoly:
    support: frozenset
    genus: int

    def __post_init__(self):
        for m in self.support:
            if len(m) > MAX_DEGREE:
                raise DegreeOverflow(f"monomial {sorted(m)} has degree > {MAX_DEGREE}")
            if any(not 1 <= i <= 2 * self.genus for i in m):
                raise ValueError(f"monomial {sorted(m)} out of range for genus {self.genus}")

    @classmethod
    def zero(cls, g: int) -> "BPoly":
        return cls(frozenset(), g)

    @classmethod
    def one(cls, g: int) -> "BPoly":
        return cls(frozenset([frozenset()]), g)

    @classmethod
    def var(cls, k: int, g: int) -> "BPoly":
        """The generator Xbar_k, 1 <= k <= 2g."""
        return cls(frozenset([frozenset([k])]), g)

    @classmethod
    def monomial(cls, ks, g: int) -> "BPoly":
        return cls(frozenset([frozenset(ks)]), g)

    def _check(self, other: "BPoly"):
        if self.genus != other.genus:
            raise GenusMismatch(f"genus {self.genus} vs {other.genus}")

    def __add__(self, other: "BPoly") -> "BPoly":
        self._check(other)
        return BPoly(self.support ^ other.support, self.genus)

    def __mul__(self, other: "BPoly") -> "BPoly":
        return mul_truncated(self, other)

    def degree(self) -> int:
        return max((len(m) for m in self.support), default=-1)

    def __str__(self) -> str:
        if not self.support:
            return "0"
        g = self.genus

        def name(k):
            return f"A{k}" if k <= g else f"B{k - g}"

        terms = sorted(self.support, key=lambda m: (len(m), sorted(m)))
        return " + ".join("1" if not m else "*".join(name(k) for k in sorted(m)) for m in terms)


def mul_truncated(a: BPoly, b: BPoly) -> BPoly:
    """Product with idempotent variables; error if any product monomial exceeds degree 3."""
    a._check(b)
    out: set = set()
    for m, n in itertools.product(a.support, b.support):
        u = m | n
        if len(u) > MAX_DEGREE:
            raise DegreeOverflow(f"product monomial {sorted(u)} has degree {len(u)}")
        out ^= {u}
    return BPoly(frozenset(out), a.genus)


def reduce_symbol(x: Z2Class) -> BPoly:
    """xbar in the squarefree basis, splitting off the lowest index first.

    Uses xbar = Xbar_k + (x - X_k)bar + (X_k . (x - X_k)) * 1 recursively, which
    yields sum_{i in S} Xbar_i + sum_{i<j in S} (X_i . X_j) * 1.
    """
    g = x.genus
    if x.bits == 0:
        return BPoly.zero(g)
    low = (x.bits & -x.bits).bit_length() - 1
    rest = Z2Class(x.bits ^ (1 << low), g)
    out = BPoly.var(low + 1, g) + reduce_symbol(rest)
    if pair_bits(1 << low, rest.bits, g):
        out = out + BPoly.one(g)
    return out


def reduce_split(x: Z2Class, y: Z2Class) -> BPoly:
    """(x + y)bar expanded through the split x, y."""
    out = reduce_symbol(x) + reduce_symbol(y)
    if pair_bits(x.bits, y.bits, x.genus):
        out = out + BPoly.one(x.genus)
    return out


def b3_basis(g: int) -> list[frozenset]:
    """Squarefree monomials of degree <= 3 in 2g variables, ordered by degree then index."""
    idx = range(1, 2 * g + 1)
    return [frozenset(c) for n in range(MAX_DEGREE + 1) for c in itertools.combinations(idx, n)]


def b3_dimension(g: int) -> int:
    n = 2 * g
    return sum(comb(n, k) for k in range(MAX_DEGREE + 1))


def to_vector(p: BPoly, basis: list[frozenset] | None = None) -> np.ndarray:
    basis = basis or b3_basis(p.genus)
    pos = {m: i for i, m in enumerate(basis)}
    v = np.zeros(len(basis), dtype=np.int64)
    for m in p.support:
        v[pos[m]] = 1
    return v


def alpha(g: int) -> BPoly:
    """sum_i Abar_i Bbar_i."""
    out = BPoly.zero(g)
    for i in range(1, g + 1):
        out = out + BPoly.monomial([i, g + i], g)
    return out


def alpha_multiplication_map(g: int) -> np.ndarray:
    """Z_2 matrix (rows: B^3 basis, columns: 1, Xbar_1..Xbar_2g) of x -> x * alpha."""
    basis = b3_basis(g)
    a = alpha(g)
    cols = [to_vector(BPoly.one(g) * a, basis)]
    cols += [to_vector(BPoly.var(k, g) * a, basis) for k in range(1, 2 * g + 1)]
    return np.stack(cols, axis=1)


def rank_gf2(m: np.ndarray) -> int:
    a = np.array(m, dtype=np.uint8) % 2
    rank = 0
    rows, cols = a.shape
    for c in range(cols):
        pivot = next((r for r in range(rank, rows) if a[r, c]), None)
        if pivot is None:
            continue
        a[[rank, pivot]] = a[[pivot, rank]]
        for r in range(rows):
            if r != rank and a[r, c]:
                a[r] ^= a[rank]
        rank += 1
    return rank


def closed_b3_dimension(g: int) -> int:
    """dim B^3_{g,1} minus the rank of multiplication by alpha on B^1."""
    return b3_dimension(g) - rank_gf2(alpha_multiplication_map(g))


def b3_orders(g: int) -> tuple[int, int]:
    """(|B^3_{g,1}|, |B^3_{g,1}/<1>|)."""
    if g < 1:
        raise ValueError("genus must be positive")
    dim = b3_dimension(g)
    return 2**dim, 2 ** (dim - 1)
