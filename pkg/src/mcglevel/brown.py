"""Z_4-valued quadratic enhancements and their Brown invariants.

An enhancement lives on Z_2^n with a symmetric Z_2 pairing and satisfies
qhat(x + y) = qhat(x) + qhat(y) + 2 x.y in Z_4. Taking x = y forces
qhat(x) = x.x mod 2, so the pairing may have a nonzero diagonal exactly where
the basis value is odd. Alternating pairings (zero diagonal) with even values
are the special case coming from doubled spin forms.

Everything is exact: the Gauss sum is a Gaussian integer and the Brown
invariant is read off by matching it against (1 + i)^n * i^k.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .errors import DegenerateEnhancement, SizeLimit
from .z2homology import SpinForm, q_bits

MAX_DIM = 24


@dataclass(frozen=True)
class GaussianInt:
    re: int
    im: int

    def __add__(self, other: "GaussianInt") -> "GaussianInt":
        return GaussianInt(self.re + other.re, self.im + other.im)

    def __mul__(self, other: "GaussianInt") -> "GaussianInt":
        return GaussianInt(self.re * other.re - self.im * other.im, self.re * other.im + self.im * other.re)

    def norm(self) -> int:
        return self.re * self.re + self.im * self.im

    @classmethod
    def i_power(cls, k: int) -> "GaussianInt":
        return [cls(1, 0), cls(0, 1), cls(-1, 0), cls(0, -1)][k % 4]

    def __pow__(self, n: int) -> "GaussianInt":
        out = GaussianInt(1, 0)
        for _ in range(n):
            out = out * self
        return out

    def tolist(self) -> list[int]:
        return [self.re, self.im]


@dataclass(frozen=True)
class Enhancement:
    dim: int
    pairing: tuple[tuple[int, ...], ...]
    basis_values: tuple[int, ...]

    def __post_init__(self):
        n = self.dim
        if len(self.pairing) != n or any(len(r) != n for r in self.pairing):
            raise ValueError(f"pairing must be {n} x {n}")
        if len(self.basis_values) != n:
            raise ValueError(f"need {n} basis values")
        for i in range(n):
            for j in range(n):
                if self.pairing[i][j] not in (0, 1):
                    raise ValueError("pairing entries must be 0 or 1")
                if self.pairing[i][j] != self.pairing[j][i]:
                    raise ValueError("pairing must be symmetric")
            if self.basis_values[i] not in range(4):
                raise ValueError("basis values must lie in 0..3")
            if self.basis_values[i] % 2 != self.pairing[i][i]:
                raise ValueError(
                    f"basis value {self.basis_values[i]} at index {i} has parity different from x.x = {self.pairing[i][i]}"
                )

    @classmethod
    def build(cls, pairing: Sequence[Sequence[int]], basis_values: Sequence[int]) -> "Enhancement":
        p = tuple(tuple(int(v) % 2 for v in row) for row in pairing)
        return cls(len(p), p, tuple(int(v) % 4 for v in basis_values))

    @classmethod
    def from_json(cls, data: dict) -> "Enhancement":
        e = cls.build(data["pairing"], data["basis_values"])
        if "dim" in data and int(data["dim"]) != e.dim:
            raise ValueError(f"dim {data['dim']} does not match the pairing size {e.dim}")
        return e

    @classmethod
    def load(cls, path: str | Path) -> "Enhancement":
        return cls.from_json(json.loads(Path(path).read_text()))

    def to_json(self) -> dict:
        return {"dim": self.dim, "pairing": [list(r) for r in self.pairing], "basis_values": list(self.basis_values)}

    def is_nondegenerate(self) -> bool:
        return _rank_gf2([sum(b << j for j, b in enumerate(row)) for row in self.pairing]) == self.dim

    def radical(self) -> list[int]:
        """Bitmasks of all v with v.x = 0 for every x."""
        rows = [sum(b << j for j, b in enumerate(row)) for row in self.pairing]
        return [v for v in range(1 << self.dim) if all(bin(r & v).count("1") % 2 == 0 for r in rows)]


def _rank_gf2(rows: list[int]) -> int:
    rank = 0
    rows = list(rows)
    while rows:
        pivot = rows.pop()
        if pivot:
            rank += 1
            low = pivot & -pivot
            rows = [r ^ pivot if r & low else r for r in rows]
    return rank


def qhat_eval(e: Enhancement, x: Sequence[int] | int) -> int:
    """qhat(x) for x given as a bit vector or a bitmask."""
    if isinstance(x, int):
        bits = [(x >> i) & 1 for i in range(e.dim)]
    else:
        if len(x) != e.dim:
            raise ValueError(f"vector of length {len(x)} for dimension {e.dim}")
        bits = [int(v) & 1 for v in x]
    support = [i for i, b in enumerate(bits) if b]
    total = sum(e.basis_values[i] for i in support)
    total += 2 * sum(e.pairing[i][j] for i, j in itertools.combinations(support, 2))
    return total % 4


def value_table(e: Enhancement) -> list[int]:
    """qhat over all 2^n bitmasks, built incrementally by the lowest set bit."""
    n = e.dim
    rows = [sum(b << j for j, b in enumerate(row)) for row in e.pairing]
    table = [0] * (1 << n)
    for x in range(1, 1 << n):
        low = (x & -x).bit_length() - 1
        rest = x & (x - 1)
        cross = bin(rows[low] & rest).count("1")
        table[x] = (table[rest] + e.basis_values[low] + 2 * cross) % 4
    return table


def gauss_sum(e: Enhancement) -> GaussianInt:
    """Sum of i^qhat(x) over Z_2^n, exactly."""
    if e.dim > MAX_DIM:
        raise SizeLimit(f"dimension {e.dim} exceeds the enumeration bound {MAX_DIM}")
    counts = [0, 0, 0, 0]
    for v in value_table(e):
        counts[v] += 1
    return GaussianInt(counts[0] - counts[2], counts[1] - counts[3])


def brown_invariant(e: Enhancement) -> int:
    gs = gauss_sum(e)
    if gs.norm() == 0:
        raise DegenerateEnhancement("Gauss sum vanishes")
    if gs.norm() != 1 << e.dim:
        raise DegenerateEnhancement(f"|Gauss sum|^2 = {gs.norm()} differs from 2^{e.dim}")
    base = GaussianInt(1, 1) ** e.dim
    for k in range(4):
        if base * GaussianInt.i_power(k) == gs:
            return (e.dim + 2 * k) % 8
    raise AssertionError("a Gaussian integer of norm 2^n is (1+i)^n times a unit")


def doubled_spin_form(sigma: SpinForm) -> Enhancement:
    """qhat = 2 q_sigma on H_1(Sigma_g; Z_2) with the intersection pairing."""
    g = sigma.genus
    n = 2 * g
    pairing = [[0] * n for _ in range(n)]
    for i in range(g):
        pairing[i][g + i] = pairing[g + i][i] = 1
    values = [2 * q_bits(sigma.values, 1 << k, g) for k in range(n)]
    return Enhancement.build(pairing, values)


def direct_sum(*parts: Enhancement) -> Enhancement:
    n = sum(p.dim for p in parts)
    pairing = [[0] * n for _ in range(n)]
    values: list[int] = []
    off = 0
    for p in parts:
        for i in range(p.dim):
            for j in range(p.dim):
                pairing[off + i][off + j] = p.pairing[i][j]
        values.extend(p.basis_values)
        off += p.dim
    return Enhancement.build(pairing, values)


# x.x = y.y = x.y = x.z = 1, the rest 0: the pairing forced by the value
# table of the mapping-torus surface F on the basis x = A_1, y = B_1, z = [S^1].
SURFACE_F_PAIRING = ((1, 1, 1), (1, 1, 0), (1, 0, 0))


def surface_f_enhancement(q_a1: int, q_b1: int) -> Enhancement:
    return Enhancement.build(SURFACE_F_PAIRING, [-1 + 2 * q_a1, 1 + 2 * q_b1, 0])


def nondegenerate_pairings(n: int):
    """All symmetric nondegenerate n x n Z_2 matrices."""
    idx = [(i, j) for i in range(n) for j in range(i, n)]
    for bits in itertools.product((0, 1), repeat=len(idx)):
        m = [[0] * n for _ in range(n)]
        for (i, j), b in zip(idx, bits):
            m[i][j] = m[j][i] = b
        if _rank_gf2([sum(b << j for j, b in enumerate(row)) for row in m]) == n:
            yield m


def all_enhancements(pairing: Sequence[Sequence[int]]):
    """Every enhancement on a fixed pairing (two choices of value per basis vector)."""
    n = len(pairing)
    choices = [(pairing[i][i], pairing[i][i] + 2) for i in range(n)]
    for values in itertools.product(*choices):
        yield Enhancement.build(pairing, values)
