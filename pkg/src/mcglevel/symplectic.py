"""Exact integral symplectic matrices and the level-d congruence subgroups.

Coordinates are (A_1, ..., A_g, B_1, ..., B_g) and the form is x . y = x^T J y
with J = [[0, I], [-I, 0]], so A_i . B_i = +1.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import GenusMismatch, NonOrthogonal, NotInIgusa, NotInLevel, NotSymplectic, OddLevelIgusa
from .snf import InvariantFactors


def _obj(rows) -> np.ndarray:
    a = np.array([[int(v) for v in row] for row in rows], dtype=object)
    return a


def identity_matrix(n: int) -> np.ndarray:
    a = np.zeros((n, n), dtype=object)
    for i in range(n):
        a[i, i] = 1
    return a


def j_matrix(g: int) -> np.ndarray:
    j = np.zeros((2 * g, 2 * g), dtype=object)
    for i in range(g):
        j[i, g + i] = 1
        j[g + i, i] = -1
    return j


def unit(i: int, g: int) -> tuple[int, ...]:
    """0-based coordinate vector."""
    v = [0] * (2 * g)
    v[i] = 1
    return tuple(v)


def A(i: int, g: int) -> tuple[int, ...]:
    """Homology class A_i (1-based)."""
    return unit(i - 1, g)


def B(i: int, g: int) -> tuple[int, ...]:
    """Homology class B_i (1-based)."""
    return unit(g + i - 1, g)


def vec_add(*vs: Sequence[int], coeffs: Sequence[int] | None = None) -> tuple[int, ...]:
    coeffs = coeffs or [1] * len(vs)
    return tuple(sum(c * v[k] for c, v in zip(coeffs, vs)) for k in range(len(vs[0])))


def intersection(x: Sequence[int], y: Sequence[int]) -> int:
    """Integral symplectic pairing x . y."""
    if len(x) != len(y) or len(x) % 2:
        raise GenusMismatch(f"vectors of lengths {len(x)} and {len(y)}")
    g = len(x) // 2
    return sum(int(x[i]) * int(y[g + i]) - int(x[g + i]) * int(y[i]) for i in range(g))


class SympElement:
    """An element of Sp(2g; Z), stored as an exact integer matrix."""

    __slots__ = ("entries", "g")

    def __init__(self, entries, g: int | None = None, check: bool = True):
        a = entries if isinstance(entries, np.ndarray) and entries.dtype == object else _obj(entries)
        n = a.shape[0]
        if a.shape != (n, n) or n % 2:
            raise NotSymplectic(f"shape {a.shape} is not 2g x 2g")
        if g is not None and n != 2 * g:
            raise GenusMismatch(f"matrix of size {n} for genus {g}")
        self.g = n // 2
        a.setflags(write=False)
        self.entries = a
        if check and not self.is_symplectic():
            raise NotSymplectic("M^T J M != J")

    def is_symplectic(self) -> bool:
        j = j_matrix(self.g)
        return np.array_equal(self.entries.T.dot(j).dot(self.entries), j)

    @classmethod
    def identity(cls, g: int) -> "SympElement":
        return cls(identity_matrix(2 * g), check=False)

    def _check_genus(self, other: "SympElement"):
        if self.g != other.g:
            raise GenusMismatch(f"genus {self.g} vs {other.g}")

    def __matmul__(self, other: "SympElement") -> "SympElement":
        self._check_genus(other)
        return SympElement(self.entries.dot(other.entries))

    def inverse(self) -> "SympElement":
        # M^{-1} = J^{-1} M^T J, and J^{-1} = -J
        j = j_matrix(self.g)
        return SympElement((-j).dot(self.entries.T).dot(j))

    def __pow__(self, k: int) -> "SympElement":
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        out = np.array(identity_matrix(2 * self.g))
        b = base.entries
        while k:
            if k & 1:
                out = out.dot(b)
            b = b.dot(b)
            k >>= 1
        return SympElement(out)

    def __eq__(self, other) -> bool:
        return isinstance(other, SympElement) and np.array_equal(self.entries, other.entries)

    def __hash__(self):
        return hash(tuple(self.entries.ravel()))

    def __repr__(self) -> str:
        return f"SympElement(g={self.g}, {self.tolist()})"

    def tolist(self) -> list[list[int]]:
        return [[int(v) for v in row] for row in self.entries]

    def apply(self, x: Sequence[int]) -> tuple[int, ...]:
        return tuple(int(v) for v in self.entries.dot(np.array([int(c) for c in x], dtype=object)))

    def to_json(self, level: int | None = None) -> dict:
        return {"g": self.g, "level": level, "entries": [int(v) for v in self.entries.ravel()]}

    @classmethod
    def from_json(cls, data: dict) -> "SympElement":
        g = int(data["g"])
        n = 2 * g
        flat = [int(v) for v in np.asarray(data["entries"], dtype=object).ravel()]
        if len(flat) != n * n:
            raise GenusMismatch(f"{len(flat)} entries for genus {g}")
        return cls([flat[i * n:(i + 1) * n] for i in range(n)], g=g)


def commutator(a: SympElement, b: SympElement) -> SympElement:
    """a b a^-1 b^-1."""
    return a @ b @ a.inverse() @ b.inverse()


def transvection(y: Sequence[int]) -> SympElement:
    """Matrix of x -> x + (y . x) y, i.e. I + y y^T J."""
    if len(y) % 2:
        raise GenusMismatch(f"vector of odd length {len(y)}")
    g = len(y) // 2
    col = np.array([int(v) for v in y], dtype=object).reshape(-1, 1)
    m = identity_matrix(2 * g) + col.dot(col.T).dot(j_matrix(g))
    return SympElement(m)


@dataclass(frozen=True)
class BlockDecomposition:
    """A = I + d [[p, q], [r, s]] with g x g integer blocks."""

    level: int
    p: tuple[tuple[int, ...], ...]
    q: tuple[tuple[int, ...], ...]
    r: tuple[tuple[int, ...], ...]
    s: tuple[tuple[int, ...], ...]

    def reconstruct(self) -> np.ndarray:
        g = len(self.p)
        top = [list(self.p[i]) + list(self.q[i]) for i in range(g)]
        bottom = [list(self.r[i]) + list(self.s[i]) for i in range(g)]
        return identity_matrix(2 * g) + self.level * _obj(top + bottom)


def _divisible(a: SympElement, d: int) -> bool:
    diff = a.entries - identity_matrix(2 * a.g)
    return all(int(v) % d == 0 for v in diff.ravel())


def block_decompose(a: SympElement, d: int) -> BlockDecomposition:
    if d < 1:
        raise ValueError("level must be positive")
    if not _divisible(a, d):
        raise NotInLevel(f"matrix is not congruent to I mod {d}")
    g = a.g
    prime = (a.entries - identity_matrix(2 * g)) // d

    def blk(r0, c0):
        return tuple(tuple(int(prime[r0 + i, c0 + j]) for j in range(g)) for i in range(g))

    return BlockDecomposition(d, blk(0, 0), blk(0, g), blk(g, 0), blk(g, g))


def in_level(a: SympElement, d: int) -> bool:
    return _divisible(a, d)


def in_igusa(a: SympElement, d: int) -> bool:
    """Membership in Gamma_g[d, 2d]: level d and even diagonals of the q and r blocks."""
    if d % 2:
        raise OddLevelIgusa(f"Gamma_g[d,2d] is defined for even d, got {d}")
    if not in_level(a, d):
        return False
    bd = block_decompose(a, d)
    return all(bd.q[i][i] % 2 == 0 and bd.r[i][i] % 2 == 0 for i in range(a.g))


def m_map(a: SympElement, d: int) -> tuple[int, ...]:
    """(p_ij all i,j row-major; q_ij i<=j; r_ij i<=j) mod d, length 2g^2+g."""
    bd = block_decompose(a, d)
    g = a.g
    out = [bd.p[i][j] for i in range(g) for j in range(g)]
    out += [bd.q[i][j] for i in range(g) for j in range(i, g)]
    out += [bd.r[i][j] for i in range(g) for j in range(i, g)]
    return tuple(v % d for v in out)


def m1_map(a: SympElement, d: int) -> tuple[int, ...]:
    """(q_ii; r_ii) mod 2 of the level-d^2 decomposition, length 2g."""
    bd = block_decompose(a, d * d)
    g = a.g
    return tuple(v % 2 for v in [bd.q[i][i] for i in range(g)] + [bd.r[i][i] for i in range(g)])


def m2_map(a: SympElement, d: int) -> tuple[int, ...]:
    """(p_ij all; q_ij i<j; r_ij i<j) mod 2 of the level-d^2 decomposition, length 2g^2-g."""
    if d % 2 == 0:
        if not in_igusa(a, d * d):
            raise NotInIgusa(f"matrix is not in Gamma_g[{d * d},{2 * d * d}]")
    bd = block_decompose(a, d * d)
    g = a.g
    out = [bd.p[i][j] for i in range(g) for j in range(g)]
    out += [bd.q[i][j] for i in range(g) for j in range(i + 1, g)]
    out += [bd.r[i][j] for i in range(g) for j in range(i + 1, g)]
    return tuple(v % 2 for v in out)


def transvection_power_sides(
    a1: int, b1: int, a2: int, d: int, g: int, literal: bool = False
) -> tuple[SympElement, SympElement]:
    """Both sides of the transvection identity for T^d_{a1 A1 + b1 B1 + a2 A2}.

    The leading factor is (T_{A2}^d)^e with e = (d a1 b1 + 1) a2^2, which makes
    the identity exact for every d. With ``literal=True`` the exponent is
    (a1 b1 + 1) a2^2; that version is exact only for d = 1 (for larger d the
    two differ by a nontrivial power of T_{A2}^d).
    """
    if g < 2:
        raise GenusMismatch("needs g >= 2")
    A1, B1, A2 = A(1, g), B(1, g), A(2, g)
    lhs = transvection(vec_add(A1, B1, A2, coeffs=[a1, b1, a2])) ** d
    t_a2 = transvection(A2) ** d
    t_b1 = transvection(B1) ** d
    t_a1 = transvection(A1) ** d
    t_b1a2 = transvection(vec_add(B1, A2)) ** d
    t_a1a2 = transvection(vec_add(A1, A2)) ** d
    rhs = (
        t_a2 ** (((1 if literal else d) * a1 * b1 + 1) * a2 * a2)
        @ (t_b1a2 @ t_a2.inverse() @ t_b1.inverse()) ** (b1 * a2)
        @ (t_a1a2 @ t_a1.inverse() @ t_a2.inverse()) ** (a1 * a2)
        @ transvection(vec_add(A1, B1, coeffs=[a1, b1])) ** d
    )
    return lhs, rhs


def verify_transvection_power(a1: int, b1: int, a2: int, d: int, g: int, literal: bool = False) -> bool:
    lhs, rhs = transvection_power_sides(a1, b1, a2, d, g, literal)
    return lhs == rhs


def verify_lantern(x: Sequence[int], y: Sequence[int]) -> bool:
    """T_{x+y} T_{x-y} == T_x^2 T_y^2 for orthogonal x, y."""
    if intersection(x, y) != 0:
        raise NonOrthogonal(f"x . y = {intersection(x, y)}")
    lhs = transvection(vec_add(x, y)) @ transvection(vec_add(x, y, coeffs=[1, -1]))
    rhs = transvection(x) ** 2 @ transvection(y) ** 2
    return lhs == rhs


def commutator_from_primes(a_prime, b_prime, d: int) -> SympElement:
    """Exact commutator of I + d A' and I + d B'."""
    n = len(a_prime)
    a = identity_matrix(n) + d * _obj(a_prime)
    b = identity_matrix(n) + d * _obj(b_prime)
    try:
        sa, sb = SympElement(a), SympElement(b)
    except NotSymplectic as exc:
        raise NotSymplectic("I + dA' or I + dB' is not symplectic") from exc
    return commutator(sa, sb)


def verify_commutator_congruence(a_prime, b_prime, d: int) -> bool:
    """ABA^-1B^-1 == I + d^2 (A'B' - B'A') mod d^3, entrywise."""
    c = commutator_from_primes(a_prime, b_prime, d)
    ap, bp = _obj(a_prime), _obj(b_prime)
    expected = identity_matrix(len(ap)) + d * d * (ap.dot(bp) - bp.dot(ap))
    m = d**3
    return all(int(u - v) % m == 0 for u, v in zip(c.entries.ravel(), expected.ravel()))


def elementary(i: int, j: int, n: int) -> list[list[int]]:
    """e_{ij} with 1-based indices."""
    e = [[0] * n for _ in range(n)]
    e[i - 1][j - 1] = 1
    return e


def generator_instances(g: int) -> list[tuple[list, list, list]]:
    """The two (A', B') pairs and the expected d^2 coefficient of their commutators."""
    n = 2 * g
    e = lambda i, j: np.array(elementary(i, j, n), dtype=object)  # noqa: E731
    first = (e(1, g + 1), e(g + 1, 1), e(1, 1) - e(g + 1, g + 1))
    second = (e(1, 2) - e(g + 2, g + 1), e(2, g + 2), e(1, g + 2) + e(2, g + 1))
    return [tuple(m.tolist() for m in inst) for inst in (first, second)]


def commutator_matches(a_prime, b_prime, target, d: int) -> bool:
    """Whether the commutator is I + d^2 * target mod d^3."""
    c = commutator_from_primes(a_prime, b_prime, d)
    expected = identity_matrix(len(a_prime)) + d * d * _obj(target)
    m = d**3
    return all(int(u - v) % m == 0 for u, v in zip(c.entries.ravel(), expected.ravel()))


def abelianization_formula(g: int, d: int) -> InvariantFactors:
    """Closed-form H_1(Gamma_g[d]; Z); evaluated from the formula, not from group data."""
    if g < 2 or d < 2:
        raise ValueError("requires g >= 2 and d >= 2")
    if d % 2:
        return InvariantFactors.from_cyclic([d] * (2 * g * g + g))
    return InvariantFactors.from_cyclic([d] * (2 * g * g - g) + [2 * d] * (2 * g))


def basis_transvection_words(g: int):
    return [transvection(unit(i, g)) for i in range(2 * g)]


def random_sp(g: int, rng: random.Random, length: int = 6) -> SympElement:
    """Random product of basis transvections and their inverses."""
    gens = basis_transvection_words(g)
    out = SympElement.identity(g)
    for _ in range(length):
        t = rng.choice(gens)
        out = out @ (t if rng.random() < 0.5 else t.inverse())
    return out


def random_level_element(g: int, d: int, rng: random.Random, max_length: int = 12) -> SympElement:
    """Heuristic sample of Gamma_g[d]: product of conjugates S T_x^{+-d} S^-1."""
    out = SympElement.identity(g)
    for _ in range(rng.randint(1, max_length)):
        s = random_sp(g, rng, rng.randint(0, 4))
        x = unit(rng.randrange(2 * g), g)
        t = transvection(x) ** (d if rng.random() < 0.5 else -d)
        out = out @ s @ t @ s.inverse()
    return out


def random_orthogonal_pair(g: int, rng: random.Random, bound: int = 3) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Random x, y in Z^{2g} with x . y = 0."""
    while True:
        x = tuple(rng.randint(-bound, bound) for _ in range(2 * g))
        y = tuple(rng.randint(-bound, bound) for _ in range(2 * g))
        if intersection(x, y) == 0:
            return x, y


def transvection_power_grid(values=range(-3, 4), levels=(1, 2, 3, 5), genera=(2, 3)):
    return itertools.product(values, values, values, levels, genera)
