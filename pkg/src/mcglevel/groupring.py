"""The group ring Z_8[H] for H = H_1(Sigma_g; Z_2), the Delta elements and the submodules L.

Elements are dense int64 vectors of length 2^{2g}, indexed by the bitmask of
the class (see :mod:`mcglevel.z2homology`).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb
from typing import Callable, Sequence

import numpy as np

from .errors import GenusMismatch, SizeLimit
from .snf import InvariantFactors, PresentationMatrix, in_span, smith_normal_form
from .z2homology import SpinForm, Z2Class, pair_bits, q_bits

MODULUS = 8
MAX_GENUS = 4


@dataclass(frozen=True, eq=False)
class GroupRingElt:
    coeffs: np.ndarray
    genus: int

    def __post_init__(self):
        if self.coeffs.shape != (1 << (2 * self.genus),):
            raise ValueError(f"coefficient vector of shape {self.coeffs.shape} for genus {self.genus}")
        c = np.mod(self.coeffs, MODULUS).astype(np.int64)
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def zero(cls, g: int) -> "GroupRingElt":
        return cls(np.zeros(1 << (2 * g), dtype=np.int64), g)

    @classmethod
    def symbol(cls, x: Z2Class) -> "GroupRingElt":
        """The basis element [x]."""
        c = np.zeros(1 << (2 * x.genus), dtype=np.int64)
        c[x.bits] = 1
        return cls(c, x.genus)

    def _check(self, other: "GroupRingElt"):
        if self.genus != other.genus:
            raise GenusMismatch(f"genus {self.genus} vs {other.genus}")

    def __add__(self, other: "GroupRingElt") -> "GroupRingElt":
        self._check(other)
        return GroupRingElt(self.coeffs + other.coeffs, self.genus)

    def __sub__(self, other: "GroupRingElt") -> "GroupRingElt":
        self._check(other)
        return GroupRingElt(self.coeffs - other.coeffs, self.genus)

    def __neg__(self) -> "GroupRingElt":
        return GroupRingElt(-self.coeffs, self.genus)

    def __rmul__(self, k: int) -> "GroupRingElt":
        return GroupRingElt(int(k) * self.coeffs, self.genus)

    def __eq__(self, other) -> bool:
        return isinstance(other, GroupRingElt) and self.genus == other.genus and np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash((self.genus, self.coeffs.tobytes()))

    def support(self) -> dict[str, int]:
        return {Z2Class(int(b), self.genus).format(): int(self.coeffs[b]) for b in np.flatnonzero(self.coeffs)}

    def __repr__(self) -> str:
        return f"GroupRingElt(g={self.genus}, {self.support()})"


def _genus_of(xs: Sequence[Z2Class]) -> int:
    if not xs:
        raise ValueError("needs at least one class")
    g = xs[0].genus
    if any(x.genus != g for x in xs):
        raise GenusMismatch("classes of different genus")
    return g


def subset_expansion(xs: Sequence[Z2Class], sign: Callable[[tuple[int, ...], int], int]) -> GroupRingElt:
    """Sum over nonempty index subsets S of sign(S, bits of sum) * [sum over S]."""
    g = _genus_of(xs)
    c = np.zeros(1 << (2 * g), dtype=np.int64)
    n = len(xs)
    for mask in range(1, 1 << n):
        idx = tuple(i for i in range(n) if mask >> i & 1)
        total = 0
        for i in idx:
            total ^= xs[i].bits
        c[total] += sign(idx, total)
    return GroupRingElt(c, g)


def delta0(xs: Sequence[Z2Class]) -> GroupRingElt:
    """Delta_0^n(x_1, ..., x_n): subset sums signed by (-1)^{I(x_S)}."""
    g = _genus_of(xs)
    bits = [x.bits for x in xs]

    def sign(idx, _total):
        s = sum(pair_bits(bits[i], bits[j], g) for i, j in itertools.combinations(idx, 2))
        return -1 if s & 1 else 1

    return subset_expansion(xs, sign)


def delta_sigma(sigma: SpinForm, xs: Sequence[Z2Class]) -> GroupRingElt:
    """Delta_sigma^n(x_1, ..., x_n): subset sums signed by (-1)^{q_sigma(x_S)}."""
    g = _genus_of(xs)
    if sigma.genus != g:
        raise GenusMismatch(f"spin form of genus {sigma.genus} for classes of genus {g}")
    return subset_expansion(xs, lambda _idx, total: -1 if q_bits(sigma.values, total, g) else 1)


def delta_sigma_signed(sigma: SpinForm, xs: Sequence[Z2Class]) -> GroupRingElt:
    """Inclusion-exclusion variant: subset S carries the extra sign (-1)^{|S|+1}."""
    g = _genus_of(xs)
    if sigma.genus != g:
        raise GenusMismatch(f"spin form of genus {sigma.genus} for classes of genus {g}")

    def sign(idx, total):
        s = -1 if q_bits(sigma.values, total, g) else 1
        return s if len(idx) % 2 else -s

    return subset_expansion(xs, sign)


def twisted_shift(e: GroupRingElt, y: Z2Class) -> GroupRingElt:
    """sum_z c_z (-1)^{z.y} [z + y] for e = sum_z c_z [z]."""
    e._check(GroupRingElt.zero(y.genus))
    g = y.genus
    c = np.zeros_like(e.coeffs)
    for z in np.flatnonzero(e.coeffs):
        sign = -1 if pair_bits(int(z), y.bits, g) else 1
        c[int(z) ^ y.bits] += sign * e.coeffs[z]
    return GroupRingElt(c, g)


def delta0_recurrence_rhs(xs: Sequence[Z2Class], y: Z2Class) -> GroupRingElt:
    """Delta^n(x) + [y] + (Delta^n(x) shifted by y): equals Delta^{n+1}(x_1, ..., x_n, y)."""
    d = delta0(xs)
    return d + GroupRingElt.symbol(y) + twisted_shift(d, y)


def check_recurrence(g: int, trials: int, rng, max_n: int = 5) -> dict:
    """Compare Delta^{n+1} with the recurrence on random tuples."""
    bad = []
    for _ in range(trials):
        n = rng.randint(1, max_n - 1)
        xs = [random_class(g, rng) for _ in range(n)]
        y = random_class(g, rng)
        if delta0(xs + [y]) != delta0_recurrence_rhs(xs, y):
            bad.append([x.format() for x in xs] + [y.format()])
    return {"g": g, "trials": trials, "failures": bad, "holds": not bad}


def basis_classes(g: int) -> list[Z2Class]:
    """X_1, ..., X_2g in block order (A_1..A_g, B_1..B_g)."""
    return [Z2Class.basis(k, g) for k in range(1, 2 * g + 1)]


def _name(k: int, g: int) -> str:
    return f"A{k + 1}" if k < g else f"B{k - g + 1}"


def build_L_open(g: int, delta: Callable | None = None, min_full: int = 4) -> list[tuple[str, GroupRingElt]]:
    """Labelled generators of L_{g,1} over the symplectic basis.

    [0]; 4 Delta^2(X_i, X_j); 2 Delta^3(X_i, X_j, X_k); Delta^n(X_{i_1}, ..., X_{i_n})
    for every basis subset of size n >= ``min_full``. ``delta`` defaults to Delta_0.
    """
    delta = delta or delta0
    basis = basis_classes(g)
    out = [("[0]", GroupRingElt.symbol(Z2Class.zero(g)))]
    for i, j in itertools.combinations(range(2 * g), 2):
        out.append((f"4D({_name(i, g)},{_name(j, g)})", 4 * delta([basis[i], basis[j]])))
    for idx in itertools.combinations(range(2 * g), 3):
        out.append((f"2D({','.join(_name(k, g) for k in idx)})", 2 * delta([basis[k] for k in idx])))
    for n in range(min_full, 2 * g + 1):
        for idx in itertools.combinations(range(2 * g), n):
            out.append((f"D({','.join(_name(k, g) for k in idx)})", delta([basis[k] for k in idx])))
    return out


def closed_extra_generators(g: int) -> list[tuple[str, GroupRingElt]]:
    """The images under iota of the closed-surface kernel generators."""
    A, B = Z2Class.A, Z2Class.B
    first = GroupRingElt.zero(g)
    for i in range(1, g + 1):
        a, b = A(i, g), B(i, g)
        first = first + 2 * delta0([a, b]) + 4 * GroupRingElt.symbol(a) + 4 * GroupRingElt.symbol(b)
    out = [("sum_i 2D(Ai,Bi)+4[Ai]+4[Bi]", first)]
    for k, x in enumerate(basis_classes(g)):
        e = GroupRingElt.zero(g)
        for i in range(1, g + 1):
            a, b = A(i, g), B(i, g)
            e = e + delta0([a, b, x]) + 2 * delta0([a, x]) + 2 * delta0([b, x]) + 4 * GroupRingElt.symbol(x)
        out.append((f"sum_i D(Ai,Bi,{_name(k, g)})+...", e))
    return out


def build_L_closed(g: int) -> list[tuple[str, GroupRingElt]]:
    return build_L_open(g) + closed_extra_generators(g)


def class_labels(g: int) -> list[str]:
    return [Z2Class(b, g).format() for b in range(1 << (2 * g))]


def presentation(gens: Sequence[GroupRingElt], g: int) -> PresentationMatrix:
    """Z-presentation of Z_8[H] / span(gens): one generator per class, 8 e_X implied."""
    rows = np.array([e.coeffs for e in gens], dtype=np.int64).reshape(len(gens), 1 << (2 * g))
    return PresentationMatrix.from_rows(rows.tolist(), 1 << (2 * g), labels=class_labels(g), exponent=MODULUS)


def _guard(g: int, max_genus: int):
    if g < 1:
        raise ValueError("genus must be positive")
    if g > max_genus:
        raise SizeLimit(f"genus {g} exceeds the size guard (max {max_genus}; 2^{2 * g} generators)")


def quotient_presentation(g: int, closed: bool = False, max_genus: int = MAX_GENUS) -> PresentationMatrix:
    _guard(g, max_genus)
    gens = build_L_closed(g) if closed else build_L_open(g)
    return presentation([e for _, e in gens], g)


def quotient_structure(g: int, closed: bool = False, max_genus: int = MAX_GENUS) -> InvariantFactors:
    """Invariant factors of Z_8[H] / L_{g,1} (or L_g when ``closed``)."""
    return smith_normal_form(quotient_presentation(g, closed, max_genus))


def expected_open_structure(g: int) -> InvariantFactors:
    """Z_8^{2g} + Z_4^{C(2g,2)} + Z_2^{C(2g,3)}."""
    n = 2 * g
    return InvariantFactors.from_cyclic([8] * n + [4] * comb(n, 2) + [2] * comb(n, 3))


def in_L_span(e: GroupRingElt, closed: bool = False, extra: Sequence[GroupRingElt] = ()) -> bool:
    """Whether e lies in L (plus ``extra``), by comparing quotient orders."""
    g = e.genus
    _guard(g, MAX_GENUS)
    gens = [x for _, x in (build_L_closed(g) if closed else build_L_open(g))] + list(extra)
    return in_span(e.coeffs.tolist(), [x.coeffs.tolist() for x in gens], MODULUS)


def random_class(g: int, rng, nonzero: bool = True) -> Z2Class:
    lo = 1 if nonzero else 0
    return Z2Class(rng.randrange(lo, 1 << (2 * g)), g)


def random_L_generators(g: int, count: int, rng, max_n: int = 5) -> list[GroupRingElt]:
    """Generators 4D^2, 2D^3, D^n (4 <= n <= max_n) on arbitrary, mostly non-basis classes."""
    out = []
    for _ in range(count):
        kind = rng.randrange(3)
        if kind == 0:
            out.append(4 * delta0([random_class(g, rng) for _ in range(2)]))
        elif kind == 1:
            out.append(2 * delta0([random_class(g, rng) for _ in range(3)]))
        else:
            n = rng.randint(4, max_n)
            out.append(delta0([random_class(g, rng) for _ in range(n)]))
    return out


def counting_identity(g: int) -> dict:
    """|B^3_{g,1}/<1>| * |H_1(Gamma_g[2])| against 2^{6g + 2 C(2g,2) + C(2g,3)}."""
    from .johnson_b3 import b3_orders
    from .symplectic import abelianization_formula

    if g < 2:
        raise ValueError("counting identity needs g >= 2")
    _, b3_mod_one = b3_orders(g)
    h1 = abelianization_formula(g, 2).order
    lhs = b3_mod_one * h1
    rhs = 2 ** (6 * g + 2 * comb(2 * g, 2) + comb(2 * g, 3))
    return {"g": g, "lhs": lhs, "rhs": rhs, "holds": lhs == rhs and rhs == expected_open_structure(g).order}
