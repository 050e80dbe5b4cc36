"""H_1(Sigma_g; Z_2) as a symplectic Z_2-space, spin structures as quadratic forms.

A class is stored as an int bitmask: bit i (0 <= i < g) is the A_{i+1}
coordinate and bit g + i is the B_{i+1} coordinate. The symplectic partner of
basis index i is i + g (mod 2g).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import gcd
from typing import Iterator, Sequence

from .errors import GenusMismatch


def pair_bits(x: int, y: int, g: int) -> int:
    mask = (1 << g) - 1
    return (bin((x & mask) & (y >> g)).count("1") + bin((x >> g) & (y & mask)).count("1")) & 1


@dataclass(frozen=True, order=True)
class Z2Class:
    bits: int
    genus: int

    def __post_init__(self):
        if not 0 <= self.bits < (1 << (2 * self.genus)):
            raise ValueError(f"bits {self.bits} out of range for genus {self.genus}")

    @classmethod
    def zero(cls, g: int) -> "Z2Class":
        return cls(0, g)

    @classmethod
    def A(cls, i: int, g: int) -> "Z2Class":
        return cls(1 << (i - 1), g)

    @classmethod
    def B(cls, i: int, g: int) -> "Z2Class":
        return cls(1 << (g + i - 1), g)

    @classmethod
    def basis(cls, k: int, g: int) -> "Z2Class":
        """X_k for 1 <= k <= 2g (X_i = A_i, X_{g+i} = B_i), indices taken mod 2g."""
        return cls(1 << ((k - 1) % (2 * g)), g)

    @classmethod
    def all(cls, g: int) -> Iterator["Z2Class"]:
        for b in range(1 << (2 * g)):
            yield cls(b, g)

    @classmethod
    def parse(cls, text: str) -> "Z2Class":
        """Parse "a1..ag|b1..bg"."""
        if "|" not in text:
            raise ValueError(f"expected 'a-bits|b-bits', got {text!r}")
        a, b = text.split("|")
        if len(a) != len(b) or set(a + b) - {"0", "1"}:
            raise ValueError(f"malformed class {text!r}")
        g = len(a)
        bits = sum(1 << i for i, c in enumerate(a) if c == "1")
        bits |= sum(1 << (g + i) for i, c in enumerate(b) if c == "1")
        return cls(bits, g)

    def format(self) -> str:
        g = self.genus
        a = "".join("1" if self.bits >> i & 1 else "0" for i in range(g))
        b = "".join("1" if self.bits >> (g + i) & 1 else "0" for i in range(g))
        return f"{a}|{b}"

    def coords(self) -> tuple[int, ...]:
        return tuple(self.bits >> i & 1 for i in range(2 * self.genus))

    def __add__(self, other: "Z2Class") -> "Z2Class":
        if self.genus != other.genus:
            raise GenusMismatch(f"genus {self.genus} vs {other.genus}")
        return Z2Class(self.bits ^ other.bits, self.genus)

    def __str__(self) -> str:
        return self.format()


def pairing(x: Z2Class, y: Z2Class) -> int:
    if x.genus != y.genus:
        raise GenusMismatch(f"genus {x.genus} vs {y.genus}")
    return pair_bits(x.bits, y.bits, x.genus)


@dataclass(frozen=True, order=True)
class SpinForm:
    """A spin structure, given by the values of its quadratic form on X_1..X_2g.

    ``values`` is a bitmask in the same layout as :class:`Z2Class`.
    """

    values: int
    genus: int

    @classmethod
    def zero(cls, g: int) -> "SpinForm":
        """sigma_0: the form vanishing on every basis class."""
        return cls(0, g)

    @classmethod
    def from_basis_values(cls, vals: Sequence[int], g: int) -> "SpinForm":
        if len(vals) != 2 * g:
            raise GenusMismatch(f"{len(vals)} values for genus {g}")
        return cls(sum((v & 1) << i for i, v in enumerate(vals)), g)

    @classmethod
    def parse(cls, text: str) -> "SpinForm":
        """Parse 2g bits, optionally written "a-bits|b-bits"."""
        if "|" in text:
            c = Z2Class.parse(text)
            return cls(c.bits, c.genus)
        if len(text) % 2 or set(text) - {"0", "1"}:
            raise ValueError(f"malformed spin form {text!r}")
        g = len(text) // 2
        return cls(sum(1 << i for i, c in enumerate(text) if c == "1"), g)

    @classmethod
    def all(cls, g: int) -> Iterator["SpinForm"]:
        for v in range(1 << (2 * g)):
            yield cls(v, g)

    def basis_values(self) -> tuple[int, ...]:
        return tuple(self.values >> i & 1 for i in range(2 * self.genus))

    def format(self) -> str:
        return Z2Class(self.values, self.genus).format()


def q_bits(values: int, x: int, g: int) -> int:
    # q(sum of basis elements) = sum of their values + sum of pairings between them;
    # among basis vectors only A_i, B_i pair nontrivially
    mask = (1 << g) - 1
    return (bin(x & values).count("1") + bin((x & mask) & (x >> g)).count("1")) & 1


def q_eval(sigma: SpinForm, x: Z2Class) -> int:
    if sigma.genus != x.genus:
        raise GenusMismatch(f"genus {sigma.genus} vs {x.genus}")
    return q_bits(sigma.values, x.bits, sigma.genus)


def arf(sigma: SpinForm) -> int:
    g = sigma.genus
    v = sigma.values
    return sum((v >> i & 1) * (v >> (g + i) & 1) for i in range(g)) & 1


def arf_by_majority(sigma: SpinForm) -> int:
    """The value q takes on more than half of all classes."""
    g = sigma.genus
    ones = sum(q_bits(sigma.values, x, g) for x in range(1 << (2 * g)))
    return int(ones > (1 << (2 * g)) // 2)


def act(sigma: SpinForm, x: Z2Class) -> SpinForm:
    """sigma + x, with q_{sigma+x}(y) = q_sigma(y) + x . y."""
    if sigma.genus != x.genus:
        raise GenusMismatch(f"genus {sigma.genus} vs {x.genus}")
    g = sigma.genus
    # x . X_i is the partner coordinate of x
    mask = (1 << g) - 1
    swapped = ((x.bits & mask) << g) | (x.bits >> g)
    return SpinForm(sigma.values ^ swapped, g)


def indicator(x: Z2Class) -> list[int]:
    """Table of i_x(y) over y = 0 .. 2^{2g}-1, as Z_8 values."""
    g = x.genus
    return [pair_bits(x.bits, y, g) for y in range(1 << (2 * g))]


def sign_I(xs: Sequence[Z2Class]) -> int:
    """Sum of pairwise intersections mod 2."""
    if not xs:
        raise ValueError("I needs at least one class")
    return sum(pairing(a, b) for a, b in itertools.combinations(xs, 2)) & 1


def primitive_mod_d(x: Sequence[int], d: int) -> bool:
    """Whether x in Z_d^n is primitive, i.e. gcd(x_1, ..., x_n, d) == 1."""
    if d < 2:
        raise ValueError("d must be >= 2")
    out = d
    for v in x:
        out = gcd(out, int(v) % d)
    return out == 1


def sd_representative(x: Sequence[int], d: int) -> tuple[int, ...]:
    """Canonical representative of the class of x in S_d: the smaller of x, -x."""
    pos = tuple(int(v) % d for v in x)
    neg = tuple((-v) % d for v in pos)
    return min(pos, neg)


def enumerate_sd(n: int, d: int) -> list[tuple[int, ...]]:
    """All classes of primitive vectors of Z_d^n modulo sign."""
    out = set()
    for x in itertools.product(range(d), repeat=n):
        if primitive_mod_d(x, d):
            out.add(sd_representative(x, d))
    return sorted(out)
