"""Free-group words, the degree-2 Magnus expansion over Z_d and the mod-d Johnson map.

Generators of pi_1(Sigma_{g,1}) are coded 1..g for a_1..a_g and g+1..2g for
b_1..b_g, so letter k abelianizes to the basis vector X_k of H (A_i then B_i).
A negative letter is an inverse. In text, "a1 b2 A1" means a_1 b_2 a_1^{-1}.
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass
from math import comb
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import EvenModulus, GenusMismatch, NotIA, NotInKernel, NotInvertible
from .snf import in_span, subgroup_structure

Word = tuple[int, ...]

_TOKEN = re.compile(r"^([abAB])(\d+)$")


# ---------------------------------------------------------------- words


def reduce_word(w: Iterable[int]) -> Word:
    out: list[int] = []
    for x in w:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(int(x))
    return tuple(out)


def inverse_word(w: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(w))


def concat(*ws: Sequence[int]) -> Word:
    return reduce_word(itertools.chain.from_iterable(ws))


def power(w: Sequence[int], k: int) -> Word:
    base = tuple(w) if k >= 0 else inverse_word(w)
    return reduce_word(base * abs(k))


def commutator_word(u: Sequence[int], v: Sequence[int]) -> Word:
    """u v u^-1 v^-1."""
    return concat(u, v, inverse_word(u), inverse_word(v))


def a(i: int, g: int) -> Word:
    return (i,)


def b(i: int, g: int) -> Word:
    return (g + i,)


def boundary_word(g: int) -> Word:
    """prod_i [a_i, b_i]."""
    return concat(*(commutator_word(a(i, g), b(i, g)) for i in range(1, g + 1)))


def parse_word(text: str, g: int) -> Word:
    """Parse "a1 b2 A1" (uppercase = inverse); "1" or "" is the empty word."""
    out = []
    for tok in text.split():
        if tok == "1":
            continue
        m = _TOKEN.match(tok)
        if not m:
            raise ValueError(f"bad letter {tok!r}")
        i = int(m.group(2))
        if not 1 <= i <= g:
            raise ValueError(f"letter {tok!r} out of range for genus {g}")
        k = i if m.group(1).lower() == "a" else g + i
        out.append(-k if m.group(1).isupper() else k)
    return reduce_word(out)


def format_word(w: Sequence[int], g: int) -> str:
    if not w:
        return "1"
    parts = []
    for x in w:
        k = abs(x)
        name = f"a{k}" if k <= g else f"b{k - g}"
        parts.append(name.upper() if x < 0 else name)
    return " ".join(parts)


def abelianize(w: Sequence[int], n: int) -> np.ndarray:
    """Exact image in Z^n."""
    v = np.zeros(n, dtype=np.int64)
    for x in w:
        v[abs(x) - 1] += 1 if x > 0 else -1
    return v


def cyclic_reduce(w: Sequence[int]) -> Word:
    w = reduce_word(w)
    i, j = 0, len(w)
    while j - i >= 2 and w[i] == -w[j - 1]:
        i += 1
        j -= 1
    return w[i:j]


def are_conjugate(u: Sequence[int], v: Sequence[int]) -> bool:
    cu, cv = cyclic_reduce(u), cyclic_reduce(v)
    if len(cu) != len(cv):
        return False
    if not cu:
        return True
    doubled = cu + cu
    return any(doubled[k:k + len(cv)] == cv for k in range(len(cu)))


def random_word(n: int, length: int, rng) -> Word:
    return reduce_word(rng.choice((1, -1)) * rng.randint(1, n) for _ in range(length))


def random_kernel_word(n: int, d: int, rng) -> Word:
    """Random word in the kernel of F_n -> H (x) Z_d: conjugated commutators and d-th powers."""
    parts = []
    for _ in range(rng.randint(1, 3)):
        u, v = random_word(n, rng.randint(1, 4), rng), random_word(n, rng.randint(1, 4), rng)
        core = commutator_word(u, v) if rng.random() < 0.6 else power(u, d)
        c = random_word(n, rng.randint(0, 3), rng)
        parts.append(concat(c, core, inverse_word(c)))
    return concat(*parts)


# ---------------------------------------------------------------- Magnus expansion


@dataclass(frozen=True, eq=False)
class TruncTensor2:
    """c0 + c1 + c2 in Z_d + H_d + H_d^{(x)2}, products truncated past degree 2."""

    d: int
    c0: int
    c1: np.ndarray
    c2: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "c0", int(self.c0) % self.d)
        for name in ("c1", "c2"):
            arr = np.mod(np.asarray(getattr(self, name), dtype=np.int64), self.d)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @classmethod
    def one(cls, n: int, d: int) -> "TruncTensor2":
        return cls(d, 1, np.zeros(n, dtype=np.int64), np.zeros((n, n), dtype=np.int64))

    @property
    def n(self) -> int:
        return len(self.c1)

    def __mul__(self, o: "TruncTensor2") -> "TruncTensor2":
        if self.d != o.d or self.n != o.n:
            raise GenusMismatch("tensors over different modules")
        c0 = self.c0 * o.c0
        c1 = self.c0 * o.c1 + self.c1 * o.c0
        c2 = self.c0 * o.c2 + np.outer(self.c1, o.c1) + self.c2 * o.c0
        return TruncTensor2(self.d, c0, c1, c2)

    def __eq__(self, o) -> bool:
        return (
            isinstance(o, TruncTensor2)
            and self.d == o.d
            and self.c0 == o.c0
            and np.array_equal(self.c1, o.c1)
            and np.array_equal(self.c2, o.c2)
        )


def _letter(x: int, n: int, d: int) -> TruncTensor2:
    k = abs(x) - 1
    c1 = np.zeros(n, dtype=np.int64)
    c2 = np.zeros((n, n), dtype=np.int64)
    if x > 0:
        c1[k] = 1
    else:
        c1[k] = -1
        c2[k, k] = 1
    return TruncTensor2(d, 1, c1, c2)


def magnus(w: Sequence[int], n: int, d: int) -> TruncTensor2:
    """theta(w) mod degree 3, with theta(x_k) = 1 + X_k."""
    if d < 2:
        raise ValueError("modulus must be >= 2")
    out = TruncTensor2.one(n, d)
    for x in w:
        out = out * _letter(x, n, d)
    return out


def in_gamma2d(w: Sequence[int], n: int, d: int) -> bool:
    return not np.any(abelianize(w, n) % d)


def theta2_on_kernel(w: Sequence[int], n: int, d: int) -> np.ndarray:
    """Degree-2 part of theta(w) for w with [w] = 0 in H (x) Z_d."""
    if not in_gamma2d(w, n, d):
        raise NotInKernel(f"abelianization {abelianize(w, n).tolist()} is nonzero mod {d}")
    return np.array(magnus(w, n, d).c2)


def is_skew(m: np.ndarray, d: int) -> bool:
    return not np.any((m + m.T) % d) and not np.any(np.diag(m) % d)


# ---------------------------------------------------------------- endomorphisms


@dataclass(frozen=True)
class EndoF:
    """Endomorphism of F_{2g} given by the images of a_1..a_g, b_1..b_g."""

    images: tuple[Word, ...]
    genus: int

    def __post_init__(self):
        if len(self.images) != 2 * self.genus:
            raise GenusMismatch(f"{len(self.images)} images for genus {self.genus}")
        object.__setattr__(self, "images", tuple(reduce_word(w) for w in self.images))

    @property
    def n(self) -> int:
        return 2 * self.genus

    @classmethod
    def identity(cls, g: int) -> "EndoF":
        return cls(tuple((k,) for k in range(1, 2 * g + 1)), g)

    @classmethod
    def from_strings(cls, images: Sequence[str], g: int) -> "EndoF":
        return cls(tuple(parse_word(s, g) for s in images), g)

    @classmethod
    def from_mapping(cls, g: int, **changes: str) -> "EndoF":
        """Identity except for the named generators, e.g. from_mapping(2, b1="b1 a1")."""
        imgs = [(k,) for k in range(1, 2 * g + 1)]
        for name, text in changes.items():
            imgs[parse_word(name, g)[0] - 1] = parse_word(text, g)
        return cls(tuple(imgs), g)

    def strings(self) -> list[str]:
        return [format_word(w, self.genus) for w in self.images]

    def apply(self, w: Sequence[int]) -> Word:
        out: list[int] = []
        for x in w:
            img = self.images[abs(x) - 1]
            out.extend(img if x > 0 else inverse_word(img))
        return reduce_word(out)

    def __matmul__(self, other: "EndoF") -> "EndoF":
        """(self @ other)(x) = self(other(x))."""
        if self.genus != other.genus:
            raise GenusMismatch(f"genus {self.genus} vs {other.genus}")
        return EndoF(tuple(self.apply(w) for w in other.images), self.genus)

    def __pow__(self, k: int) -> "EndoF":
        base = self if k >= 0 else self.inverse()
        out = EndoF.identity(self.genus)
        for _ in range(abs(k)):
            out = base @ out
        return out

    def homology_matrix(self) -> np.ndarray:
        """Integer matrix whose column k is the abelianized image of generator k."""
        return np.stack([abelianize(w, self.n) for w in self.images], axis=1)

    def is_level_ia(self, d: int) -> bool:
        return not np.any((self.homology_matrix() - np.eye(self.n, dtype=np.int64)) % d)

    def inverse(self) -> "EndoF":
        return nielsen_inverse(self)


def nielsen_inverse(phi: EndoF, max_steps: int = 10_000) -> EndoF:
    """Inverse by greedy Nielsen reduction of the image tuple.

    Keeps pairs (w_k, s_k) with w_k = phi(s_k); moves replace w_i by w_i w_j^{+-1}
    or w_j^{+-1} w_i whenever that shortens the total length. The result is
    checked in both composition orders; NotInvertible is raised when reduction
    stalls or the check fails.
    """
    n = phi.n
    ws = [tuple(w) for w in phi.images]
    ss = [(k,) for k in range(1, n + 1)]
    for _ in range(max_steps):
        if any(not w for w in ws):
            raise NotInvertible("an image reduced to the empty word")
        if all(len(w) == 1 for w in ws):
            break
        best = None
        for i, j in itertools.permutations(range(n), 2):
            for e in (1, -1):
                wj = ws[j] if e > 0 else inverse_word(ws[j])
                for side in ("right", "left"):
                    cand = concat(ws[i], wj) if side == "right" else concat(wj, ws[i])
                    gain = len(ws[i]) - len(cand)
                    if gain > 0 and (best is None or gain > best[0]):
                        best = (gain, i, j, e, side)
        if best is None:
            raise NotInvertible("Nielsen reduction stalled before reaching single letters")
        _, i, j, e, side = best
        wj = ws[j] if e > 0 else inverse_word(ws[j])
        sj = ss[j] if e > 0 else inverse_word(ss[j])
        if side == "right":
            ws[i], ss[i] = concat(ws[i], wj), concat(ss[i], sj)
        else:
            ws[i], ss[i] = concat(wj, ws[i]), concat(sj, ss[i])
    else:
        raise NotInvertible("step limit reached")
    images: list[Word | None] = [None] * n
    for w, s in zip(ws, ss):
        k = abs(w[0]) - 1
        if images[k] is not None:
            raise NotInvertible("images do not form a basis")
        images[k] = s if w[0] > 0 else inverse_word(s)
    psi = EndoF(tuple(images), phi.genus)
    ident = EndoF.identity(phi.genus)
    if phi @ psi != ident or psi @ phi != ident:
        raise NotInvertible("candidate inverse failed verification")
    return psi


def boundary_preserved(phi: EndoF, exact: bool = False) -> bool:
    """Whether phi(boundary) is conjugate to the boundary word (equal to it when ``exact``)."""
    bd = boundary_word(phi.genus)
    img = phi.apply(bd)
    return img == bd if exact else are_conjugate(img, bd)


# ---------------------------------------------------------------- Johnson map


@dataclass(frozen=True, eq=False)
class JohnsonValue:
    """For each generator x_k, the matrix theta_2(x_k^-1 phi(x_k)) over Z_d."""

    d: int
    matrices: tuple[np.ndarray, ...]

    def __add__(self, o: "JohnsonValue") -> "JohnsonValue":
        return JohnsonValue(self.d, tuple((m + p) % self.d for m, p in zip(self.matrices, o.matrices)))

    def __eq__(self, o) -> bool:
        return (
            isinstance(o, JohnsonValue)
            and self.d == o.d
            and all(np.array_equal(m % self.d, p % self.d) for m, p in zip(self.matrices, o.matrices))
        )

    def is_zero(self) -> bool:
        return not any(np.any(m % self.d) for m in self.matrices)

    def tolist(self) -> list:
        return [m.tolist() for m in self.matrices]


def tau(phi: EndoF, d: int) -> JohnsonValue:
    if not phi.is_level_ia(d):
        raise NotIA(f"endomorphism does not act trivially on H (x) Z_{d}")
    mats = []
    for k in range(1, phi.n + 1):
        w = concat(((-k),), phi.images[k - 1])
        m = theta2_on_kernel(w, phi.n, d)
        if d % 2 and not is_skew(m, d):
            raise AssertionError("theta_2 on the kernel must be skew for odd d")
        mats.append(m)
    return JohnsonValue(d, tuple(mats))


def duality_matrix(g: int) -> np.ndarray:
    """Column k is the y with X_k^*(x) = y . x: A_i^* -> -B_i, B_i^* -> A_i."""
    n = 2 * g
    m = np.zeros((n, n), dtype=np.int64)
    for i in range(g):
        m[g + i, i] = -1
        m[i, g + i] = 1
    return m


def tau_tensor(v: JohnsonValue) -> np.ndarray:
    """tau as an element of H (x) H (x) H over Z_d, after dualizing the first slot."""
    n = len(v.matrices)
    dual = duality_matrix(n // 2)
    t = np.zeros((n, n, n), dtype=np.int64)
    for k, m in enumerate(v.matrices):
        t += np.einsum("a,jk->ajk", dual[:, k], m)
    return t % v.d


def lambda3_image(n: int) -> list[np.ndarray]:
    """Images of X_i ^ X_j ^ X_k (i<j<k) under a^b^c -> a(x)(b^c) + b(x)(c^a) + c(x)(a^b)."""
    out = []
    for i, j, k in itertools.combinations(range(n), 3):
        t = np.zeros((n, n, n), dtype=np.int64)
        for x, y, z in ((i, j, k), (j, k, i), (k, i, j)):
            t[x, y, z] += 1
            t[x, z, y] -= 1
        out.append(t)
    return out


def trivector(n: int, triples: dict[tuple[int, int, int], int]) -> np.ndarray:
    """Tensor image of sum c * X_i ^ X_j ^ X_k, with 0-based (i, j, k) increasing."""
    basis = dict(zip(itertools.combinations(range(n), 3), lambda3_image(n)))
    t = np.zeros((n, n, n), dtype=np.int64)
    for key, c in triples.items():
        t += c * basis[key]
    return t


def in_lambda3(v: JohnsonValue) -> bool:
    if v.d % 2 == 0:
        raise EvenModulus(f"Lambda^3 membership needs odd modulus, got {v.d}")
    n = len(v.matrices)
    rows = [t.ravel().tolist() for t in lambda3_image(n)]
    return in_span(tau_tensor(v).ravel().tolist(), rows, v.d)


def act_on_tensor(m: np.ndarray, t: np.ndarray, d: int) -> np.ndarray:
    """(M (x) M (x) M) t."""
    return np.einsum("ai,bj,ck,ijk->abc", m, m, m, t) % d


def odd_level_rank_formula(g: int, d: int, closed: bool = False) -> dict:
    """Exponent r with H_1(M_{g,*}[d]) = Z_d^r, assembled from ranks.

    Bounded: rank Lambda^3 H + (2g^2 + g). Closed: the H summand embedded by
    x -> (sum_i A_i ^ B_i) ^ x is removed; its rank is computed from the
    embedding matrix over Z_d.
    """
    if d % 2 == 0:
        raise EvenModulus(f"formula holds for odd d, got {d}")
    if d < 3:
        raise ValueError("d must be >= 3")
    n = 2 * g
    lam3 = comb(n, 3)
    sp = 2 * g * g + g
    if closed:
        emb_rank = _omega_embedding_rank(g, d)
        rank = lam3 - emb_rank + sp
        formula = (4 * g**3 - g) // 3
        assert (4 * g**3 - g) % 3 == 0
    else:
        emb_rank = 0
        rank = lam3 + sp
        formula = (4 * g**3 + 5 * g) // 3
        assert (4 * g**3 + 5 * g) % 3 == 0
    return {
        "g": g,
        "d": d,
        "closed": closed,
        "rank": rank,
        "formula": formula,
        "embedding_rank": emb_rank,
        "small_genus": g < 3,
        "agrees": rank == formula,
    }


def _omega_embedding_rank(g: int, d: int) -> int:
    """Number of Z_d summands in the image of H -> Lambda^3 H, x -> omega ^ x."""
    n = 2 * g
    index = {t: i for i, t in enumerate(itertools.combinations(range(n), 3))}
    rows = []
    for x in range(n):
        v = [0] * len(index)
        for i in range(g):
            trip = (i, g + i, x)
            if len(set(trip)) < 3:
                continue
            order = sorted(range(3), key=lambda k: trip[k])
            # sign of the sorting permutation
            inv = sum(1 for p, q in itertools.combinations(order, 2) if p > q)
            v[index[tuple(sorted(trip))]] += -1 if inv % 2 else 1
        rows.append(v)
    structure = subgroup_structure(rows, d)
    return sum(1 for f in structure.factors if f == d)


# ---------------------------------------------------------------- fixtures


def twist_a(i: int, g: int, k: int = 1) -> EndoF:
    """Twist along a_i to the power k: b_i -> b_i a_i^k."""
    imgs = [(j,) for j in range(1, 2 * g + 1)]
    imgs[g + i - 1] = concat(b(i, g), power(a(i, g), k))
    return EndoF(tuple(imgs), g)


def twist_b(i: int, g: int, k: int = 1) -> EndoF:
    """Twist along b_i to the power k: a_i -> a_i b_i^k."""
    imgs = [(j,) for j in range(1, 2 * g + 1)]
    imgs[i - 1] = concat(a(i, g), power(b(i, g), k))
    return EndoF(tuple(imgs), g)


def handle_swap(g: int) -> EndoF:
    """Exchange the first two handles, fixing the boundary word exactly."""
    if g < 2:
        raise GenusMismatch("needs g >= 2")
    d1 = commutator_word(a(1, g), b(1, g))
    d1i = inverse_word(d1)
    imgs = [(j,) for j in range(1, 2 * g + 1)]
    imgs[0] = concat(d1, a(2, g), d1i)
    imgs[g] = concat(d1, b(2, g), d1i)
    imgs[1] = a(1, g)
    imgs[g + 1] = b(1, g)
    return EndoF(tuple(imgs), g)


def bounding_pair_map(g: int) -> EndoF:
    """A Torelli element supported on the first two handles (a handle drag).

    With w = [a_1, b_1] a_2: a_1 -> w a_1 w^-1, b_1 -> w b_1 w^-1,
    a_2 -> [a_1,b_1] a_2 [a_1,b_1]^-1, b_2 -> b_2 [a_1,b_1]^-1.
    """
    if g < 2:
        raise GenusMismatch("needs g >= 2")
    d1 = commutator_word(a(1, g), b(1, g))
    d1i = inverse_word(d1)
    w = concat(d1, a(2, g))
    wi = inverse_word(w)
    imgs = [(j,) for j in range(1, 2 * g + 1)]
    imgs[0] = concat(w, a(1, g), wi)
    imgs[g] = concat(w, b(1, g), wi)
    imgs[1] = concat(d1, a(2, g), d1i)
    imgs[g + 1] = concat(b(2, g), d1i)
    return EndoF(tuple(imgs), g)


def fixture_path() -> Path:
    return Path(__file__).with_name("fixtures") / "automorphisms.json"


def load_fixtures(path: str | Path | None = None) -> dict[str, dict]:
    """Fixture registry: name -> {"phi": EndoF, "d": int | None, ...}."""
    data = json.loads(Path(path or fixture_path()).read_text())
    out = {}
    for entry in data["automorphisms"]:
        g = int(entry["g"])
        out[entry["name"]] = {
            "phi": EndoF.from_strings(entry["images"], g),
            "d": entry.get("d"),
            "kind": entry.get("kind", ""),
        }
    return out


def load_endo_json(path: str | Path) -> tuple[EndoF, int | None]:
    """Read {g, d, images} from a file."""
    data = json.loads(Path(path).read_text())
    g = int(data["g"])
    return EndoF.from_strings(data["images"], g), data.get("d")
