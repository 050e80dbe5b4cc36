"""The homomorphism beta_sigma into Map(H_1(Sigma_g; Z_2), Z_8), defined by its generator values.

beta_sigma sends the class of t_C^2 to x -> (-1)^{q_sigma(C)} i_C(x). Extended
Z_8-linearly to the group ring (with [0] -> 0) this realizes beta_sigma o Phi.
"""

from __future__ import annotations

import itertools
import random
from math import comb
from typing import Sequence

import numpy as np

from .errors import GenusMismatch, ZeroClass
from .groupring import (
    MAX_GENUS,
    MODULUS,
    GroupRingElt,
    basis_classes,
    build_L_open,
    delta0,
    delta_sigma,
    quotient_structure,
    random_class,
    _guard,
)
from .snf import InvariantFactors, in_span, subgroup_structure
from .z2homology import SpinForm, Z2Class, act, pair_bits, q_bits


def _pairing_table(g: int) -> np.ndarray:
    n = 1 << (2 * g)
    idx = np.arange(n)
    mask = (1 << g) - 1
    lo, hi = idx & mask, idx >> g
    cross = (lo[:, None] & hi[None, :]) ^ (hi[:, None] & lo[None, :])
    # parity of popcount
    par = np.zeros_like(cross)
    c = cross.copy()
    while c.any():
        par ^= c & 1
        c >>= 1
    return par.astype(np.int64)


def _signs(sigma: SpinForm) -> np.ndarray:
    g = sigma.genus
    return np.array([-1 if q_bits(sigma.values, c, g) else 1 for c in range(1 << (2 * g))], dtype=np.int64)


def beta_generator(sigma: SpinForm, c: Z2Class) -> np.ndarray:
    """x -> (-1)^{q_sigma(C)} i_C(x), as a Z_8 vector over all classes x."""
    if sigma.genus != c.genus:
        raise GenusMismatch(f"genus {sigma.genus} vs {c.genus}")
    if c.bits == 0:
        raise ZeroClass("beta is defined on twists along nonzero classes")
    g = c.genus
    sign = -1 if q_bits(sigma.values, c.bits, g) else 1
    vals = np.array([pair_bits(c.bits, x, g) for x in range(1 << (2 * g))], dtype=np.int64)
    return (sign * vals) % MODULUS


def beta_matrix(sigma: SpinForm) -> np.ndarray:
    """Row C is beta_generator(sigma, C); row 0 is zero."""
    m = _pairing_table(sigma.genus) * _signs(sigma)[:, None]
    m[0] = 0
    return m % MODULUS


def beta_extend(sigma: SpinForm, e: GroupRingElt, matrix: np.ndarray | None = None) -> np.ndarray:
    if sigma.genus != e.genus:
        raise GenusMismatch(f"genus {sigma.genus} vs {e.genus}")
    m = beta_matrix(sigma) if matrix is None else matrix
    return (e.coeffs @ m) % MODULUS


def product_of_indicators(xs: Sequence[Z2Class]) -> np.ndarray:
    g = xs[0].genus
    out = np.ones(1 << (2 * g), dtype=np.int64)
    for x in xs:
        out *= np.array([pair_bits(x.bits, y, g) for y in range(1 << (2 * g))], dtype=np.int64)
    return out


def beta_delta_expected(xs: Sequence[Z2Class]) -> np.ndarray:
    """beta_sigma(Delta_sigma(x_1..x_n)) in closed form: 2^{n-1} (1 - prod_j (1 - i_{x_j})).

    At a point y, with m of the i_{x_j}(y) equal to 1, exactly 2^{n-1} of the
    nonempty subsets have odd intersection with those m indices when m >= 1.
    """
    g = xs[0].genus
    miss = np.ones(1 << (2 * g), dtype=np.int64)
    for x in xs:
        miss *= 1 - np.array([pair_bits(x.bits, y, g) for y in range(1 << (2 * g))], dtype=np.int64)
    return (2 ** (len(xs) - 1) * (1 - miss)) % MODULUS


def beta_delta_product_form(xs: Sequence[Z2Class]) -> np.ndarray:
    """2^{n-1} prod_j i_{x_j}: the value of beta_sigma on the inclusion-exclusion signed Delta."""
    return (2 ** (len(xs) - 1) * product_of_indicators(xs)) % MODULUS


def psi_index(g: int) -> tuple[list[int], list[int], list[int]]:
    """Class bitmasks sampled by Psi: singletons, pairs, triples of basis classes (strict order)."""
    basis = [x.bits for x in basis_classes(g)]
    singles = basis
    pairs = [basis[i] ^ basis[j] for i, j in itertools.combinations(range(2 * g), 2)]
    triples = [basis[i] ^ basis[j] ^ basis[k] for i, j, k in itertools.combinations(range(2 * g), 3)]
    return singles, pairs, triples


def psi_project(f: np.ndarray, g: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    singles, pairs, triples = psi_index(g)
    f = np.asarray(f)
    return f[singles] % MODULUS, f[pairs] % MODULUS, f[triples] % MODULUS


def psi_differences(f: np.ndarray, g: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Psi in finite-difference coordinates.

    Singles f(X_l); pairs f(X_l+X_m) - f(X_l) - f(X_m); triples the third
    difference. This is a unimodular triangular change of the Psi coordinates.
    For f = i_C the second and third differences are -2 i_C i_C and 4 i_C i_C i_C,
    so the image lies in Z_8^{2g} + 2 Z_8^{C(2g,2)} + 4 Z_8^{C(2g,3)} literally.
    """
    basis = [x.bits for x in basis_classes(g)]
    f = np.asarray(f, dtype=np.int64)
    singles = f[basis]
    pairs = [
        f[basis[i] ^ basis[j]] - f[basis[i]] - f[basis[j]] for i, j in itertools.combinations(range(2 * g), 2)
    ]
    triples = []
    for i, j, k in itertools.combinations(range(2 * g), 3):
        x, y, z = basis[i], basis[j], basis[k]
        triples.append(f[x ^ y ^ z] - f[x ^ y] - f[x ^ z] - f[y ^ z] + f[x] + f[y] + f[z])
    return singles % MODULUS, np.array(pairs) % MODULUS, np.array(triples) % MODULUS


def psi_difference_image_check(g: int, sigma: SpinForm | None = None) -> dict:
    """Image of the differenced Psi o beta: contained in Z_8 + 2Z_8 + 4Z_8 blocks and of full order."""
    sigma = sigma or SpinForm.zero(g)
    m = beta_matrix(sigma)
    rows = []
    contained = True
    for c in range(1, 1 << (2 * g)):
        s1, s2, s3 = psi_differences(m[c], g)
        contained &= not np.any(s2 % 2) and not np.any(s3 % 4)
        rows.append(np.concatenate([s1, s2, s3]).tolist())
    structure = subgroup_structure(rows, MODULUS)
    n = 2 * g
    full = 8 ** n * 4 ** comb(n, 2) * 2 ** comb(n, 3)
    return {"contained": bool(contained), "order": structure.order, "expected_order": full,
            "equal": bool(contained) and structure.order == full}


def psi_matrix(sigma: SpinForm) -> np.ndarray:
    """Rows: Psi(beta_sigma([X])) for every class X (row 0 is zero)."""
    g = sigma.genus
    singles, pairs, triples = psi_index(g)
    return beta_matrix(sigma)[:, singles + pairs + triples]


def image_of_psi_beta(g: int, sigma: SpinForm | None = None, max_genus: int = MAX_GENUS) -> InvariantFactors:
    _guard(g, max_genus)
    sigma = sigma or SpinForm.zero(g)
    rows = psi_matrix(sigma)[1:]
    return subgroup_structure(rows.tolist(), MODULUS)


def expected_psi_image(g: int) -> InvariantFactors:
    n = 2 * g
    return InvariantFactors.from_cyclic([8] * n + [4] * comb(n, 2) + [2] * comb(n, 3))


def kernel_contains_L(sigma: SpinForm, trials: int = 50, rng: random.Random | None = None) -> dict:
    """beta vanishes on every basis generator of L and on random Delta_sigma variants."""
    g = sigma.genus
    _guard(g, MAX_GENUS)
    rng = rng or random.Random(0)
    m = beta_matrix(sigma)
    bad = [label for label, e in build_L_open(g) if np.any(beta_extend(sigma, e, m))]
    variants = 0
    for _ in range(trials):
        for coeff, n in ((4, 2), (2, 3), (1, rng.randint(4, 5))):
            xs = [random_class(g, rng) for _ in range(n)]
            e = coeff * delta_sigma(sigma, xs)
            variants += 1
            if np.any(beta_extend(sigma, e, m)):
                bad.append(f"{coeff}*Delta_sigma^{n}({', '.join(x.format() for x in xs)})")
    return {"holds": not bad, "checked_basis": len(build_L_open(g)), "checked_random": variants, "failures": bad}


def image_order_of_quotient(g: int, sigma: SpinForm | None = None) -> int:
    """|beta(Z_8[H])|; equals the order of beta on Z_8[H]/L once L is in the kernel."""
    _guard(g, MAX_GENUS)
    sigma = sigma or SpinForm.zero(g)
    return subgroup_structure(beta_matrix(sigma).tolist(), MODULUS).order


def injectivity_by_order(g: int, sigma: SpinForm | None = None) -> dict:
    sigma = sigma or SpinForm.zero(g)
    img = image_order_of_quotient(g, sigma)
    quot = quotient_structure(g).order
    contains = kernel_contains_L(sigma, trials=0)["holds"]
    return {"image_order": img, "quotient_order": quot, "L_in_kernel": contains, "injective": contains and img == quot}


def iota_relations(g: int) -> list[dict]:
    """Explicit group-ring representatives of iota on B^3, each paired with an alternate form.

    Each pair must agree modulo L_{g,1}. The pairs follow the derivation of 1 in Ker iota:
    iota(A1 B1), iota(A1 (B1+B2)bar), iota(A1 B2), iota(A1) = 4[A1], iota(1) = 0 and the
    two closed-surface forms.
    """
    if g < 2:
        raise ValueError("needs g >= 2")
    A, B = Z2Class.A, Z2Class.B
    a1, b1, a2, b2 = A(1, g), B(1, g), A(2, g), B(2, g)

    def s(*xs):
        tot = Z2Class.zero(g)
        for x in xs:
            tot = tot + x
        return GroupRingElt.symbol(tot)

    zero = GroupRingElt.zero(g)
    pairs = [
        (
            "iota(A1 B1)",
            2 * delta0([a1, b1]) + 4 * s(a1) + 4 * s(b1),
            2 * s(a1) + 2 * s(b1) + 2 * s(a1, b1),
        ),
        (
            "iota(A1 (B1+B2))",
            2 * s(a1) + 2 * s(b1, b2) + 2 * s(a1, b1, b2),
            -2 * s(b1) + 2 * s(b2) - 2 * s(a1, b1) - 2 * s(a1, b2),
        ),
        (
            "iota(A1 B1 (B2+1))",
            s(b1) + s(a1) + s(b1, b2) + s(a1, b1) + s(a1, b1, b2) + s(a1, b2) - s(b2),
            delta0([a1, b1, b2]) + 2 * delta0([a1, b2]) + 2 * delta0([b1, b2]) + 4 * s(b2),
        ),
        (
            "iota(A1 B2)",
            (-2 * s(b1) + 2 * s(b2) - 2 * s(a1, b1) - 2 * s(a1, b2)) + (2 * s(a1) + 2 * s(b1) + 2 * s(a1, b1)),
            2 * s(a1) + 2 * s(b2) - 2 * s(a1, b2),
        ),
        (
            "iota(A1)",
            (2 * s(a1) + 2 * s(a1, b2) - 2 * s(b2)) - (2 * s(a1) + 2 * s(b2) - 2 * s(a1, b2)),
            4 * s(a1),
        ),
        ("iota(1)", 4 * delta0([a1, b1]), zero),
        ("iota(1) via 4(<A1+B1> - <A1> - <B1>)", 4 * (s(a1, b1) - s(a1) - s(b1)), zero),
    ]
    gens = [e.coeffs.tolist() for _, e in build_L_open(g)]
    out = []
    for name, lhs, rhs in pairs:
        diff = lhs - rhs
        out.append({"name": name, "lhs": lhs, "rhs": rhs, "equal_mod_L": in_span(diff.coeffs.tolist(), gens, MODULUS)})
    return out


def spin_action_consistency(g: int) -> list[tuple]:
    """Failures of (-1)^{q(C)} i_C(x+y) = (-1)^{q(C)} i_C(x) + (-1)^{q'(C)} i_C(y), q' = q_{sigma+x}."""
    failures = []
    for sv in range(1 << (2 * g)):
        sigma = SpinForm(sv, g)
        for c in range(1, 1 << (2 * g)):
            cc = Z2Class(c, g)
            for x in range(1 << (2 * g)):
                sx = act(sigma, Z2Class(x, g))
                bs = beta_generator(sigma, cc)
                bsx = beta_generator(sx, cc)
                for y in range(1 << (2 * g)):
                    if bs[x ^ y] != (bs[x] + bsx[y]) % MODULUS:
                        failures.append((sv, c, x, y))
    return failures
