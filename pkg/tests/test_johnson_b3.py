from __future__ import annotations

import itertools
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mcglevel.errors import DegreeOverflow, GenusMismatch
from mcglevel.johnson_b3 import (
    BPoly,
    alpha,
    alpha_multiplication_map,
    b3_basis,
    b3_dimension,
    b3_orders,
    closed_b3_dimension,
    rank_gf2,
    reduce_split,
    reduce_symbol,
    to_vector,
)
from mcglevel.z2homology import Z2Class, pairing


def test_reduce_basis_class():
    g = 2
    assert reduce_symbol(Z2Class.A(1, g)) == BPoly.var(1, g)
    assert reduce_symbol(Z2Class.B(2, g)) == BPoly.var(4, g)
    assert reduce_symbol(Z2Class.zero(g)) == BPoly.zero(g)


def test_reduce_examples():
    g = 2
    # A1 + B1: the pair meets once, so a constant appears
    assert reduce_symbol(Z2Class.A(1, g) + Z2Class.B(1, g)) == BPoly.var(1, g) + BPoly.var(3, g) + BPoly.one(g)
    # A1 + A2: disjoint, no constant
    assert reduce_symbol(Z2Class.A(1, g) + Z2Class.A(2, g)) == BPoly.var(1, g) + BPoly.var(2, g)
    x = Z2Class.A(1, g) + Z2Class.B(1, g) + Z2Class.A(2, g) + Z2Class.B(2, g)
    assert str(reduce_symbol(x)) == "A1 + A2 + B1 + B2"


def closed_form(x):
    # sum of the basis variables in x plus the number of intersecting pairs mod 2
    g = x.genus
    idx = [k for k in range(1, 2 * g + 1) if x.bits >> (k - 1) & 1]
    out = BPoly.zero(g)
    for k in idx:
        out = out + BPoly.var(k, g)
    pairs = sum(pairing(Z2Class.basis(i, g), Z2Class.basis(j, g)) for i, j in itertools.combinations(idx, 2))
    return out + BPoly.one(g) if pairs % 2 else out


@pytest.mark.parametrize("g", [1, 2, 3])
def test_reduce_matches_closed_form(g):
    for bits in range(1 << (2 * g)):
        x = Z2Class(bits, g)
        assert reduce_symbol(x) == closed_form(x)


@pytest.mark.parametrize("g", [1, 2])
def test_split_independence_exhaustive(g):
    n = 1 << (2 * g)
    for x, y in itertools.product(range(n), repeat=2):
        cx, cy = Z2Class(x, g), Z2Class(y, g)
        assert reduce_split(cx, cy) == reduce_symbol(cx + cy)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 63), st.integers(0, 63), st.integers(0, 63))
def test_split_order_independence(x, y, z):
    g = 3
    cx, cy, cz = Z2Class(x, g), Z2Class(y, g), Z2Class(z, g)
    # the class x + y + z reduced through two different groupings
    left = reduce_split(cx + cy, cz)
    right = reduce_split(cx, cy + cz)
    assert left == right == reduce_symbol(cx + cy + cz)


def test_multiplication():
    g = 2
    x1, x2, x3 = (BPoly.var(k, g) for k in (1, 2, 3))
    assert x1 * x1 == x1
    assert (x1 + x2) * (x1 + x2) == x1 + x2
    assert (x1 * x2) * x3 == BPoly.monomial([1, 2, 3], g)
    assert BPoly.one(g) * x3 == x3


def test_degree_overflow():
    g = 2
    with pytest.raises(DegreeOverflow):
        BPoly.monomial([1, 2, 3], g) * BPoly.var(4, g)
    with pytest.raises(DegreeOverflow):
        BPoly.monomial([1, 2, 3, 4], g)


def test_genus_mismatch():
    with pytest.raises(GenusMismatch):
        BPoly.var(1, 2) + BPoly.var(1, 3)


@pytest.mark.parametrize("g", range(1, 6))
def test_dimension_matches_enumeration(g):
    n = 2 * g
    assert b3_dimension(g) == len(b3_basis(g)) == 1 + n + comb(n, 2) + comb(n, 3)
    assert len(set(b3_basis(g))) == len(b3_basis(g))


def test_to_vector_roundtrip():
    g = 2
    p = BPoly.one(g) + BPoly.monomial([1, 3], g) + BPoly.monomial([2, 3, 4], g)
    v = to_vector(p)
    basis = b3_basis(g)
    back = {basis[i] for i in np.flatnonzero(v)}
    assert back == set(p.support)


def test_alpha():
    assert str(alpha(2)) == "A1*B1 + A2*B2"
    m = alpha_multiplication_map(2)
    assert m.shape == (b3_dimension(2), 5)


def test_rank_gf2():
    assert rank_gf2(np.eye(4, dtype=int)) == 4
    assert rank_gf2(np.array([[1, 1], [1, 1]])) == 1
    assert rank_gf2(np.zeros((3, 3), dtype=int)) == 0


def test_closed_dimensions():
    assert [closed_b3_dimension(g) for g in range(1, 5)] == [3, 10, 35, 84]
    for g in range(2, 5):
        assert closed_b3_dimension(g) == b3_dimension(g) - (2 * g + 1)


def test_orders():
    assert b3_orders(1) == (2**4, 2**3)
    assert b3_orders(3) == (2**42, 2**41)
    with pytest.raises(ValueError):
        b3_orders(0)
