from __future__ import annotations

import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mcglevel.errors import GenusMismatch, NonOrthogonal, NotInIgusa, NotInLevel, NotSymplectic, OddLevelIgusa
from mcglevel.snf import InvariantFactors
from mcglevel.symplectic import (
    A,
    B,
    SympElement,
    abelianization_formula,
    block_decompose,
    commutator,
    commutator_from_primes,
    commutator_matches,
    elementary,
    generator_instances,
    in_igusa,
    in_level,
    intersection,
    j_matrix,
    m1_map,
    m2_map,
    m_map,
    random_level_element,
    random_orthogonal_pair,
    random_sp,
    transvection,
    vec_add,
    verify_commutator_congruence,
    verify_lantern,
    verify_transvection_power,
)

vectors3 = st.lists(st.integers(-4, 4), min_size=6, max_size=6)


def brute_transvection(y):
    """Columns are T_y applied to each basis vector via the defining formula."""
    n = len(y)
    cols = []
    for k in range(n):
        e = [0] * n
        e[k] = 1
        c = intersection(y, e)
        cols.append([e[i] + c * y[i] for i in range(n)])
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def test_transvection_a1():
    t = transvection(A(1, 2))
    expected = np.eye(4, dtype=int)
    expected[0, 2] = 1
    assert t.tolist() == expected.tolist()


def test_transvection_b1():
    t = transvection(B(1, 2))
    expected = np.eye(4, dtype=int)
    expected[2, 0] = -1
    assert t.tolist() == expected.tolist()


def test_transvection_a1_plus_b1_against_formula():
    y = vec_add(A(1, 2), B(1, 2))
    assert transvection(y).tolist() == brute_transvection(y)


@settings(max_examples=50, deadline=None)
@given(vectors3)
def test_transvection_matches_definition(y):
    assert transvection(y).tolist() == brute_transvection(y)


def test_non_symplectic_rejected():
    with pytest.raises(NotSymplectic):
        SympElement([[2, 0], [0, 1]])


def test_genus_mismatch():
    with pytest.raises(GenusMismatch):
        transvection(A(1, 2)) @ transvection(A(1, 3))


def test_inverse_and_power_of_transvection():
    t = transvection(A(1, 2))
    inv = t.inverse().tolist()
    assert inv[0][2] == -1
    assert (t**5).tolist()[0][2] == 5
    assert t @ t.inverse() == SympElement.identity(2)


def test_orthogonal_transvections_commute(rng):
    for _ in range(30):
        x, y = random_orthogonal_pair(3, rng)
        assert transvection(x) @ transvection(y) == transvection(y) @ transvection(x)


def test_closure_under_products(rng):
    j = j_matrix(3)
    for _ in range(20):
        m = random_sp(3, rng, 8)
        for cand in (m, m.inverse(), m**3, m**-2):
            assert np.array_equal(cand.entries.T.dot(j).dot(cand.entries), j)


def test_json_roundtrip(rng):
    m = random_sp(2, rng)
    assert SympElement.from_json(m.to_json(level=1)) == m


def test_block_decompose_examples():
    d = 5
    bd = block_decompose(transvection(A(1, 3)) ** d, d)
    assert bd.q[0][0] == 1 and sum(map(sum, bd.q)) == 1
    assert not any(map(any, bd.p + bd.r + bd.s))
    bd = block_decompose(transvection(B(1, 3)) ** d, d)
    # sign convention: r_11 = -1 with J upper-right +I
    assert abs(bd.r[0][0]) == 1 and bd.r[0][0] == -1
    bd = block_decompose(SympElement.identity(2), 7)
    assert not any(map(any, bd.p + bd.q + bd.r + bd.s))


def test_block_decompose_reconstructs(rng):
    a = random_level_element(2, 3, rng)
    assert np.array_equal(block_decompose(a, 3).reconstruct(), a.entries)


def test_block_decompose_rejects_non_level():
    with pytest.raises(NotInLevel):
        block_decompose(transvection(A(1, 2)), 2)


def test_igusa_membership():
    t = transvection(A(1, 2))
    for d in (2, 4):
        assert in_igusa(t ** (2 * d), d)
        assert not in_igusa(t**d, d)
    with pytest.raises(OddLevelIgusa):
        in_igusa(t**3, 3)


def test_order_of_t_a1_mod_igusa():
    d = 2
    t = transvection(A(1, 2)) ** d
    members = [k for k in range(1, 2 * d + 1) if in_igusa(t**k, d * d)]
    assert members == [2 * d]


def test_m_map_examples():
    g, d = 2, 3
    assert m_map(SympElement.identity(g), d) == (0,) * (2 * g * g + g)
    v = m_map(transvection(A(1, g)) ** d, d)
    slot = g * g  # first q entry
    assert v[slot] == 1 and sum(v) == 1


@pytest.mark.parametrize("g,d", [(2, 2), (2, 3), (3, 3), (3, 4)])
def test_m_is_homomorphism(g, d):
    rng = random.Random(g * 10 + d)
    for _ in range(40):
        a = random_level_element(g, d, rng)
        b = random_level_element(g, d, rng)
        ma, mb, mab = m_map(a, d), m_map(b, d), m_map(a @ b, d)
        assert all((x + y - z) % d == 0 for x, y, z in zip(ma, mb, mab))
        assert (not any(ma)) == in_level(a, d * d)


def test_m1_m2_even_level():
    rng = random.Random(5)
    d, g = 2, 2
    t = transvection(A(1, g)) ** (d * d)
    assert m1_map(t, d) == (1, 0, 0, 0)
    assert m2_map(SympElement.identity(g), d) == (0,) * (2 * g * g - g)
    for _ in range(40):
        a = random_level_element(g, d * d, rng)
        b = random_level_element(g, d * d, rng)
        assert (not any(m1_map(a, d))) == in_igusa(a, d * d)
        m1 = [(x + y) % 2 for x, y in zip(m1_map(a, d), m1_map(b, d))]
        assert m1 == list(m1_map(a @ b, d))
        c, e = a**2, b**2
        m2 = [(x + y) % 2 for x, y in zip(m2_map(c, d), m2_map(e, d))]
        assert m2 == list(m2_map(c @ e, d))


def test_m2_requires_igusa():
    with pytest.raises(NotInIgusa):
        m2_map(transvection(A(1, 2)) ** 4, 2)


@pytest.mark.parametrize(
    "args", [(1, 0, -1, 2, 2), (0, 0, 0, 1, 2), (2, 2, 1, 3, 2), (2, 2, 1, 3, 3), (-3, 2, 3, 5, 3)]
)
def test_transvection_power_examples(args):
    assert verify_transvection_power(*args)


def test_transvection_power_literal_exponent_only_at_level_one():
    # the uncorrected exponent (a1 b1 + 1) a2^2 is exact at d = 1 but not beyond
    assert verify_transvection_power(2, 2, 1, 1, 2, literal=True)
    assert not verify_transvection_power(1, 1, 1, 2, 2, literal=True)
    assert verify_transvection_power(1, 0, -1, 2, 2, literal=True)


def test_lantern_examples(rng):
    assert verify_lantern(A(1, 2), A(2, 2))
    assert verify_lantern((0,) * 4, (0,) * 4)
    for _ in range(50):
        assert verify_lantern(*random_orthogonal_pair(3, rng))
    with pytest.raises(NonOrthogonal):
        verify_lantern(A(1, 2), B(1, 2))


def test_commutator_congruence_examples():
    g = 2
    for d in (2, 3):
        a = elementary(1, g + 1, 2 * g)
        b = elementary(g + 1, 1, 2 * g)
        assert verify_commutator_congruence(a, b, d)
        assert commutator_from_primes(a, a, d) == SympElement.identity(g)
    with pytest.raises(NotSymplectic):
        commutator_from_primes(elementary(1, 2, 4), elementary(1, 2, 4), 2)


@pytest.mark.parametrize("g", [2, 3])
@pytest.mark.parametrize("d", [2, 3, 4])
def test_generator_instances(g, d):
    (a1, b1, t1), (a2, b2, t2) = generator_instances(g)
    n = 2 * g
    assert np.array_equal(np.array(t1), np.array(elementary(1, 1, n)) - np.array(elementary(g + 1, g + 1, n)))
    assert np.array_equal(np.array(t2), np.array(elementary(1, g + 2, n)) + np.array(elementary(2, g + 1, n)))
    assert commutator_matches(a1, b1, t1, d)
    assert commutator_matches(a2, b2, t2, d)
    assert verify_commutator_congruence(a1, b1, d)
    assert verify_commutator_congruence(a2, b2, d)


@pytest.mark.parametrize("g", [2, 3])
def test_commutator_inclusions(g):
    rng = random.Random(g)
    for _ in range(25):
        c = commutator(random_level_element(g, 3, rng), random_level_element(g, 3, rng))
        assert in_level(c, 9)
        c = commutator(random_level_element(g, 2, rng), random_level_element(g, 2, rng))
        assert in_igusa(c, 4)


def test_abelianization_formula():
    assert abelianization_formula(2, 3) == InvariantFactors((3,) * 10)
    assert abelianization_formula(2, 2) == InvariantFactors.from_cyclic([2] * 6 + [4] * 4)
    assert abelianization_formula(3, 2) == InvariantFactors.from_cyclic([2] * 15 + [4] * 6)
