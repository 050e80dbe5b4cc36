from __future__ import annotations

import random

import numpy as np
import pytest

from mcglevel.beta import (
    beta_delta_expected,
    beta_delta_product_form,
    beta_extend,
    beta_generator,
    beta_matrix,
    expected_psi_image,
    image_of_psi_beta,
    injectivity_by_order,
    iota_relations,
    kernel_contains_L,
    product_of_indicators,
    psi_difference_image_check,
    psi_differences,
    psi_project,
    spin_action_consistency,
)
from mcglevel.errors import GenusMismatch, SizeLimit, ZeroClass
from mcglevel.groupring import GroupRingElt, delta_sigma, delta_sigma_signed
from mcglevel.z2homology import SpinForm, Z2Class, pairing, q_eval


def test_generator_values():
    g = 1
    sigma = SpinForm.from_basis_values([1, 0], g)
    a = Z2Class.A(1, g)
    v = beta_generator(sigma, a)
    # q(A1) = 1, so values are -i_A(x) = 7 where A1 . x = 1
    for x in range(4):
        assert v[x] == (7 if pairing(a, Z2Class(x, g)) else 0)


def test_generator_zero_class():
    with pytest.raises(ZeroClass):
        beta_generator(SpinForm.zero(2), Z2Class.zero(2))
    with pytest.raises(GenusMismatch):
        beta_generator(SpinForm.zero(2), Z2Class.A(1, 3))


def test_matrix_rows_match_generators():
    sigma = SpinForm(0b1011, 2)
    m = beta_matrix(sigma)
    assert not m[0].any()
    for c in range(1, 16):
        assert np.array_equal(m[c], beta_generator(sigma, Z2Class(c, 2)))


def test_extend_is_linear(rng):
    g = 2
    sigma = SpinForm(rng.randrange(16), g)
    e = GroupRingElt.symbol(Z2Class(3, g))
    f = GroupRingElt.symbol(Z2Class(9, g))
    lhs = beta_extend(sigma, 3 * e + f)
    assert np.array_equal(lhs, (3 * beta_extend(sigma, e) + beta_extend(sigma, f)) % 8)


def test_beta_delta_or_form():
    rng = random.Random(3)
    g = 3
    for _ in range(500):
        sigma = SpinForm(rng.randrange(64), g)
        n = rng.randint(1, 5)
        xs = [Z2Class(rng.randrange(1, 64), g) for _ in range(n)]
        assert np.array_equal(beta_extend(sigma, delta_sigma(sigma, xs)), beta_delta_expected(xs))


def test_beta_delta_product_form_on_signed_variant():
    rng = random.Random(4)
    g = 3
    for _ in range(500):
        sigma = SpinForm(rng.randrange(64), g)
        n = rng.randint(1, 5)
        xs = [Z2Class(rng.randrange(1, 64), g) for _ in range(n)]
        got = beta_extend(sigma, delta_sigma_signed(sigma, xs))
        assert np.array_equal(got, beta_delta_product_form(xs))


def test_product_form_differs_on_plain_delta():
    # a concrete pair where the OR and product forms disagree
    g = 2
    sigma = SpinForm.zero(g)
    xs = [Z2Class.A(1, g), Z2Class.A(2, g)]
    got = beta_extend(sigma, delta_sigma(sigma, xs))
    assert not np.array_equal(got, beta_delta_product_form(xs))
    assert np.array_equal(got, beta_delta_expected(xs))


def test_forms_agree_for_single_class():
    x = [Z2Class.B(2, 2)]
    assert np.array_equal(beta_delta_expected(x), beta_delta_product_form(x))
    assert np.array_equal(product_of_indicators(x), [pairing(x[0], Z2Class(y, 2)) for y in range(16)])


def test_kernel_contains_L(rng):
    for g in (2, 3):
        for sv in (0, 5):
            r = kernel_contains_L(SpinForm(sv, g), trials=20, rng=rng)
            assert r["holds"], r["failures"]


def test_psi_image():
    assert image_of_psi_beta(2) == expected_psi_image(2)
    assert image_of_psi_beta(3) == expected_psi_image(3)
    assert image_of_psi_beta(3).counts() == [(2, 20), (4, 15), (8, 6)]


def test_psi_image_independent_of_spin():
    assert image_of_psi_beta(2, SpinForm(0b0110, 2)) == expected_psi_image(2)


def test_psi_image_size_guard():
    with pytest.raises(SizeLimit):
        image_of_psi_beta(5)


def test_raw_psi_has_odd_pair_entries():
    g = 2
    row = beta_matrix(SpinForm.zero(g))[Z2Class.A(1, g).bits]
    _, pairs, _ = psi_project(row, g)
    assert np.any(pairs % 2)


def test_psi_differences_literal_image():
    for g in (1, 2, 3):
        r = psi_difference_image_check(g)
        assert r["contained"] and r["equal"]


def test_psi_differences_of_indicator():
    g = 2
    c = Z2Class.A(1, g) + Z2Class.A(2, g)
    f = beta_generator(SpinForm.zero(g), c)
    s1, s2, s3 = psi_differences(f, g)
    basis = [Z2Class.basis(k, g) for k in range(1, 2 * g + 1)]
    assert s1.tolist() == [pairing(c, x) for x in basis]
    k = 0
    for i in range(4):
        for j in range(i + 1, 4):
            assert s2[k] == (-2 * pairing(c, basis[i]) * pairing(c, basis[j])) % 8
            k += 1


def test_injectivity_by_order():
    r = injectivity_by_order(3)
    assert r == {"image_order": 2**68, "quotient_order": 2**68, "L_in_kernel": True, "injective": True}


@pytest.mark.parametrize("g", [2, 3])
def test_iota_relations(g):
    rels = iota_relations(g)
    assert len(rels) == 7
    assert all(r["equal_mod_L"] for r in rels), [r["name"] for r in rels if not r["equal_mod_L"]]


def test_spin_action_consistency():
    assert spin_action_consistency(1) == []


def test_spin_action_shift():
    # q_{sigma + x}(C) = q_sigma(C) + C.x
    g = 2
    sigma = SpinForm(0b1001, g)
    from mcglevel.z2homology import act

    for x in range(16):
        for c in range(16):
            lhs = q_eval(act(sigma, Z2Class(x, g)), Z2Class(c, g))
            rhs = (q_eval(sigma, Z2Class(c, g)) + pairing(Z2Class(c, g), Z2Class(x, g))) % 2
            assert lhs == rhs
