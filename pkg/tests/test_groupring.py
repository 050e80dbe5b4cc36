from __future__ import annotations

import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mcglevel.errors import GenusMismatch, SizeLimit
from mcglevel.groupring import (
    GroupRingElt,
    build_L_closed,
    build_L_open,
    check_recurrence,
    delta0_recurrence_rhs,
    counting_identity,
    delta0,
    delta_sigma,
    delta_sigma_signed,
    expected_open_structure,
    in_L_span,
    presentation,
    quotient_structure,
    random_L_generators,
)
from mcglevel.snf import InvariantFactors, smith_normal_form
from mcglevel.z2homology import SpinForm, Z2Class, pairing, q_eval


def brute_delta0(xs):
    # sum over nonempty subsets, sign from pairwise intersections, written out directly
    g = xs[0].genus
    out = {}
    for r in range(1, len(xs) + 1):
        for sub in itertools.combinations(range(len(xs)), r):
            total = Z2Class.zero(g)
            for i in sub:
                total = total + xs[i]
            s = sum(pairing(xs[i], xs[j]) for i, j in itertools.combinations(sub, 2)) % 2
            out[total.bits] = out.get(total.bits, 0) + (-1) ** s
    c = np.zeros(1 << (2 * g), dtype=np.int64)
    for k, v in out.items():
        c[k] = v
    return GroupRingElt(c, g)


def sym(x):
    return GroupRingElt.symbol(x)


def test_delta0_two_classes():
    g = 2
    a1, b1 = Z2Class.A(1, g), Z2Class.B(1, g)
    assert delta0([a1, b1]) == sym(a1) + sym(b1) - sym(a1 + b1)
    a2 = Z2Class.A(2, g)
    assert delta0([a1, a2]) == sym(a1) + sym(a2) + sym(a1 + a2)


def test_delta0_repeated_class_collapses():
    g = 1
    a = Z2Class.A(1, g)
    # subsets {1}, {2} give 2[a]; {1,2} sums to 0 with a.a = 0
    assert delta0([a, a]) == 2 * sym(a) + sym(Z2Class.zero(g))


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_delta0_matches_brute_force(n, rng):
    for _ in range(20):
        xs = [Z2Class(rng.randrange(16), 2) for _ in range(n)]
        assert delta0(xs) == brute_delta0(xs)


def test_delta_sigma_sign_from_spin_form():
    g = 2
    sigma = SpinForm.from_basis_values([1, 0, 0, 0], g)
    a1, b1 = Z2Class.A(1, g), Z2Class.B(1, g)
    expect = -sym(a1) + sym(b1) + (-1) ** q_eval(sigma, a1 + b1) * sym(a1 + b1)
    assert delta_sigma(sigma, [a1, b1]) == expect


def test_delta0_symmetric(rng):
    g = 3
    for _ in range(500):
        n = rng.randint(2, 5)
        xs = [Z2Class(rng.randrange(1, 64), g) for _ in range(n)]
        perm = xs[:]
        rng.shuffle(perm)
        assert delta0(xs) == delta0(perm)


def test_delta0_split_recurrence(rng):
    # splitting on the last argument: Delta(x, y) = Delta(x) + [y] + sum_S (-1)^{I(x_S)+x_S.y} [x_S + y]
    g = 3
    for _ in range(500):
        n = rng.randint(1, 4)
        xs = [Z2Class(rng.randrange(1, 64), g) for _ in range(n)]
        y = Z2Class(rng.randrange(1, 64), g)
        rhs = delta0(xs) + sym(y)
        for r in range(1, n + 1):
            for sub in itertools.combinations(range(n), r):
                total = Z2Class.zero(g)
                for i in sub:
                    total = total + xs[i]
                s = sum(pairing(xs[i], xs[j]) for i, j in itertools.combinations(sub, 2))
                s += pairing(total, y)
                rhs = rhs + (-1) ** (s % 2) * sym(total + y)
        assert delta0(xs + [y]) == rhs


def test_library_recurrence_matches_oracle(rng):
    g = 2
    for _ in range(100):
        xs = [Z2Class(rng.randrange(1, 16), g) for _ in range(rng.randint(1, 4))]
        y = Z2Class(rng.randrange(1, 16), g)
        assert delta0_recurrence_rhs(xs, y) == brute_delta0(xs + [y])


def test_check_recurrence(rng):
    r = check_recurrence(3, 500, rng)
    assert r["holds"] and r["trials"] == 500


def test_signed_variant_differs_only_by_subset_parity():
    g = 2
    sigma = SpinForm.zero(g)
    xs = [Z2Class.A(1, g), Z2Class.B(2, g)]
    # the two-element subset flips sign
    diff = delta_sigma(sigma, xs) - delta_sigma_signed(sigma, xs)
    sign = -1 if q_eval(sigma, xs[0] + xs[1]) else 1
    assert diff == 2 * sign * sym(xs[0] + xs[1])


def test_genus_mismatch():
    with pytest.raises(GenusMismatch):
        delta0([Z2Class.A(1, 2), Z2Class.A(1, 3)])
    with pytest.raises(GenusMismatch):
        sym(Z2Class.A(1, 2)) + sym(Z2Class.A(1, 3))


def test_generator_counts():
    assert len(build_L_open(3)) == 1 + 15 + 20 + sum(
        len(list(itertools.combinations(range(6), n))) for n in range(4, 7)
    )
    assert len(build_L_open(3)) == 58
    assert len(build_L_closed(3)) == 65


def test_quotient_small_genus():
    assert quotient_structure(1) == InvariantFactors.from_cyclic([4, 8, 8])
    assert quotient_structure(2) == expected_open_structure(2)
    assert quotient_structure(2).counts() == [(2, 4), (4, 6), (8, 4)]


def test_quotient_g3():
    assert quotient_structure(3) == expected_open_structure(3)
    assert quotient_structure(3).counts() == [(2, 20), (4, 15), (8, 6)]
    assert quotient_structure(3).order == 2**68


def test_closed_quotient_baseline():
    closed = quotient_structure(3, closed=True)
    assert closed.counts() == [(2, 15), (4, 14), (8, 6)]
    assert closed.order == 2**61
    assert quotient_structure(3).order % closed.order == 0


def test_closed_deterministic():
    assert quotient_structure(2, closed=True) == quotient_structure(2, closed=True)


def test_size_guard():
    with pytest.raises(SizeLimit):
        quotient_structure(5)
    with pytest.raises(ValueError):
        quotient_structure(0)


def test_basis_reduction_robustness():
    rng = random.Random(1)
    g = 3
    base = [e for _, e in build_L_open(g)]
    extra = random_L_generators(g, 200, rng)
    assert all(in_L_span(e) for e in extra[:20])
    assert smith_normal_form(presentation(base + extra, g)) == expected_open_structure(g)


def test_iota_one_witness():
    g = 3
    e = 4 * delta0([Z2Class.A(1, g), Z2Class.B(1, g)])
    assert in_L_span(e)
    # a single symbol is not in L
    assert not in_L_span(sym(Z2Class.A(1, g)))


@pytest.mark.parametrize("g", [2, 3, 4, 10])
def test_counting_identity(g):
    r = counting_identity(g)
    assert r["holds"]
    assert r["lhs"] == r["rhs"]


def test_counting_identity_needs_g2():
    with pytest.raises(ValueError):
        counting_identity(1)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(0, 15), min_size=1, max_size=5), st.integers(0, 15))
def test_four_times_delta2_and_two_delta3_in_L(xs, y):
    # random (non-basis) relations are consequences of the basis ones
    g = 2
    cs = [Z2Class(x, g) for x in xs]
    assert in_L_span(4 * delta0([cs[0], Z2Class(y, g)]))
    if len(cs) >= 2:
        assert in_L_span(2 * delta0([cs[0], cs[1], Z2Class(y, g)]))
