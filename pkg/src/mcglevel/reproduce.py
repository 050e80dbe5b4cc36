"""The acceptance suite as a registry of named, timed checks.

Each criterion is a function (seed, trials) -> (passed, details). ``trials``
overrides the sample count of randomized criteria; ``None`` keeps the default
recorded in MANIFEST. Details are plain JSON values so that two runs with the
same seed serialize identically.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass
from importlib import resources
from typing import Callable

import numpy as np

from . import beta as bt
from . import brown as br
from . import groupring as gr
from . import magnus as mg
from . import symplectic as sp
from .snf import smith_normal_form
from .z2homology import SpinForm, Z2Class, arf


@dataclass
class Criterion:
    number: int
    title: str
    run: Callable
    time_limit: float | None = None
    default_trials: int | None = None


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    details: dict
    seconds: float = 0.0
    time_limit: float | None = None
    within_limit: bool = True

    def to_json(self, timing: bool = False) -> dict:
        out = {"criterion": self.number, "title": self.title, "passed": self.passed, "details": self.details}
        if timing:
            out["seconds"] = round(self.seconds, 3)
            out["time_limit"] = self.time_limit
            out["within_limit"] = self.within_limit
        return out


REGISTRY: dict[int, Criterion] = {}


def criterion(number: int, title: str, time_limit: float | None = None, trials: int | None = None):
    def wrap(fn):
        REGISTRY[number] = Criterion(number, title, fn, time_limit, trials)
        return fn

    return wrap


def _structure(inv) -> list[list[int]]:
    return [[n, m] for n, m in inv.counts()]


@criterion(1, "quotient structure g=3", time_limit=60)
def c01(seed, trials):
    got = gr.quotient_structure(3)
    want = gr.expected_open_structure(3)
    return got == want, {"invariant_factors": _structure(got), "expected": _structure(want)}


@criterion(2, "quotient structure g=4", time_limit=600)
def c02(seed, trials):
    got = gr.quotient_structure(4)
    want = gr.expected_open_structure(4)
    return got == want, {"invariant_factors": _structure(got), "expected": _structure(want)}


def _fixture(name: str) -> br.Enhancement:
    text = resources.files("mcglevel").joinpath("fixtures", name).read_text()
    return br.Enhancement.from_json(json.loads(text))


@criterion(3, "Brown invariant of the surface-F enhancement")
def c03(seed, trials):
    values = {}
    ok = True
    for q_b1, want in ((0, 1), (1, 7)):
        for q_a1 in (0, 1):
            b = br.brown_invariant(br.surface_f_enhancement(q_a1, q_b1))
            values[f"q(A1)={q_a1},q(B1)={q_b1}"] = b
            ok &= b == want
    for name, want in (("paper_F_q0.json", 1), ("paper_F_q1.json", 7)):
        b = br.brown_invariant(_fixture(name))
        values[name] = b
        ok &= b == want
    return ok, values


@criterion(4, "brown(2q) = 4 arf for all spin forms, g <= 3", time_limit=5)
def c04(seed, trials):
    checked, bad = 0, []
    for g in (1, 2, 3):
        for sigma in SpinForm.all(g):
            checked += 1
            if br.brown_invariant(br.doubled_spin_form(sigma)) != (4 * arf(sigma)) % 8:
                bad.append([g, sigma.values])
    return not bad, {"checked": checked, "failures": bad}


@criterion(5, "Gauss-sum magnitude, nondegenerate pairings n <= 4")
def c05(seed, trials):
    checked, bad = 0, 0
    for n in range(1, 5):
        for pairing in br.nondegenerate_pairings(n):
            for e in br.all_enhancements(pairing):
                checked += 1
                if br.gauss_sum(e).norm() != 1 << n:
                    bad += 1
    return bad == 0, {"checked": checked, "failures": bad}


@criterion(6, "transvection power identity, exhaustive grid", time_limit=120)
def c06(seed, trials):
    checked, bad = 0, []
    for a1, b1, a2, d, g in sp.transvection_power_grid():
        checked += 1
        if not sp.verify_transvection_power(a1, b1, a2, d, g):
            bad.append([a1, b1, a2, d, g])
    return not bad, {"checked": checked, "failures": bad[:10], "exponent": "(d*a1*b1+1)*a2^2"}


@criterion(7, "lantern identity in Sp, g=3", time_limit=10, trials=1000)
def c07(seed, trials):
    rng = random.Random(seed)
    n = trials or 1000
    bad = sum(1 for _ in range(n) if not sp.verify_lantern(*sp.random_orthogonal_pair(3, rng)))
    return bad == 0, {"checked": n, "failures": bad}


@criterion(8, "commutator inclusions", trials=200)
def c08(seed, trials):
    rng = random.Random(seed)
    n = trials or 200
    out = {}
    ok = True
    for g in (2, 3):
        bad9 = bad48 = 0
        for _ in range(n):
            c = sp.commutator(sp.random_level_element(g, 3, rng), sp.random_level_element(g, 3, rng))
            bad9 += not sp.in_level(c, 9)
            c = sp.commutator(sp.random_level_element(g, 2, rng), sp.random_level_element(g, 2, rng))
            bad48 += not sp.in_igusa(c, 4)
        out[f"g={g}"] = {"checked": n, "not_in_level_9": bad9, "not_in_igusa_4_8": bad48}
        ok &= bad9 == 0 and bad48 == 0
    return ok, out


@criterion(9, "explicit generator congruences")
def c09(seed, trials):
    out = {}
    ok = True
    for g in (2, 3):
        for d in (2, 3, 4):
            res = [sp.commutator_matches(a, b, t, d) for a, b, t in sp.generator_instances(g)]
            out[f"g={g},d={d}"] = res
            ok &= all(res)
    return ok, out


def _add(u, v, m):
    return [(x + y) % m for x, y in zip(u, v)]


@criterion(10, "m, m1, m2 homomorphism and kernel checks", trials=200)
def c10(seed, trials):
    rng = random.Random(seed)
    n = trials or 200
    g = 2
    fails = {"m_hom": 0, "m_kernel": 0, "m1_hom": 0, "m1_kernel": 0, "m2_hom": 0}
    d = 3
    for _ in range(n):
        a, b = sp.random_level_element(g, d, rng), sp.random_level_element(g, d, rng)
        fails["m_hom"] += _add(sp.m_map(a, d), sp.m_map(b, d), d) != list(sp.m_map(a @ b, d))
        fails["m_kernel"] += (not any(sp.m_map(a, d))) != sp.in_level(a, d * d)
    d = 2
    for _ in range(n):
        a, b = sp.random_level_element(g, d * d, rng), sp.random_level_element(g, d * d, rng)
        fails["m1_hom"] += _add(sp.m1_map(a, d), sp.m1_map(b, d), 2) != list(sp.m1_map(a @ b, d))
        fails["m1_kernel"] += (not any(sp.m1_map(a, d))) != sp.in_igusa(a, d * d)
        c, e = a @ a, b @ b
        fails["m2_hom"] += _add(sp.m2_map(c, d), sp.m2_map(e, d), 2) != list(sp.m2_map(c @ e, d))
    return not any(fails.values()), {"samples": n, "failures": fails}


@criterion(11, "beta on Delta_sigma, 500 tuples at g=3", trials=500)
def c11(seed, trials):
    rng = random.Random(seed)
    n = trials or 500
    g = 3
    bad_or = bad_prod = 0
    for _ in range(n):
        sigma = SpinForm(rng.randrange(1 << (2 * g)), g)
        k = rng.randint(1, 5)
        xs = [gr.random_class(g, rng) for _ in range(k)]
        m = bt.beta_matrix(sigma)
        if not np.array_equal(bt.beta_extend(sigma, gr.delta_sigma(sigma, xs), m), bt.beta_delta_expected(xs)):
            bad_or += 1
        got = bt.beta_extend(sigma, gr.delta_sigma_signed(sigma, xs), m)
        if not np.array_equal(got, bt.beta_delta_product_form(xs)):
            bad_prod += 1
    return bad_or == 0 and bad_prod == 0, {
        "checked": n,
        "or_form_failures": bad_or,
        "signed_product_form_failures": bad_prod,
    }


@criterion(12, "image of Psi beta at g=3")
def c12(seed, trials):
    got = bt.image_of_psi_beta(3)
    want = bt.expected_psi_image(3)
    lit = bt.psi_difference_image_check(3)
    return got == want and lit["equal"], {
        "invariant_factors": _structure(got),
        "expected": _structure(want),
        "difference_coordinates_literal": lit["equal"],
    }


@criterion(13, "injectivity by order at g=3")
def c13(seed, trials):
    r = bt.injectivity_by_order(3)
    return r["injective"] and r["image_order"] == 2**68, {
        "image_order_log2": r["image_order"].bit_length() - 1,
        "quotient_order_log2": r["quotient_order"].bit_length() - 1,
        "L_in_kernel": r["L_in_kernel"],
    }


@criterion(14, "iota(1) = 0 witness at g=3")
def c14(seed, trials):
    g = 3
    e = 4 * gr.delta0([Z2Class.A(1, g), Z2Class.B(1, g)])
    ok = gr.in_L_span(e)
    return ok, {"in_L": ok}


@criterion(15, "basis-reduction robustness at g=3", trials=200)
def c15(seed, trials):
    rng = random.Random(seed)
    n = trials or 200
    g = 3
    base = [e for _, e in gr.build_L_open(g)]
    extra = gr.random_L_generators(g, n, rng)
    got = smith_normal_form(gr.presentation(base + extra, g))
    want = gr.expected_open_structure(g)
    return got == want, {"extra_generators": n, "invariant_factors": _structure(got)}


@criterion(16, "counting identity g=2,3,4")
def c16(seed, trials):
    rows = [gr.counting_identity(g) for g in (2, 3, 4)]
    return all(r["holds"] for r in rows), {
        f"g={r['g']}": {"lhs_log2": r["lhs"].bit_length() - 1, "rhs_log2": r["rhs"].bit_length() - 1} for r in rows
    }


@criterion(17, "theta_2 laws", trials=500)
def c17(seed, trials):
    rng = random.Random(seed)
    n_words = trials or 500
    n, d = 4, 5
    comm = mg.theta2_on_kernel(mg.commutator_word((1,), (3,)), n, d)
    want = np.zeros((n, n), dtype=np.int64)
    want[0, 2], want[2, 0] = 1, d - 1
    comm_ok = bool(np.array_equal(comm, want))
    powers_ok = all(not mg.theta2_on_kernel(mg.power((1,), k), n, k).any() for k in (3, 5, 7))
    skew_bad = 0
    for _ in range(n_words):
        w = mg.random_kernel_word(n, 3, rng)
        skew_bad += not mg.is_skew(mg.theta2_on_kernel(w, n, 3), 3)
    return comm_ok and powers_ok and skew_bad == 0, {
        "commutator": comm_ok,
        "powers_vanish": powers_ok,
        "skew_words": n_words,
        "skew_failures": skew_bad,
    }


@criterion(18, "tau_d on fixtures")
def c18(seed, trials):
    fx = mg.load_fixtures()
    zero_ok = all(
        mg.tau(e["phi"], e["d"]).is_zero() for e in fx.values() if e["kind"] == "twist_power"
    )
    ia = [k for k, e in fx.items() if e["phi"].is_level_ia(3)]
    add_bad = [
        [x, y]
        for x in ia
        for y in ia
        if mg.tau(fx[x]["phi"] @ fx[y]["phi"], 3) != mg.tau(fx[x]["phi"], 3) + mg.tau(fx[y]["phi"], 3)
    ]
    bp = fx["bounding_pair"]["phi"]
    lam = mg.in_lambda3(mg.tau(bp, 3))
    return zero_ok and not add_bad and lam, {
        "powers_zero": zero_ok,
        "additive_pairs": len(ia) ** 2,
        "additivity_failures": add_bad,
        "bounding_pair_in_lambda3": lam,
    }


@criterion(19, "odd-level rank formulas")
def c19(seed, trials):
    out, ok = {}, True
    for g in range(3, 7):
        for d in (3, 5):
            op = mg.odd_level_rank_formula(g, d)
            cl = mg.odd_level_rank_formula(g, d, closed=True)
            out[f"g={g},d={d}"] = [op["rank"], cl["rank"]]
            ok &= op["agrees"] and cl["agrees"]
    return ok, out


CLOSED_BASELINE_G3 = [[2, 15], [4, 14], [8, 6]]


@criterion(20, "closed quotient at g=3, regression baseline")
def c20(seed, trials):
    first = gr.quotient_structure(3, closed=True)
    second = gr.quotient_structure(3, closed=True)
    divides = (2**68) % first.order == 0
    ok = first == second and divides and _structure(first) == CLOSED_BASELINE_G3
    return ok, {"invariant_factors": _structure(first), "order_log2": first.order.bit_length() - 1,
                "divides_2^68": divides, "deterministic": first == second}


MANIFEST = {
    "seed": 0,
    "trials": {str(k): c.default_trials for k, c in sorted(REGISTRY.items()) if c.default_trials},
}


def run_criterion(number: int, seed: int = 0, trials: int | None = None) -> CriterionResult:
    c = REGISTRY[number]
    t0 = time.perf_counter()
    passed, details = c.run(seed, trials)
    dt = time.perf_counter() - t0
    within = c.time_limit is None or dt <= c.time_limit
    return CriterionResult(c.number, c.title, bool(passed), details, dt, c.time_limit, within)


def run_all(seed: int = 0, trials: int | None = None, only=None) -> list[CriterionResult]:
    numbers = sorted(REGISTRY) if not only else sorted(only)
    return [run_criterion(k, seed, trials) for k in numbers]


def summary_table(results: list[CriterionResult], timing: bool = False) -> str:
    lines = []
    for r in results:
        mark = "PASS" if r.passed and r.within_limit else "FAIL"
        extra = f"  {r.seconds:7.2f}s" if timing else ""
        lines.append(f"[{mark}] {r.number:2d}  {r.title}{extra}")
    return "\n".join(lines)
