import random
import time

import pytest
from hypothesis import given, settings, strategies as st

from hqdeform.config import load, read_config
from hqdeform.crossed_product import random_element
from hqdeform.deformation import (TSeries, bar_coboundary, check_associativity, check_unit, deformation_suite,
                                  deformed_product, infinitesimal, star)
from hqdeform.fixtures import fixture_path
from hqdeform.hq_structure import ALPHA_INV
from hqdeform.parsing import parse_element
from hqdeform.scalars import qfactorial

from conftest import FIXTURES


def E(st_, text):
    return parse_element(text, st_.ctx)


def oracle_product(st_, a, b, top=8):
    # sum over i with separately iterated operators, no early exits
    out = []
    for i in range(top):
        if st_.l is not None and i >= st_.l:
            break
        left = a
        for _ in range(i):
            left = st_.apply_automorphism(ALPHA_INV, left)
        for _ in range(i):
            left = st_.delta_apply(1, left)
        right = b
        for _ in range(i):
            right = st_.delta_apply(2, right)
        out.append((left * right).scale(1 / qfactorial(i, st_.q)))
    return TSeries(st_.ctx, out)


def test_x1_x2_product(h1):
    ab = deformed_product(h1, E(h1, "x1"), E(h1, "x2"))
    assert ab.coefficient(0) == E(h1, "x1*x2")
    assert ab.coefficient(1) == E(h1, "w[t] + w[t^3]")
    assert len(ab) == 2
    assert str(ab) == "x1*x2*w[e] + t*(w[t] + w[t^3])"


def test_x2_x1_product_has_no_t_terms(h1):
    assert deformed_product(h1, E(h1, "x2"), E(h1, "x1")) == TSeries.const(E(h1, "x1*x2"))


def test_unit_products(h1):
    a = E(h1, "x1*w[s] + x2^3*w[t]")
    assert deformed_product(h1, h1.ctx.one(), a) == TSeries.const(a)
    assert check_unit(h1, h1.ctx.one()).ok
    assert check_unit(h1, E(h1, "x1*w[s]")).ok


def test_infinitesimal_examples(h1):
    assert infinitesimal(h1, E(h1, "x2"), E(h1, "x1")).is_zero()
    assert infinitesimal(h1, E(h1, "x1"), E(h1, "x2")) == E(h1, "w[t] + w[t^3]")
    b = E(h1, "x2^2*w[s] + x1")
    assert infinitesimal(h1, h1.ctx.one(), b).is_zero()


def test_specific_triple(h1):
    assert check_associativity(h1, E(h1, "x1"), E(h1, "x2"), E(h1, "x1*x2")).ok


def test_hm1_series_stops_at_l(hm1):
    a, b = E(hm1, "x1^3"), E(hm1, "x2^3")
    assert len(deformed_product(hm1, a, b)) <= 2


@pytest.mark.parametrize("name", FIXTURES)
@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 10 ** 6))
def test_product_matches_oracle(loaded, name, seed):
    st_ = loaded(name).structure
    rng = random.Random(seed)
    a, b = (random_element(st_.ctx, rng, max_degree=3) for _ in range(2))
    assert deformed_product(st_, a, b) == oracle_product(st_, a, b)


@pytest.mark.parametrize("name", FIXTURES)
def test_suite_100_samples(loaded, name):
    t = time.perf_counter()
    rep = deformation_suite(loaded(name).structure, samples=100, seed=42, max_degree=3)
    assert rep.ok, rep.to_dict()
    assert time.perf_counter() - t < 60


def test_star_is_bilinear_in_t(h1):
    A = TSeries(h1.ctx, [E(h1, "x1"), E(h1, "x2")])
    B = TSeries(h1.ctx, [E(h1, "x2")])
    got = star(h1, A, B)
    want = deformed_product(h1, E(h1, "x1"), E(h1, "x2"))
    shifted = deformed_product(h1, E(h1, "x2"), E(h1, "x2"))
    assert got.coefficient(0) == want.coefficient(0)
    assert got.coefficient(1) == want.coefficient(1) + shifted.coefficient(0)


def test_broken_cocycle_detected_at_t0():
    raw = read_config(fixture_path("dihedral-h1"))
    raw["cocycle"] = {"kind": "table", "values": [{"g": "t", "h": "t^2", "f": 2}]}
    st_ = load(raw).structure
    G = st_.ctx.group
    rep = check_associativity(st_, st_.ctx.w(G.index("t")), st_.ctx.w(G.index("t")), st_.ctx.w(G.index("t^2")))
    assert not rep.ok and rep.checks[0].witness["t_degree"] == 0


def test_bar_coboundary_detects_wrong_phi(h1):
    wrong = lambda a, b: h1.delta_apply(1, a) * b
    x1, x2 = E(h1, "x1"), E(h1, "x2")
    assert not bar_coboundary(h1, x1, x1, x2, wrong).is_zero()
    assert bar_coboundary(h1, x1, x1, x2).is_zero()
