import random

import pytest
from hypothesis import given, settings, strategies as st

from hqdeform.config import build_context
from hqdeform.crossed_product import (ContextError, cp_commutator, cp_mul, format_element, random_element,
                                      support, var_degrees)
from hqdeform.parsing import ParseError, parse_element
from hqdeform.polynomials import substitute

DIHEDRAL = {"field": "Q", "group": {"kind": "dihedral", "u": 4}, "n": 2,
            "representation": {"s": [[-1, 0], [0, -1]], "t": [[1, 0], [0, 1]]}}
CYCLIC = {"field": "Q", "group": {"kind": "cyclic", "r": 2}, "cocycle": {"kind": "xi", "xi": 3}, "n": 2,
          "representation": {"g": [[1, 0], [0, -1]]}}


@pytest.fixture(scope="module")
def D():
    return build_context(DIHEDRAL)


def E(ctx, text):
    return parse_element(text, ctx)


def naive_mul(a, b):
    # (P w_g)(Q w_h) = P * g(Q) * f(g,h) w_{gh}, term by term
    ctx = a.ctx
    G = ctx.group
    acc = {}
    for g, P in a.comps.items():
        for h, Qp in b.comps.items():
            term = (P * substitute(ctx.rep(g), Qp)).scale(ctx.cocycle(g, h))
            k = G.m(g, h)
            acc[k] = acc[k] + term if k in acc else term
    return ctx.zero() + type(a)(ctx, acc)


def test_unit(D):
    a = E(D, "(x1^2 + 2*x2)*w[t*s] + x1*w[e]")
    assert cp_mul(a, D.one()) == a and cp_mul(D.one(), a) == a


def test_dihedral_product(D):
    assert cp_mul(E(D, "x1*w[s]"), E(D, "x2*w[t]")) == E(D, "-x1*x2*w[t^3*s]")


def test_cyclic_cocycle_square():
    C = build_context(CYCLIC)
    assert cp_mul(C.w(1), C.w(1)) == C.scalar(3)


def test_commutators(D):
    a = E(D, "x1*w[t] + w[s]")
    assert cp_commutator(a, a).is_zero()
    s = D.group.index("s")
    assert cp_commutator(D.w(s), D.var(0)) == E(D, "-2*x1*w[s]")
    P = E(D, "x1^2 + x2")
    for g in D.group.elements:
        want = D.poly(D.act(g, P.component(0)) - P.component(0), g)
        assert cp_commutator(D.w(g), P) == want


def test_component_support(D):
    a = E(D, "(x1 + 1)*w[t]")
    t = D.group.index("t")
    assert a.component(t) == E(D, "x1 + 1").component(0)
    assert a.component(0).is_zero()
    assert support(E(D, "w[t] + w[t^3]")) == {t, D.group.index("t^3")}
    assert var_degrees(E(D, "x1^3*x2*w[s] + x2^2*w[e]")) == (3, 2)


def test_mixing_contexts_rejected(D):
    other = build_context(DIHEDRAL)
    with pytest.raises(ContextError):
        D.one() + other.one()


@pytest.mark.parametrize("spec", [DIHEDRAL, CYCLIC])
@settings(max_examples=40)
@given(seed=st.integers(0, 10 ** 6))
def test_product_matches_termwise_oracle_and_is_associative(spec, seed):
    ctx = build_context(spec)
    rng = random.Random(seed)
    a, b, c = (random_element(ctx, rng) for _ in range(3))
    assert cp_mul(a, b) == naive_mul(a, b)
    assert cp_mul(cp_mul(a, b), c) == cp_mul(a, cp_mul(b, c))
    assert cp_mul(a, b + c) == cp_mul(a, b) + cp_mul(a, c)


def test_parse_examples(D):
    assert E(D, "w[e]") == D.one()
    two = E(D, "x1^2*w[t] - 3*w[t*s]")
    assert len(two.comps) == 2
    assert E(D, format_element(two)) == two
    assert E(D, "x1*w[t*t*t*t]") == D.var(0)
    assert E(D, "x1") == D.var(0)


@pytest.mark.parametrize("bad", ["x1 +", "w[q]", "x9", "3 $ x1", "w[t"])
def test_parse_errors(D, bad):
    with pytest.raises(ParseError) as ei:
        E(D, bad)
    assert ei.value.pos >= 0


@pytest.mark.parametrize("name", ["dihedral-h1", "dihedral-hm1", "dihedral-h1-twisted-alpha", "cyclic-recipe"])
def test_round_trip_200_random_elements(loaded, name):
    ctx = loaded(name).ctx
    rng = random.Random(2024)
    for _ in range(200):
        a = random_element(ctx, rng, max_degree=3, max_support=3)
        assert parse_element(format_element(a), ctx) == a
