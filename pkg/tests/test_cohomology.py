import random
import time

import pytest
from hypothesis import given, settings, strategies as st

from hqdeform.cohomology import (Cochain, coboundary_solve, cochain1, cochain_differential,
                                 cochain_differential_via_resolution, cocycle_check, direct_obstruction_check,
                                 expected_vv, nontriviality_verdict, slots, theta_bar_of_infinitesimal,
                                 theta_shape_check, vv_value)
from hqdeform.config import build_context, load, read_config
from hqdeform.crossed_product import cp_commutator, random_element
from hqdeform.deformation import infinitesimal
from hqdeform.fixtures import fixture_path
from hqdeform.parsing import parse_element

from conftest import FIXTURES


def E(st_, text):
    return parse_element(text, st_.ctx)


def rand_c1(ctx, rng, deg=2):
    phi0 = {g: random_element(ctx, rng, deg, 2) for g in rng.sample(ctx.group.non_identity, 3)}
    phi1 = {i: random_element(ctx, rng, deg, 2) for i in range(ctx.n)}
    return cochain1(ctx, phi0, phi1)


def test_constant_phi1_trivial_action():
    ctx = build_context({"field": "Q", "group": {"kind": "dihedral", "u": 4}, "n": 2,
                         "representation": {"s": [[1, 0], [0, 1]], "t": [[1, 0], [0, 1]]}})
    c = cochain1(ctx, {}, {0: ctx.one(), 1: ctx.one()})
    assert cochain_differential(c).is_zero()


def test_constant_phi1_sees_the_action(h1):
    # gv-slot is w_g - phi1(g xbar) w_g; s negates x1, t fixes it
    ctx = h1.ctx
    G = ctx.group
    d = cochain_differential(cochain1(ctx, {}, {0: ctx.one(), 1: ctx.one()}))
    assert d.on_gv[(G.index("s"), 0)] == ctx.w(G.index("s")).scale(2)
    assert (G.index("t"), 0) not in d.on_gv
    assert not d.on_vv and not d.on_gg


def test_phi1_x1_vv_slot_vanishes(h1):
    c = cochain1(h1.ctx, {}, {0: h1.ctx.var(0)})
    assert vv_value(cochain_differential(c), 0, 1).is_zero()


def test_phi0_group_like(h1):
    ctx = h1.ctx
    G = ctx.group
    c = cochain1(ctx, {g: ctx.w(g) for g in G.non_identity}, {})
    d = cochain_differential(c)
    for (g, h), v in d.on_gg.items():
        gh = G.m(g, h)
        assert v == (ctx.w(gh) if gh != G.identity else ctx.scalar(2))
    assert len(d.on_gg) == len(G.non_identity) ** 2
    assert not d.on_gv


@pytest.mark.parametrize("name", ["dihedral-h1", "cyclic-recipe"])
@settings(max_examples=8, deadline=None)
@given(seed=st.integers(0, 10 ** 6))
def test_formula_matches_resolution_path(loaded, name, seed):
    ctx = loaded(name).ctx
    c = rand_c1(ctx, random.Random(seed))
    d = cochain_differential(c)
    assert d == cochain_differential_via_resolution(c)
    assert cochain_differential(d).is_zero()
    assert cochain_differential(d) == cochain_differential_via_resolution(d)


def test_vv_slot_is_commutator_equation(h1):
    ctx = h1.ctx
    rng = random.Random(11)
    for _ in range(10):
        p1, p2 = random_element(ctx, rng, 3, 3), random_element(ctx, rng, 3, 3)
        d = cochain_differential(cochain1(ctx, {}, {0: p1, 1: p2}))
        assert vv_value(d, 0, 1) == cp_commutator(p2, ctx.var(0)) + cp_commutator(ctx.var(1), p1)


def test_solver_vv_rows_match_hand_assembly(h1):
    ctx = h1.ctx
    res = coboundary_solve(h1, 2)
    vv = ((), (0, 1))
    for col, (slot, g, m) in enumerate(res.unknowns):
        u = ctx.monomial(m, g)
        if slot == ((), (0,)):
            hand = cp_commutator(ctx.var(1), u)
        elif slot == ((), (1,)):
            hand = cp_commutator(u, ctx.var(0))
        else:
            hand = ctx.zero()
        got = {}
        for i, (s2, h, mm) in enumerate(res.row_labels):
            if s2 == vv and col in res.rows[i]:
                got[(h, mm)] = res.rows[i][col]
        want = {(h, mm): c for h, mm, c in hand.terms()}
        assert got == want


@pytest.mark.parametrize("name", FIXTURES)
def test_theta_bar_shape(loaded, name):
    st_ = loaded(name).structure
    tb = theta_bar_of_infinitesimal(st_)
    assert not tb.on_gg and not tb.on_gv
    assert vv_value(tb, st_.x1, st_.x2) == expected_vv(st_)
    assert theta_shape_check(st_, tb).ok


def test_theta_bar_values(h1, hm1):
    assert theta_bar_of_infinitesimal(h1).to_dict() == {"(x1, x2)": "w[t] + w[t^3]"}
    assert expected_vv(hm1) == E(hm1, "2*w[s] + 2*w[t*s] + 2*w[t^2*s] + 2*w[t^3*s]")


def test_theta_bar_sign_convention(h1):
    # value on (x1bar, x2bar) is Phi(x1, x2) - Phi(x2, x1), no extra global sign
    x1, x2 = h1.ctx.var(0), h1.ctx.var(1)
    want = infinitesimal(h1, x1, x2) - infinitesimal(h1, x2, x1)
    assert vv_value(theta_bar_of_infinitesimal(h1), 0, 1) == want


@pytest.mark.parametrize("name", FIXTURES)
def test_cocycle_check_passes(loaded, name):
    rep = cocycle_check(loaded(name).structure, samples=100)
    assert rep.ok, rep.to_dict()


def test_wrong_phi_fails_with_witness(h1):
    rep = cocycle_check(h1, phi=lambda a, b: h1.delta_apply(1, a) * b, samples=50)
    assert not rep.ok
    chk = rep.get("coh.bar_cocycle")
    assert not chk.ok and {"a", "b", "c"} <= set(chk.witness)


def test_zero_target_is_feasible_with_zero(h1):
    res = coboundary_solve(h1, 2, Cochain(h1.ctx, 2))
    assert res.feasible and res.verified and res.witness(h1.ctx).is_zero()


def test_planted_coboundary_is_recovered(h1):
    ctx = h1.ctx
    u = rand_c1(ctx, random.Random(4))
    target = cochain_differential(u)
    res = coboundary_solve(h1, 2, target)
    assert res.feasible and res.verified
    assert cochain_differential(res.witness(ctx)) == target


def _independent_certificate_check(res, fld):
    y = res.outcome.certificate
    combo = {}
    for i, c in y.items():
        for j, a in res.rows[i].items():
            combo[j] = combo.get(j, fld.zero) + c * a
    lhs_zero = all(v == 0 for v in combo.values())
    rhs = sum((c * res.rhs[i] for i, c in y.items()), fld.zero)
    return lhs_zero and rhs != 0


@pytest.mark.parametrize("name", ["dihedral-h1", "dihedral-hm1"])
def test_infeasible_at_degree_four(loaded, name):
    st_ = loaded(name).structure
    res = coboundary_solve(st_, 4)
    assert not res.feasible and res.verified
    assert _independent_certificate_check(res, st_.ctx.field)


@pytest.mark.parametrize("name", FIXTURES)
def test_obstruction_and_solver_agree_for_every_bound(loaded, name):
    st_ = loaded(name).structure
    assert direct_obstruction_check(st_).ok
    bounds = range(1, 6) if name in ("dihedral-h1", "dihedral-hm1") else range(1, 4)
    for D in bounds:
        assert not coboundary_solve(st_, D).feasible, D


def test_obstruction_rhs(h1, hm1):
    assert direct_obstruction_check(h1).rhs == {"t": "1", "t^3": "1"}
    assert direct_obstruction_check(hm1).rhs == {"s": "2", "t*s": "2", "t^2*s": "2", "t^3*s": "2"}


def test_obstruction_not_applicable_when_rhs_touches_x1():
    raw = read_config(fixture_path("dihedral-h1"))
    for entry in raw["delta1"]:
        entry["P"] = "x1"
    st_ = load(raw).structure
    rep = direct_obstruction_check(st_)
    assert not rep.ok
    assert rep.get("obstruction.rhs_support").witness["reason"] == "RHS support touches x1"


@pytest.mark.parametrize("name", ["dihedral-h1", "dihedral-hm1"])
def test_verdict(loaded, name):
    t = time.perf_counter()
    v = nontriviality_verdict(loaded(name).structure, D=4)
    assert time.perf_counter() - t < 60
    assert (v["status"], v["verdict"], v["basis"], v["exact"], v["consistent"]) == \
        ("pass", "nontrivial", "proof", True, True)
    assert v["direct_obstruction"]["status"] == "applies"
    assert v["coboundary"]["status"] == "infeasible" and v["coboundary"]["verified"]


def test_slots_count(h1):
    # |G|-1 = 7 non-identity elements, n = 2
    assert len(slots(h1.ctx, 1)) == 7 + 2
    assert len(slots(h1.ctx, 2)) == 49 + 14 + 1
    assert len(slots(h1.ctx, 3)) == 343 + 98 + 7
