import pytest

from hqdeform.config import ConfigError, load, read_config, validation_report
from hqdeform.fixtures import fixture_path
from hqdeform.hq_structure import (ALPHA, ALPHA_INV, VARSIGMA, VARSIGMA_INV, ClosedFormError, StructureError,
                                   derived_invariants, validate_structure)
from hqdeform.parsing import parse_element
from hqdeform.polynomials import monomials_up_to

from conftest import FIXTURES
from mutations import MUTATIONS, mutate


def E(st, text):
    return parse_element(text, st.ctx)


def test_q_values(loaded):
    fmt = {n: loaded(n).structure.ctx.field.format(loaded(n).structure.q) for n in FIXTURES}
    assert fmt == {"dihedral-h1": "1", "dihedral-hm1": "-1", "dihedral-h1-twisted-alpha": "1",
                   "cyclic-recipe": "12 mod 13"}
    assert loaded("dihedral-hm1").structure.l == 2
    assert loaded("dihedral-h1").structure.l is None


def test_first_structure_lambdas(h1):
    G = h1.ctx.group
    t, t2 = G.index("t"), G.index("t^2")
    assert h1.lam[(1, t)] * h1.lam[(1, t2)] == 1


def test_second_structure_lambda(hm1):
    G = hm1.ctx.group
    s, t = G.index("s"), G.index("t")
    # rho(t) = I, so the sign comes from the reflection
    assert hm1.lam[(2, t)] == 1
    assert hm1.lam[(1, s)] * hm1.lam[(1, t)] == -1 == hm1.q


def test_automorphisms(h1):
    one = h1.ctx.one()
    assert h1.apply_automorphism(ALPHA, one) == one
    assert h1.apply_automorphism(VARSIGMA, E(h1, "w[t*s]")) == E(h1, "-w[t*s]")
    assert h1.apply_automorphism(ALPHA, E(h1, "x1^2*w[t]")) == E(h1, "x1^2*w[t]")
    a = E(h1, "(x1 + 2*x2^2)*w[t^3*s] + x2*w[t]")
    for fwd, back in ((ALPHA, ALPHA_INV), (VARSIGMA, VARSIGMA_INV)):
        assert h1.apply_automorphism(back, h1.apply_automorphism(fwd, a)) == a


def test_delta_examples(h1):
    assert h1.delta_apply(1, E(h1, "x2")).is_zero()
    assert h1.delta_apply(1, E(h1, "x1")) == E(h1, "w[t] + w[t^3]")
    assert h1.delta_apply(1, E(h1, "x1^2")) == E(h1, "2*x1*w[t] + 2*x1*w[t^3]")
    assert h1.delta_apply(2, E(h1, "x2*w[s]")) == E(h1, "w[t^2*s]")


def test_twisted_alpha_sign(loaded):
    st = loaded("dihedral-h1-twisted-alpha").structure
    assert st.apply_automorphism(ALPHA, E(st, "x1*w[t*s]")) == E(st, "-x1*w[t*s]")


@pytest.mark.parametrize("name", FIXTURES)
def test_omega_nu_relation(loaded, name):
    st = loaded(name).structure
    assert st.omega[0] == st.lam[(1, st.g21)] * st.nu[0]


@pytest.mark.parametrize("name", FIXTURES)
@pytest.mark.parametrize("mode", ["second-case", "general"])
def test_fixtures_validate(loaded, name, mode):
    rep = validate_structure(loaded(name).structure, mode)
    assert rep.ok, rep.failed_ids()


def test_report_lists_every_condition(h1):
    ids = set(validate_structure(h1).ids())
    for k in range(1, 7):
        assert f"cor2.item{k}" in ids
    assert {"cor2.c", "cor2.d", "cor2.b.classes", "hq.cond1", "hq.cond4", "remark.omega_nu"} <= ids
    gen = set(validate_structure(h1, "general").ids())
    assert {f"thm.item{k}" for k in range(1, 7)} <= gen


@pytest.mark.parametrize("name", FIXTURES)
def test_derived_invariants(loaded, name):
    rep = derived_invariants(loaded(name).structure)
    assert rep.ok and set(rep.ids()) == {"cor2.det1", "cor2.lambda_products", "remark.lambda_uniform"}


def test_determinant_examples(h1, hm1):
    G = h1.ctx.group
    assert h1.ctx.rep(G.index("t^3")).det() == 1
    for g in G.elements:
        if G.label(g).endswith("s"):
            assert hm1.ctx.rep(g).det() == 1


@pytest.mark.parametrize("name", FIXTURES)
def test_ten_mutations_each_named(name):
    raw = read_config(fixture_path(name))
    cases = MUTATIONS[name]
    assert len(cases) == 10
    for label, fn, want in cases:
        rep = validation_report(mutate(raw, fn))
        assert not rep.ok, label
        assert want in rep.failed_ids(), (label, rep.failed_ids())


def test_mutation_raises_at_build():
    raw = read_config(fixture_path("cyclic-recipe"))
    bad = mutate(raw, MUTATIONS["cyclic-recipe"][6][1])
    with pytest.raises(StructureError) as ei:
        load(bad)
    assert ei.value.condition == "cor2.b.eq8"


def test_extra_dihedral_mutations():
    raw = read_config(fixture_path("dihedral-h1"))
    shear = dict(raw, alpha={"matrix": [[1, 1], [0, 1]], "character": {"s": 1, "t": 1}})
    assert "cor2.a.stable" in validation_report(shear).failed_ids()
    rs = dict(raw, representation={"s": [[-1, 0], [0, 1]], "t": [[1, 0], [0, 1]]})
    assert "cor2.item3" in validation_report(rs).failed_ids()


@pytest.mark.parametrize("edit", [
    ("dihedral-hm1", "delta2", "x1^2"),
    ("dihedral-hm1", "delta1", "x2^2"),
])
def test_legitimate_variants_pass(edit):
    # l = 2 makes the squared variable a valid kernel element
    name, key, P = edit
    raw = read_config(fixture_path(name))
    for entry in raw[key]:
        entry["P"] = P
    assert validation_report(raw).ok


def test_cyclic_other_xi_passes():
    raw = read_config(fixture_path("cyclic-recipe"))
    raw["cocycle"]["xi"] = "3"
    assert validation_report(raw).ok


def test_x1_divisible_p1_fails():
    raw = read_config(fixture_path("cyclic-recipe"))
    raw["delta1"][0]["P"] = "x1*x3"
    failed = validation_report(raw).failed_ids()
    assert failed and ("cor2.d" in failed or "cor2.item5" in failed)


@pytest.mark.parametrize("name", FIXTURES)
def test_closed_form_powers_match_iteration(loaded, name):
    st = loaded(name).structure
    ctx = st.ctx
    for i in (1, 2):
        for m in monomials_up_to(ctx.n, 5):
            for g in ctx.group.elements:
                a = ctx.monomial(m, g)
                it = a
                for s in range(5):
                    assert st.delta_power_closed(i, s, m, g) == it, (i, s, m, g)
                    it = st.delta_apply(i, it)


def test_closed_form_edge_cases(h1):
    ctx = h1.ctx
    m = (2, 1)
    assert h1.delta_power_closed(1, 0, m, 3) == ctx.monomial(m, 3)
    assert h1.delta_power_closed(1, 3, m, 3).is_zero()
    assert h1.delta_power_closed(2, 2, m, 0).is_zero()


def test_closed_form_refuses_without_hypotheses():
    raw = read_config(fixture_path("cyclic-recipe"))
    # still of order 4, but x2 -> 8 x2 + x3 is no longer an eigenvector
    raw["representation"] = {"g": [[5, 0, 0], [0, 8, 0], [0, 1, -1]]}
    st = load(raw).structure
    assert "eigenvector" in st.closed_form_hypotheses()
    with pytest.raises(ClosedFormError):
        st.delta_power_closed(1, 1, (1, 0), 0)


@pytest.mark.parametrize("field,value", [("n", 1), ("x1", 3), ("field", "fp:4"), ("group", {"kind": "klein"})])
def test_config_errors_name_the_field(field, value):
    raw = read_config(fixture_path("dihedral-h1"))
    raw[field] = value
    with pytest.raises(ConfigError) as ei:
        load(raw)
    assert ei.value.field == field
