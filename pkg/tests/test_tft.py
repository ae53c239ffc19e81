import random

import pytest

from brauertft.brauer import (
    braiding,
    compose,
    counit,
    identity,
    loop,
    loops_only,
    tensor,
    unit,
)
from brauertft.qsemiring import bs_from_exponents, bs_one, bs_qpow, q_single, unit_monoidal
from brauertft.tft import (
    DiscreteCobordism,
    aggregate,
    disjoint_union,
    empty_cobordism,
    exotic_demo,
    glue,
    random_cobordism,
    random_disjoint_pair,
    random_gluable_pair,
    random_objects,
    regroup,
    relabel,
    saturate_double_loops,
    state_sum,
    verify_disjoint,
    verify_gluing,
    verify_rationality,
    verify_relabel,
)
from oracles import series_oracle


def cylinder(f="f", g="g", obj=2):
    return DiscreteCobordism({f: obj}, {g: obj}, ((f, g, identity(obj)),))


def test_field_types_validated():
    with pytest.raises(ValueError):
        DiscreteCobordism({"a": 1}, {"b": 1}, (("a", "b", identity(2)),))
    with pytest.raises(ValueError):
        DiscreteCobordism({"a": 1}, {"b": 1}, (("a", "z", identity(1)),))


def test_cylinder_state():
    z = state_sum(cylinder())
    assert z("f", "g") == q_single(identity(2), bs_one())


def test_empty_ensemble_zero():
    W = DiscreteCobordism({"f": 2}, {"g": 2}, ())
    assert state_sum(W).support() == []


def test_loop_field():
    W = DiscreteCobordism({"f": 2}, {"g": 2}, (("f", "g", tensor(loop(), identity(2))),))
    assert state_sum(W)("f", "g") == q_single(identity(2), bs_qpow(1))


def test_multiplicity_ignored():
    W = DiscreteCobordism({"f": 2}, {"g": 2}, (("f", "g", braiding(1, 1)),) * 3 + (("f", "g", identity(2)),))
    V = DiscreteCobordism({"f": 2}, {"g": 2}, (("f", "g", braiding(1, 1)), ("f", "g", identity(2))))
    assert state_sum(W) == state_sum(V)


def test_glue_cylinders():
    W = glue(cylinder("a", "u"), cylinder("u", "c"))
    assert W.fields == (("a", "c", identity(2)),)


def test_glue_cap_cup_makes_loop():
    W1 = DiscreteCobordism({"f": 0}, {"u": 2}, (("f", "u", unit(1)),))
    W2 = DiscreteCobordism({"u": 2}, {"h": 0}, (("u", "h", counit(1)),))
    (_, _, f), = glue(W1, W2).fields
    assert f == compose(counit(1), unit(1)) == loop()
    assert verify_gluing(W1, W2).ok


def test_glue_interface_mismatch():
    with pytest.raises(ValueError):
        glue(cylinder("a", "u"), cylinder("v", "c"))
    with pytest.raises(ValueError):
        glue(cylinder("a", "u", 2), cylinder("u", "c", 1))


def test_glue_associative():
    rng = random.Random(12)
    for _ in range(20):
        parity = rng.randint(0, 1)
        objs = [random_objects(rng, p, rng.randint(1, 3), parity) for p in "abcd"]
        W1, W2, W3 = (random_cobordism(rng, objs[i], objs[i + 1], rng.randint(0, 8)) for i in range(3))
        assert glue(glue(W1, W2), W3).field_set() == glue(W1, glue(W2, W3)).field_set()


def test_gluing_single_key():
    rng = random.Random(13)
    for _ in range(20):
        W1 = random_cobordism(rng, {"a": 2}, {"u": 2}, 5)
        W2 = random_cobordism(rng, {"u": 2}, {"c": 2}, 5)
        assert verify_gluing(W1, W2).ok


def test_gluing_random():
    rng = random.Random(14)
    for _ in range(40):
        assert verify_gluing(*random_gluable_pair(rng)).ok


def test_gluing_duplicated_fields():
    rng = random.Random(15)
    for _ in range(20):
        W1, W2 = random_gluable_pair(rng, max_fields=10)
        W1 = DiscreteCobordism(W1.in_objects, W1.out_objects, W1.fields * 2)
        assert verify_gluing(W1, W2).ok


def test_relabel_conjugates():
    rng = random.Random(16)
    W, _ = random_gluable_pair(rng)
    in_map = {k: f"in-{i}" for i, k in enumerate(reversed(W.in_keys))}
    out_map = {k: f"out-{i}" for i, k in enumerate(W.out_keys)}
    assert verify_relabel(W, in_map, out_map).ok
    with pytest.raises(ValueError):
        relabel(W, {}, out_map)


def test_disjoint_with_empty():
    W = cylinder()
    U = disjoint_union(W, empty_cobordism())
    assert U.fields == ((("f", "*"), ("g", "*"), identity(2)),)
    assert verify_disjoint(W, empty_cobordism()).ok
    unit_regrouped = regroup(state_sum(U), W, empty_cobordism())
    assert unit_regrouped("f", "g", "*", "*") == state_sum(W)("f", "g")
    assert state_sum(empty_cobordism())("*", "*") == unit_monoidal()


def test_disjoint_two_cylinders():
    U = disjoint_union(cylinder("a", "b", 1), cylinder("c", "d", 2))
    z = state_sum(U)
    assert z(("a", "c"), ("b", "d")) == q_single(identity(3), bs_one())
    assert verify_disjoint(cylinder("a", "b", 1), cylinder("c", "d", 2)).ok


def test_disjoint_overlap_rejected():
    with pytest.raises(ValueError):
        disjoint_union(cylinder("a", "b"), cylinder("a", "c"))


def test_disjoint_random():
    rng = random.Random(17)
    for _ in range(40):
        assert verify_disjoint(*random_disjoint_pair(rng)).ok


def test_saturate_depth_zero():
    W = cylinder()
    assert saturate_double_loops(W, 0) == W
    with pytest.raises(ValueError):
        saturate_double_loops(W, -1)


def test_saturate_depth_three():
    phi = braiding(1, 1)
    W = DiscreteCobordism({"f": 2}, {"g": 2}, (("f", "g", phi),))
    sat = saturate_double_loops(W, 3)
    assert [f for _, _, f in sat.fields] == [tensor(phi, loops_only(k)) for k in (0, 2, 4, 6)]
    want = bs_from_exponents(series_oracle([0, 2, 4, 6], 64))
    assert state_sum(sat)("f", "g") == q_single(phi, want)


def test_rationality_even():
    W = DiscreteCobordism({"f": 2}, {"g": 2}, (("f", "g", identity(2)), ("f", "g", tensor(loops_only(2), braiding(1, 1)))))
    report = verify_rationality(W, 20)
    assert report.ok
    assert sorted((row["r"], row["beta"]) for row in report.table) == [(0, 0), (2, 0)]


def test_rationality_odd():
    phi = identity(2)
    W = DiscreteCobordism({"f": 2}, {"g": 2}, (("f", "g", phi), ("f", "g", tensor(loop(), phi))))
    report = verify_rationality(W, 20)
    assert report.ok
    (row,) = report.table
    assert (row["r"], row["beta"], row["s"]) == (0, 1, 0)


def test_rationality_unsaturated_explains():
    W = DiscreteCobordism({"f": 0}, {"g": 0}, (("f", "g", identity(0)), ("f", "g", loop())))
    report = verify_rationality(W, 0)
    assert not report.ok
    assert "saturate" in report.failures[0].detail


def test_rationality_precondition():
    report = verify_rationality(cylinder(), 40, 64)
    assert not report.ok and "exceeds" in report.failures[0].detail


def test_rationality_random():
    rng = random.Random(18)
    for _ in range(10):
        W, _ = random_gluable_pair(rng, max_fields=15)
        assert verify_rationality(W, 20).ok


def test_aggregate_cylinder():
    x = aggregate([("g", DiscreteCobordism({"fS": 2}, {"g": 2}, (("fS", "g", identity(2)),)))])
    assert 0 in x[identity(2)]


def test_aggregate_loop_bearing():
    rng = random.Random(19)
    scen = []
    for j in range(4):
        W = random_cobordism(rng, {"fS": 2}, {f"m{j}": 2}, 6)
        W = DiscreteCobordism(W.in_objects, W.out_objects, tuple((a, b, tensor(f, loop())) for a, b, f in W.fields))
        scen.append((f"m{j}", W))
    x = aggregate(scen)
    assert all(s.min_exponent() >= 1 for _, s in x.items())


def test_aggregate_empty():
    assert aggregate([]).is_zero()


def test_aggregate_needs_source():
    with pytest.raises(ValueError):
        aggregate([("g", cylinder())])


def test_exotic_demo():
    report = exotic_demo()
    assert report.ok, report.to_text()
    assert "distinct" in report.to_text()
    std = {r["shell"]: r["series"] for r in report.table if r["side"] == "standard"}
    exo = {r["shell"]: r["series"] for r in report.table if r["side"] == "exotic"}
    assert std["identity"].startswith("1")
    assert all(not s.startswith("1") for s in exo.values())


def test_exotic_demo_deterministic():
    assert exotic_demo(3).to_json() == exotic_demo(3).to_json()


def test_scenario_file_round_trip():
    W = DiscreteCobordism({"a": 2, "b": 0}, {"c": 2}, (("a", "c", braiding(1, 1)), ("b", "c", unit(1))))
    assert DiscreteCobordism.from_text(W.to_text()) == W
    text = "# cylinder\nin f 2\nout g 2\nf g 2;2;0;(I1-O1)(I2-O2)  # identity\n"
    assert state_sum(DiscreteCobordism.from_text(text)) == state_sum(cylinder())
    with pytest.raises(ValueError, match="line 3"):
        DiscreteCobordism.from_text("in f 2\nout g 2\nf g nonsense\n")
