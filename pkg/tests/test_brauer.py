import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from brauertft.brauer import (
    LOOP_WORD,
    BrauerMorphism,
    Compose,
    Gen,
    Id,
    Tensor,
    as_permutation,
    braiding,
    compose,
    counit,
    decompose_to_word,
    double_factorial,
    enumerate_loop_free,
    enumerate_morphisms,
    evaluate_word,
    from_permutation,
    identity,
    is_isomorphism,
    loop,
    loops_only,
    strip_loops,
    tensor,
    unit,
    verify_relations,
)
from oracles import brute_force_pairings, compose_oracle, double_factorial_oracle, parse_pairs


def _oracle_pairs(f: BrauerMorphism):
    m, n, loops, pairs = parse_pairs(f.to_text())
    rename = {"I": "in", "O": "out"}
    return {frozenset((rename[a[0]], a[1]) for a in pr) for pr in pairs}, loops


def morphisms(max_size=6, max_loops=2):
    @st.composite
    def build(draw):
        m = draw(st.integers(0, max_size))
        n = draw(st.integers(0, max_size - m))
        if (m + n) % 2:
            n = n - 1 if n else n + 1
        items = enumerate_loop_free(m, n)
        f = draw(st.sampled_from(items))
        k = draw(st.integers(0, max_loops))
        return tensor(f, loops_only(k))

    return build()


@pytest.mark.parametrize("m,n", [(m, n) for m in range(7) for n in range(7) if (m + n) % 2 == 0])
def test_count_matches_double_factorial(m, n):
    items = enumerate_loop_free(m, n)
    assert len(items) == double_factorial_oracle(m + n)
    assert len(set(items)) == len(items)


@pytest.mark.parametrize("k", [0, 2, 4, 6])
def test_double_factorial_brute_force(k):
    assert double_factorial(k - 1) == brute_force_pairings(k)


def test_odd_count_is_empty():
    assert enumerate_loop_free(1, 2) == []


def test_counit_of_unit_is_two_loops():
    f = compose(counit(2), unit(2))
    assert (f.m, f.n, f.loops, f.partner) == (0, 0, 2, ())


def test_e_after_i_is_loop():
    assert compose(counit(1), unit(1)) == loop()


def test_identity_laws_small():
    for f in enumerate_loop_free(2, 4):
        assert compose(f, identity(2)) == f
        assert compose(identity(4), f) == f


def test_compose_type_mismatch():
    with pytest.raises(ValueError):
        compose(identity(1), identity(2))


def test_compose_against_component_oracle():
    rng = random.Random(11)
    for _ in range(300):
        m, n = rng.randint(0, 4), rng.choice([0, 2, 4])
        n = n + (m % 2)
        p = rng.randint(0, 4)
        p += (n + p) % 2
        f = rng.choice(enumerate_loop_free(m, n))
        g = rng.choice(enumerate_loop_free(n, p))
        h = compose(g, f)
        _, _, _, fp = parse_pairs(f.to_text())
        _, _, _, gp = parse_pairs(g.to_text())
        pairs, loops = compose_oracle(gp, 0, fp, 0, m, n, p)
        got, got_loops = _oracle_pairs(h)
        assert got == pairs
        assert got_loops == loops == h.loops


@settings(max_examples=150, deadline=None)
@given(st.data())
def test_associativity(data):
    n0, n1 = data.draw(st.integers(0, 3)), data.draw(st.integers(0, 3))
    n1 += (n0 + n1) % 2
    n2 = data.draw(st.integers(0, 3))
    n2 += (n1 + n2) % 2
    n3 = data.draw(st.integers(0, 3))
    n3 += (n2 + n3) % 2
    f = data.draw(st.sampled_from(enumerate_loop_free(n0, n1)))
    g = data.draw(st.sampled_from(enumerate_loop_free(n1, n2)))
    h = data.draw(st.sampled_from(enumerate_loop_free(n2, n3)))
    assert compose(h, compose(g, f)) == compose(compose(h, g), f)


@settings(max_examples=100, deadline=None)
@given(morphisms(4, 1), morphisms(4, 1))
def test_interchange(f, g):
    # (g' o g) (x) (f' o f) = (g' (x) f') o (g (x) f) with the identities
    left = tensor(compose(identity(g.n), g), compose(identity(f.n), f))
    right = compose(tensor(identity(g.n), identity(f.n)), tensor(g, f))
    assert left == right == tensor(g, f)


@settings(max_examples=100, deadline=None)
@given(morphisms(), morphisms(), morphisms())
def test_tensor_associative(f, g, h):
    assert tensor(tensor(f, g), h) == tensor(f, tensor(g, h))


def test_loops_are_central():
    f = braiding(1, 2)
    assert tensor(loop(), f) == tensor(f, loop())
    assert tensor(loop(), f).loops == 1


def test_strip_loops():
    f = tensor(loops_only(3), identity(2))
    f0, k = strip_loops(f)
    assert f0 == identity(2) and k == 3


def test_braiding_is_symmetric():
    assert compose(braiding(2, 1), braiding(1, 2)) == identity(3)


def test_permutation_round_trip():
    for f in enumerate_loop_free(3, 3):
        if is_isomorphism(f):
            assert from_permutation(as_permutation(f)) == f
    with pytest.raises(ValueError):
        as_permutation(counit(1))


def test_text_encoding_round_trip():
    for f in enumerate_morphisms(6, 2):
        assert BrauerMorphism.from_text(f.to_text()) == f
        assert BrauerMorphism.from_json(f.to_json()) == f


def test_text_encoding_example():
    assert identity(2).to_text() == "2;2;0;(I1-O1)(I2-O2)"
    assert loop().to_text() == "0;0;1;"


@pytest.mark.parametrize(
    "bad",
    ["2;2;0;(I1-O1)", "2;2;0;(I1-O1)(I1-O2)", "1;2;0;(I1-O1)", "x", "2;2;-1;(I1-O1)(I2-O2)", "2;2;0;(I1-O3)(I2-O1)"],
)
def test_text_encoding_rejects(bad):
    with pytest.raises(ValueError):
        BrauerMorphism.from_text(bad)


def test_invalid_involution_rejected():
    with pytest.raises(ValueError):
        BrauerMorphism(1, 1, (0, 1), 0)


def test_unit_counit_need_positive():
    with pytest.raises(ValueError):
        unit(0)
    with pytest.raises(ValueError):
        counit(0)


def test_relations_hold():
    report = verify_relations()
    assert report.ok, report.to_text()
    assert len(report.checks) == 11


def test_loop_word():
    assert evaluate_word(LOOP_WORD) == loop()


def test_ill_typed_word():
    with pytest.raises(ValueError):
        Compose(Gen("i"), Gen("i"))


def test_word_types():
    w = Tensor(Gen("b"), Id(1))
    assert (w.dom, w.cod) == (3, 3)


def test_decompose_round_trip_exhaustive():
    for f in enumerate_morphisms(7, 2):
        assert evaluate_word(decompose_to_word(f)) == f
