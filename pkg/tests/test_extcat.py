import itertools

import pytest
from hypothesis import given, strategies as st

from ecgw.errors import NotComposable, NotCoproductInclusion, NotMorphism
from ecgw.extcat import (
    FinSetInstance,
    FinSetObj,
    Injection,
    MActionSet,
    Monoid,
    MSetInstance,
    SetFun,
    compose,
    identity,
)

from conftest import rng_for

SETS = FinSetInstance()
M = Monoid.idempotent2()
MSETS = MSetInstance(M)
seeds = st.integers(0, 10**6)


def xy_action():
    # m.x = y, m.y = y
    return MActionSet(FinSetObj("xy"), M, {1: {"x": "y", "y": "y"}})


def test_finset_is_canonically_ordered():
    assert FinSetObj(["b", "a"]).elements == FinSetObj(["a", "b"]).elements
    with pytest.raises(ValueError):
        FinSetObj(["a", "a"])


def test_compose_identity_and_singleton_chase():
    A, X, PQ = FinSetObj("a"), FinSetObj("x"), FinSetObj("pq")
    f = SetFun(A, X, {"a": "x"})
    g = SetFun(X, PQ, {"x": "p"})
    assert compose(identity(X), f).assignment == f.assignment
    assert compose(g, f).assignment == {"a": "p"}
    with pytest.raises(NotComposable):
        compose(f, g)


def test_setfun_rejects_partial_or_escaping_maps():
    A, B = FinSetObj("ab"), FinSetObj("x")
    with pytest.raises(NotMorphism):
        SetFun(A, B, {"a": "x"})
    with pytest.raises(NotMorphism):
        SetFun(A, B, {"a": "x", "b": "z"})
    with pytest.raises(NotMorphism):
        Injection(A, B, {"a": "x", "b": "x"})


@given(seeds)
def test_composite_of_injections_is_injective(seed):
    rng = rng_for(seed)
    A = SETS.random_object(rng, 6)
    B = FinSetObj(list(A.elements) + [f"extra{k}" for k in range(rng.randint(0, 3))])
    C = FinSetObj(list(B.elements) + ["extra_w"])
    perm = list(B.elements)
    rng.shuffle(perm)
    f = Injection(A, B, dict(zip(A.elements, perm)))
    g = Injection(B, C, {b: b for b in B.elements})
    gf = compose(g, f)
    # brute force over all pairs
    assert all(gf(a) != gf(b) for a, b in itertools.combinations(A.elements, 2))


def test_coproduct_examples():
    B = FinSetObj("xyz")
    S, inl, inr = SETS.coproduct(FinSetObj(), B)
    assert len(S) == 3 and inr.is_injective() and inr.image() == S.points()
    S, inl, inr = SETS.coproduct(FinSetObj("a"), FinSetObj("a"))
    assert len(S) == 2 and not inl.image() & inr.image()
    S, inl, inr = SETS.coproduct(FinSetObj("abc"), FinSetObj("defg"))
    assert len(S) == 7
    P, _, _ = SETS.pullback(inl, inr)
    assert len(P) == 0


def test_pullback_examples():
    C = FinSetObj("123")
    P, p1, p2 = SETS.pullback(identity(C), identity(C))
    assert len(P) == 3 and p1.is_injective() and p2.is_injective()
    f = Injection(FinSetObj("12"), C, {"1": "1", "2": "2"})
    g = Injection(FinSetObj("23"), C, {"2": "2", "3": "3"})
    P, p1, p2 = SETS.pullback(f, g)
    assert len(P) == 1 and f(p1(P.elements[0])) == "2"
    with pytest.raises(NotComposable):
        SETS.pullback(f, identity(FinSetObj("12")))


@given(seeds)
def test_maps_into_a_coproduct_decompose(seed):
    rng = rng_for(seed)
    A, B = SETS.random_object(rng, 4), SETS.random_object(rng, 4)
    S, inl, inr = SETS.coproduct(A, B)
    X = SETS.random_object(rng, 6)
    if not len(S):
        X = FinSetObj()
    h = SetFun(X, S, {x: rng.choice(S.elements) for x in X.elements})
    Y, y1, _ = SETS.pullback(h, inl)
    Z, z1, _ = SETS.pullback(h, inr)
    # X is the disjoint union of the two pullbacks
    assert set(y1.image()) | set(z1.image()) == X.points()
    assert not set(y1.image()) & set(z1.image())
    assert len(Y) + len(Z) == len(X)


def test_complement_examples():
    C = FinSetObj("123")
    i = SETS.subobject(C, {"1", "2"})
    assert SETS.complement(i).image() == {"3"}
    assert len(SETS.complement(identity(C)).dom) == 0


@given(seeds)
def test_complement_is_an_involution(seed):
    rng = rng_for(seed)
    for inst in (SETS, MSETS):
        X = inst.random_object(rng)
        i = inst.subobject(X, inst.random_summand(rng, X))
        j = inst.complement(inst.complement(i))
        assert j.image() == i.image()
        assert inst.isomorphic(j.dom, i.dom)


def test_coproduct_inclusion_predicate_on_finsets():
    C = FinSetObj("ab")
    assert SETS.is_coproduct_inclusion(identity(C))
    assert not SETS.is_coproduct_inclusion(SetFun(C, FinSetObj("x"), {"a": "x", "b": "x"}))


def test_coproduct_inclusion_predicate_on_msets():
    X = xy_action()
    Y = X.restrict({"y"})
    inc_y = SetFun(Y, X, {"y": "y"})
    # complement {x} is not closed since m.x = y
    assert not MSETS.is_coproduct_inclusion(inc_y)
    with pytest.raises(NotCoproductInclusion):
        MSETS.complement(inc_y)
    # {x} is not even closed, so no sub-M-set exists on it
    with pytest.raises(NotCoproductInclusion):
        X.restrict({"x"})
    assert MSETS.is_coproduct_inclusion(SetFun(X, X, {"x": "x", "y": "y"}))


def test_maction_validation():
    with pytest.raises(NotMorphism):
        MActionSet(FinSetObj("xy"), M, {1: {"x": "y"}})
    with pytest.raises(NotMorphism):
        MActionSet(FinSetObj("xy"), M, {1: {"x": "z", "y": "y"}})
    # m.x = y, m.y = x breaks m*m = m
    with pytest.raises(NotMorphism):
        MActionSet(FinSetObj("xy"), M, {1: {"x": "y", "y": "x"}})


def test_monoid_json_round_trip():
    data = M.to_json()
    assert Monoid.from_json(data).to_json() == data
    with pytest.raises(ValueError):
        Monoid.from_json({"elements": ["1", "m"], "identity": "1", "table": [["1", "m"], ["m", "1"], ["1", "1"]]})


@given(seeds)
def test_coproduct_inclusions_are_monic_with_empty_overlap(seed):
    rng = rng_for(seed)
    for inst in (SETS, MSETS):
        A, B = inst.random_object(rng), inst.random_object(rng)
        S, inl, inr = inst.coproduct(A, B)
        assert inl.is_injective() and inr.is_injective()
        assert len(inst.pullback(inl, inr)[0]) == 0
        assert inl.image() | inr.image() == S.points()


@given(seeds)
def test_mset_canonical_form_respects_relabelling(seed):
    rng = rng_for(seed)
    X = MSETS.random_object(rng)
    names = [f"q{k}" for k in range(len(X))]
    rng.shuffle(names)
    Y, _ = MSETS.relabel(X, dict(zip(X.elements, names)))
    assert MSETS.isomorphic(X, Y)
    assert MSETS.canonical_form(X) == MSETS.canonical_form(Y)


@given(seeds)
def test_right_cancellation_of_coproduct_inclusions(seed):
    # if f and f.g are coproduct inclusions then so is g
    rng = rng_for(seed)
    C = MSETS.random_object(rng)
    B = MSETS.subobject(C, MSETS.random_summand(rng, C))
    A = MSETS.subobject(B.dom, MSETS.random_summand(rng, B.dom))
    assert MSETS.is_coproduct_inclusion(compose(B, A))
    assert MSETS.is_coproduct_inclusion(A)
