import itertools

import pytest
from hypothesis import given, strategies as st

from ecgw.cgw import is_distinguished, is_pullback, pc_square
from ecgw.chain import (
    CHAIN,
    ChainComplex,
    ChainMapE,
    ChainMapM,
    chain_square,
    coker_chain,
    coker_chain_diagram,
    concentrated,
    empty_complex,
    euler_char,
    identity_map,
    initial_map,
    is_kernel_cokernel_pair,
    isomorphic,
    ker_chain,
    ker_chain_diagram,
    random_complex,
    random_map,
    star_chain_e,
    star_chain_m,
    transport_inverse,
    transport_square,
    truncate,
    truncation_sequence,
    validate_map,
)
from ecgw.cgw import same_square
from ecgw.errors import ChainConditionViolated, IndexOutOfWindow, MalformedComplex, NotPullback
from ecgw.extcat import FinSetObj

from conftest import rng_for

seeds = st.integers(0, 10**6)


def two_step(bar0):
    # the lowest image subset must be empty, so degree -1 receives d_0
    return ChainComplex(
        (-1, 1),
        {1: ["x"], 0: ["y", "z"], -1: ["w"]},
        {1: ["x"], 0: bar0},
        {1: {"x": "y"}, 0: {t: "w" for t in bar0}},
    )


def test_validate_examples():
    assert empty_complex((-2, 2)).is_empty()
    two_step(["z"])
    with pytest.raises(ChainConditionViolated) as err:
        two_step(["y"])
    assert err.value.index == 0


def test_malformed_complexes():
    with pytest.raises(MalformedComplex):
        ChainComplex((0, 1), {1: ["x"]}, {1: ["q"]})
    with pytest.raises(MalformedComplex):
        ChainComplex((0, 1), {1: ["x"], 0: ["y"]}, {1: ["x"]}, {1: {}})
    with pytest.raises(MalformedComplex):
        ChainComplex((0, 1), {1: ["x"], 0: ["y"]}, {1: ["x"]}, {1: {"x": "w"}})
    with pytest.raises(IndexOutOfWindow):
        ChainComplex((0, 1), {3: ["x"]})


@given(seeds)
def test_identity_and_initial_maps_are_valid(seed):
    X = random_complex(rng_for(seed))
    for kind in "me":
        assert identity_map(X, kind).is_iso()
        assert len(initial_map(X, kind).src.points()) == 0


def test_map_not_pullback_names_degree():
    X = ChainComplex((0, 1), {1: ["x"], 0: ["y"]})
    Y = ChainComplex((0, 1), {1: ["x"], 0: ["y"]}, {1: ["x"]}, {1: {"x": "y"}})
    with pytest.raises(NotPullback) as err:
        validate_map("m", X, Y, {1: {"x": "x"}, 0: {"y": "y"}})
    assert err.value.index == 1


def test_e_map_needs_full_preimage():
    Z = ChainComplex((0, 1), {1: ["x"], 0: ["y"]})
    Y = ChainComplex((0, 1), {1: ["x"], 0: ["y"]}, {1: ["x"]}, {1: {"x": "y"}})
    with pytest.raises(NotPullback):
        validate_map("e", Z, Y, {1: {"x": "x"}, 0: {"y": "y"}})
    validate_map("e", Y, Y, {1: {"x": "x"}, 0: {"y": "y"}})


def test_coker_and_ker_examples():
    Y = two_step(["z"])
    Z, _ = coker_chain(identity_map(Y, "m"))
    assert Z.is_empty()
    Z, _ = coker_chain(initial_map(Y, "m"))
    assert isomorphic(Z, Y)
    K, _ = ker_chain(identity_map(Y, "e"))
    assert K.is_empty()
    K, _ = ker_chain(initial_map(Y, "e"))
    assert isomorphic(K, Y)


def test_coker_closed_form_small():
    # removing y leaves x with its image dropped
    Y = two_step(["z"])
    f = validate_map("m", ChainComplex((-1, 1), {0: ["y"]}), Y, {0: {"y": "y"}})
    Z, g = coker_chain(f)
    assert Z.X(1).points() == {"x"} and len(Z.bar(1)) == 0
    assert Z.X(0).points() == {"z"} and Z.bar(0).points() == {"z"}
    assert is_kernel_cokernel_pair(f, g)


@given(seeds)
def test_coker_ker_round_trip(seed):
    rng = rng_for(seed)
    f = random_map(rng, "m", max_size=5)
    Z, g = coker_chain(f)
    K, m = ker_chain(g)
    assert isomorphic(K, f.src)
    assert m.arrow.image() == f.arrow.image()
    assert is_kernel_cokernel_pair(f, g)
    g = random_map(rng, "e", max_size=5)
    K, m = ker_chain(g)
    Z, e = coker_chain(m)
    assert isomorphic(Z, g.src) and e.arrow.image() == g.arrow.image()


@given(seeds)
def test_closed_forms_match_diagram(seed):
    rng = rng_for(seed)
    f = random_map(rng, "m")
    assert isomorphic(coker_chain(f)[0], coker_chain_diagram(f)[0])
    g = random_map(rng, "e")
    assert isomorphic(ker_chain(g)[0], ker_chain_diagram(g)[0])


@given(seeds)
def test_cokernel_partitions_degrees(seed):
    f = random_map(rng_for(seed), "m")
    Z, g = coker_chain(f)
    Y = f.dst
    for i in Y.window_range():
        assert not (f.image(i) & g.image(i))
        assert f.image(i) | g.image(i) == Y.X(i).points()


def test_transport_identity_square():
    X = two_step(["z"])
    i, j = identity_map(X, "m"), identity_map(X, "e")

    sq = chain_square(i, j, j, i)
    h = transport_square(sq)
    assert all(h.arrows()[k].dom.is_empty() for k in ("top", "left", "right"))
    assert h.bottom.is_iso()
    assert same_square(transport_inverse(h), sq)


@given(seeds)
def test_transport_round_trip(seed):
    rng = rng_for(seed)
    sq = pc_square(CHAIN, rng)
    h = transport_square(sq)
    assert is_pullback(h)
    assert same_square(transport_inverse(h), sq)
    if is_distinguished(sq):
        assert h.top.is_iso()


def test_star_chain_m_examples():
    X = two_step(["z"])
    Y = concentrated(["p", "q"], 0, (-1, 1))
    E = empty_complex((-1, 1))
    P, i, j, _ = star_chain_m(initial_map(X, "m"), initial_map(Y, "m"))
    assert [len(P.X(k)) for k in (-1, 0, 1)] == [1, 4, 1]
    assert euler_char(P) == euler_char(X) + euler_char(Y)
    P, i, j, _ = star_chain_m(identity_map(X, "m"), identity_map(X, "m"))
    assert isomorphic(P, X)
    assert E.is_empty()


def test_star_chain_e_disjoint_union():
    W = ChainComplex((0, 1), {1: ["x"], 0: ["y", "z"]}, {1: ["x"]}, {1: {"x": "y"}})
    A = empty_complex((0, 1))
    B = ChainComplex((0, 1), {1: ["x"], 0: ["y"]}, {1: ["x"]}, {1: {"x": "y"}})
    C = ChainComplex((0, 1), {0: ["z"]})
    f, g = initial_map(B, "e"), initial_map(C, "e")
    r = validate_map("e", B, W, {1: {"x": "x"}, 0: {"y": "y"}})
    b = validate_map("e", C, W, {0: {"z": "z"}})
    P, i, j, _ = star_chain_e(f, g, (r, b))
    assert isomorphic(P, W)
    assert A.is_empty()


@given(seeds)
def test_concentrated_and_truncation(seed):
    assert concentrated([], 0).is_empty()
    assert euler_char(concentrated(["a", "b"], 0)) == 2
    assert euler_char(concentrated(["a"], 1)) == -1
    A = FinSetObj(["a", "b"])
    assert truncate(concentrated(A, 2, (0, 2)), "drop_top").is_empty()
    X = random_complex(rng_for(seed), (0, 2))
    F, m, G, e = truncation_sequence(X)
    assert is_kernel_cokernel_pair(m, e)
    assert euler_char(X) == euler_char(F) + euler_char(G)


def test_chain_maps_are_levelwise_injective_only():
    X = ChainComplex((0, 0), {0: ["a", "b"]})
    Y = ChainComplex((0, 0), {0: ["c"]})
    with pytest.raises(Exception):
        ChainMapM(X, Y, {0: {"a": "c", "b": "c"}})
    assert isinstance(validate_map("e", Y, Y, {0: {"c": "c"}}), ChainMapE)
