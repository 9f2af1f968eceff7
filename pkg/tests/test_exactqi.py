import pytest
from hypothesis import given, strategies as st

from ecgw.chain import (
    ChainComplex,
    coker_chain,
    concentrated,
    empty_complex,
    identity_map,
    inclusion_map,
    initial_map,
    random_complex,
    random_exact,
    subcomplex,
)
from ecgw.errors import IndexOutOfWindow
from ecgw.exactqi import (
    acyclicity_audit,
    bicartesian_at,
    bicartesian_criterion,
    criterion_audit,
    homology,
    is_exact,
    is_quasi_iso,
    pushout,
    random_chain_map,
    random_quasi_iso,
)
from ecgw.extcat import FinSetObj, SetFun

from conftest import rng_for

seeds = st.integers(0, 10**6)


def edge(extra=()):
    return ChainComplex((0, 1), {1: ["x"], 0: ["y", *extra]}, {1: ["x"]}, {1: {"x": "y"}})


def test_is_exact_examples():
    assert is_exact(empty_complex((-2, 2)))
    assert is_exact(edge())
    cert = is_exact(concentrated(["a"], 0))
    assert not cert and cert.index == 0


def test_homology_examples():
    A = FinSetObj(["a", "b"])
    assert homology(concentrated(A, 0), 0) == A
    assert homology(edge(["z"]), 0).points() == {"z"}
    with pytest.raises(IndexOutOfWindow):
        homology(edge(), 5)


def test_non_injective_differential_regression():
    # both points hit y: homology vanishes but the complex is not exact
    X = ChainComplex((0, 1), {1: ["x", "x2"], 0: ["y"]}, {1: ["x", "x2"]}, {1: {"x": "y", "x2": "y"}})
    assert all(len(homology(X, i)) == 0 for i in X.window_range())
    cert = is_exact(X)
    assert not cert and cert.index == 1


@given(seeds)
def test_exact_implies_zero_homology(seed):
    X = random_exact(rng_for(seed))
    assert is_exact(X)
    assert all(len(homology(X, i)) == 0 for i in X.window_range())


@given(seeds)
def test_exactness_matches_partition_oracle(seed):
    X = random_complex(rng_for(seed))
    ok = True
    for i in X.window_range():
        hits = list(X.diff(i + 1).values())
        if len(hits) != len(set(hits)) or set(hits) | X.bar(i).points() != X.X(i).points():
            ok = False
    assert bool(is_exact(X)) == ok


def test_quasi_iso_examples():
    X = edge(["z"])
    for kind in "me":
        assert is_quasi_iso(identity_map(X, kind))
        assert bicartesian_criterion(identity_map(X, kind))
    assert is_quasi_iso(initial_map(edge(), "m"))
    assert not is_quasi_iso(initial_map(concentrated(["a"], 0), "m"))


def test_pushout_of_finite_sets():
    A, B, C = FinSetObj("a"), FinSetObj("ab"), FinSetObj("ac")
    classes, i, j = pushout(SetFun(A, B, {"a": "a"}), SetFun(A, C, {"a": "a"}))
    assert len(classes) == 3
    assert i("a") == j("a") and i("b") != j("c")


@given(seeds)
def test_criterion_agrees_for_m_maps(seed):
    f = random_chain_map(rng_for(seed), "m")
    assert is_quasi_iso(f) == bicartesian_criterion(f)


@given(seeds)
def test_exact_complement_gives_quasi_iso(seed):
    rng = rng_for(seed)
    for kind in "me":
        f = random_quasi_iso(rng, kind)
        assert is_quasi_iso(f)


def test_criterion_disagrees_on_known_e_map():
    """Recorded counterexample: a quasi-isomorphic e-map whose comparison
    squares are not bicartesian."""
    Y = ChainComplex(
        (0, 2),
        {2: "abc", 1: "efg", 0: "bh"},
        {2: "c", 1: "ef"},
        {2: {"c": "g"}, 1: {"e": "b", "f": "b"}},
    )
    Z = subcomplex(Y, Y.points() - {(2, "c"), (1, "f"), (1, "g"), (0, "b")})
    g = inclusion_map(Z, Y, "e")
    assert is_quasi_iso(g)
    assert not bicartesian_at(g, 1) and not bicartesian_at(g, 0)
    assert not bicartesian_criterion(g)
    # homology is not invariant either
    assert homology(Z, 1).points() == {"e"} and len(homology(Y, 1)) == 0


def test_acyclicity_audit_passes():
    report = acyclicity_audit(80, 2)
    assert report.ok, report.to_text()
    assert report.rows["A23"]["trials"] - report.rows["A23"]["vacuous"] > 0


def test_criterion_audit_m_passes():
    report = criterion_audit(80, 4, kinds="m")
    assert report.ok, report.to_text()


def test_cokernel_of_quasi_iso_is_exact():
    f = random_quasi_iso(rng_for(9), "m")
    assert is_exact(coker_chain(f)[0])
