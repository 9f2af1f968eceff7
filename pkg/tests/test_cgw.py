import itertools

import pytest
from hypothesis import given, strategies as st

from ecgw.cgw import (
    Arrow,
    Cube,
    ExtensiveCGW,
    HomSquare,
    MixedSquare,
    audit,
    c_inverse,
    c_square,
    classify,
    complete_distinguished,
    hom_square,
    is_distinguished,
    is_pullback,
    k_inverse,
    k_square,
    kernel,
    cokernel,
    pc_square,
    same_square,
    southern,
    star_e,
    star_m,
)
from ecgw.cgw.core import point_compose
from ecgw.errors import MalformedSquare, NotComposable, SquareNotGood
from ecgw.extcat import FinSetInstance, FinSetObj

from conftest import FINSET, MSET, rng_for

seeds = st.integers(0, 10**6)


def S(tokens):
    return FinSetObj(tokens)


def inc(A, B, role):
    return FINSET.arrow(A, B, {a: a for a in A.elements}, role)


def test_kernel_examples():
    C = S("123")
    k, sq = kernel(FINSET, FINSET.identity(C, "e"))
    assert len(k.dom) == 0
    k, _ = kernel(FINSET, FINSET.initial_arrow(C, "e"))
    assert k.image() == C.points()
    k, _ = kernel(FINSET, inc(S("1"), C, "e"))
    assert k.image() == {"2", "3"}
    assert is_distinguished(sq.square)
    c, sq = cokernel(FINSET, inc(S("1"), C, "m"))
    assert c.image() == {"2", "3"} and is_distinguished(sq.square)


def _all_distinguished_corners(f, g):
    """Brute force: every sub-object D of C completing f, g to a
    distinguished square with identity-on-points legs."""
    C = g.cod
    gf = point_compose(g, f)
    found = []
    for r in range(len(C) + 1):
        for pts in itertools.combinations(C.elements, r):
            D = S(pts)
            if not set(gf.values()) <= set(pts):
                continue
            sq = MixedSquare(f, FINSET.arrow(f.dom, D, gf, "e"), g, inc(D, C, "m"))
            if is_distinguished(sq):
                found.append(set(pts))
    return found


def test_complete_distinguished_examples():
    A, B, C = S("1"), S("12"), S("123")
    f, g = inc(A, B, "m"), inc(B, C, "e")
    d = complete_distinguished(FINSET, f, g)
    assert d.square.bottom.image() == {"1", "3"}
    assert _all_distinguished_corners(f, g) == [{"1", "3"}]
    d = complete_distinguished(FINSET, FINSET.identity(C, "m"), FINSET.identity(C, "e"))
    assert len(d.square.C) == len(C)
    d = complete_distinguished(FINSET, inc(A, B, "m"), FINSET.identity(B, "e"))
    assert len(d.square.C) == len(A)
    with pytest.raises(NotComposable):
        complete_distinguished(FINSET, inc(A, C, "m"), g)


def test_classify_examples():
    C = S("ab")
    i, j = FINSET.identity(C, "m"), FINSET.identity(C, "e")
    assert classify(MixedSquare(i, j, j, i)) == (True, True, True)
    # A >-> A+B over C+A >-> C+A+B
    A, AB, CA, CAB = S("a"), S("ab"), S("ac"), S("abc")
    sq = MixedSquare(inc(A, AB, "m"), inc(A, CA, "e"), inc(AB, CAB, "e"), inc(CA, CAB, "m"))
    assert classify(sq).distinguished
    # pullback whose images do not cover
    E, one, two, full = S(""), S("1"), S("2"), S("123")
    sq = MixedSquare(inc(E, two, "m"), inc(E, one, "e"), inc(two, full, "e"), inc(one, full, "m"))
    assert classify(sq) == (True, True, False)
    with pytest.raises(MalformedSquare):
        MixedSquare(inc(E, two, "m"), inc(E, one, "e"), inc(one, full, "e"), inc(one, full, "m"))


@given(seeds)
def test_k_and_c_square_round_trips(seed):
    rng = rng_for(seed)
    for cat in (FINSET, MSET):
        sq = pc_square(cat, rng)
        h = k_square(cat, sq)
        assert h.role == "m" and is_pullback(h)
        assert same_square(k_inverse(cat, h), sq)
        h = c_square(cat, sq)
        assert h.role == "e" and is_pullback(h)
        assert same_square(c_inverse(cat, h), sq)


def test_k_square_of_identity_legs_has_empty_row():
    A, B = S("1"), S("12")
    sq = MixedSquare(inc(A, B, "m"), FINSET.identity(A, "e"), FINSET.identity(B, "e"), inc(A, B, "m"))
    h = k_square(FINSET, sq)
    assert len(h.A) == 0 and len(h.B) == 0


@given(seeds)
def test_distinguished_iff_kernel_comparison_is_iso(seed):
    rng = rng_for(seed)
    sq = pc_square(FINSET, rng)
    h = k_square(FINSET, sq)
    assert is_distinguished(sq) == (len(h.top.dom) == len(h.top.cod))


def test_star_m_examples():
    A, B, C = S("a"), S("ab"), S("ac")
    P, i, j, sq = star_m(FINSET, inc(A, B, "m"), inc(A, C, "m"))
    assert len(P) == 3 and is_pullback(sq)
    P, i, j, _ = star_m(FINSET, FINSET.identity(A, "m"), inc(A, C, "m"))
    assert len(P) == len(C)


def _mediators(P, i, j, right, bottom):
    """Brute force every injection P -> D and keep those commuting."""
    D = right.cod
    out = []
    for image in itertools.permutations(D.elements, len(P)):
        pm = dict(zip(P.elements, image))
        if all(pm[i.pmap[b]] == right.pmap[b] for b in i.pmap) and all(pm[j.pmap[c]] == bottom.pmap[c] for c in j.pmap):
            out.append(pm)
    return out


@given(seeds)
def test_star_m_mediator_is_unique(seed):
    rng = rng_for(seed)
    sq = hom_square(FINSET, rng, "m", good=True)
    if sq is None:
        return
    P, i, j, _ = star_m(FINSET, sq.top, sq.left)
    found = _mediators(P, i, j, sq.right, sq.bottom)
    assert len(found) == 1
    assert FINSET.mediator(P, i, j, sq.right, sq.bottom, "m").pmap == found[0]


def test_star_e_example_and_witness_independence():
    A, B, C = S("2"), S("12"), S("23")
    f, g = inc(A, B, "e"), inc(A, C, "e")
    for D in (S("1234"), S("123"), S("12345")):
        w = HomSquare(f, g, inc(B, D, "e"), inc(C, D, "e"), "e")
        P, i, j, sq = star_e(FINSET, f, g, w)
        assert P.points() == {"1", "2", "3"}
    bad = HomSquare(f, g, inc(B, S("123"), "e"), FINSET.arrow(C, S("123"), {"2": "2", "3": "1"}, "e"), "e")
    with pytest.raises((SquareNotGood, NotComposable)):
        star_e(FINSET, f, g, bad)


def test_southern_square_of_identity_cube():
    X = S("ab")
    roles = ("m", "m", "m")
    bits = list(itertools.product((0, 1), repeat=3))
    verts = {s: X for s in bits}
    edges = {(s, a): FINSET.identity(X, "m") for s in bits for a in range(3) if not s[a]}
    sq = southern(FINSET, Cube(verts, edges, roles), 0)
    assert all(len(a.dom) == 2 and len(a.image()) == 2 for a in sq.arrows().values())


def test_audit_rejects_zero_trials():
    with pytest.raises(ValueError):
        audit(FINSET, 0, 1)


class _CorruptComplement(ExtensiveCGW):
    """Complement that drops one point."""

    def complement(self, f, role):
        rest = sorted(self.points(f.cod) - f.image())
        return self.subobject(f.cod, set(rest[1:]), role)


def test_fault_injection_is_caught():
    bad = _CorruptComplement(FinSetInstance())
    report = audit(bad, 60, 5)
    assert report.failures("K") > 0
    assert "K" in report.to_text() and "counterexample K" in report.to_text()


def test_audit_report_is_deterministic():
    a = audit(FINSET, 40, 11).to_text()
    b = audit(FINSET, 40, 11).to_text()
    c = audit(FINSET, 40, 11, jobs=2).to_text()
    assert a == b == c
    assert audit(FINSET, 40, 12).to_json() != audit(FINSET, 40, 11).to_json()
