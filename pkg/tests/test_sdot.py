import itertools

import pytest
from hypothesis import given, strategies as st

from ecgw.errors import IndexOutOfWindow, MalformedSquare, NotKernelCokernelPair
from ecgw.extcat import FinSetObj
from ecgw.sdot import (
    IDENTITY_NAMES,
    Staircase,
    additivity_projection,
    degeneracy,
    extension_build,
    face,
    random_row,
    random_staircase,
    rebuild,
    sdot_audit,
    simplicial_identities,
    staircase_build,
    trivial_extension,
)

from conftest import FINSET, rng_for

seeds = st.integers(0, 10**6)


def S(tokens):
    return FinSetObj(tokens)


def inc(A, B, role="m"):
    return FINSET.arrow(A, B, {a: a for a in A.elements}, role)


def row_of(*sets):
    objs = [S(s) for s in sets]
    return [inc(objs[k], objs[k + 1]) for k in range(len(objs) - 1)]


def pts(X):
    return FINSET.points(X)


def test_level_zero_and_small_rows():
    Z = staircase_build(FINSET, [])
    assert Z.n == 0 and not pts(Z.cell(0, 0))
    T = staircase_build(FINSET, row_of("", "1", "12"))
    assert pts(T.cell(1, 2)) == {"2"}
    assert pts(T.cell(0, 2)) == {"1", "2"}
    with pytest.raises(IndexOutOfWindow):
        T.cell(2, 1)


@given(seeds)
def test_cells_are_complements(seed):
    T = random_staircase(FINSET, rng_for(seed), 3)
    count = 0
    for i, j in itertools.combinations(range(4), 2):
        count += 1
        if i == 0:
            continue
        # A[i,j] is the part of A[0,j] missed by A[0,i]
        comp = pts(T.objects[0, j]) - _image_of(T, i, j)
        assert len(pts(T.objects[i, j])) == len(comp)
    assert count == 6
    assert len(T.squares) == 3


def _image_of(T, i, j):
    """Points of A[0,j] hit by A[0,i] along the row."""
    img = set(pts(T.objects[0, i]))
    for k in range(i, j):
        img = {T.h[0, k].pmap[p] for p in img}
    return img


def test_face_examples():
    T = staircase_build(FINSET, row_of("", "1"))
    assert face(T, 0).n == 0 and face(T, 1).n == 0
    T = staircase_build(FINSET, row_of("", "a", "ab"))
    d0 = face(T, 0)
    assert d0.n == 1 and pts(d0.cell(0, 1)) == {"b"}
    with pytest.raises(IndexOutOfWindow):
        face(T, 3)


def test_degeneracy_examples():
    s = degeneracy(staircase_build(FINSET, []), 0)
    assert s.n == 1 and not pts(s.cell(0, 1))
    T = staircase_build(FINSET, row_of("", "a", "ab"))
    assert face(degeneracy(T, 1), 1) == T


@pytest.mark.parametrize("n", [0, 1, 2, 3, 4])
def test_simplicial_identities_small_levels(cat, n):
    T = random_staircase(cat, rng_for(n + 17), n)
    res = simplicial_identities(T)
    assert set(res) == set(IDENTITY_NAMES)
    assert all(all(v) for v in res.values())


@given(seeds)
def test_rebuild_recovers_staircase(seed):
    T = random_staircase(FINSET, rng_for(seed), 3)
    assert rebuild(T) == T


def test_corrupted_cell_is_rejected():
    T = staircase_build(FINSET, row_of("", "1", "12"))
    objects = dict(T.objects)
    v = dict(T.v)
    # claim A[1,2] is empty: the cell square no longer covers A[0,2]
    E = S("")
    objects[1, 2] = E
    v[1, 2] = inc(T.objects[2, 2], E, "e")
    v[0, 2] = FINSET.initial_arrow(T.objects[0, 2], "e")
    h = dict(T.h)
    h[1, 1] = FINSET.initial_arrow(E, "m")
    with pytest.raises(MalformedSquare):
        Staircase(FINSET, 2, objects, h, v)


def test_extension_examples():
    B = S("b1 b2".split())
    E = extension_build(FINSET, FINSET.initial_arrow(B, "m"), FINSET.identity(B, "e"))
    A, B2 = additivity_projection(E)
    assert not pts(A) and B2 == B
    E = trivial_extension(FINSET, S("a"), S("b"))
    assert len(pts(E.C)) == 2
    with pytest.raises(NotKernelCokernelPair):
        extension_build(FINSET, FINSET.identity(B, "m"), FINSET.identity(B, "e"))


@given(seeds)
def test_extension_cardinality(seed):
    rng = rng_for(seed)
    T = random_staircase(FINSET, rng, 2)
    E = extension_build(FINSET, T.h[0, 1], T.v[0, 2])
    assert len(pts(E.C)) == len(pts(E.A)) + len(pts(E.B))


def test_random_row_starts_empty():
    row, _ = random_row(FINSET, rng_for(3), 3)
    assert len(row) == 3 and not pts(row[0].dom)


def test_sdot_audit_passes(cat):
    report = sdot_audit(cat, 8, 1)
    assert report.ok, report.to_text()
