"""Staircase diagrams, their face and degeneracy maps, and extension objects.

A staircase of level ``n`` is a grid of objects ``A[i, j]`` for
``0 <= i <= j <= n`` with empty diagonal, m-morphisms
``h[i, j]: A[i, j] -> A[i, j+1]`` along rows and e-morphisms
``v[i, j]: A[i+1, j] -> A[i, j]`` up the columns, such that every unit
square::

    A[i+1, j] --h--> A[i+1, j+1]
       |                 |
       v                 v
    A[i, j]   --h--> A[i, j+1]

is distinguished.  Everything is generic over a set-like category from
:mod:`ecgw.cgw` (finite sets, M-sets or chain complexes).
"""

import functools

from .audit import run_checks
from .cgw.core import Arrow, point_compose
from .cgw.squares import MixedSquare, certify, is_distinguished
from .errors import (
    IndexOutOfWindow,
    MalformedSquare,
    NotComposable,
    NotKernelCokernelPair,
    NotMorphism,
)


def _chain(cat, arrows, role, dom, cod):
    """Composite ``arrows[-1] o ... o arrows[0]`` as an arrow of ``role``;
    the identity of ``dom`` when ``arrows`` is empty."""
    if not arrows:
        return cat.identity(dom, role)
    pm = point_compose(*reversed(arrows))
    return Arrow(dom, cod, pm, role)


class Staircase:
    """A validated staircase with a certificate for every unit square."""

    __slots__ = ("n", "cat", "objects", "h", "v", "_cells", "_certs")

    def __init__(self, cat, n, objects, h, v):
        self.cat, self.n = cat, n
        self.objects, self.h, self.v = dict(objects), dict(h), dict(v)
        for i in range(n + 1):
            if cat.points(self.objects[i, i]):
                raise MalformedSquare(f"diagonal object A[{i},{i}] is not empty")
        for (i, j), a in self.h.items():
            if a.role != "m" or a.dom != self.objects[i, j] or a.cod != self.objects[i, j + 1]:
                raise NotComposable(f"horizontal arrow at ({i},{j}) has the wrong ends or role")
            cat.check_arrow(a.dom, a.cod, a.pmap, "m")
        for (i, j), a in self.v.items():
            if a.role != "e" or a.dom != self.objects[i + 1, j] or a.cod != self.objects[i, j]:
                raise NotComposable(f"vertical arrow at ({i},{j}) has the wrong ends or role")
            cat.check_arrow(a.dom, a.cod, a.pmap, "e")
        self._cells, self._certs = {}, None
        for i in range(n):
            for j in range(i + 1, n):
                sq = MixedSquare(self.h[i + 1, j], self.v[i, j], self.v[i, j + 1], self.h[i, j])
                if not is_distinguished(sq):
                    raise MalformedSquare(f"cell ({i},{j}) is not distinguished")
                self._cells[i, j] = sq

    @property
    def squares(self):
        """DistinguishedSquare certificates keyed by the cell's lower-left
        corner, computed on first use."""
        if self._certs is None:
            self._certs = {k: certify(self.cat, sq) for k, sq in self._cells.items()}
        return self._certs

    @property
    def row(self):
        """The top row ``A[0, 0] -> A[0, 1] -> ... -> A[0, n]``."""
        return [self.h[0, j] for j in range(self.n)]

    def cell(self, i, j):
        if not 0 <= i <= j <= self.n:
            raise IndexOutOfWindow(f"no cell ({i},{j}) in a staircase of level {self.n}")
        return self.objects[i, j]

    def __eq__(self, other):
        return (
            isinstance(other, Staircase)
            and self.n == other.n
            and self.objects == other.objects
            and self.h == other.h
            and self.v == other.v
        )

    def __hash__(self):
        return hash((self.n, tuple(sorted(self.objects.items(), key=lambda kv: kv[0]))))

    def __repr__(self):
        return f"Staircase(n={self.n}, cat={self.cat.name})"

    def to_json(self):
        d = self.cat.describe
        return {
            "n": self.n,
            "cells": {f"{i},{j}": d(self.objects[i, j]) for (i, j) in sorted(self.objects)},
        }

    def to_dot(self):
        """Graphviz rendering of the grid."""
        lines = ["digraph staircase {", "  rankdir=LR;"]
        for (i, j), X in sorted(self.objects.items()):
            size = len(self.cat.points(X))
            lines.append(f'  "{i},{j}" [label="A{i}{j} ({size})"];')
        for (i, j) in sorted(self.h):
            lines.append(f'  "{i},{j}" -> "{i},{j + 1}";')
        for (i, j) in sorted(self.v):
            lines.append(f'  "{i + 1},{j}" -> "{i},{j}" [style=dashed];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def staircase_build(cat, row, start=None):
    """Fill in the staircase of a row of m-morphisms out of an empty object.

    ``row`` lists ``A[0, k-1] -> A[0, k]`` for ``k = 1..n``; with an empty
    row, ``start`` (or the initial object) gives the level 0 staircase.
    Cell ``A[i, j]`` is the cokernel of the composite ``A[0, i] -> A[0, j]``,
    kept as a sub-object of ``A[0, j]``.
    """
    first = row[0].dom if row else (start if start is not None else cat.initial())
    if cat.points(first):
        raise NotComposable("a staircase row must start at an empty object")
    for k, a in enumerate(row):
        if a.role != "m":
            raise NotMorphism(f"row arrow {k + 1} is not an m-morphism")
        if k and row[k - 1].cod != a.dom:
            raise NotComposable(f"row arrows {k} and {k + 1} do not compose")
    n = len(row)
    tops = [first] + [a.cod for a in row]
    objects, incl = {}, {}
    for j in range(n + 1):
        objects[0, j] = tops[j]
        incl[0, j] = {p: p for p in cat.points(tops[j])}
        for i in range(1, j + 1):
            image = set(point_compose(*reversed(row[i:j])).values()) if i < j else cat.points(tops[j])
            rest = cat.points(tops[j]) - image
            sub = cat.subobject(tops[j], rest, "e")
            objects[i, j] = sub.dom
            incl[i, j] = dict(sub.pmap)
    h, v = {}, {}
    for j in range(n):
        for i in range(j + 1):
            pm = {p: row[j].pmap[incl[i, j][p]] for p in cat.points(objects[i, j])}
            back = {q: p for p, q in incl[i, j + 1].items()}
            h[i, j] = cat.arrow(objects[i, j], objects[i, j + 1], {p: back[q] for p, q in pm.items()}, "m")
    for j in range(n + 1):
        for i in range(j):
            back = {q: p for p, q in incl[i, j].items()}
            pm = {p: back[incl[i + 1, j][p]] for p in cat.points(objects[i + 1, j])}
            v[i, j] = cat.arrow(objects[i + 1, j], objects[i, j], pm, "e")
    return Staircase(cat, n, objects, h, v)


def _reindex(S, n, idx):
    """Staircase ``B[i, j] = A[idx(i), idx(j)]`` with composite maps."""
    cat = S.cat
    objects = {(i, j): S.objects[idx(i), idx(j)] for i in range(n + 1) for j in range(i, n + 1)}
    h, v = {}, {}
    for i in range(n + 1):
        for j in range(i, n):
            a, b, r = idx(j), idx(j + 1), idx(i)
            h[i, j] = _chain(cat, [S.h[r, k] for k in range(a, b)], "m", objects[i, j], objects[i, j + 1])
    for j in range(n + 1):
        for i in range(j):
            a, b, c = idx(i), idx(i + 1), idx(j)
            v[i, j] = _chain(cat, [S.v[k, c] for k in range(b - 1, a - 1, -1)], "e", objects[i + 1, j], objects[i, j])
    return Staircase(cat, n, objects, h, v)


def face(S, k):
    """Face map ``d_k``: drop row and column ``k``."""
    if S.n == 0 or not 0 <= k <= S.n:
        raise IndexOutOfWindow(f"face index {k} is outside 0..{S.n}")
    return _reindex(S, S.n - 1, lambda i: i if i < k else i + 1)


def degeneracy(S, k):
    """Degeneracy map ``s_k``: repeat row and column ``k``."""
    if not 0 <= k <= S.n:
        raise IndexOutOfWindow(f"degeneracy index {k} is outside 0..{S.n}")
    return _reindex(S, S.n + 1, lambda i: i if i <= k else i - 1)


def rebuild(S):
    """The staircase recomputed from the top row alone."""
    return staircase_build(S.cat, S.row, start=S.objects[0, 0])


def simplicial_identities(S, names=None):
    """Check the simplicial identities that apply to ``S``.

    Returns a dict from identity name to a list of booleans, one per index
    choice.  ``rebuild`` compares faces and degeneracies with the staircase
    recomputed from their top row.
    """
    n = S.n
    names = set(names or IDENTITY_NAMES)
    out = {name: [] for name in IDENTITY_NAMES if name in names}
    if "dd" in names and n >= 2:
        for j in range(n + 1):
            dj = face(S, j)
            for i in range(j):
                out["dd"].append(face(dj, i) == face(face(S, i), j - 1))
    for j in range(n + 1):
        if not names & {"ds_low", "ds_id", "ds_high", "ss"}:
            break
        sj = degeneracy(S, j)
        if "ds_id" in names:
            out["ds_id"].append(face(sj, j) == S and face(sj, j + 1) == S)
        for i in range(n + 2):
            if i < j and "ds_low" in names:
                out["ds_low"].append(face(sj, i) == degeneracy(face(S, i), j - 1))
            elif i > j + 1 and "ds_high" in names:
                out["ds_high"].append(face(sj, i) == degeneracy(face(S, i - 1), j))
        if "ss" in names:
            for i in range(j + 1):
                out["ss"].append(degeneracy(sj, i) == degeneracy(degeneracy(S, i), j + 1))
    if "rebuild" in names:
        out["rebuild"].append(rebuild(S) == S)
        for k in range(n + 1):
            if n:
                out["rebuild"].append(rebuild(face(S, k)) == face(S, k))
            out["rebuild"].append(rebuild(degeneracy(S, k)) == degeneracy(S, k))
    return out


# ---------------------------------------------------------------------------
# extension objects


class ExtensionObj:
    """A kernel-cokernel pair ``A >-> C <-- B`` with its certificate."""

    __slots__ = ("A", "C", "B", "m", "e", "certificate")

    def __init__(self, m, e, certificate):
        self.m, self.e, self.certificate = m, e, certificate
        self.A, self.C, self.B = m.dom, m.cod, e.dom

    def __repr__(self):
        return f"ExtensionObj(A={self.A!r}, C={self.C!r}, B={self.B!r})"


def extension_build(cat, f, g):
    """Certify that ``f: A >-> C`` and ``g: B --> C`` form a
    kernel-cokernel pair."""
    if f.role != "m" or g.role != "e":
        raise NotKernelCokernelPair("need an m-morphism and an e-morphism")
    if f.cod != g.cod:
        raise NotKernelCokernelPair("the two maps have different targets")
    sq = MixedSquare(cat.initial_arrow(g.dom, "m"), cat.initial_arrow(f.dom, "e"), g, f)
    if not is_distinguished(sq):
        raise NotKernelCokernelPair("images are not complementary")
    return ExtensionObj(f, g, certify(cat, sq))


def additivity_projection(E):
    """``(A, B)`` from an extension ``A >-> C <-- B``."""
    return E.A, E.B


def trivial_extension(cat, A, B):
    """``A >-> A * B <-- B`` from the star-pushout over the empty object."""
    P, i, j = cat.star(cat.initial_arrow(A, "m"), cat.initial_arrow(B, "m"), "m")
    return extension_build(cat, i, cat.arrow(B, P, j.pmap, "e"))


# ---------------------------------------------------------------------------
# random staircases and the audit


def random_row(cat, rng, n, relabel=True):
    """A random row of length ``n``: a filtration of a random object by
    closed sub-objects, each stage relabelled at random half the time.

    Returns the row and the list of its ``n + 1`` objects.
    """
    U = cat.random_object(rng)
    stages, into = [U], [{p: p for p in cat.points(U)}]
    for k in range(n - 1, -1, -1):
        X = stages[0]
        if k == 0:
            pts = set()
        elif rng.random() < 0.85:
            pts = cat.random_closed(rng, X, "m")
        else:
            pts = cat.points(X)
        sub = cat.subobject(X, pts, "m")
        stages.insert(0, sub.dom)
        into.insert(0, {p: into[0][q] for p, q in sub.pmap.items()})
    if n == 0:
        stages, into = [cat.initial()], [{}]
    isos = []
    for X in stages:
        if relabel and rng.random() < 0.5:
            isos.append(cat.random_iso(rng, X, "m"))
        else:
            isos.append(cat.identity(X, "m"))
    row = []
    for k in range(n):
        back = {q: p for p, q in into[k + 1].items()}
        pm = {isos[k].pmap[p]: isos[k + 1].pmap[back[q]] for p, q in into[k].items()}
        row.append(cat.arrow(isos[k].cod, isos[k + 1].cod, pm, "m"))
    return row, [iso.cod for iso in isos]


def random_staircase(cat, rng, n):
    row, stages = random_row(cat, rng, n)
    return staircase_build(cat, row, start=stages[0])


def pointwise_complement(S, T, maps, role):
    """Pointwise cokernel (``role == "m"``) or kernel (``role == "e"``) of a
    staircase morphism ``S -> T`` given cell by cell as point maps.

    Raises if a component is not a morphism of ``role``; the result is
    validated as a staircase.
    """
    cat = S.cat
    comp, incl = {}, {}
    for key, pm in maps.items():
        a = cat.arrow(S.objects[key], T.objects[key], pm, role)
        c = cat.complement(a, "e" if role == "m" else "m")
        comp[key], incl[key] = c.dom, c.pmap
    h, v = {}, {}
    for (i, j), a in T.h.items():
        back = {q: p for p, q in incl[i, j + 1].items()}
        h[i, j] = cat.arrow(comp[i, j], comp[i, j + 1], {p: back[a.pmap[q]] for p, q in incl[i, j].items()}, "m")
    for (i, j), a in T.v.items():
        back = {q: p for p, q in incl[i, j].items()}
        v[i, j] = cat.arrow(comp[i + 1, j], comp[i, j], {p: back[a.pmap[q]] for p, q in incl[i + 1, j].items()}, "e")
    return Staircase(cat, T.n, comp, h, v)


def restrict_staircase(S, M, role):
    """The sub-staircase on the points of ``A[0, n]`` lying in ``M``, as a
    staircase together with the cellwise inclusion point maps."""
    cat = S.cat
    top = S.objects[0, S.n]
    # position of every cell point inside the top-right object
    pos = {}
    for (i, j), X in S.objects.items():
        up = _chain(cat, [S.v[k, j] for k in range(i - 1, -1, -1)], "e", X, S.objects[0, j])
        right = _chain(cat, [S.h[0, k] for k in range(j, S.n)], "m", S.objects[0, j], top)
        pos[i, j] = {p: right.pmap[up.pmap[p]] for p in cat.points(X)}
    sub, maps = {}, {}
    for key, X in S.objects.items():
        keep = {p for p in cat.points(X) if pos[key][p] in M}
        a = cat.subobject(X, keep, role)
        sub[key], maps[key] = a.dom, a.pmap
    h, v = {}, {}
    for (i, j), a in S.h.items():
        back = {q: p for p, q in maps[i, j + 1].items()}
        h[i, j] = cat.arrow(sub[i, j], sub[i, j + 1], {p: back[a.pmap[q]] for p, q in maps[i, j].items()}, "m")
    for (i, j), a in S.v.items():
        back = {q: p for p, q in maps[i, j].items()}
        v[i, j] = cat.arrow(sub[i + 1, j], sub[i, j], {p: back[a.pmap[q]] for p, q in maps[i + 1, j].items()}, "e")
    return Staircase(cat, S.n, sub, h, v), maps


def _check_identity(name, cat, rng, t):
    S = random_staircase(cat, rng, rng.randint(0, 4))
    results = simplicial_identities(S, [name])[name]
    if not results:
        t.vacuous()
        return
    t.count("instances", len(results))
    t.require(all(results), f"simplicial identity {name} fails", n=S.n, staircase=S.to_json())


def _identity_check(name):
    # a partial of a module-level function pickles for worker processes
    return functools.partial(_check_identity, name)


def check_cells(cat, rng, t):
    n = rng.randint(1, 4)
    row, stages = random_row(cat, rng, n)
    S = staircase_build(cat, row, start=stages[0])
    for j in range(n + 1):
        for i in range(j + 1):
            comp = _chain(cat, row[i:j], "m", stages[i], stages[j])
            want = cat.points(stages[j]) - set(comp.pmap.values())
            t.require(cat.points(S.objects[i, j]) == want, "cell differs from the complement", cell=[i, j])


def check_closure(cat, rng, t):
    S = random_staircase(cat, rng, rng.randint(1, 4))
    top = S.objects[0, S.n]
    role = rng.choice("me")
    M = cat.random_closed(rng, top, role)
    try:
        R, maps = restrict_staircase(S, M, role)
    except NotMorphism:
        t.fail("restriction to a closed sub-object is not cellwise closed")
        return
    Q = pointwise_complement(R, S, maps, role)
    t.require(Q.n == S.n, "complement staircase has the wrong level")
    t.count("kernels" if role == "e" else "cokernels")


def check_extension(cat, rng, t):
    A, B = cat.random_object(rng), cat.random_object(rng)
    E = trivial_extension(cat, A, B)
    t.require(additivity_projection(E) == (A, B), "projection does not recover the ends")
    U = cat.random_object(rng)
    pts = cat.random_closed(rng, U, "m")
    f = cat.subobject(U, pts, "m")
    g = cat.cokernel(f)
    E2 = extension_build(cat, f, g)
    t.require(E2.A == f.dom and E2.B == g.dom, "projection does not recover the ends")


IDENTITY_NAMES = ("dd", "ds_low", "ds_id", "ds_high", "ss", "rebuild")

SDOT_CHECKS = [(f"identity:{name}", _identity_check(name)) for name in IDENTITY_NAMES] + [
    ("cells", check_cells),
    ("closure", check_closure),
    ("extension", check_extension),
]


def sdot_audit(cat, trials, seed, jobs=1, checks=None):
    """Random staircases of level at most 4 against the identities."""
    return run_checks(checks or SDOT_CHECKS, cat, trials, seed, jobs=jobs, instance=cat.name)


__all__ = [
    "ExtensionObj",
    "IDENTITY_NAMES",
    "SDOT_CHECKS",
    "Staircase",
    "additivity_projection",
    "degeneracy",
    "extension_build",
    "face",
    "pointwise_complement",
    "random_row",
    "random_staircase",
    "rebuild",
    "restrict_staircase",
    "sdot_audit",
    "simplicial_identities",
    "staircase_build",
    "trivial_extension",
]
