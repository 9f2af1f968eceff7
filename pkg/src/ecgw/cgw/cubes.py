"""Cubes of arrows, their southern squares and kernel/cokernel cubes.

Vertices are indexed by bit triples; the edge ``(s, a)`` runs from vertex
``s`` to vertex ``s + e_a`` and has role ``roles[a]``.
"""

import itertools

from ..errors import MalformedSquare, SquareNotGood
from .core import Arrow, point_compose
from .squares import HomSquare, MixedSquare, is_pullback

BITS = tuple(itertools.product((0, 1), repeat=3))


def bump(s, a):
    return tuple(1 if k == a else v for k, v in enumerate(s))


def _axes_except(a):
    return tuple(k for k in range(3) if k != a)


class Cube:
    """Eight objects and twelve arrows."""

    __slots__ = ("vertices", "edges", "roles")

    def __init__(self, vertices, edges, roles):
        self.vertices = dict(vertices)
        self.edges = dict(edges)
        self.roles = tuple(roles)
        for s in BITS:
            for a in range(3):
                if s[a]:
                    continue
                e = self.edges.get((s, a))
                if e is None:
                    raise MalformedSquare(f"cube is missing the edge {s} along axis {a}")
                if e.role != self.roles[a]:
                    raise MalformedSquare(f"edge {s} along axis {a} has the wrong role")
                if e.dom != self.vertices[s] or e.cod != self.vertices[bump(s, a)]:
                    raise MalformedSquare(f"edge {s} along axis {a} has the wrong endpoints")

    def v(self, s):
        return self.vertices[s]

    def e(self, s, a):
        return self.edges[(s, a)]

    def face(self, a, val):
        """The face perpendicular to axis ``a`` at coordinate ``val``."""
        b, c = _axes_except(a)
        if self.roles[b] == "e" and self.roles[c] == "m":
            b, c = c, b
        s0 = tuple(val if k == a else 0 for k in range(3))
        top, left = self.e(s0, b), self.e(s0, c)
        right, bottom = self.e(bump(s0, b), c), self.e(bump(s0, c), b)
        if self.roles[b] == self.roles[c]:
            return HomSquare(top, left, right, bottom, self.roles[b])
        return MixedSquare(top, left, right, bottom)

    def faces(self):
        return [self.face(a, v) for a in range(3) for v in (0, 1)]

    def arrows(self):
        return {f"{''.join(map(str, s))}/{a}": e for (s, a), e in sorted(self.edges.items())}


def faces_pullback(cube):
    return all(is_pullback(f) for f in cube.faces())


def southern(cat, cube, axis):
    """Southern square of a cube in the direction ``axis``.

    The two faces perpendicular to ``axis`` give spans whose star-pushouts
    are compared.  Returns a HomSquare when all roles agree and a
    MixedSquare otherwise.  Raises SquareNotGood if a face fails or an
    induced arrow does not exist.
    """
    if not faces_pullback(cube):
        raise SquareNotGood("cube has a face that is not a pullback")
    b, c = _axes_except(axis)
    if cube.roles[b] != cube.roles[c]:
        raise MalformedSquare("southern square needs both span directions of one role")
    srole, prole = cube.roles[b], cube.roles[axis]
    stars = []
    for val in (0, 1):
        base = tuple(val if k == axis else 0 for k in range(3))
        f, g = cube.e(base, b), cube.e(base, c)
        witness = cube.face(axis, val) if (srole == "e" and cat.needs_e_witness) else None
        if witness is not None and witness.top.pmap != f.pmap:
            witness = witness.transpose()
        P, i, j = cat.star(f, g, srole, witness)
        med = cat.mediator(P, i, j, cube.e(bump(base, b), c), cube.e(bump(base, c), b), srole)
        if med is None:
            raise SquareNotGood("face does not induce an arrow out of its star-pushout")
        stars.append((base, P, i, j, med))
    (b0, P0, i0, j0, med0), (b1, P1, i1, j1, med1) = stars
    Bv, Cv = bump(b0, b), bump(b0, c)
    rpm = point_compose(i1, cube.e(Bv, axis))
    bpm = point_compose(j1, cube.e(Cv, axis))
    ind = cat.mediator(P0, i0, j0, Arrow(i0.dom, P1, rpm, prole), Arrow(j0.dom, P1, bpm, prole), prole)
    if ind is None:
        raise SquareNotGood("no induced arrow between the star-pushouts")
    low = cube.e(bump(Bv, c), axis)
    if prole == srole:
        return HomSquare(ind, med0, med1, low, srole)
    if prole == "e":
        return MixedSquare(med0, ind, low, med1)
    return MixedSquare(ind, med0, med1, low)


def is_good_cube(cat, cube):
    """All faces pullbacks and every southern square a pullback."""
    if not faces_pullback(cube):
        return False
    for a in range(3):
        b, c = _axes_except(a)
        if cube.roles[b] != cube.roles[c]:
            continue
        try:
            if not is_pullback(southern(cat, cube, a)):
                return False
        except SquareNotGood:
            return False
    return True


def _quotient_cube(cat, cube, axis, make, new_role):
    verts, edges = {}, {}
    for s in BITS:
        if s[axis]:
            verts[s] = cube.v(s)
    for s in BITS:
        if not s[axis]:
            q = make(cube.e(s, axis))
            verts[s] = q.dom
            edges[(s, axis)] = q
    for s in BITS:
        for a in range(3):
            if a == axis or s[a]:
                continue
            t = bump(s, a)
            if s[axis]:
                edges[(s, a)] = cube.e(s, a)
                continue
            over = cube.e(bump(s, axis), a)
            pm = {x: over.pmap[x] for x in cat.points(verts[s])}
            if not cat.is_arrow(verts[s], verts[t], pm, cube.roles[a]):
                raise SquareNotGood("a face is not a pullback, so no induced arrow exists")
            edges[(s, a)] = Arrow(verts[s], verts[t], pm, cube.roles[a])
    roles = tuple(new_role if k == axis else r for k, r in enumerate(cube.roles))
    return Cube(verts, edges, roles)


def cube_cokernels(cat, cube, axis):
    """Replace the m-edges along ``axis`` by their cokernels."""
    if cube.roles[axis] != "m":
        raise MalformedSquare("cokernels need m-edges along the chosen axis")
    return _quotient_cube(cat, cube, axis, cat.cokernel, "e")


def cube_kernels(cat, cube, axis):
    """Replace the e-edges along ``axis`` by their kernels."""
    if cube.roles[axis] != "e":
        raise MalformedSquare("kernels need e-edges along the chosen axis")
    return _quotient_cube(cat, cube, axis, cat.kernel, "m")


def cubes_match(c1, c2, axis):
    """Whether c2 is c1 with the low layer along ``axis`` replaced by images.

    This is the shape produced by a cokernel-then-kernel round trip: the
    canonical iso sends a low vertex of c1 onto the image of its edge.
    """
    iso = {}
    for s in BITS:
        if s[axis]:
            if c1.v(s) != c2.v(s):
                return False
            iso[s] = {p: p for p in c1.v(s).points()}
        else:
            e = c1.e(s, axis)
            if e.image() != c2.v(s).points():
                return False
            iso[s] = dict(e.pmap)
    for (s, a), e1 in c1.edges.items():
        e2 = c2.edges[(s, a)]
        if e1.role != e2.role:
            return False
        t = bump(s, a)
        if any(iso[t][e1.pmap[p]] != e2.pmap[iso[s][p]] for p in e1.pmap):
            return False
    return True


__all__ = [
    "BITS",
    "Cube",
    "bump",
    "cube_cokernels",
    "cube_kernels",
    "cubes_match",
    "faces_pullback",
    "is_good_cube",
    "southern",
]
