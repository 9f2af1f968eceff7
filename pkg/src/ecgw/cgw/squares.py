"""Squares, their classification, the k/c transforms and star-pushouts.

Square layout, shared by both square types::

    A --top--> B
    |          |
   left      right
    v          v
    C -bottom-> D

For a :class:`MixedSquare` the horizontal arrows are m-morphisms and the
vertical ones are e-morphisms drawn downward.
"""

from typing import NamedTuple

from ..errors import MalformedSquare, NotComposable, NotCoproductInclusion, NotMorphism, SquareNotGood
from .core import Arrow, compose, point_compose


class _SquareBase:
    __slots__ = ()

    @property
    def A(self):
        return self.top.dom

    @property
    def B(self):
        return self.top.cod

    @property
    def C(self):
        return self.left.cod

    @property
    def D(self):
        return self.right.cod

    def _check_endpoints(self):
        if self.top.dom != self.left.dom:
            raise MalformedSquare("top and left arrows start at different objects")
        if self.top.cod != self.right.dom:
            raise MalformedSquare("top arrow does not end where the right arrow starts")
        if self.left.cod != self.bottom.dom:
            raise MalformedSquare("left arrow does not end where the bottom arrow starts")
        if self.right.cod != self.bottom.cod:
            raise MalformedSquare("right and bottom arrows end at different objects")

    def arrows(self):
        return {"top": self.top, "left": self.left, "right": self.right, "bottom": self.bottom}


class MixedSquare(_SquareBase):
    """Square with m-morphisms horizontally and e-morphisms vertically."""

    __slots__ = ("topM", "leftE", "rightE", "bottomM")

    def __init__(self, topM, leftE, rightE, bottomM):
        if (topM.role, bottomM.role, leftE.role, rightE.role) != ("m", "m", "e", "e"):
            raise MalformedSquare("mixed square needs m-arrows across and e-arrows down")
        self.topM, self.leftE, self.rightE, self.bottomM = topM, leftE, rightE, bottomM
        self._check_endpoints()

    top = property(lambda self: self.topM)
    left = property(lambda self: self.leftE)
    right = property(lambda self: self.rightE)
    bottom = property(lambda self: self.bottomM)

    def __repr__(self):
        return f"MixedSquare(top={self.topM!r}, left={self.leftE!r}, right={self.rightE!r}, bottom={self.bottomM!r})"


class HomSquare(_SquareBase):
    """Commuting-square candidate whose four arrows share one role."""

    __slots__ = ("top", "left", "right", "bottom", "role")

    def __init__(self, top, left, right, bottom, role=None):
        role = role or top.role
        if any(a.role != role for a in (top, left, right, bottom)):
            raise MalformedSquare("all arrows of a HomSquare must share one role")
        self.top, self.left, self.right, self.bottom, self.role = top, left, right, bottom, role
        self._check_endpoints()

    def transpose(self):
        return HomSquare(self.left, self.top, self.bottom, self.right, self.role)

    @property
    def good(self):
        return is_pullback(self)

    def __repr__(self):
        return f"HomSquare[{self.role}](top={self.top!r}, left={self.left!r}, right={self.right!r}, bottom={self.bottom!r})"


class SquareClass(NamedTuple):
    commutes: bool
    pullback: bool
    distinguished: bool


# -- point-level predicates


def commutes(sq):
    r, t, b, l = sq.right.pmap, sq.top.pmap, sq.bottom.pmap, sq.left.pmap
    return all(r[t[a]] == b[l[a]] for a in t)


def is_pullback(sq):
    """Commutes and the image of A is the intersection of the images of B and C."""
    if not commutes(sq):
        return False
    diag = frozenset(sq.right.pmap[b] for b in sq.top.pmap.values())
    return sq.right.image() & sq.bottom.image() == diag


def covers(sq):
    return sq.right.image() | sq.bottom.image() == sq.D.points()


def is_distinguished(sq):
    return isinstance(sq, MixedSquare) and is_pullback(sq) and covers(sq)


def classify(sq):
    c = commutes(sq)
    p = c and is_pullback(sq)
    d = p and isinstance(sq, MixedSquare) and covers(sq)
    return SquareClass(c, p, d)


def same_square(s1, s2):
    """Whether two squares over the same corner D agree up to the canonical isos."""
    if s1.D != s2.D:
        return False
    for s in (s1, s2):
        if not commutes(s):
            return False
    d1 = frozenset(point_compose(s1.right, s1.top).values())
    d2 = frozenset(point_compose(s2.right, s2.top).values())
    return (
        s1.right.image() == s2.right.image()
        and s1.bottom.image() == s2.bottom.image()
        and d1 == d2
        and len(s1.A.points()) == len(s2.A.points())
    )


# -- kernels, cokernels, distinguished squares


class DistinguishedSquare:
    """A distinguished mixed square with its kernel and cokernel comparisons."""

    __slots__ = ("square", "kernel_comparison", "cokernel_comparison")

    def __init__(self, square, kernel_comparison, cokernel_comparison):
        self.square = square
        self.kernel_comparison = kernel_comparison
        self.cokernel_comparison = cokernel_comparison

    def arrows(self):
        return self.square.arrows()

    def __repr__(self):
        return f"DistinguishedSquare({self.square!r})"


def certify(cat, sq):
    """Wrap a distinguished square with its comparison isomorphisms."""
    if not is_distinguished(sq):
        raise MalformedSquare("square is not distinguished")
    kc = k_square(cat, sq).top
    cc = c_square(cat, sq).top
    return DistinguishedSquare(sq, kc, cc)


def kernel(cat, g):
    """Kernel of an e-morphism with its distinguished square."""
    k = cat.kernel(g)
    sq = MixedSquare(cat.initial_arrow(g.dom, "m"), cat.initial_arrow(k.dom, "e"), g, k)
    return k, certify(cat, sq)


def cokernel(cat, f):
    """Cokernel of an m-morphism with its distinguished square."""
    c = cat.cokernel(f)
    sq = MixedSquare(cat.initial_arrow(c.dom, "m"), cat.initial_arrow(f.dom, "e"), c, f)
    return c, certify(cat, sq)


def k_square(cat, sq):
    """Good m-square of kernels of the e-legs of a pseudo-commutative square."""
    if not isinstance(sq, MixedSquare) or not is_pullback(sq):
        raise MalformedSquare("k_square needs a pseudo-commutative mixed square")
    kC = cat.kernel(sq.leftE)
    kD = cat.kernel(sq.rightE)
    pm = {x: sq.bottomM.pmap[x] for x in kC.pmap}
    top = cat.arrow(kC.dom, kD.dom, pm, "m")
    return HomSquare(top, kC, kD, sq.bottomM, "m")


def c_square(cat, sq):
    """Good e-square of cokernels of the m-legs of a pseudo-commutative square."""
    if not isinstance(sq, MixedSquare) or not is_pullback(sq):
        raise MalformedSquare("c_square needs a pseudo-commutative mixed square")
    cB = cat.cokernel(sq.topM)
    cD = cat.cokernel(sq.bottomM)
    pm = {x: sq.rightE.pmap[x] for x in cB.pmap}
    top = cat.arrow(cB.dom, cD.dom, pm, "e")
    return HomSquare(top, cB, cD, sq.rightE, "e")


def k_inverse(cat, h):
    """Inverse of :func:`k_square` on a good m-square ending in C -> D."""
    if h.role != "m" or not is_pullback(h):
        raise MalformedSquare("k_inverse needs a good m-square")
    leftE = cat.cokernel(h.left)
    rightE = cat.cokernel(h.right)
    pm = {a: h.bottom.pmap[a] for a in leftE.pmap}
    topM = cat.arrow(leftE.dom, rightE.dom, pm, "m")
    return MixedSquare(topM, leftE, rightE, h.bottom)


def c_inverse(cat, h):
    """Inverse of :func:`c_square` on a good e-square ending in B -> D."""
    if h.role != "e" or not is_pullback(h):
        raise MalformedSquare("c_inverse needs a good e-square")
    topM = cat.kernel(h.left)
    bottomM = cat.kernel(h.right)
    pm = {a: h.bottom.pmap[a] for a in topM.pmap}
    leftE = cat.arrow(topM.dom, bottomM.dom, pm, "e")
    return MixedSquare(topM, leftE, h.bottom, bottomM)


def complete_distinguished(cat, f, g):
    """Fill ``A -f-> B`` (m) and ``B -g-> C`` (e) to a distinguished square.

    The new corner is the m-sub-object of C on ``g(f(A)) | (C - g(B))``.
    """
    if f.role != "m" or g.role != "e":
        raise NotComposable("expected an m-morphism followed by an e-morphism")
    if f.cod != g.dom:
        raise NotComposable("f and g are not composable")
    gf = point_compose(g, f)
    pts = frozenset(gf.values()) | (cat.points(g.cod) - g.image())
    bottom = cat.subobject(g.cod, pts, "m")
    left = cat.arrow(f.dom, bottom.dom, gf, "e")
    return certify(cat, MixedSquare(f, left, g, bottom))


def complete_distinguished_dual(cat, g, f):
    """Fill ``A -g-> C`` (e) and ``C -f-> D`` (m) to a distinguished square."""
    if g.role != "e" or f.role != "m":
        raise NotComposable("expected an e-morphism followed by an m-morphism")
    if g.cod != f.dom:
        raise NotComposable("g and f are not composable")
    fg = point_compose(f, g)
    pts = frozenset(fg.values()) | (cat.points(f.cod) - f.image())
    right = cat.subobject(f.cod, pts, "e")
    top = cat.arrow(g.dom, right.dom, fg, "m")
    return certify(cat, MixedSquare(top, g, right, f))


# -- star-pushouts


def star_m(cat, f, g):
    """Star-pushout of an m-span ``B <-f- A -g-> C``.

    Returns ``(P, i, j, square)`` where the square is good.
    """
    P, i, j = cat.star(f, g, "m")
    return P, i, j, HomSquare(f, g, i, j, "m")


def star_e(cat, f, g, witness=None):
    """Star-pushout of an e-span; ``witness`` is a good e-square containing it."""
    P, i, j = cat.star(f, g, "e", witness)
    return P, i, j, HomSquare(f, g, i, j, "e")


def good_by_star(cat, sq):
    """Goodness via the universal property: the mediator out of the
    star-pushout must be an arrow.  Returns None when the category cannot
    form the star-pushout without a witness."""
    try:
        P, i, j = cat.star(sq.top, sq.left, sq.role)
    except Exception as exc:  # missing e-pushouts in some categories
        from ..errors import StarPushoutMissing

        if isinstance(exc, StarPushoutMissing):
            return None
        raise
    return cat.mediator(P, i, j, sq.right, sq.bottom, sq.role) is not None


def induced(cat, P, i, j, right_pm, bottom_pm, cod, role):
    """Arrow out of a star-pushout given point maps on the two legs."""
    r = Arrow(i.dom, cod, right_pm, role)
    b = Arrow(j.dom, cod, bottom_pm, role)
    m = cat.mediator(P, i, j, r, b, role)
    if m is None:
        raise SquareNotGood("no induced arrow out of the star-pushout")
    return m


# -- pasting


def paste_h(s1, s2):
    """Paste s2 to the right of s1 along their shared vertical arrow."""
    if s1.right.pmap != s2.left.pmap or s1.right.dom != s2.left.dom or s1.D != s2.C:
        raise MalformedSquare("squares do not share a vertical edge")
    top = compose(s2.top, s1.top)
    bottom = compose(s2.bottom, s1.bottom)
    if isinstance(s1, MixedSquare):
        return MixedSquare(top, s1.left, s2.right, bottom)
    return HomSquare(top, s1.left, s2.right, bottom, s1.role)


def paste_v(s1, s2):
    """Paste s2 below s1 along their shared horizontal arrow."""
    if s1.bottom.pmap != s2.top.pmap or s1.C != s2.A or s1.D != s2.B:
        raise MalformedSquare("squares do not share a horizontal edge")
    left = compose(s2.left, s1.left)
    right = compose(s2.right, s1.right)
    if isinstance(s1, MixedSquare):
        return MixedSquare(s1.top, left, right, s2.bottom)
    return HomSquare(s1.top, left, right, s2.bottom, s1.role)


__all__ = [
    "DistinguishedSquare",
    "HomSquare",
    "MixedSquare",
    "NotCoproductInclusion",
    "NotMorphism",
    "SquareClass",
    "c_inverse",
    "c_square",
    "certify",
    "classify",
    "cokernel",
    "commutes",
    "complete_distinguished",
    "complete_distinguished_dual",
    "covers",
    "good_by_star",
    "induced",
    "is_distinguished",
    "is_pullback",
    "k_inverse",
    "k_square",
    "kernel",
    "paste_h",
    "paste_v",
    "same_square",
    "star_e",
    "star_m",
]
