"""Random diagram generators for the audits.

Every diagram is grown inside one ambient object as a family of closed point
sets; arrows are inclusions that are validated as they are built.  A
generator returns None when a sampled family is not closed in the required
roles, and callers resample.
"""

from ..errors import NotCoproductInclusion, NotMorphism
from .core import Arrow, ROLES
from .cubes import BITS, Cube, bump
from .squares import HomSquare, MixedSquare

BUILD_ERRORS = (NotMorphism, NotCoproductInclusion)


def incl(cat, S, T, role):
    """Identity-on-points arrow between objects sharing tokens."""
    return cat.arrow(S, T, {p: p for p in cat.points(S)}, role)


def retry(fn, tries=25):
    for _ in range(tries):
        try:
            out = fn()
        except BUILD_ERRORS:
            continue
        if out is not None:
            return out
    return None


def make_square(top, left, right, bottom):
    """HomSquare, MixedSquare, or the MixedSquare of the transpose."""
    if top.role == left.role:
        return HomSquare(top, left, right, bottom, top.role)
    if top.role == "m":
        return MixedSquare(top, left, right, bottom)
    return MixedSquare(left, top, bottom, right)


def reframe(f, u):
    """``f o u^-1`` for an iso ``u`` out of ``f.dom``."""
    return Arrow(u.cod, f.cod, {u.pmap[p]: q for p, q in f.pmap.items()}, f.role)


def random_arrow(cat, rng, role, iso=False):
    X = cat.random_object(rng)
    pts = cat.points(X) if iso else cat.random_closed(rng, X, role)
    f = cat.subobject(X, pts, role)
    if rng.random() < 0.5:
        f = reframe(f, cat.random_iso(rng, f.dom, role))
    return f


def disguise_square(cat, rng, sq):
    """Relabel the corners A, B, C of a square by random isomorphisms."""
    uA = cat.random_iso(rng, sq.A, "m")
    uB = cat.random_iso(rng, sq.B, "m")
    uC = cat.random_iso(rng, sq.C, "m")

    def move(f, u, w):
        src = u.pmap if u is not None else {p: p for p in f.pmap}
        dst = w.pmap if w is not None else None
        pm = {src[p]: (dst[q] if dst is not None else q) for p, q in f.pmap.items()}
        return Arrow(u.cod if u is not None else f.dom, w.cod if w is not None else f.cod, pm, f.role)

    top = move(sq.top, uA, uB)
    left = move(sq.left, uA, uC)
    right = move(sq.right, uB, None)
    bottom = move(sq.bottom, uC, None)
    return type(sq)(top, left, right, bottom) if isinstance(sq, MixedSquare) else HomSquare(
        top, left, right, bottom, sq.role
    )


def build_hom(cat, D, Bp, Cp, Ap, role):
    right = cat.subobject(D, Bp, role)
    bottom = cat.subobject(D, Cp, role)
    top = cat.subobject(right.dom, Ap, role)
    left = incl(cat, top.dom, bottom.dom, role)
    return HomSquare(top, left, right, bottom, role)


def build_mixed(cat, D, Bp, Cp, Ap):
    rightE = cat.subobject(D, Bp, "e")
    bottomM = cat.subobject(D, Cp, "m")
    topM = cat.subobject(rightE.dom, Ap, "m")
    leftE = incl(cat, topM.dom, bottomM.dom, "e")
    return MixedSquare(topM, leftE, rightE, bottomM)


def hom_square(cat, rng, role, good=None, cover=False, disguise=True):
    """Random same-role square; ``good`` forces a pullback (or tries not to)."""

    def attempt():
        D = cat.random_object(rng)
        pts = cat.points(D)
        Bp = cat.random_closed(rng, D, role)
        Cp = cat.random_closed(rng, D, role)
        if cover:
            Cp = Cp | (pts - Bp)
        meet = Bp & Cp
        if good is None:
            want = rng.random() < 0.5
        else:
            want = good
        Ap = meet if want else meet & cat.random_closed(rng, D, role)
        sq = build_hom(cat, D, Bp, Cp, Ap, role)
        if disguise and rng.random() < 0.5:
            sq = disguise_square(cat, rng, sq)
        return sq

    return retry(attempt)


def pc_square(cat, rng, dist=None, disguise=True):
    """Random pseudo-commutative mixed square; ``dist`` forces the cover."""

    def attempt():
        D = cat.random_object(rng)
        Bp = cat.random_closed(rng, D, "e")
        Cp = cat.random_closed(rng, D, "m")
        force = dist if dist is not None else rng.random() < 0.5
        if force:
            Cp = Cp | (cat.points(D) - Bp)
        sq = build_mixed(cat, D, Bp, Cp, Bp & Cp)
        if disguise and rng.random() < 0.5:
            sq = disguise_square(cat, rng, sq)
        return sq

    return retry(attempt)


def pasting(cat, rng, role_h, role_v, cover1=False, cover2=False, exact=None):
    """Two squares s1 | s2 pasted horizontally, and their outer rectangle.

    ``A -> B -> E`` on top, ``C -> D -> F`` below; horizontal arrows have
    ``role_h`` and vertical ones ``role_v``.  ``exact`` controls whether the
    corners are taken as intersections (pullback squares) or shrunk.
    """

    def shrink(pts, X, role):
        ex = exact if exact is not None else rng.random() < 0.6
        return pts if ex else pts & cat.random_closed(rng, X, role)

    def attempt():
        F = cat.random_object(rng)
        pts = cat.points(F)
        Ep = cat.random_closed(rng, F, role_v)
        Dp = cat.random_closed(rng, F, role_h)
        if cover2:
            Dp = Dp | (pts - Ep)
        e = cat.subobject(F, Ep, role_v)
        d = cat.subobject(F, Dp, role_h)
        Bp = shrink(Ep & Dp, F, role_v)
        b_e = cat.subobject(e.dom, Bp, role_h)
        b_d = incl(cat, b_e.dom, d.dom, role_v)
        Cp = cat.random_closed(rng, d.dom, role_h)
        if cover1:
            Cp = Cp | (Dp - Bp)
        c_d = cat.subobject(d.dom, Cp, role_h)
        Ap = shrink(Bp & Cp, F, role_v)
        a_b = cat.subobject(b_e.dom, Ap, role_h)
        a_c = incl(cat, a_b.dom, c_d.dom, role_v)
        s1 = make_square(a_b, a_c, b_d, c_d)
        s2 = make_square(b_e, b_d, e, d)
        top = Arrow(a_b.dom, e.dom, {p: p for p in a_b.pmap}, role_h)
        bottom = Arrow(c_d.dom, F, {p: p for p in c_d.pmap}, role_h)
        outer = make_square(top, a_c, e, bottom)
        return s1, s2, outer

    return retry(attempt)


def ambient_cube(cat, rng, roles, disguise=True):
    """A cube of sub-objects of one ambient object, faces all pullbacks.

    The three vertices next to the terminal corner are random closed sets;
    every other vertex is an intersection.
    """

    def attempt():
        W = cat.random_object(rng)
        top = {}
        for a in range(3):
            top[a] = cat.random_closed(rng, W, roles[a])
        full = (1, 1, 1)
        verts = {full: W}
        pts = {full: cat.points(W)}
        for s in BITS:
            if s == full:
                continue
            p = cat.points(W)
            for a in range(3):
                if not s[a]:
                    p = p & top[a]
            pts[s] = p
        # build from the top down so each vertex is a sub-object of a parent
        order = sorted(BITS, key=lambda s: -sum(s))
        for s in order:
            if s == full:
                continue
            a = next(k for k in range(3) if not s[k])
            parent = bump(s, a)
            verts[s] = cat.subobject(verts[parent], pts[s], roles[a]).dom
        edges = {}
        for s in BITS:
            for a in range(3):
                if not s[a]:
                    edges[(s, a)] = incl(cat, verts[s], verts[bump(s, a)], roles[a])
        cube = Cube(verts, edges, roles)
        if disguise and rng.random() < 0.5:
            cube = disguise_cube(cat, rng, cube)
        return cube

    return retry(attempt)


def disguise_cube(cat, rng, cube):
    """Relabel every vertex except the terminal one."""
    isos = {}
    for s in BITS:
        if s == (1, 1, 1):
            isos[s] = None
        else:
            isos[s] = cat.random_iso(rng, cube.v(s), "m")
    verts = {s: (isos[s].cod if isos[s] is not None else cube.v(s)) for s in BITS}
    edges = {}
    for (s, a), e in cube.edges.items():
        t = bump(s, a)
        src = isos[s].pmap
        dst = isos[t].pmap if isos[t] is not None else None
        pm = {src[p]: (dst[q] if dst is not None else q) for p, q in e.pmap.items()}
        edges[(s, a)] = Arrow(verts[s], verts[t], pm, e.role)
    return Cube(verts, edges, cube.roles)


__all__ = [
    "ROLES",
    "ambient_cube",
    "build_hom",
    "build_mixed",
    "disguise_cube",
    "disguise_square",
    "hom_square",
    "incl",
    "make_square",
    "pasting",
    "pc_square",
    "random_arrow",
    "reframe",
    "retry",
]
