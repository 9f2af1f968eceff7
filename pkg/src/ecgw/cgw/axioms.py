"""Randomized checks of the g-CGW and star-CGW axioms and the basic lemmas.

Each check has the signature ``check(cat, rng, trial)`` and reports through
the :class:`~ecgw.audit.Trial` object.
"""

import itertools

from ..audit import run_checks
from ..errors import NotCoproductInclusion
from ..extcat import inclusion
from .core import ROLES, Arrow, other, point_compose
from .gen import hom_square, incl, pasting, pc_square, random_arrow, retry
from .squares import (
    HomSquare,
    c_inverse,
    c_square,
    cokernel,
    complete_distinguished,
    complete_distinguished_dual,
    good_by_star,
    is_distinguished,
    is_pullback,
    k_inverse,
    k_square,
    kernel,
    same_square,
)


def _npts(cat, X):
    return len(cat.points(X))


def check_Z(cat, rng, t):
    X = cat.random_object(rng)
    I = cat.initial()
    t.require(_npts(cat, I) == 0, "initial object has points")
    for role in ROLES:
        f = cat.initial_arrow(X, role)
        t.require(f.pmap == {}, "initial arrow is not empty", arrow=f)
        into = cat.is_arrow(X, I, {}, role) if _npts(cat, X) == 0 else False
        t.require(into == (_npts(cat, X) == 0), "non-empty object maps to the initial object")
    t.require(_npts(cat, cat.kernel(cat.identity(X, "e")).dom) == 0, "kernel of an identity is not initial")
    t.require(cat.isomorphic(cat.cokernel(cat.identity(X, "m")).dom, I), "cokernel of an identity is not initial")


def check_M(cat, rng, t):
    role = rng.choice(ROLES)
    f = random_arrow(cat, rng, role)
    t.require(len(f.image()) == len(f.pmap), "arrow is not injective", f=f)
    S = f.dom
    g = cat.subobject(S, cat.random_closed(rng, S, role), role)
    vals = list(g.pmap.values())
    rng.shuffle(vals)
    pm = dict(zip(g.pmap, vals))
    h = Arrow(g.dom, S, pm, role) if cat.is_arrow(g.dom, S, pm, role) else g
    same_after = point_compose(f, g) == point_compose(f, h)
    t.require(same_after == (g.pmap == h.pmap), "arrow is not monic", f=f, g=g, h=h)


def check_G(cat, rng, t):
    role = rng.choice(ROLES)
    f = random_arrow(cat, rng, role)
    u = cat.random_iso(rng, f.dom, role)
    w = cat.random_iso(rng, f.cod, role)
    bottom = Arrow(u.cod, w.cod, {u(a): w(b) for a, b in f.pmap.items()}, role)
    tri = HomSquare(f, u, w, bottom, role)
    for sq in (tri, tri.transpose()):
        t.require(is_pullback(sq), "weak triangle is not a pullback", square=sq)
        t.require(good_by_star(cat, sq) is not False, "weak triangle is not good", square=sq)
    h = hom_square(cat, rng, role)
    if h is None:
        return t.vacuous()
    gs = good_by_star(cat, h)
    if gs is None:
        return
    if gs:
        t.require(is_pullback(h), "good square is not a pullback", square=h)
    t.require(gs == is_pullback(h), "goodness and pullback disagree", square=h)


def check_D(cat, rng, t):
    sq = pc_square(cat, rng)
    if sq is None:
        return t.vacuous()
    t.require(is_pullback(sq), "generated square is not pseudo-commutative", square=sq)
    ks, cs = k_square(cat, sq), c_square(cat, sq)
    d = is_distinguished(sq)
    t.require(d == ks.top.is_iso() == cs.top.is_iso(), "cover test and kernel/cokernel criterion disagree", square=sq)
    t.require(is_pullback(ks) and is_pullback(cs), "k or c square is not good", square=sq)
    t.require(same_square(k_inverse(cat, ks), sq), "k round trip changed the square", square=sq)
    t.require(same_square(c_inverse(cat, cs), sq), "c round trip changed the square", square=sq)


def check_K(cat, rng, t):
    f = random_arrow(cat, rng, "m")
    c, _ = cokernel(cat, f)
    pts = cat.points(f.cod)
    t.require(not (c.image() & f.image()) and (c.image() | f.image()) == pts, "cokernel does not split", f=f)
    g = random_arrow(cat, rng, "e")
    k, _ = kernel(cat, g)
    pts = cat.points(g.cod)
    t.require(not (k.image() & g.image()) and (k.image() | g.image()) == pts, "kernel does not split", g=g)
    back = cat.complement(cat.complement(f, "e"), "m")
    t.require(back.image() == f.image(), "complement is not an involution", f=f)
    t.require(cat.isomorphic(back.dom, f.dom), "double complement is not isomorphic", f=f)
    inst = getattr(cat, "instance", None)
    if inst is not None:
        X = inst.random_object(rng)
        sub = inst.random_non_summand(rng, X)
        if sub is not None:
            i = inclusion(X.restrict(sub), X)
            t.require(not inst.is_coproduct_inclusion(i), "non-summand accepted as coproduct inclusion")
            try:
                inst.complement(i)
            except NotCoproductInclusion:
                t.count("refusals")
            else:
                t.fail("complement accepted a non-closed complement", inclusion=repr(i))


def check_isosemptycoker(cat, rng, t):
    role = rng.choice(ROLES)
    f = random_arrow(cat, rng, role, iso=rng.random() < 0.5)
    q = cat.cokernel(f) if role == "m" else cat.kernel(f)
    t.require(f.is_iso() == (_npts(cat, q.dom) == 0), "iso does not match empty (co)kernel", f=f)


def check_GS(cat, rng, t):
    role = rng.choice(ROLES)
    h = hom_square(cat, rng, role)
    if h is None:
        return t.vacuous()
    t.require(is_pullback(h) == is_pullback(h.transpose()), "goodness depends on direction", square=h)
    gs1, gs2 = good_by_star(cat, h), good_by_star(cat, h.transpose())
    if gs1 is not None and gs2 is not None:
        t.require(gs1 == gs2, "star-pushout goodness depends on direction", square=h)
    p = pasting(cat, rng, role, role)
    if p is None:
        return t.vacuous()
    s1, s2, outer = p
    if is_pullback(s1) and is_pullback(s2):
        t.require(is_pullback(outer), "pasting of good squares is not good", left=s1, right=s2)
    else:
        t.vacuous()


def check_star(cat, rng, t):
    role = rng.choice(ROLES)
    h = hom_square(cat, rng, role, good=True)
    if h is None:
        return t.vacuous()
    witness = h if (role == "e" and cat.needs_e_witness) else None
    P, i, j = cat.star(h.top, h.left, role, witness)
    sq = HomSquare(h.top, h.left, i, j, role)
    t.require(is_pullback(sq), "star-pushout square is not good", span=h)
    t.require(cat.points(P) == i.image() | j.image(), "star-pushout is not covered by its legs", span=h)
    quot = cat.cokernel if role == "m" else cat.kernel
    for leg, far in ((h.top, j), (h.left, i)):
        q1, q2 = quot(leg), quot(far)
        near = i if leg is h.top else j
        pm = {x: near.pmap[x] for x in q1.pmap}
        t.require(set(pm.values()) == q2.image(), "comparison map is not onto", span=h)
        t.require(cat.isomorphic(q1.dom, q2.dom), "comparison objects are not isomorphic", span=h)
    med = cat.mediator(P, i, j, h.right, h.bottom, role)
    t.require(med is not None, "no mediating arrow to a good square", span=h)
    if witness is None and role == "e":
        P2, _, _ = cat.star(h.top, h.left, role, h)
        t.require(cat.isomorphic(P, P2), "witnessed and glued star-pushouts differ", span=h)


def check_PO(cat, rng, t):
    role = rng.choice(ROLES)
    h = hom_square(cat, rng, role, good=rng.random() < 0.5)
    if h is None:
        return t.vacuous()
    if role == "m" or not cat.needs_e_witness:
        P, i, j = cat.star(h.top, h.left, role)
        t.require(is_pullback(HomSquare(h.top, h.left, i, j, role)), "star square is not good", span=h)
    elif is_pullback(h):
        P, i, j = cat.star(h.top, h.left, role, h)
        t.require(is_pullback(HomSquare(h.top, h.left, i, j, role)), "star square is not good", span=h)
    else:
        t.vacuous()


def check_PBL(cat, rng, t):
    rh, rv = rng.choice([("m", "e"), ("e", "m"), ("m", "m"), ("e", "e")])
    p = pasting(cat, rng, rh, rv)
    if p is None:
        return t.vacuous()
    s1, s2, outer = p
    if is_pullback(s2) and is_pullback(outer):
        t.require(is_pullback(s1), "left square of a pullback pasting is not a pullback", left=s1, right=s2)
    else:
        t.vacuous()


def check_POL(cat, rng, t):
    role = rng.choice(ROLES)

    def attempt():
        F = cat.random_object(rng)
        Ep = cat.random_closed(rng, F, role)
        Cp = cat.random_closed(rng, F, role)
        e = cat.subobject(F, Ep, role)
        c = cat.subobject(F, Cp, role)
        b = cat.subobject(e.dom, cat.random_closed(rng, e.dom, role), role)
        Bp = b.image()
        Ap = Bp & Cp
        if rng.random() < 0.4:
            Ap = Ap & cat.random_closed(rng, F, role)
        a = cat.subobject(b.dom, Ap, role)
        ac = incl(cat, a.dom, c.dom, role)
        return F, e, c, b, a, ac

    got = retry(attempt)
    if got is None:
        return t.vacuous()
    F, e, c, b, a, ac = got
    bF = Arrow(b.dom, F, {p: p for p in b.pmap}, role)
    left_sq = HomSquare(a, ac, bF, c, role)
    witness = None
    if role == "e" and cat.needs_e_witness:
        if not is_pullback(left_sq):
            return t.vacuous()
        witness = left_sq
    P, i, j = cat.star(a, ac, role, witness)
    phi = cat.mediator(P, i, j, bF, c, role)
    if phi is None:
        return t.vacuous()
    right_sq = HomSquare(b, i, e, phi, role)
    outer = HomSquare(Arrow(a.dom, e.dom, {p: p for p in a.pmap}, role), ac, e, c, role)
    if is_pullback(outer):
        t.require(is_pullback(right_sq), "right square of a pushout pasting is not good", right=right_sq)
    else:
        t.vacuous()


def _subsets(pts):
    pts = sorted(pts, key=repr)
    for r in range(len(pts) + 1):
        for combo in itertools.combinations(pts, r):
            yield frozenset(combo)


def check_CZ29(cat, rng, t):
    def attempt():
        C = cat.random_object(rng)
        g = cat.subobject(C, cat.random_closed(rng, C, "e"), "e")
        f = cat.subobject(g.dom, cat.random_closed(rng, g.dom, "m"), "m")
        return f, g

    got = retry(attempt)
    if got is None:
        return t.vacuous()
    f, g = got
    ds = complete_distinguished(cat, f, g)
    t.require(is_distinguished(ds.square), "completion is not distinguished", f=f, g=g)
    C = g.cod
    if _npts(cat, C) <= 10:
        gf = frozenset(point_compose(g, f).values())
        sols = [
            S for S in _subsets(cat.points(C))
            if S & g.image() == gf and S | g.image() == cat.points(C) and cat.is_closed(C, S, "m")
        ]
        t.require(sols == [ds.square.bottomM.image()], "completion is not unique", f=f, g=g)

    def attempt2():
        D = cat.random_object(rng)
        fm = cat.subobject(D, cat.random_closed(rng, D, "m"), "m")
        ge = cat.subobject(fm.dom, cat.random_closed(rng, fm.dom, "e"), "e")
        return ge, fm

    got = retry(attempt2)
    if got is None:
        return t.vacuous()
    ge, fm = got
    ds = complete_distinguished_dual(cat, ge, fm)
    t.require(is_distinguished(ds.square), "dual completion is not distinguished", g=ge, f=fm)
    D = fm.cod
    if _npts(cat, D) <= 10:
        fg = frozenset(point_compose(fm, ge).values())
        sols = [
            S for S in _subsets(cat.points(D))
            if S & fm.image() == fg and S | fm.image() == cat.points(D) and cat.is_closed(D, S, "e")
        ]
        t.require(sols == [ds.square.rightE.image()], "dual completion is not unique", g=ge, f=fm)


def check_CZ210(cat, rng, t):
    role = rng.choice(ROLES)

    def attempt():
        X = cat.random_object(rng)
        b = cat.subobject(X, cat.random_closed(rng, X, role), role)
        c = cat.subobject(b.dom, cat.random_closed(rng, b.dom, role), role)
        return X, b, c

    got = retry(attempt)
    if got is None:
        return t.vacuous()
    X, b, c = got
    bc = Arrow(c.dom, X, {p: p for p in c.pmap}, role)
    quot = cat.cokernel if role == "m" else cat.kernel
    qB, qC = quot(b), quot(bc)
    orole = other(role)
    ind = cat.arrow(qB.dom, qC.dom, {p: p for p in qB.pmap}, orole)
    t.require(point_compose(qC, ind) == qB.pmap, "induced map does not commute", inner=c, outer=b)
    rest = cat.kernel(ind) if orole == "e" else cat.cokernel(ind)
    t.require(cat.isomorphic(rest.dom, quot(c).dom), "quotient of quotients is wrong", inner=c, outer=b)


def check_CZ512(cat, rng, t):
    def attempt():
        D = cat.random_object(rng)
        pts = cat.points(D)
        Bp = pts if rng.random() < 0.4 else cat.random_closed(rng, D, "e")
        Cp = pts if rng.random() < 0.4 else cat.random_closed(rng, D, "m")
        from .gen import build_mixed

        return build_mixed(cat, D, Bp, Cp, Bp & Cp)

    sq = retry(attempt)
    if sq is None:
        return t.vacuous()
    if sq.bottomM.is_iso():
        t.require(sq.topM.is_iso(), "bottom iso without top iso", square=sq)
    if sq.rightE.is_iso():
        t.require(sq.leftE.is_iso(), "right iso without left iso", square=sq)
    if not (sq.bottomM.is_iso() or sq.rightE.is_iso()):
        t.vacuous()


def check_dist2of3(cat, rng, t):
    rh, rv = rng.choice([("m", "e"), ("e", "m")])
    p = pasting(cat, rng, rh, rv, cover1=rng.random() < 0.7, cover2=rng.random() < 0.7, exact=True)
    if p is None:
        return t.vacuous()
    flags = [is_distinguished(s) for s in p]
    if sum(flags) >= 2:
        t.require(all(flags), "two distinguished squares but not the third", left=p[0], right=p[1])
    else:
        t.vacuous()


AXIOM_CHECKS = [
    ("Z", check_Z),
    ("M", check_M),
    ("G", check_G),
    ("D", check_D),
    ("K", check_K),
    ("isosemptycoker", check_isosemptycoker),
    ("GS", check_GS),
    ("star", check_star),
    ("PO", check_PO),
    ("PBL", check_PBL),
    ("POL", check_POL),
    ("CZ2.9", check_CZ29),
    ("CZ2.10", check_CZ210),
    ("CZ5.12", check_CZ512),
    ("dist2of3", check_dist2of3),
]


def audit(cat, trials, seed, jobs=1, checks=None):
    """Run the axiom suite ``trials`` times; returns an AuditReport."""
    chosen = AXIOM_CHECKS if checks is None else [c for c in AXIOM_CHECKS if c[0] in checks]
    return run_checks(chosen, cat, trials, seed, jobs=jobs, instance=cat.name)
