"""Randomized checks of the star-pushout properties (pushout uniqueness,
functoriality, induced maps between star-pushouts, southern squares and the
cube correspondence).

Every configuration is grown inside one ambient object as closed point sets,
so the expected answers are plain set identities.  Checks whose e-role
variant needs star-pushouts the category cannot form without a witness fall
back to the m-role on such categories.
"""

from ..audit import run_checks
from ..errors import SquareNotGood
from .core import ROLES, Arrow, other, point_compose
from .cubes import cube_cokernels, cube_kernels, cubes_match, faces_pullback, is_good_cube, southern
from .gen import ambient_cube, incl, make_square, retry
from .squares import HomSquare, MixedSquare, is_distinguished, is_pullback


def _free_role(cat, rng):
    """A span role whose star-pushouts never need a witness."""
    return "m" if cat.needs_e_witness else rng.choice(ROLES)


def _quot(cat, role):
    return cat.cokernel if role == "m" else cat.kernel


def _sub(cat, U, pts, role):
    return cat.subobject(U, pts, role).dom


def _star(cat, f, g, role, ambient=None):
    """Star-pushout of ``f, g``; the ambient object serves as the witness
    when the category needs one."""
    if role == "e" and cat.needs_e_witness:
        if ambient is None:
            raise SquareNotGood("no witness for an e-star-pushout")
        w = HomSquare(f, g, incl(cat, f.cod, ambient, role), incl(cat, g.cod, ambient, role), role)
        return cat.star(f, g, role, w)
    return cat.star(f, g, role)


def _after(cat, h, f):
    """``h o f`` as an arrow of the role of ``h``."""
    return Arrow(f.dom, h.cod, point_compose(h, f), h.role)


def check_pushout_uniqueness(cat, rng, t):
    role = rng.choice(ROLES)

    def attempt():
        U = cat.random_object(rng)
        Bp = cat.random_closed(rng, U, role)
        Cp = cat.random_closed(rng, U, role)
        D = U if rng.random() < 0.5 else _sub(cat, U, Bp | Cp, role)
        B, C = _sub(cat, D, Bp, role), _sub(cat, D, Cp, role)
        A = _sub(cat, D, Bp & Cp, role)
        return U, D, A, B, C

    got = retry(attempt)
    if got is None:
        return t.vacuous()
    U, D, A, B, C = got
    f, g = incl(cat, A, B, role), incl(cat, A, C, role)
    right, bottom = incl(cat, B, D, role), incl(cat, C, D, role)
    P, i, j = _star(cat, f, g, role, D)
    med = cat.mediator(P, i, j, right, bottom, role)
    t.require(med is not None, "no arrow out of the star-pushout", span=[f, g])
    q = _quot(cat, role)
    qB, qD = q(f), q(bottom)
    pm = {x: x for x in qB.pmap}
    t.require(cat.is_arrow(qB.dom, qD.dom, pm, role), "no comparison between quotients", span=[f, g])
    comparison_iso = len(pm) == len(cat.points(qD.dom))
    t.require(med.is_iso() == comparison_iso, "mediator iso does not match comparison iso", span=[f, g], mediator=med)
    t.count("iso_cases", int(comparison_iso))


def check_composition_functoriality(cat, rng, t):
    role = _free_role(cat, rng)

    def attempt():
        U = cat.random_object(rng)
        B2p = cat.random_closed(rng, U, role)
        Cp = cat.random_closed(rng, U, role)
        Bp = B2p & cat.random_closed(rng, U, role)
        Ap = Bp & Cp
        if rng.random() < 0.4:
            Ap = Ap & cat.random_closed(rng, U, role)
        return [_sub(cat, U, p, role) for p in (Ap, Bp, B2p, Cp)]

    got = retry(attempt)
    if got is None:
        return t.vacuous()
    A, B, B2, C = got
    f, g, h = incl(cat, A, B, role), incl(cat, A, C, role), incl(cat, B, B2, role)
    P1, i1, j1 = cat.star(f, g, role)
    P2, i2, j2 = cat.star(h, i1, role)
    P3, i3, j3 = cat.star(_after(cat, h, f), g, role)
    med = cat.mediator(P3, i3, j3, i2, _after(cat, j2, j1), role)
    t.require(med is not None, "no comparison between composite star-pushouts", span=[f, g, h])
    t.require(med.is_iso(), "composite of star-pushouts is not a star-pushout", span=[f, g, h], mediator=med)


def check_lemma214(cat, rng, t):
    role = rng.choice(ROLES)

    def attempt():
        U = cat.random_object(rng)
        Bq = cat.random_closed(rng, U, role)
        Cq = cat.random_closed(rng, U, role)
        Aq = Bq & Cq
        Bp = Bq & cat.random_closed(rng, U, role)
        Ap = Bp & Aq
        Cp = Ap | (Cq & cat.random_closed(rng, U, role))
        objs = [_sub(cat, U, p, role) for p in (Ap, Bp, Cp, Aq, Bq, Cq)]
        return [U] + objs

    got = retry(attempt)
    if got is None:
        return t.vacuous()
    U, A, B, C, A1, B1, C1 = got
    f, g = incl(cat, A, B, role), incl(cat, A, C, role)
    f1, g1 = incl(cat, A1, B1, role), incl(cat, A1, C1, role)
    P, i, j = _star(cat, f, g, role, U)
    P1, i1, j1 = _star(cat, f1, g1, role, U)
    bb, cc = incl(cat, B, B1, role), incl(cat, C, C1, role)
    blue = cat.mediator(P, i, j, _after(cat, i1, bb), _after(cat, j1, cc), role)
    t.require(blue is not None, "no induced arrow between star-pushouts", span=[f, g], outer=[f1, g1])
    low = HomSquare(cc, j, j1, blue, role)
    t.require(is_pullback(low), "induced square over C is not good", square=low)
    side = HomSquare(bb, i, i1, blue, role)
    face = HomSquare(incl(cat, A, A1, role), g, g1, cc, role)
    if is_pullback(face):
        t.require(is_pullback(side), "induced square over B is not good for a good cube", square=side)
    else:
        t.vacuous()


def check_lemma215(cat, rng, t):
    role = _free_role(cat, rng)
    across = other(role)

    def attempt():
        U = cat.random_object(rng)
        Bq = cat.random_closed(rng, U, role)
        Cq = cat.random_closed(rng, U, role)
        Aq = Bq & Cq
        E1 = cat.random_closed(rng, U, across)
        if rng.random() < 0.4:
            E1 = E1 | (cat.points(U) - Cq)
        E2 = E1
        if rng.random() < 0.5:
            E2 = cat.random_closed(rng, U, across)
            if rng.random() < 0.4:
                E2 = E2 | (cat.points(U) - Bq)
            if E2 & Aq != E1 & Aq:
                return None
        Bp, Cp, Ap = E1 & Bq, E2 & Cq, E1 & Aq
        objs = [_sub(cat, U, p, role) for p in (Ap, Bp, Cp, Aq, Bq, Cq)]
        return [U] + objs

    got = retry(attempt)
    if got is None:
        return t.vacuous()
    U, A, B, C, A1, B1, C1 = got
    f, g = incl(cat, A, B, role), incl(cat, A, C, role)
    f1, g1 = incl(cat, A1, B1, role), incl(cat, A1, C1, role)
    aa = incl(cat, A, A1, across)
    bb, cc = incl(cat, B, B1, across), incl(cat, C, C1, across)
    for face in (make_square(f, aa, bb, f1), make_square(g, aa, cc, g1)):
        t.require(is_pullback(face), "generated face is not pseudo-commutative", square=face)
    P, i, j = cat.star(f, g, role)
    P1, i1, j1 = cat.star(f1, g1, role)
    blue = cat.mediator(P, i, j, _after(cat, i1, bb), _after(cat, j1, cc), across)
    t.require(blue is not None, "no induced arrow between star-pushouts", span=[f, g], outer=[f1, g1])
    over_b = make_square(i, bb, blue, i1)
    over_c = make_square(j, cc, blue, j1)
    t.require(is_pullback(over_b), "induced square over B is not pseudo-commutative", square=over_b)
    t.require(is_pullback(over_c), "induced square over C is not pseudo-commutative", square=over_c)
    top = make_square(f, aa, bb, f1)
    front = make_square(g, aa, cc, g1)
    if is_distinguished(top):
        t.count("distinguished")
        t.require(is_distinguished(over_c), "distinguished face does not transfer", square=over_c)
    if is_distinguished(front):
        t.count("distinguished")
        t.require(is_distinguished(over_b), "distinguished face does not transfer", square=over_b)


def check_southern_cokernel(cat, rng, t):
    role = rng.choice(ROLES)
    across = other(role)
    q = _quot(cat, role)

    def attempt():
        U = cat.random_object(rng)
        Bp = cat.random_closed(rng, U, role)
        Cp = cat.random_closed(rng, U, role)
        return U, _sub(cat, U, Bp & Cp, role), _sub(cat, U, Bp, role), _sub(cat, U, Cp, role)

    got = retry(attempt)
    if got is None:
        return t.vacuous()
    D, A, B, C = got
    f, g = incl(cat, A, B, role), incl(cat, A, C, role)
    right, bottom = incl(cat, B, D, role), incl(cat, C, D, role)
    P, i, j = _star(cat, f, g, role, D)
    med = cat.mediator(P, i, j, right, bottom, role)
    t.require(med is not None, "no arrow out of the star-pushout", span=[f, g])
    qC, qB = q(g), q(right)
    ind = cat.arrow(qC.dom, qB.dom, {x: x for x in qC.pmap}, role)
    rest = q(ind)
    blue = cat.arrow(rest.dom, D, point_compose(qB, rest), across)
    pts = cat.points(D)
    t.require(not (blue.image() & med.image()), "blue arrows overlap", mediator=med, other=blue)
    t.require(blue.image() | med.image() == pts, "blue arrows do not cover", mediator=med, other=blue)
    t.require(cat.isomorphic(q(med).dom, rest.dom), "blue arrows are not a kernel-cokernel pair", mediator=med)
    # the same object through B/A -> D/C
    qA, qD = q(f), q(bottom)
    ind2 = cat.arrow(qA.dom, qD.dom, {x: x for x in qA.pmap}, role)
    t.require(cat.isomorphic(q(ind2).dom, rest.dom), "the two routes to the far corner disagree", mediator=med)


def check_cube_correspondence(cat, rng, t):
    role = rng.choice(ROLES)
    cube = ambient_cube(cat, rng, (role,) * 3)
    if cube is None:
        return t.vacuous()
    t.require(is_good_cube(cat, cube), "intersection cube is not good", cube=cube)
    verdicts = [is_pullback(southern(cat, cube, a)) for a in range(3)]
    t.require(len(set(verdicts)) == 1, "southern goodness depends on the direction", cube=cube)
    q = cube_cokernels if role == "m" else cube_kernels
    back = cube_kernels if role == "m" else cube_cokernels
    for a in range(3):
        qc = q(cat, cube, a)
        t.require(faces_pullback(qc), "quotient cube has a face that is not good", cube=cube)
        t.require(cubes_match(cube, back(cat, qc, a), a), "quotient round trip changed the cube", cube=cube)
    # converse: start from a mixed cube
    roles = [role] * 3
    a = rng.randrange(3)
    roles[a] = other(role)
    mixed = ambient_cube(cat, rng, tuple(roles))
    if mixed is None:
        return t.vacuous()
    full = back(cat, mixed, a)
    t.require(is_good_cube(cat, full), "converse cube is not good", cube=mixed)
    t.require(cubes_match(mixed, q(cat, full, a), a), "converse round trip changed the cube", cube=mixed)


def check_MDhhv(cat, rng, t):
    role = rng.choice(ROLES)
    a = rng.randrange(3)
    roles = [role] * 3
    roles[a] = other(role)
    cube = ambient_cube(cat, rng, tuple(roles))
    if cube is None:
        return t.vacuous()
    sq = southern(cat, cube, a)
    t.require(isinstance(sq, MixedSquare), "southern square of a mixed cube is not mixed", cube=cube)
    t.require(is_pullback(sq), "southern square is not pseudo-commutative", cube=cube, square=sq)


def _lemma216(cat, rng, t, force):
    role = _free_role(cat, rng)

    def attempt():
        U = cat.random_object(rng)
        D1 = cat.random_closed(rng, U, role)
        D2 = cat.random_closed(rng, U, role)
        D0 = D1 & D2
        # B-corners sit in D by the e-arrows, C-corners by the m-arrows
        BU = cat.random_closed(rng, U, "e")
        CU = cat.random_closed(rng, U, "m")
        if force or rng.random() < 0.3:
            CU = CU | (cat.points(U) - BU)
        out = []
        for Dp in (D0, D1, D2):
            D = _sub(cat, U, Dp, role)
            B = _sub(cat, D, BU & Dp, "e")
            C = _sub(cat, D, CU & Dp, "m")
            A = _sub(cat, D, BU & CU & Dp, "m")
            out.append((A, B, C, D))
        return out

    got = retry(attempt)
    if got is None:
        return t.vacuous()
    squares = []
    for A, B, C, D in got:
        sq = MixedSquare(incl(cat, A, B, "m"), incl(cat, A, C, "e"), incl(cat, B, D, "e"), incl(cat, C, D, "m"))
        t.require(is_pullback(sq), "generated square is not pseudo-commutative", square=sq)
        squares.append(sq)
    stars = {}
    for corner in "ABCD":
        X0, X1, X2 = (getattr(s, corner) for s in squares)
        stars[corner] = cat.star(incl(cat, X0, X1, role), incl(cat, X0, X2, role), role)

    def between(src, dst, r):
        P, i, j = stars[src]
        Q, i1, j1 = stars[dst]
        s1, s2 = squares[1], squares[2]
        e1 = incl(cat, getattr(s1, src), getattr(s1, dst), r)
        e2 = incl(cat, getattr(s2, src), getattr(s2, dst), r)
        return cat.mediator(P, i, j, _after(cat, i1, e1), _after(cat, j1, e2), r)

    top, bottom = between("A", "B", "m"), between("C", "D", "m")
    left, right = between("A", "C", "e"), between("B", "D", "e")
    if None in (top, bottom, left, right):
        t.fail("no induced arrow between star-pushouts", squares=squares)
    out = MixedSquare(top, left, right, bottom)
    t.require(is_pullback(out), "induced square is not pseudo-commutative", square=out, squares=squares)
    if all(is_distinguished(s) for s in squares):
        t.count("distinguished")
        t.require(is_distinguished(out), "induced square is not distinguished", square=out, squares=squares)
    elif force:
        t.fail("forced configuration is not distinguished", squares=squares)


def check_lemma216(cat, rng, t):
    _lemma216(cat, rng, t, force=False)


def check_lemma216_distinguished(cat, rng, t):
    _lemma216(cat, rng, t, force=True)


APPENDIX_CHECKS = [
    ("pushout:uniqueness", check_pushout_uniqueness),
    ("composition:pushout:functoriality", check_composition_functoriality),
    ("lemma2.14", check_lemma214),
    ("lemma2.15", check_lemma215),
    ("southern:cokernel", check_southern_cokernel),
    ("cubecorrespondence", check_cube_correspondence),
    ("MDhhv", check_MDhhv),
    ("lemma2.16", check_lemma216),
    ("lemma2.16distinguished", check_lemma216_distinguished),
]


def appendix_audit(cat, trials, seed, jobs=1):
    """Run the star-pushout property suite; returns an AuditReport."""
    return run_checks(APPENDIX_CHECKS, cat, trials, seed, jobs=jobs, instance=cat.name)
