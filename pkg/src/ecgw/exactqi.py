"""Exact complexes, homology sets and quasi-isomorphisms of chain complexes."""

import functools
from dataclasses import dataclass, field

from .audit import run_checks
from .chain import (
    CHAIN,
    ChainComplex,
    ChainMapE,
    ChainMapM,
    close,
    coker_chain,
    compose_maps,
    isomorphic,
    ker_chain,
    random_complex,
    random_exact,
    random_map,
    star_chain_e,
    star_chain_m,
    validate_map,
)
from .cgw.core import Arrow
from .errors import IndexOutOfWindow
from .extcat import FinSetInstance, FinSetObj, SetFun

_SETS = FinSetInstance()


@dataclass(frozen=True)
class ExactnessCertificate:
    """Outcome of :func:`is_exact`.

    When ``exact`` holds, ``partition[i]`` is the pair (image of the next
    differential, image subset) splitting degree ``i``.  Otherwise ``index``
    is the first failing degree and ``reason`` says why.
    """

    exact: bool
    partition: dict = field(default_factory=dict)
    index: int = None
    reason: str = ""

    def __bool__(self):
        return self.exact


def is_exact(X):
    """Every differential injective and ``X_i = d(Xbar_{i+1}) + Xbar_i``."""
    partition = {}
    for i in X.window_range():
        d_next = X.diff(i + 1)
        hit = list(d_next.values())
        if len(set(hit)) != len(hit):
            return ExactnessCertificate(False, index=i + 1, reason="differential is not injective")
        own = X.bar(i).points()
        if set(hit) | own != X.X(i).points():
            return ExactnessCertificate(False, index=i, reason="degree is not covered by the two images")
        partition[i] = (FinSetObj(hit), X.bar(i))
    return ExactnessCertificate(True, partition=partition)


def homology(X, i):
    """``H_i = X_i - (Xbar_i | d(Xbar_{i+1}))``."""
    if not X.lo <= i <= X.hi:
        raise IndexOutOfWindow(f"degree {i} lies outside the window {X.window}")
    hit = set(X.diff(i + 1).values())
    return FinSetObj(t for t in X.X(i).elements if t not in X.bar(i) and t not in hit)


def complement_complex(f):
    """Cokernel of an m-map or kernel of an e-map."""
    return coker_chain(f)[0] if f.kind == "m" else ker_chain(f)[0]


def is_quasi_iso(f):
    """Whether the cokernel (m-maps) or kernel (e-maps) is exact."""
    return is_exact(complement_complex(f)).exact


def pushout(f, g):
    """Pushout of a span of finite-set maps ``f: A -> B``, ``g: A -> C``.

    Returns the carrier as a list of classes and the two maps into it.
    """
    parent = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for b in f.cod.elements:
        parent[("B", b)] = ("B", b)
    for c in g.cod.elements:
        parent[("C", c)] = ("C", c)
    for a in f.dom.elements:
        x, y = find(("B", f(a))), find(("C", g(a)))
        if x != y:
            parent[max(x, y)] = min(x, y)
    classes = sorted({find(x) for x in parent})
    names = {c: str(k) for k, c in enumerate(classes)}
    P = FinSetObj(names.values())
    inb = SetFun(f.cod, P, {b: names[find(("B", b))] for b in f.cod.elements})
    inc = SetFun(g.cod, P, {c: names[find(("C", c))] for c in g.cod.elements})
    return P, inb, inc


def _side(X, i):
    """``Xbar_{i+1} + Xbar_i -> X_i`` with the coproduct inclusions."""
    S, inl, inr = _SETS.coproduct(X.bar(i + 1), X.bar(i))
    assign = {inl(t): X.d(i + 1, t) for t in X.bar(i + 1).elements}
    assign.update({inr(t): t for t in X.bar(i).elements})
    return S, inl, inr, SetFun(S, X.X(i), assign)


def bicartesian_at(f, i):
    """Whether the comparison square at degree ``i`` is a pullback and a
    pushout of finite sets."""
    X, Y = f.src, f.dst
    TL, xl, xr, top = _side(X, i)
    BL, yl, yr, bottom = _side(Y, i)
    fi = SetFun(X.X(i), Y.X(i), f.f.get(i, {}))
    left_assign = {xl(t): yl(f.f[i + 1][t]) for t in X.bar(i + 1).elements}
    left_assign.update({xr(t): yr(f.f[i][t]) for t in X.bar(i).elements})
    left = SetFun(TL, BL, left_assign)
    # pullback: the comparison TL -> X_i x_{Y_i} BL is a bijection
    P, p1, p2 = _SETS.pullback(fi, bottom)
    pairs = {(p1(p), p2(p)) for p in P.elements}
    comparison = [(top(t), left(t)) for t in TL.elements]
    if len(set(comparison)) != len(comparison) or set(comparison) != pairs:
        return False
    # pushout: the induced map X_i +_TL BL -> Y_i is a bijection
    Q, qx, qb = pushout(top, left)
    induced = {}
    for x in X.X(i).elements:
        induced.setdefault(qx(x), set()).add(fi(x))
    for u in BL.elements:
        induced.setdefault(qb(u), set()).add(bottom(u))
    if any(len(v) != 1 for v in induced.values()):
        return False
    values = [next(iter(v)) for v in induced.values()]
    return len(values) == len(set(values)) and set(values) == Y.X(i).points()


def bicartesian_criterion(f):
    """Quasi-isomorphism test through the degreewise comparison squares."""
    lo, hi = min(f.src.lo, f.dst.lo), max(f.src.hi, f.dst.hi)
    return all(bicartesian_at(f, i) for i in range(lo, hi + 1))


# ---------------------------------------------------------------------------
# generators used by the audits and tests


def isolated_edges(Y):
    """Pairs ``(i, y)`` with ``y`` in ``Ybar_i`` whose image has no other
    preimage."""
    out = []
    for i in Y.window_range():
        count = {}
        for t in Y.bar(i).elements:
            count[Y.d(i, t)] = count.get(Y.d(i, t), 0) + 1
        out.extend((i, t) for t in Y.bar(i).elements if count[Y.d(i, t)] == 1)
    return out


def edge_points(Y, edges):
    pts = set()
    for i, t in edges:
        pts.add((i, t))
        pts.add((i - 1, Y.d(i, t)))
    return frozenset(pts)


def random_quasi_iso(rng, kind, Y=None, window=(-2, 2), max_size=4):
    """A random quasi-isomorphism into Y: the complement is a union of edges
    chosen so that it is exact."""
    Y = Y if Y is not None else random_complex(rng, window, max_size)
    if kind == "m":
        edges = [e for e in isolated_edges(Y) if rng.random() < 0.5]
        Z = edge_points(Y, edges)
        S = Y.points() - Z
    else:
        seen, edges = set(), []
        cand = [(i, t) for i in Y.window_range() for t in Y.bar(i).elements]
        rng.shuffle(cand)
        for i, t in cand:
            tgt = (i - 1, Y.d(i, t))
            if tgt not in seen and rng.random() < 0.5:
                seen.add(tgt)
                edges.append((i, t))
        S = Y.points() - edge_points(Y, edges)
    a = CHAIN.subobject(Y, S, kind)
    if rng.random() < 0.5:
        u = CHAIN.random_iso(rng, a.dom, kind)
        a = Arrow(u.cod, Y, {u.pmap[p]: q for p, q in a.pmap.items()}, kind)
    return (ChainMapM if kind == "m" else ChainMapE).from_arrow(a)


def random_chain_map(rng, kind, window=(-2, 2), max_size=4):
    """Either a uniform random map or a quasi-isomorphism, half each."""
    if rng.random() < 0.5:
        return random_quasi_iso(rng, kind, window=window, max_size=max_size)
    return random_map(rng, kind, window, max_size)


def _sub_map(rng, Y, pts, kind):
    a = CHAIN.subobject(Y, pts, kind)
    return (ChainMapM if kind == "m" else ChainMapE).from_arrow(a)


def random_kc_sequence(rng, window=(-2, 2), max_size=4):
    """A kernel-cokernel sequence ``A >-> B <-- C`` biased towards exact
    terms."""
    mode = rng.randrange(4)
    B = random_exact(rng, window, max_size) if mode in (0, 1) else random_complex(rng, window, max_size)
    if mode == 0:
        edges = [(i, t) for i in B.window_range() for t in B.bar(i).elements if rng.random() < 0.5]
        S = edge_points(B, edges)
    elif mode == 3:
        S = B.points() - edge_points(B, [e for e in isolated_edges(B) if rng.random() < 0.5])
    else:
        S = CHAIN.random_closed(rng, B, "m")
    m = _sub_map(rng, B, S, "m")
    C, e = coker_chain(m)
    return m, e


# ---------------------------------------------------------------------------
# acyclicity audit


def check_IA(_, rng, t):
    X = ChainComplex((rng.randint(-3, 0), rng.randint(0, 3)))
    t.require(is_exact(X).exact, "initial complex is not exact")


def check_A23(_, rng, t):
    m, e = random_kc_sequence(rng)
    flags = [is_exact(m.src).exact, is_exact(m.dst).exact, is_exact(e.src).exact]
    if sum(flags) >= 2:
        t.count("sequences")
        t.require(all(flags), "two exact terms but the third is not exact", kernel=m.arrow, cokernel=e.arrow)
    else:
        t.vacuous()


def _composable(rng, kind):
    C = random_complex(rng)
    g = random_quasi_iso(rng, kind, Y=C) if rng.random() < 0.6 else random_map(rng, kind, Y=C)
    B = g.src
    f = random_quasi_iso(rng, kind, Y=B) if rng.random() < 0.6 else random_map(rng, kind, Y=B)
    return f, g


def check_we_2of3(_, rng, t):
    kind = rng.choice("me")
    f, g = _composable(rng, kind)
    gf = compose_maps(g, f)
    flags = [is_quasi_iso(f), is_quasi_iso(g), is_quasi_iso(gf)]
    if sum(flags) >= 2:
        t.count("pairs")
        t.require(all(flags), "two quasi-isomorphisms but the third map is not", f=f.arrow, g=g.arrow)
    else:
        t.vacuous()


def check_parallel_2of3(_, rng, t):
    D = random_complex(rng)
    g = random_quasi_iso(rng, "m", Y=D) if rng.random() < 0.6 else random_map(rng, "m", Y=D)
    Cpts = g.arrow.image()
    Bpts = CHAIN.random_closed(rng, D, "e")
    if rng.random() < 0.5:
        Bpts = close(D, Bpts | (D.points() - Cpts), "e")
    Fpts = D.points() - Bpts
    b = CHAIN.subobject(D, Bpts, "e")
    Fm = CHAIN.subobject(D, Fpts, "m")
    # f: A -> B with A = B & C, h: E -> F with E = C & F
    f = _sub_map(rng, b.dom, Bpts & Cpts, "m")
    h = _sub_map(rng, Fm.dom, Fpts & Cpts, "m")
    gi = _sub_map(rng, D, Cpts, "m")
    flags = [is_quasi_iso(f), is_quasi_iso(gi), is_quasi_iso(h)]
    if sum(flags) >= 2:
        t.count("squares")
        t.require(all(flags), "two parallel quasi-isomorphisms but not the third", f=f.arrow, g=gi.arrow, h=h.arrow)
    else:
        t.vacuous()


def check_acyclic_pushout(_, rng, t):
    U = random_exact(rng)
    role = rng.choice("me")
    bar = [(i, s) for i in U.window_range() for s in U.bar(i).elements]
    Be = [e for e in bar if rng.random() < 0.6]
    Ce = [e for e in bar if rng.random() < 0.6]
    Bp, Cp = edge_points(U, Be), edge_points(U, Ce)
    A = CHAIN.subobject(U, Bp & Cp, role).dom
    B = CHAIN.subobject(U, Bp, role).dom
    C = CHAIN.subobject(U, Cp, role).dom
    cls = ChainMapM if role == "m" else ChainMapE
    f = validate_map(role, A, B, {i: {s: s for s in A.X(i).elements} for i in A.window_range()})
    g = validate_map(role, A, C, {i: {s: s for s in A.X(i).elements} for i in A.window_range()})
    if role == "m":
        P = star_chain_m(f, g)[0]
    else:
        w = (cls.from_arrow(CHAIN.subobject(U, Bp, "e")), cls.from_arrow(CHAIN.subobject(U, Cp, "e")))
        P = star_chain_e(f, g, w)[0]
    for X in (A, B, C):
        t.require(is_exact(X).exact, "generated complex is not exact", complex=X)
    t.require(is_exact(P).exact, "star-pushout of exact complexes is not exact", span=[f.arrow, g.arrow])


def check_we_acyclic(_, rng, t):
    kind = rng.choice("me")
    if rng.random() < 0.5:
        Y = random_exact(rng)
    else:
        Y = random_complex(rng)
    f = random_quasi_iso(rng, kind, Y=Y)
    t.require(is_quasi_iso(f), "generated map is not a quasi-isomorphism", f=f.arrow)
    t.require(is_exact(f.src).exact == is_exact(f.dst).exact, "quasi-isomorphism changes exactness", f=f.arrow)
    same = all(len(homology(f.src, i)) == len(homology(f.dst, i)) for i in f.dst.window_range())
    t.count("homology_same" if same else "homology_differs")


def check_acyclic_we(_, rng, t):
    kind = rng.choice("me")
    Y = random_exact(rng)
    edges = [(i, s) for i in Y.window_range() for s in Y.bar(i).elements if rng.random() < 0.5]
    f = _sub_map(rng, Y, edge_points(Y, edges), kind)
    t.require(is_exact(f.src).exact, "edge sub-complex is not exact", f=f.arrow)
    t.require(is_quasi_iso(f), "map between exact complexes is not a quasi-isomorphism", f=f.arrow)


ACYCLICITY_CHECKS = [
    ("IA", check_IA),
    ("A23", check_A23),
    ("we_2of3", check_we_2of3),
    ("parallel:2of3", check_parallel_2of3),
    ("acyclic:pushout", check_acyclic_pushout),
    ("we_acyclic", check_we_acyclic),
    ("acyclic:we", check_acyclic_we),
]


def acyclicity_audit(trials, seed, jobs=1):
    """Closure properties of exact complexes and 2-out-of-3 for quasi-isos."""
    return run_checks(ACYCLICITY_CHECKS, None, trials, seed, jobs=jobs, instance="chain")


def criterion_audit(trials, seed, jobs=1, kinds="me"):
    """Compare :func:`is_quasi_iso` with :func:`bicartesian_criterion`, one
    check per map kind."""
    checks = [(f"criterion:{k}", _criterion_check(k)) for k in kinds]
    return run_checks(checks, None, trials, seed, jobs=jobs, instance="chain")


def _check_criterion(kind, _, rng, t):
    f = random_chain_map(rng, kind)
    q, b = is_quasi_iso(f), bicartesian_criterion(f)
    t.count("quasi_iso" if q else "not_quasi_iso")
    t.require(q == b, "quasi-isomorphism test and bicartesian criterion disagree", f=f.arrow)


def _criterion_check(kind):
    # a partial of a module-level function pickles for worker processes
    return functools.partial(_check_criterion, kind)


__all__ = [
    "ACYCLICITY_CHECKS",
    "ExactnessCertificate",
    "acyclicity_audit",
    "bicartesian_at",
    "bicartesian_criterion",
    "complement_complex",
    "criterion_audit",
    "edge_points",
    "homology",
    "is_exact",
    "is_quasi_iso",
    "isolated_edges",
    "isomorphic",
    "pushout",
    "random_chain_map",
    "random_kc_sequence",
    "random_quasi_iso",
]
