"""Chain complexes of finite sets with partial-function differentials.

A complex on the window ``[lo, hi]`` has a finite set ``X[i]`` per degree, a
subset ``Xbar[i]`` on which the differential is defined, and a function
``d[i]: Xbar[i] -> X[i-1]``.  Degrees outside the window are empty.  The
chain condition asks that nothing in the image of ``d[i+1]`` lies in
``Xbar[i]``.

As an object of the double-category layer a complex has the points
``(i, token)``; a sub-object is determined by its point set.
"""

from .cgw.core import Arrow, CGWCategory, point_compose, sorted_points
from .cgw.squares import HomSquare, MixedSquare, c_inverse, c_square, k_inverse, k_square, star_e, star_m
from .errors import (
    ChainConditionViolated,
    IndexOutOfWindow,
    MalformedComplex,
    NotComposable,
    NotCoproductInclusion,
    NotMorphism,
    NotPullback,
    SquareNotCommuting,
)
from .extcat import FinSetInstance, FinSetObj, Injection, SetFun, fresh_tokens, sort_tokens

_SETS = FinSetInstance()
_EMPTY = FinSetObj()


def _as_set(value):
    return value if isinstance(value, FinSetObj) else FinSetObj(value)


def _as_assign(value):
    if isinstance(value, SetFun):
        return dict(value.assignment)
    return dict(value)


class ChainComplex:
    """A bounded chain complex of finite sets.

    ``degrees`` and ``images`` map a degree to a FinSetObj (or an iterable
    of tokens); ``diffs`` maps a degree to a SetFun or a plain dict.
    Missing degrees are empty.  Construction validates unless
    ``check=False``; see :func:`validate`.
    """

    __slots__ = ("lo", "hi", "_X", "_bar", "_d", "_hash", "_k", "_pts")

    def __init__(self, window, degrees=None, images=None, diffs=None, check=True):
        lo, hi = (int(window[0]), int(window[1]))
        if hi < lo - 1:
            raise MalformedComplex(f"window [{lo},{hi}] is reversed")
        self.lo, self.hi = lo, hi
        degrees, images, diffs = degrees or {}, images or {}, diffs or {}
        for name, table in (("degree", degrees), ("image", images), ("differential", diffs)):
            for i in table:
                if not lo <= int(i) <= hi:
                    raise IndexOutOfWindow(f"{name} {i} lies outside the window [{lo},{hi}]")
        self._X = {i: _as_set(degrees.get(i, degrees.get(str(i), ()))) for i in self.window_range()}
        self._bar = {i: _as_set(images.get(i, images.get(str(i), ()))) for i in self.window_range()}
        self._d = {i: _as_assign(diffs.get(i, diffs.get(str(i), {}))) for i in self.window_range()}
        self._hash = self._k = self._pts = None
        if check:
            validate(self)

    # -- access
    @property
    def window(self):
        return (self.lo, self.hi)

    def window_range(self):
        return range(self.lo, self.hi + 1)

    def X(self, i):
        return self._X.get(i, _EMPTY)

    def bar(self, i):
        return self._bar.get(i, _EMPTY)

    def diff(self, i):
        """The differential at degree ``i`` as a dict."""
        return self._d.get(i, {})

    def d(self, i, t):
        return self._d[i][t]

    def differential(self, i):
        """The differential at degree ``i`` as a SetFun."""
        return SetFun(self.bar(i), self.X(i - 1), self.diff(i))

    def points(self):
        if self._pts is None:
            self._pts = frozenset((i, t) for i in self.window_range() for t in self._X[i].elements)
        return self._pts

    def size(self, i):
        return len(self.X(i))

    def is_empty(self):
        return not any(len(self._X[i]) for i in self.window_range())

    # -- serialization
    def to_json(self):
        r = self.window_range()
        return {
            "window": [self.lo, self.hi],
            "degrees": {str(i): list(self._X[i].elements) for i in r},
            "images": {str(i): list(self._bar[i].elements) for i in r},
            "diff": {str(i): {t: self._d[i][t] for t in self._bar[i].elements} for i in r if self._d[i]},
        }

    def _key(self):
        if self._k is None:
            self._k = self._make_key()
        return self._k

    def _make_key(self):
        r = self.window_range()
        return (
            self.window,
            tuple(self._X[i] for i in r),
            tuple(self._bar[i] for i in r),
            tuple(frozenset(self._d[i].items()) for i in r),
        )

    def __eq__(self, other):
        if self is other:
            return True
        return isinstance(other, ChainComplex) and hash(self) == hash(other) and self._key() == other._key()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def __repr__(self):
        parts = []
        for i in self.window_range():
            if len(self._X[i]):
                bar = ",".join(self._bar[i].elements)
                parts.append(f"{i}:{{{','.join(self._X[i].elements)}}}|{{{bar}}}")
        return f"ChainComplex[{self.lo},{self.hi}]({' '.join(parts)})"


def validate(X):
    """Check that X is a chain complex and return it.

    Raises MalformedComplex when an image is not a subset or a differential
    is not a total function into the previous degree, and
    ChainConditionViolated(i) when the image of ``d[i+1]`` meets ``Xbar[i]``.
    """
    for i in X.window_range():
        if not X.bar(i).points() <= X.X(i).points():
            raise MalformedComplex(f"image at degree {i} is not a subset of the degree")
        try:
            X.differential(i)
        except NotMorphism as exc:
            raise MalformedComplex(f"differential at degree {i}: {exc}") from None
    for i in X.window_range():
        hit = frozenset(X.diff(i + 1).values())
        if hit & X.bar(i).points():
            raise ChainConditionViolated(i, "image of the next differential meets the image subset")
    return X


def empty_complex(window=(0, 0)):
    return ChainComplex(window)


def concentrated(A, n, window=None):
    """The complex with ``A`` in degree ``n`` and nothing else."""
    window = window or (n, n)
    return ChainComplex(window, {n: _as_set(A)})


# ---------------------------------------------------------------------------
# points, sub-objects and chain maps


def _bar_of(X, S):
    """Image subset of the sub-object of X on the point set S."""
    out = {}
    for i in X.window_range():
        out[i] = [
            t for t in X.bar(i).elements if (i, t) in S and (i - 1, X.d(i, t)) in S
        ]
    return out


def subcomplex(X, S):
    """Sub-object of X on the point set S; tokens and window are kept."""
    S = frozenset(S)
    if not S <= X.points():
        raise NotCoproductInclusion("point set is not contained in the complex")
    degrees = {i: [t for t in X.X(i).elements if (i, t) in S] for i in X.window_range()}
    images = _bar_of(X, S)
    diffs = {i: {t: X.d(i, t) for t in images[i]} for i in X.window_range()}
    return ChainComplex(X.window, degrees, images, diffs, check=False)


def is_m_closed(X, S):
    return all((i - 1, X.d(i, t)) in S for (i, t) in S if t in X.bar(i))


def is_e_closed(X, S):
    return all(
        (i, t) in S
        for i in X.window_range()
        for t in X.bar(i).elements
        if (i - 1, X.d(i, t)) in S
    )


def close(X, S, role):
    """Smallest closed point set containing S (one pass suffices)."""
    S = set(S)
    if role == "m":
        for i, t in list(S):
            if t in X.bar(i):
                S.add((i - 1, X.d(i, t)))
    else:
        for i in X.window_range():
            for t in X.bar(i).elements:
                if (i - 1, X.d(i, t)) in S:
                    S.add((i, t))
    return frozenset(S)


def check_chain_arrow(dom, cod, pmap, role):
    """Validate a point map as a chain m- or e-morphism.

    Raises NotMorphism for maps that are not degreewise injections,
    NotPullback(i) or SquareNotCommuting(i) for failed side conditions.
    """
    pts, cpts = dom.points(), cod.points()
    if set(pmap) != pts:
        raise NotMorphism("point map is not total")
    if len(set(pmap.values())) != len(pmap):
        raise NotMorphism("point map is not injective")
    for p, q in pmap.items():
        if q not in cpts or q[0] != p[0]:
            raise NotMorphism(f"point {p!r} does not map into the same degree of the target")
    for i in sorted({p[0] for p in pts} | {q[0] for q in cpts}):
        dbar, cbar = dom.bar(i).points(), cod.bar(i).points()
        for t in dom.X(i).elements:
            y = pmap[(i, t)][1]
            inside = t in dbar
            if role == "m" and inside != (y in cbar):
                raise NotPullback(i, "image subset is not the preimage of the target image subset")
            if role == "e" and inside and y not in cbar:
                raise SquareNotCommuting(i, "image subset does not map into the target image subset")
            if inside and pmap[(i - 1, dom.d(i, t))] != (i - 1, cod.d(i, y)):
                raise SquareNotCommuting(i, "differentials do not commute with the map")
        if role == "e":
            img = {q for q in pmap.values()}
            inv = {q: p for p, q in pmap.items()}
            for y in cod.bar(i).elements:
                if (i - 1, cod.d(i, y)) in img and ((i, y) not in img or inv[(i, y)][1] not in dbar):
                    raise NotPullback(i, "image subset is not the differential preimage")


def _arrow(x):
    return x.arrow if isinstance(x, ChainMap) else x


class ChainMap:
    """Degreewise injections ``f[i]: X_i -> Y_i`` with their restrictions
    ``fbar[i]`` to the image subsets."""

    kind = None
    __slots__ = ("src", "dst", "f", "fbar", "arrow")

    def __init__(self, src, dst, f, fbar=None):
        pmap = {}
        for i, assign in f.items():
            i = int(i)
            for t, y in _as_assign(assign).items():
                pmap[(i, t)] = (i, y)
        degrees = sorted({p[0] for p in src.points()} | {int(i) for i in f})
        fd, fb = {}, {}
        for i in degrees:
            fd[i] = {t: y for (j, t), (_, y) in pmap.items() if j == i}
            try:
                Injection(src.X(i), dst.X(i), fd[i])
            except NotMorphism as exc:
                raise NotMorphism(f"degree {i}: {exc}") from None
        if fbar is not None:
            for i in degrees:
                given = _as_assign(fbar.get(i, fbar.get(str(i), {})))
                want = {t: fd[i][t] for t in src.bar(i).elements}
                if given != want:
                    raise SquareNotCommuting(i, "image-level map disagrees with the degree map")
        for i in degrees:
            fb[i] = {t: fd[i][t] for t in src.bar(i).elements}
        check_chain_arrow(src, dst, pmap, self.kind)
        self.src, self.dst = src, dst
        self.f = {i: m for i, m in fd.items() if m}
        self.fbar = {i: m for i, m in fb.items() if m}
        self.arrow = Arrow(src, dst, pmap, self.kind)

    @classmethod
    def from_arrow(cls, a):
        if a.role != cls.kind:
            raise NotMorphism(f"expected a {cls.kind}-arrow")
        f = {}
        for (i, t), (_, y) in a.pmap.items():
            f.setdefault(i, {})[t] = y
        return cls(a.dom, a.cod, f)

    def __call__(self, i, t):
        return self.f[i][t]

    def image(self, i):
        return frozenset(self.f.get(i, {}).values())

    def is_iso(self):
        return self.arrow.is_iso()

    def __eq__(self, other):
        return isinstance(other, ChainMap) and self.kind == other.kind and self.arrow == other.arrow

    def __hash__(self):
        return hash(self.arrow)

    def __repr__(self):
        return f"{type(self).__name__}({self.f!r})"

    def to_json(self):
        return {
            "kind": self.kind,
            "f": {str(i): dict(m) for i, m in sorted(self.f.items())},
            "fbar": {str(i): dict(m) for i, m in sorted(self.fbar.items())},
        }


class ChainMapM(ChainMap):
    """Chain m-morphism: image subsets pull back, differentials commute."""

    kind = "m"
    __slots__ = ()


class ChainMapE(ChainMap):
    """Chain e-morphism: image subsets map in, and the image subset of the
    source is the full differential preimage of the source."""

    kind = "e"
    __slots__ = ()


def validate_map(kind, src, dst, f, fbar=None):
    """Build and validate a chain map of the given kind."""
    if kind == "m":
        return ChainMapM(src, dst, f, fbar)
    if kind == "e":
        return ChainMapE(src, dst, f, fbar)
    raise ValueError(f"unknown chain map kind {kind!r}")


def identity_map(X, kind):
    return validate_map(kind, X, X, {i: {t: t for t in X.X(i).elements} for i in X.window_range()})


def inclusion_map(S, X, kind):
    return validate_map(kind, S, X, {i: {t: t for t in S.X(i).elements} for i in S.window_range()})


def initial_map(X, kind):
    return validate_map(kind, empty_complex(X.window), X, {})


def compose_maps(g, h):
    """``g o h`` for chain maps of one kind."""
    if g.kind != h.kind:
        raise NotComposable("chain maps of different kinds")
    if h.dst != g.src:
        raise NotComposable("codomain does not match domain")
    return validate_map(g.kind, h.src, g.dst, _degree_maps(point_compose(g.arrow, h.arrow)))


def _degree_maps(pmap):
    f = {}
    for (i, t), (_, y) in pmap.items():
        f.setdefault(i, {})[t] = y
    return f


# ---------------------------------------------------------------------------
# kernels and cokernels


def coker_chain(f):
    """Cokernel of a chain m-morphism: Z_i = Y_i - f(X_i) with
    Zbar_i = {y in Ybar_i : d(y) not in f(X_{i-1})}."""
    if f.kind != "m":
        raise NotMorphism("cokernel needs a chain m-morphism")
    Y = f.dst
    rest = Y.points() - f.arrow.image()
    Z = validate(subcomplex(Y, rest))
    return Z, inclusion_map(Z, Y, "e")


def ker_chain(g):
    """Kernel of a chain e-morphism: K_i = Y_i - Z_i, Kbar_i = Ybar_i - Z_i."""
    if g.kind != "e":
        raise NotMorphism("kernel needs a chain e-morphism")
    Y = g.dst
    rest = Y.points() - g.arrow.image()
    K = validate(subcomplex(Y, rest))
    return K, inclusion_map(K, Y, "m")


def coker_chain_diagram(f):
    """Cokernel built degreewise from complements and pullbacks of finite
    sets; kept as an independent oracle for :func:`coker_chain`."""
    X, Y = f.src, f.dst
    comp, degrees, images, diffs = {}, {}, {}, {}
    for i in Y.window_range():
        fi = Injection(X.X(i), Y.X(i), f.f.get(i, {}))
        comp[i] = _SETS.complement(fi)
        degrees[i] = comp[i].dom
    for i in Y.window_range():
        fbar = Injection(X.bar(i), Y.bar(i), f.fbar.get(i, {}))
        cbar = _SETS.complement(fbar)
        # the c-square: Ybar - f(Xbar) lands in Z_i
        for y in cbar.dom.elements:
            if y not in degrees[i]:
                raise NotPullback(i, "cokernel square does not exist")
        if i - 1 < Y.lo:
            images[i], diffs[i] = [], {}
            continue
        dY = SetFun(cbar.dom, Y.X(i - 1), {y: Y.d(i, y) for y in cbar.dom.elements})
        P, p1, p2 = _SETS.pullback(dY, comp[i - 1])
        images[i] = [p1(p) for p in P.elements]
        diffs[i] = {p1(p): comp[i - 1](p2(p)) for p in P.elements}
    Z = ChainComplex(Y.window, degrees, images, diffs)
    return Z, inclusion_map(Z, Y, "e")


def ker_chain_diagram(g):
    """Kernel built degreewise from complements and pullbacks; the oracle
    for :func:`ker_chain`."""
    Z, Y = g.src, g.dst
    comp, degrees, images, diffs = {}, {}, {}, {}
    for i in Y.window_range():
        gi = Injection(Z.X(i), Y.X(i), g.f.get(i, {}))
        comp[i] = _SETS.complement(gi)
        degrees[i] = comp[i].dom
    for i in Y.window_range():
        ybar = Injection(Y.bar(i), Y.X(i), {y: y for y in Y.bar(i).elements})
        P, p1, _ = _SETS.pullback(ybar, comp[i])
        kbar = FinSetObj(p1(p) for p in P.elements)
        images[i] = kbar
        if not len(kbar):
            diffs[i] = {}
            continue
        dK = SetFun(kbar, Y.X(i - 1), {y: Y.d(i, y) for y in kbar.elements})
        Q, q1, q2 = _SETS.pullback(dK, comp[i - 1])
        if len(Q) != len(kbar):
            raise NotPullback(i, "kernel differential leaves the kernel")
        diffs[i] = {q1(q): comp[i - 1](q2(q)) for q in Q.elements}
    K = ChainComplex(Y.window, degrees, images, diffs)
    return K, inclusion_map(K, Y, "m")


# ---------------------------------------------------------------------------
# the double-category structure


class ChainCGW(CGWCategory):
    """Bounded chain complexes of finite sets with chain m- and e-morphisms.

    e-star-pushouts are formed inside a witness square.
    """

    name = "chain"
    needs_e_witness = True

    def __init__(self, window=(-2, 2), max_size=4):
        self.window = tuple(window)
        self.max_size = max_size

    def initial(self):
        return empty_complex(self.window)

    def is_closed(self, X, pts, role):
        pts = frozenset(pts)
        if not pts <= X.points():
            return False
        return is_m_closed(X, pts) if role == "m" else is_e_closed(X, pts)

    def subobject(self, X, pts, role):
        pts = frozenset(pts)
        if not self.is_closed(X, pts, role):
            raise NotCoproductInclusion(f"point set is not {role}-closed")
        S = subcomplex(X, pts)
        return Arrow(S, X, {p: p for p in pts}, role)

    def check_arrow(self, dom, cod, pmap, role):
        check_chain_arrow(dom, cod, pmap, role)

    def relabel(self, X, mapping):
        degrees = {i: [mapping[(i, t)][1] for t in X.X(i).elements] for i in X.window_range()}
        images = {i: [mapping[(i, t)][1] for t in X.bar(i).elements] for i in X.window_range()}
        diffs = {
            i: {mapping[(i, t)][1]: mapping[(i - 1, X.d(i, t))][1] for t in X.bar(i).elements}
            for i in X.window_range()
        }
        return ChainComplex(X.window, degrees, images, diffs, check=False)

    def isomorphic(self, X, Y):
        return canonical_form(X) == canonical_form(Y)

    def random_object(self, rng):
        return random_complex(rng, self.window, self.max_size)

    def random_closed(self, rng, X, role):
        r = rng.random()
        if r < 0.1:
            return frozenset()
        if r < 0.2:
            return X.points()
        S = frozenset(p for p in sorted_points(X.points()) if rng.random() < 0.5)
        return close(X, S, role)

    def glue(self, f, g):
        B, C = f.cod, g.cod
        ginv = g.inverse_map()
        lo, hi = min(B.lo, C.lo), max(B.hi, C.hi)
        tag = {}
        for i in range(lo, hi + 1):
            tagged = [("L." + t, (i, t), "B") for t in B.X(i).elements]
            tagged += [("R." + t, (i, t), "C") for t in C.X(i).elements if (i, t) not in ginv]
            names = dict(zip(sort_tokens([x[0] for x in tagged]), fresh_tokens(len(tagged))))
            for name, p, side in tagged:
                tag[(side, p)] = (i, names[name])
        ipm = {p: tag[("B", p)] for p in B.points()}
        jpm = {}
        for p in C.points():
            jpm[p] = ipm[f.pmap[ginv[p]]] if p in ginv else tag[("C", p)]
        degrees = {i: [] for i in range(lo, hi + 1)}
        images = {i: [] for i in range(lo, hi + 1)}
        diffs = {i: {} for i in range(lo, hi + 1)}
        for (i, t), (_, u) in ipm.items():
            degrees[i].append(u)
            if t in B.bar(i):
                images[i].append(u)
                diffs[i][u] = ipm[(i - 1, B.d(i, t))][1]
        for (i, t), (_, u) in jpm.items():
            if (i, t) in ginv:
                continue
            degrees[i].append(u)
            if t in C.bar(i):
                images[i].append(u)
                diffs[i][u] = jpm[(i - 1, C.d(i, t))][1]
        P = ChainComplex((lo, hi), degrees, images, diffs)
        return P, ipm, jpm

    def describe(self, X):
        return X.to_json()

    def __repr__(self):
        return f"ChainCGW(window={self.window}, max_size={self.max_size})"


CHAIN = ChainCGW()


def canonical_form(X):
    """Isomorphism invariant: every point outside the image subsets is a
    root with its fibre of preimages; the chain condition makes these the
    whole structure."""
    roots = []
    for i in X.window_range():
        fibre = {}
        for t in X.bar(i + 1).elements if i + 1 <= X.hi else ():
            fibre[X.d(i + 1, t)] = fibre.get(X.d(i + 1, t), 0) + 1
        for t in X.X(i).elements:
            if t not in X.bar(i):
                roots.append((i, fibre.get(t, 0)))
    return tuple(sorted(roots))


def isomorphic(X, Y):
    return canonical_form(X) == canonical_form(Y)


def random_complex(rng, window=(-2, 2), max_size=4, pool="abcdefgh"):
    """Random complex with degree sets of at most ``max_size`` tokens."""
    lo, hi = window
    degrees, images, diffs = {}, {}, {}
    for i in range(lo, hi + 1):
        n = rng.randint(0, max_size)
        degrees[i] = rng.sample(pool, n)
        free = [t for t in degrees.get(i - 1, []) if t not in images.get(i - 1, [])] if i > lo else []
        images[i] = [t for t in degrees[i] if free and rng.random() < 0.5]
        diffs[i] = {t: rng.choice(free) for t in images[i]}
    return ChainComplex(window, degrees, images, diffs)


def random_exact(rng, window=(-2, 2), max_size=4, pool="abcdefgh"):
    """Random exact complex: ``d[i+1]`` maps ``Xbar[i+1]`` bijectively onto
    the complement of ``Xbar[i]`` in ``X[i]``."""
    lo, hi = window
    b = {i: 0 for i in range(lo, hi + 2)}
    for i in range(lo + 1, hi + 1):
        b[i] = rng.randint(0, max(0, max_size - b[i - 1]))
    degrees, images, diffs = {}, {}, {}
    below = []
    for i in range(lo, hi + 1):
        toks = rng.sample(pool, b[i] + b[i + 1])
        own, above = toks[: b[i]], toks[b[i]:]
        degrees[i] = toks
        images[i] = own
        diffs[i] = dict(zip(own, below))
        below = above
    return ChainComplex(window, degrees, images, diffs)


def random_map(rng, kind, window=(-2, 2), max_size=4, Y=None):
    """Random chain map of ``kind`` as the inclusion of a closed sub-object,
    relabelled at random half the time."""
    Y = Y if Y is not None else random_complex(rng, window, max_size)
    S = CHAIN.random_closed(rng, Y, kind)
    a = CHAIN.subobject(Y, S, kind)
    if rng.random() < 0.5:
        u = CHAIN.random_iso(rng, a.dom, kind)
        a = Arrow(u.cod, Y, {u.pmap[p]: q for p, q in a.pmap.items()}, kind)
    return (ChainMapM if kind == "m" else ChainMapE).from_arrow(a)


# ---------------------------------------------------------------------------
# squares and star-pushouts of complexes


def _square_arrows(sq):
    return [_arrow(a) for a in sq]


def transport_square(sq, cat=CHAIN):
    """Good square of kernels (for a mixed square) of the e-legs.

    A pseudo-commutative square goes to a good m-square; the inverse is
    :func:`transport_inverse`.
    """
    return k_square(cat, sq)


def transport_square_c(sq, cat=CHAIN):
    """Good e-square of cokernels of the m-legs."""
    return c_square(cat, sq)


def transport_inverse(h, cat=CHAIN):
    if h.role == "m":
        return k_inverse(cat, h)
    return c_inverse(cat, h)


def star_chain_m(f, g, cat=CHAIN):
    """Star-pushout of a span of chain m-morphisms; returns
    ``(P, i, j, square)`` with ``i, j`` as ChainMapM."""
    P, i, j, sq = star_m(cat, _arrow(f), _arrow(g))
    return P, ChainMapM.from_arrow(i), ChainMapM.from_arrow(j), sq


def star_chain_e(f, g, witness, cat=CHAIN):
    """Star-pushout of a span of chain e-morphisms inside a witness.

    ``witness`` is a good e-square containing the span, or the pair of
    e-maps ``(right, bottom)`` completing it.
    """
    f, g = _arrow(f), _arrow(g)
    if not isinstance(witness, HomSquare):
        right, bottom = witness
        witness = HomSquare(f, g, _arrow(right), _arrow(bottom), "e")
    P, i, j, sq = star_e(cat, f, g, witness)
    return P, ChainMapE.from_arrow(i), ChainMapE.from_arrow(j), sq


def chain_square(top, left, right, bottom):
    """Square of chain maps: a MixedSquare when horizontal arrows are m and
    vertical ones e, otherwise a HomSquare."""
    arrows = [_arrow(a) for a in (top, left, right, bottom)]
    if arrows[0].role == "m" and arrows[1].role == "e":
        return MixedSquare(*arrows)
    return HomSquare(*arrows)


# ---------------------------------------------------------------------------
# truncation


def truncate(X, mode):
    """``drop_top`` removes the top degree; ``keep_top`` keeps only it."""
    if X.hi < X.lo:
        raise IndexOutOfWindow("cannot truncate a complex with an empty window")
    b = X.hi
    if mode == "drop_top":
        r = range(X.lo, b)
        return ChainComplex(
            (X.lo, b - 1),
            {i: X.X(i) for i in r},
            {i: X.bar(i) for i in r},
            {i: X.diff(i) for i in r},
        )
    if mode == "keep_top":
        return concentrated(X.X(b), b)
    raise ValueError(f"unknown truncation mode {mode!r}")


def truncation_sequence(X):
    """``(FX, FX -> X, GX, GX -> X)`` with the m-map and the e-map."""
    F = truncate(X, "drop_top")
    G = truncate(X, "keep_top")
    b = X.hi
    m = validate_map("m", F, X, {i: {t: t for t in F.X(i).elements} for i in F.window_range()})
    e = validate_map("e", G, X, {b: {t: t for t in G.X(b).elements}})
    return F, m, G, e


def is_kernel_cokernel_pair(m, e):
    """Whether ``m`` and ``e`` have a common target and complementary images,
    and each is the kernel/cokernel of the other up to isomorphism."""
    if m.dst != e.dst:
        return False
    a, b = m.arrow.image(), e.arrow.image()
    if a & b or (a | b) != m.dst.points():
        return False
    Z, _ = coker_chain(m)
    K, _ = ker_chain(e)
    return isomorphic(Z, e.src) and isomorphic(K, m.src)


def euler_char(X):
    """Sum of (-1)^i |X_i| over the window."""
    return sum((-1) ** (i % 2) * len(X.X(i)) for i in X.window_range())


__all__ = [
    "CHAIN",
    "ChainCGW",
    "ChainComplex",
    "ChainMap",
    "ChainMapE",
    "ChainMapM",
    "canonical_form",
    "chain_square",
    "close",
    "coker_chain",
    "coker_chain_diagram",
    "compose_maps",
    "concentrated",
    "empty_complex",
    "euler_char",
    "identity_map",
    "inclusion_map",
    "initial_map",
    "is_e_closed",
    "is_kernel_cokernel_pair",
    "is_m_closed",
    "isomorphic",
    "ker_chain",
    "ker_chain_diagram",
    "random_complex",
    "random_exact",
    "random_map",
    "star_chain_e",
    "star_chain_m",
    "subcomplex",
    "transport_inverse",
    "transport_square",
    "transport_square_c",
    "truncate",
    "truncation_sequence",
    "validate",
    "validate_map",
]
