"""Arrows and the point-level category protocol.

Every category handled by the double-category layer is "set-like": an object
has a finite set of points, an m- or e-morphism is an injective point map
whose image is closed in the target for that role, and a sub-object is
determined by its set of points.  FinSet, finite M-sets and chain complexes
all fit this mould.
"""

from ..errors import NotComposable, NotCoproductInclusion, NotMorphism, StarPushoutMissing
from ..extcat import (
    FinSetObj,
    Injection,
    MActionSet,
    fresh_tokens,
    sort_tokens,
    token_key,
)

ROLES = ("m", "e")


def other(role):
    return "e" if role == "m" else "m"


def point_key(p):
    if isinstance(p, str):
        return (0, token_key(p))
    return (1, p[0], token_key(p[1]))


def sorted_points(pts):
    return sorted(pts, key=point_key)


class Arrow:
    """A morphism of one role: an injective map on points."""

    __slots__ = ("dom", "cod", "pmap", "role", "_hash")

    def __init__(self, dom, cod, pmap, role):
        if role not in ROLES:
            raise ValueError(f"unknown role {role!r}")
        self.dom = dom
        self.cod = cod
        self.pmap = dict(pmap)
        self.role = role
        self._hash = None

    def __call__(self, p):
        return self.pmap[p]

    def image(self):
        return frozenset(self.pmap.values())

    def inverse_map(self):
        return {v: k for k, v in self.pmap.items()}

    def is_iso(self):
        return len(self.pmap) == len(self.cod.points())

    def __eq__(self, other):
        return (
            isinstance(other, Arrow)
            and self.role == other.role
            and self.pmap == other.pmap
            and self.dom == other.dom
            and self.cod == other.cod
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.role, frozenset(self.pmap.items())))
        return self._hash

    def __repr__(self):
        body = ", ".join(f"{_fmt(p)}->{_fmt(q)}" for p, q in sorted(self.pmap.items(), key=lambda kv: point_key(kv[0])))
        return f"Arrow[{self.role}]({{{body}}})"


def _fmt(p):
    return p if isinstance(p, str) else f"{p[1]}@{p[0]}"


def compose(g, f):
    """``g o f`` for arrows of the same role."""
    if f.role != g.role:
        raise NotComposable("cannot compose arrows of different roles")
    if f.cod != g.dom:
        raise NotComposable("codomain does not match domain")
    return Arrow(f.dom, g.cod, {p: g.pmap[q] for p, q in f.pmap.items()}, f.role)


def point_compose(*arrows):
    """Point map of ``arrows[0] o arrows[1] o ...`` ignoring roles."""
    out = dict(arrows[-1].pmap)
    for g in reversed(arrows[:-1]):
        out = {p: g.pmap[q] for p, q in out.items()}
    return out


class CGWCategory:
    """Protocol for set-like categories with m- and e-morphisms."""

    name = "abstract"
    needs_e_witness = False

    def initial(self):
        raise NotImplementedError

    def points(self, X):
        return X.points()

    def is_closed(self, X, pts, role):
        raise NotImplementedError

    def subobject(self, X, pts, role):
        """Inclusion of the sub-object of X on ``pts`` (tokens kept)."""
        raise NotImplementedError

    def check_arrow(self, dom, cod, pmap, role):
        """Raise NotMorphism unless ``pmap`` is a valid arrow of ``role``."""
        raise NotImplementedError

    def relabel(self, X, mapping):
        """Copy of X with points renamed by ``mapping``."""
        raise NotImplementedError

    def isomorphic(self, X, Y):
        raise NotImplementedError

    def random_object(self, rng):
        raise NotImplementedError

    def random_closed(self, rng, X, role):
        raise NotImplementedError

    def glue(self, f, g):
        """Object B + (C - A) with the two maps, for a span B <- A -> C."""
        raise NotImplementedError

    def describe(self, X):
        raise NotImplementedError

    # -- derived operations

    def arrow(self, dom, cod, pmap, role):
        self.check_arrow(dom, cod, pmap, role)
        return Arrow(dom, cod, pmap, role)

    def is_arrow(self, dom, cod, pmap, role):
        try:
            self.check_arrow(dom, cod, pmap, role)
        except NotMorphism:
            return False
        return True

    def identity(self, X, role):
        return Arrow(X, X, {p: p for p in self.points(X)}, role)

    def initial_arrow(self, X, role):
        return self.arrow(self.initial(), X, {}, role)

    def iso_to(self, X, mapping, role):
        Y = self.relabel(X, mapping)
        return Arrow(X, Y, mapping, role)

    def random_iso(self, rng, X, role):
        pts = sorted_points(self.points(X))
        names = [f"u{k}" for k in range(len(pts))]
        rng.shuffle(names)
        mapping = {p: _rename(p, n) for p, n in zip(pts, names)}
        return self.iso_to(X, mapping, role)

    def inverse(self, f):
        return Arrow(f.cod, f.dom, f.inverse_map(), f.role)

    def complement(self, f, role):
        """Sub-object on the points outside the image of ``f``."""
        rest = self.points(f.cod) - f.image()
        if not self.is_closed(f.cod, rest, role):
            raise NotCoproductInclusion("complement of the image is not closed")
        return self.subobject(f.cod, rest, role)

    def cokernel(self, f):
        """Cokernel e-morphism of an m-morphism."""
        if f.role != "m":
            raise NotMorphism("cokernel needs an m-morphism")
        return self.complement(f, "e")

    def kernel(self, g):
        """Kernel m-morphism of an e-morphism."""
        if g.role != "e":
            raise NotMorphism("kernel needs an e-morphism")
        return self.complement(g, "m")

    def star(self, f, g, role, witness=None):
        """The star-pushout of the span ``B <-f- A -g-> C``.

        Returns ``(P, i, j)`` with ``i: B -> P`` and ``j: C -> P``.  When a
        witness square is supplied the result is the union of the images of
        B and C inside the witness target.
        """
        if f.dom != g.dom or f.role != role or g.role != role:
            raise NotComposable("star needs a span of one role")
        if witness is not None:
            if witness.top.pmap != f.pmap or witness.left.pmap != g.pmap:
                raise NotComposable("witness does not contain the span")
            from .squares import is_pullback  # local import avoids a cycle

            if not is_pullback(witness):
                from ..errors import SquareNotGood

                raise SquareNotGood("witness square is not good")
            right, bottom = witness.right, witness.bottom
            pts = right.image() | bottom.image()
            inc = self.subobject(right.cod, pts, role)
            P = inc.dom
            i = self.arrow(f.cod, P, right.pmap, role)
            j = self.arrow(g.cod, P, bottom.pmap, role)
            return P, i, j
        if role == "e" and self.needs_e_witness:
            raise StarPushoutMissing("e-star-pushouts need a witness square in this category")
        P, ipm, jpm = self.glue(f, g)
        return P, self.arrow(f.cod, P, ipm, role), self.arrow(g.cod, P, jpm, role)

    def mediator(self, P, i, j, right, bottom, role):
        """The map P -> D agreeing with ``right`` on B and ``bottom`` on C.

        Returns None if the prescribed values clash or do not give an arrow.
        """
        pm = {}
        for b, p in i.pmap.items():
            pm[p] = right.pmap[b]
        for c, p in j.pmap.items():
            v = bottom.pmap[c]
            if pm.setdefault(p, v) != v:
                return None
        if set(pm) != self.points(P):
            return None
        if not self.is_arrow(P, right.cod, pm, role):
            return None
        return Arrow(P, right.cod, pm, role)


def _rename(p, name):
    return name if isinstance(p, str) else (p[0], name)


class ExtensiveCGW(CGWCategory):
    """The double category of coproduct inclusions in an extensive instance.

    Both roles are coproduct inclusions; good and pseudo-commutative squares
    are pullbacks.
    """

    def __init__(self, instance):
        self.instance = instance
        self.name = instance.name

    def initial(self):
        return self.instance.initial()

    def is_closed(self, X, pts, role):
        return self.instance.is_summand(X, frozenset(pts))

    def subobject(self, X, pts, role):
        inj = self.instance.subobject(X, pts)
        return Arrow(inj.dom, X, inj.assignment, role)

    def check_arrow(self, dom, cod, pmap, role):
        f = self.instance.morphism(dom, cod, pmap)
        if not self.instance.is_coproduct_inclusion(f):
            raise NotMorphism("map is not a coproduct inclusion")

    def relabel(self, X, mapping):
        return self.instance.relabel(X, mapping)[0]

    def isomorphic(self, X, Y):
        return self.instance.isomorphic(X, Y)

    def random_object(self, rng):
        return self.instance.random_object(rng)

    def random_closed(self, rng, X, role):
        return self.instance.random_summand(rng, X)

    def glue(self, f, g):
        B, C = f.cod, g.cod
        ginv = g.inverse_map()
        rest = frozenset(c for c in C.points() if c not in ginv)
        R = self.instance.subobject(C, rest).dom
        P, inl, inr = self.instance.coproduct(B, R)
        ipm = dict(inl.assignment)
        jpm = {}
        for c in C.elements:
            jpm[c] = ipm[f.pmap[ginv[c]]] if c in ginv else inr(c)
        return P, ipm, jpm

    def to_injection(self, f):
        return Injection(f.dom, f.cod, f.pmap)

    def from_injection(self, inj, role):
        return self.arrow(inj.dom, inj.cod, inj.assignment, role)

    def describe(self, X):
        return describe_object(X)

    def __repr__(self):
        return f"ExtensiveCGW({self.instance!r})"


def describe_object(X):
    """JSON-friendly description of an object."""
    if isinstance(X, FinSetObj):
        return list(X.elements)
    if isinstance(X, MActionSet):
        names = X.monoid.names
        return {
            "carrier": list(X.elements),
            "action": {
                names[a]: {x: X.act(a, x) for x in X.elements if X.act(a, x) != x}
                for a in X.monoid.non_identity()
            },
        }
    if hasattr(X, "to_json"):
        return X.to_json()
    return repr(X)


def describe(value):
    """Serialize arrows, squares and objects for counterexample reports."""
    if isinstance(value, Arrow):
        return {
            "role": value.role,
            "dom": describe_object(value.dom),
            "cod": describe_object(value.cod),
            "map": {_fmt(p): _fmt(q) for p, q in sorted(value.pmap.items(), key=lambda kv: point_key(kv[0]))},
        }
    if hasattr(value, "arrows"):
        return {k: describe(v) for k, v in value.arrows().items()}
    if isinstance(value, dict):
        return {str(k): describe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [describe(v) for v in value]
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    return describe_object(value)


__all__ = [
    "Arrow",
    "CGWCategory",
    "ExtensiveCGW",
    "ROLES",
    "compose",
    "describe",
    "describe_object",
    "fresh_tokens",
    "other",
    "point_compose",
    "point_key",
    "sort_tokens",
    "sorted_points",
]
