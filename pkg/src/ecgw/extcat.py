"""Finite sets and finite M-sets as extensive categories.

Objects are immutable.  Morphisms are :class:`SetFun` values (plain functions
between carriers) and :class:`Injection` values.  Everything the rest of the
library needs goes through an :class:`ExtensiveInstance`.
"""

import itertools
import json
import re
from types import MappingProxyType

from .errors import NotComposable, NotCoproductInclusion, NotMorphism

Elem = str

_CHUNK = re.compile(r"(\d+)")


def token_key(token):
    """Natural sort key: digit runs compare numerically, so "x9" < "x10"."""
    parts = _CHUNK.split(token)
    key = []
    for k, part in enumerate(parts):
        if k % 2:
            key.append((0, int(part), part))
        elif part:
            key.append((1, 0, part))
    return tuple(key)


def sort_tokens(tokens):
    return sorted(tokens, key=token_key)


class FinSetObj:
    """A finite set of string tokens, kept in canonical order."""

    __slots__ = ("elements", "_set", "_hash")

    def __init__(self, elements=()):
        toks = [e if isinstance(e, str) else str(e) for e in elements]
        s = frozenset(toks)
        if len(s) != len(toks):
            raise ValueError("duplicate tokens in FinSetObj")
        self.elements = tuple(sort_tokens(toks))
        self._set = s
        self._hash = hash(("FinSetObj", self.elements))

    def points(self):
        return self._set

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x):
        return x in self._set

    def __eq__(self, other):
        return isinstance(other, FinSetObj) and self.elements == other.elements

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return "FinSetObj({%s})" % ", ".join(self.elements)


class SetFun:
    """A total function ``dom -> cod`` given by an assignment on tokens."""

    __slots__ = ("dom", "cod", "_map", "_hash")

    def __init__(self, dom, cod, assignment):
        dpts = dom.points()
        cpts = cod.points()
        amap = dict(assignment)
        if set(amap) != dpts:
            raise NotMorphism("assignment is not total on the domain")
        for x, y in amap.items():
            if y not in cpts:
                raise NotMorphism(f"image of {x!r} lies outside the codomain")
        self.dom = dom
        self.cod = cod
        self._map = {x: amap[x] for x in dom.elements}
        self._hash = None

    @property
    def assignment(self):
        return MappingProxyType(self._map)

    def __call__(self, x):
        return self._map[x]

    def items(self):
        return self._map.items()

    def image(self):
        return frozenset(self._map.values())

    def is_injective(self):
        return len(set(self._map.values())) == len(self._map)

    def __eq__(self, other):
        return (
            isinstance(other, SetFun)
            and self.dom == other.dom
            and self.cod == other.cod
            and self._map == other._map
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.dom, self.cod, frozenset(self._map.items())))
        return self._hash

    def __repr__(self):
        body = ", ".join(f"{x}->{y}" for x, y in self._map.items())
        return f"{type(self).__name__}({{{body}}})"


class Injection(SetFun):
    """An injective :class:`SetFun`."""

    __slots__ = ()

    def __init__(self, dom, cod, assignment):
        super().__init__(dom, cod, assignment)
        if not self.is_injective():
            raise NotMorphism("assignment is not injective")


def identity(X):
    return Injection(X, X, {x: x for x in X.elements})


def compose(g, f):
    """Return ``g o f``.  Injections compose to an Injection."""
    if f.cod != g.dom:
        raise NotComposable(f"codomain {f.cod!r} does not match domain {g.dom!r}")
    assign = {x: g(y) for x, y in f.items()}
    if isinstance(f, Injection) and isinstance(g, Injection):
        return Injection(f.dom, g.cod, assign)
    return SetFun(f.dom, g.cod, assign)


def inclusion(sub, X):
    """Inclusion of ``sub`` into ``X`` (tokens shared)."""
    return Injection(sub, X, {x: x for x in sub.elements})


# ---------------------------------------------------------------------------
# Monoids and M-sets


class Monoid:
    """A finite monoid given by its multiplication table.

    ``table[a][b]`` is the index of ``a*b``.  ``names`` gives printable labels.
    """

    __slots__ = ("table", "identity", "names", "_hash")

    def __init__(self, table, identity=0, names=None):
        n = len(table)
        rows = tuple(tuple(int(v) for v in row) for row in table)
        if n == 0 or any(len(r) != n for r in rows):
            raise ValueError("monoid table must be square and non-empty")
        if any(not 0 <= v < n for r in rows for v in r):
            raise ValueError("monoid table entry out of range")
        if not 0 <= identity < n:
            raise ValueError("identity index out of range")
        for a in range(n):
            if rows[identity][a] != a or rows[a][identity] != a:
                raise ValueError("identity index does not act as a unit")
        for a, b, c in itertools.product(range(n), repeat=3):
            if rows[rows[a][b]][c] != rows[a][rows[b][c]]:
                raise ValueError(f"table is not associative at ({a}, {b}, {c})")
        self.table = rows
        self.identity = identity
        self.names = tuple(names) if names is not None else tuple(str(i) for i in range(n))
        if len(self.names) != n or len(set(self.names)) != n:
            raise ValueError("monoid names must be distinct, one per element")
        self._hash = hash((self.table, self.identity))

    @property
    def size(self):
        return len(self.table)

    def mul(self, a, b):
        return self.table[a][b]

    def non_identity(self):
        return [a for a in range(self.size) if a != self.identity]

    @classmethod
    def idempotent2(cls):
        """The monoid {1, m} with m*m = m."""
        return cls([[0, 1], [1, 1]], 0, ("1", "m"))

    @classmethod
    def from_json(cls, data):
        missing = [k for k in ("elements", "identity", "table") if k not in data]
        if missing:
            raise ValueError(f"monoid table needs {', '.join(missing)}")
        names = [str(x) for x in data["elements"]]
        pos = {x: k for k, x in enumerate(names)}
        try:
            table = [[pos[str(v)] for v in row] for row in data["table"]]
            ident = pos[str(data["identity"])]
        except KeyError as exc:
            raise ValueError(f"unknown monoid element {exc}") from None
        return cls(table, ident, names)

    def to_json(self):
        return {
            "elements": list(self.names),
            "identity": self.names[self.identity],
            "table": [[self.names[v] for v in row] for row in self.table],
        }

    def __eq__(self, other):
        return isinstance(other, Monoid) and self.table == other.table and self.identity == other.identity

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Monoid({list(self.names)})"


class MActionSet:
    """A finite set with a left action of a finite monoid.

    ``action[a]`` maps each element to ``a . x``.  The action law checked is
    ``(a*b) . x = a . (b . x)``.
    """

    __slots__ = ("carrier", "monoid", "action", "_hash")

    def __init__(self, carrier, monoid, action):
        if not isinstance(carrier, FinSetObj):
            carrier = FinSetObj(carrier)
        pts = carrier.points()
        acts = []
        for a in range(monoid.size):
            if a == monoid.identity:
                row = {x: x for x in carrier.elements}
                given = action.get(a) if isinstance(action, dict) else action[a]
                if given is not None and any(given[x] != x for x in given):
                    raise NotMorphism("identity of the monoid does not act trivially")
            else:
                given = action[a]
                if set(given) != pts:
                    raise NotMorphism(f"action of {monoid.names[a]} is not total")
                row = {x: given[x] for x in carrier.elements}
                if any(y not in pts for y in row.values()):
                    raise NotMorphism(f"action of {monoid.names[a]} leaves the carrier")
            acts.append(row)
        for a, b in itertools.product(range(monoid.size), repeat=2):
            ab = monoid.mul(a, b)
            for x in carrier.elements:
                if acts[ab][x] != acts[a][acts[b][x]]:
                    raise NotMorphism("action does not respect the multiplication table")
        self.carrier = carrier
        self.monoid = monoid
        self.action = tuple(MappingProxyType(r) for r in acts)
        self._hash = hash((carrier, monoid, tuple(tuple(r.items()) for r in acts)))

    @property
    def elements(self):
        return self.carrier.elements

    def points(self):
        return self.carrier.points()

    def act(self, a, x):
        return self.action[a][x]

    def orbit(self, x):
        return frozenset(self.action[a][x] for a in range(self.monoid.size))

    def is_closed(self, pts):
        return all(self.action[a][x] in pts for a in self.monoid.non_identity() for x in pts)

    def restrict(self, pts):
        pts = frozenset(pts)
        if not self.is_closed(pts):
            raise NotCoproductInclusion("subset is not closed under the action")
        acts = {a: {x: self.action[a][x] for x in pts} for a in range(self.monoid.size)}
        return MActionSet(FinSetObj(pts), self.monoid, acts)

    def components(self):
        """Connected components of the undirected action graph."""
        parent = {x: x for x in self.elements}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a in self.monoid.non_identity():
            for x in self.elements:
                rx, ry = find(x), find(self.action[a][x])
                if rx != ry:
                    parent[max(rx, ry, key=token_key)] = min(rx, ry, key=token_key)
        groups = {}
        for x in self.elements:
            groups.setdefault(find(x), []).append(x)
        return [frozenset(groups[r]) for r in sort_tokens(groups)]

    def __len__(self):
        return len(self.carrier)

    def __iter__(self):
        return iter(self.carrier)

    def __contains__(self, x):
        return x in self.carrier

    def __eq__(self, other):
        return (
            isinstance(other, MActionSet)
            and self.carrier == other.carrier
            and self.monoid == other.monoid
            and self.action == other.action
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        moves = []
        for a in self.monoid.non_identity():
            for x in self.elements:
                y = self.action[a][x]
                if y != x:
                    moves.append(f"{self.monoid.names[a]}.{x}={y}")
        return f"MActionSet({{{', '.join(self.elements)}}}; {', '.join(moves)})"


# ---------------------------------------------------------------------------
# Canonical labelling for sets with unary operations


def _refine(elems, funcs, colors):
    """Colour refinement: iterate until the partition is stable."""
    while True:
        sig = {x: (colors[x],) + tuple(colors[f[x]] for f in funcs) for x in elems}
        ranks = {s: k for k, s in enumerate(sorted(set(sig.values())))}
        new = {x: ranks[sig[x]] for x in elems}
        if len(ranks) == len(set(colors[x] for x in elems)):
            return new
        colors = new


def _encode(order, funcs, init):
    pos = {x: k for k, x in enumerate(order)}
    return tuple((init[x],) + tuple(pos[f[x]] for f in funcs) for x in order)


def _is_twin(x, y, elems, funcs, colors):
    swap = {x: y, y: x}
    for f in funcs:
        for z in elems:
            if swap.get(f[z], f[z]) != f[swap.get(z, z)]:
                return False
    return colors[x] == colors[y]


def canonical_labelling(elems, funcs, init=None):
    """Return ``(code, order)`` for a finite set with unary operations.

    Two structures are isomorphic (respecting the initial colours, which must
    be sortable invariants) iff their codes agree.  ``order`` lists the
    elements in canonical position.
    """
    elems = list(elems)
    init = dict(init) if init is not None else {x: 0 for x in elems}
    ranks = {c: k for k, c in enumerate(sorted(set(init.values())))}
    start = {x: ranks[init[x]] for x in elems}
    best = [None, None]

    def search(colors):
        colors = _refine(elems, funcs, colors)
        cells = {}
        for x in elems:
            cells.setdefault(colors[x], []).append(x)
        target = None
        for c in sorted(cells):
            if len(cells[c]) > 1:
                target = cells[c]
                break
        if target is None:
            order = sorted(elems, key=lambda x: colors[x])
            code = _encode(order, funcs, start)
            if best[0] is None or code < best[0]:
                best[0], best[1] = code, order
            return
        tried = []
        for x in target:
            if any(_is_twin(x, t, elems, funcs, colors) for t in tried):
                continue
            tried.append(x)
            # individualize x: split its cell, x first
            nc = {z: 2 * colors[z] + (0 if z == x else 1) if colors[z] == colors[x] else 2 * colors[z] for z in elems}
            search(nc)

    if not elems:
        return (), []
    search(start)
    return best[0], best[1]


# ---------------------------------------------------------------------------
# Instances

_POOL = [chr(c) for c in range(ord("a"), ord("z") + 1)] + [f"x{k}" for k in range(1, 13)]


def fresh_tokens(n):
    return [str(k) for k in range(n)]


def pair_token(a, b):
    return json.dumps([a, b], separators=(",", ":"))


class ExtensiveInstance:
    """Abstract extensive category whose objects have finite carriers."""

    name = "abstract"

    # -- objects and morphisms
    def initial(self):
        raise NotImplementedError

    def is_object(self, X):
        raise NotImplementedError

    def morphism(self, dom, cod, assign):
        """Validated morphism; raises NotMorphism."""
        raise NotImplementedError

    def is_morphism(self, f):
        try:
            self.morphism(f.dom, f.cod, f.assignment)
        except NotMorphism:
            return False
        return True

    def identity(self, X):
        return identity(X)

    def relabel(self, X, mapping):
        """Isomorphic copy of X with tokens renamed, and the iso X -> copy."""
        raise NotImplementedError

    # -- structure
    def is_summand(self, X, pts):
        """Whether ``pts`` is the image of a coproduct inclusion into X."""
        raise NotImplementedError

    def subobject(self, X, pts):
        """Summand of X on ``pts`` with its inclusion."""
        raise NotImplementedError

    def coproduct(self, A, B):
        raise NotImplementedError

    def pullback(self, f, g):
        raise NotImplementedError

    def is_coproduct_inclusion(self, f):
        raise NotImplementedError

    def complement(self, i):
        if not self.is_coproduct_inclusion(i):
            raise NotCoproductInclusion(f"{i!r} is not a coproduct inclusion")
        rest = i.cod.points() - i.image()
        return self.subobject(i.cod, rest)

    def canonical_form(self, X):
        raise NotImplementedError

    def isomorphic(self, A, B):
        return self.canonical_form(A) == self.canonical_form(B)

    # -- random generation
    def random_object(self, rng, max_size=8):
        raise NotImplementedError

    def random_summand(self, rng, X):
        raise NotImplementedError

    def random_non_summand(self, rng, X):
        """A sub-object whose complement is not closed, or None if none exists."""
        return None


def _random_tokens(rng, n):
    return rng.sample(_POOL, n)


class FinSetInstance(ExtensiveInstance):
    """The category of finite sets."""

    name = "finset"

    def initial(self):
        return FinSetObj()

    def is_object(self, X):
        return isinstance(X, FinSetObj)

    def make(self, elems):
        return FinSetObj(elems)

    def morphism(self, dom, cod, assign):
        return SetFun(dom, cod, assign)

    def relabel(self, X, mapping):
        Y = FinSetObj(mapping[x] for x in X.elements)
        return Y, Injection(X, Y, mapping)

    def is_summand(self, X, pts):
        return pts <= X.points()

    def subobject(self, X, pts):
        pts = frozenset(pts)
        if not pts <= X.points():
            raise NotCoproductInclusion("subset is not contained in the object")
        S = FinSetObj(pts)
        return inclusion(S, X)

    def coproduct(self, A, B):
        tagged = [("L." + a) for a in A.elements] + [("R." + b) for b in B.elements]
        names = dict(zip(tagged, fresh_tokens(len(tagged))))
        S = FinSetObj(names.values())
        inl = Injection(A, S, {a: names["L." + a] for a in A.elements})
        inr = Injection(B, S, {b: names["R." + b] for b in B.elements})
        return S, inl, inr

    def _pairs(self, f, g):
        if f.cod != g.cod:
            raise NotComposable("pullback needs a cospan with a common codomain")
        return [(a, b) for a in f.dom.elements for b in g.dom.elements if f(a) == g(b)]

    def pullback(self, f, g):
        pairs = self._pairs(f, g)
        P = FinSetObj(pair_token(a, b) for a, b in pairs)
        p1 = SetFun(P, f.dom, {pair_token(a, b): a for a, b in pairs})
        p2 = SetFun(P, g.dom, {pair_token(a, b): b for a, b in pairs})
        return P, p1, p2

    def is_coproduct_inclusion(self, f):
        return isinstance(f, SetFun) and f.is_injective()

    def canonical_form(self, X):
        return FinSetObj(fresh_tokens(len(X)))

    def canonical_iso(self, X):
        return Injection(X, self.canonical_form(X), dict(zip(X.elements, fresh_tokens(len(X)))))

    def random_object(self, rng, max_size=8):
        return FinSetObj(_random_tokens(rng, rng.randint(0, max_size)))

    def random_summand(self, rng, X):
        return frozenset(x for x in X.elements if rng.random() < 0.5)

    def __repr__(self):
        return "FinSetInstance()"


class MSetInstance(ExtensiveInstance):
    """Finite left M-sets for a fixed finite monoid M.

    Coproduct inclusions are the inclusions of unions of connected components.
    """

    def __init__(self, monoid):
        self.monoid = monoid
        self.name = "mset"

    def initial(self):
        return MActionSet(FinSetObj(), self.monoid, {a: {} for a in range(self.monoid.size)})

    def is_object(self, X):
        return isinstance(X, MActionSet) and X.monoid == self.monoid

    def make(self, elems, action):
        return MActionSet(FinSetObj(elems), self.monoid, action)

    def morphism(self, dom, cod, assign):
        f = SetFun(dom, cod, assign)
        for a in self.monoid.non_identity():
            for x in dom.elements:
                if f(dom.act(a, x)) != cod.act(a, f(x)):
                    raise NotMorphism(f"map is not equivariant at {x!r}")
        return f

    def relabel(self, X, mapping):
        acts = {a: {mapping[x]: mapping[X.act(a, x)] for x in X.elements} for a in range(self.monoid.size)}
        Y = MActionSet(FinSetObj(mapping.values()), self.monoid, acts)
        return Y, Injection(X, Y, mapping)

    def is_summand(self, X, pts):
        if not pts <= X.points():
            return False
        return X.is_closed(pts) and X.is_closed(X.points() - pts)

    def subobject(self, X, pts):
        pts = frozenset(pts)
        if not self.is_summand(X, pts):
            raise NotCoproductInclusion("subset is not a union of components")
        return inclusion(X.restrict(pts), X)

    def coproduct(self, A, B):
        tagged = [("L." + a) for a in A.elements] + [("R." + b) for b in B.elements]
        names = dict(zip(tagged, fresh_tokens(len(tagged))))
        acts = {}
        for a in range(self.monoid.size):
            row = {names["L." + x]: names["L." + A.act(a, x)] for x in A.elements}
            row.update({names["R." + x]: names["R." + B.act(a, x)] for x in B.elements})
            acts[a] = row
        S = MActionSet(FinSetObj(names.values()), self.monoid, acts)
        inl = Injection(A, S, {x: names["L." + x] for x in A.elements})
        inr = Injection(B, S, {x: names["R." + x] for x in B.elements})
        return S, inl, inr

    def pullback(self, f, g):
        if f.cod != g.cod:
            raise NotComposable("pullback needs a cospan with a common codomain")
        A, B = f.dom, g.dom
        pairs = [(a, b) for a in A.elements for b in B.elements if f(a) == g(b)]
        acts = {
            m: {pair_token(a, b): pair_token(A.act(m, a), B.act(m, b)) for a, b in pairs}
            for m in range(self.monoid.size)
        }
        P = MActionSet(FinSetObj(pair_token(a, b) for a, b in pairs), self.monoid, acts)
        p1 = SetFun(P, A, {pair_token(a, b): a for a, b in pairs})
        p2 = SetFun(P, B, {pair_token(a, b): b for a, b in pairs})
        return P, p1, p2

    def is_coproduct_inclusion(self, f):
        if not (isinstance(f, SetFun) and self.is_object(f.dom) and self.is_object(f.cod)):
            return False
        if not f.is_injective() or not self.is_morphism(f):
            return False
        return f.cod.is_closed(f.cod.points() - f.image())

    def _labelling(self, X):
        funcs = [X.action[a] for a in self.monoid.non_identity()]
        return canonical_labelling(X.elements, funcs)

    def canonical_iso(self, X):
        _, order = self._labelling(X)
        mapping = dict(zip(order, fresh_tokens(len(order))))
        return self.relabel(X, mapping)[1]

    def canonical_form(self, X):
        return self.canonical_iso(X).cod

    def random_object(self, rng, max_size=8):
        M = self.monoid
        target = rng.randint(0, max_size)
        names = iter(_random_tokens(rng, max_size))
        carrier, acts = [], {a: {} for a in range(M.size)}
        ideals = sorted({tuple(sorted({M.mul(m, g) for m in range(M.size)})) for g in range(M.size)})
        while True:
            fits = [i for i in ideals if len(carrier) + len(i) <= target]
            if not fits:
                break
            ideal = rng.choice(fits)
            label = {k: next(names) for k in ideal}
            carrier.extend(label.values())
            for a in range(M.size):
                for k in ideal:
                    acts[a][label[k]] = label[M.mul(a, k)]
        X = MActionSet(FinSetObj(carrier), M, acts)
        # merge random pairs of global fixed points to get non-cyclic components
        fixed = [x for x in X.elements if all(X.act(a, x) == x for a in range(M.size))]
        rng.shuffle(fixed)
        while len(fixed) >= 2 and rng.random() < 0.6:
            keep, drop = fixed.pop(), fixed.pop()
            fixed.append(keep)
            carrier = [x for x in X.elements if x != drop]
            new = {a: {x: (keep if X.act(a, x) == drop else X.act(a, x)) for x in carrier} for a in range(M.size)}
            X = MActionSet(FinSetObj(carrier), M, new)
        return X

    def random_summand(self, rng, X):
        comps = X.components()
        chosen = [c for c in comps if rng.random() < 0.5]
        return frozenset().union(*chosen) if chosen else frozenset()

    def random_non_summand(self, rng, X):
        """An action-closed subset whose complement is not action-closed."""
        cands = []
        for x in X.elements:
            orb = X.orbit(x)
            if not X.is_closed(X.points() - orb):
                cands.append(orb)
        if not cands:
            return None
        return rng.choice(sorted(cands, key=lambda s: sort_tokens(s)))

    def __repr__(self):
        return f"MSetInstance({self.monoid!r})"
