"""Euler characteristics, degree and image vectors, and K0 relation audits."""

from .audit import AuditReport, run_checks
from .cgw.core import ExtensiveCGW
from .cgw.gen import pc_square
from .chain import (
    CHAIN,
    ChainCGW,
    ChainComplex,
    concentrated,
    euler_char,
    isomorphic,
    random_complex,
    random_exact,
    truncation_sequence,
)
from .errors import IndexOutOfWindow, NotExact
from .exactqi import edge_points, is_exact, random_quasi_iso
from .extcat import FinSetInstance, FinSetObj
from .sdot import trivial_extension


def _check_support(X, a, b):
    if b < a:
        raise IndexOutOfWindow(f"window [{a},{b}] is empty")
    for i in X.window_range():
        if not a <= i <= b and len(X.X(i)):
            raise IndexOutOfWindow(f"degree {i} is nonempty but lies outside [{a},{b}]")


def degree_vector(X, a, b):
    """``(X_{b-1}, ..., X_a, X_b)`` for a complex supported in ``[a, b]``."""
    _check_support(X, a, b)
    return tuple(X.X(i) for i in range(b - 1, a - 1, -1)) + (X.X(b),)


def image_vector(X, a, b):
    """``(Xbar_b, ..., Xbar_{a+1})`` for an exact complex supported in
    ``[a, b]``."""
    _check_support(X, a, b)
    cert = is_exact(X)
    if not cert:
        raise NotExact(cert.index, cert.reason)
    return tuple(X.bar(i) for i in range(b, a, -1))


def from_image_vector(vec, a, b):
    """The exact complex on ``[a, b]`` with the given image subsets.

    Degree ``i`` is ``Xbar_{i+1} + Xbar_i`` with tokens tagged by the degree
    they came from, and the differential sends a point of ``Xbar_i`` to its
    copy in degree ``i - 1``.
    """
    if len(vec) != b - a:
        raise IndexOutOfWindow(f"expected {b - a} image sets for the window [{a},{b}]")
    bars = {b - k: vec[k] for k in range(len(vec))}
    degrees, images, diffs = {}, {}, {}
    for i in range(a, b + 1):
        # the copy of Xbar_i in degree i - 1 keeps the tag i
        own = [f"{i}.{t}" for t in bars.get(i, FinSetObj(())).elements]
        down = [f"{i + 1}.{t}" for t in bars.get(i + 1, FinSetObj(())).elements]
        degrees[i] = own + down
        images[i] = own
        diffs[i] = {f"{i}.{t}": f"{i}.{t}" for t in bars.get(i, FinSetObj(())).elements} if i > a else {}
    return ChainComplex((a, b), degrees, images, diffs)


def reconstructs(X, a, b):
    """Whether the image vector of an exact ``X`` rebuilds it up to iso."""
    return isomorphic(from_image_vector(image_vector(X, a, b), a, b), X)


# ---------------------------------------------------------------------------
# relation audits


class K0Report(AuditReport):
    """An audit report whose checks are relations in K0.

    ``relations`` counts the sampled relations of each kind, leaving out
    vacuous trials.
    """

    @property
    def relations(self):
        out = {}
        for name, row in self.rows.items():
            out[name] = row["trials"] - row["vacuous"]
        return out


def _as_k0(report):
    report.__class__ = K0Report
    return report


_FINSET = ExtensiveCGW(FinSetInstance())


def _size(cat, X):
    return len(cat.points(X)) if cat is _FINSET else euler_char(X)


def _rel_distinguished(cat, rng, t):
    sq = pc_square(cat, rng, dist=True)
    A, B, C, D = sq.A, sq.B, sq.C, sq.D
    lhs, rhs = _size(cat, A) + _size(cat, D), _size(cat, B) + _size(cat, C)
    t.require(lhs == rhs, "invariant is not additive on a distinguished square", square=sq)


def _rel_weak_equivalence(cat, rng, t):
    if cat is CHAIN:
        f = random_quasi_iso(rng, rng.choice("me"))
        X, Y = f.src, f.dst
    else:
        X = cat.random_object(rng)
        Y = cat.random_iso(rng, X, "m").cod
    t.require(_size(cat, X) == _size(cat, Y), "invariant differs across a weak equivalence")


def _rel_trivial_extension(cat, rng, t):
    A, B = cat.random_object(rng), cat.random_object(rng)
    E = trivial_extension(cat, A, B)
    t.require(_size(cat, E.C) == _size(cat, A) + _size(cat, B), "invariant is not additive on A * B")


RELATION_CHECKS = [
    ("distinguished", _rel_distinguished),
    ("weak_equivalence", _rel_weak_equivalence),
    ("trivial_extension", _rel_trivial_extension),
]


def relation_audit(instance, trials, seed, jobs=1):
    """Check that cardinality (``finset``) or the Euler characteristic
    (``chain``) respects the K0 relations on random samples."""
    if instance == "finset":
        cat = _FINSET
    elif instance == "chain":
        cat = CHAIN
    else:
        raise ValueError(f"unknown instance {instance!r}")
    return _as_k0(run_checks(RELATION_CHECKS, cat, trials, seed, jobs=jobs, instance=instance))


# ---------------------------------------------------------------------------
# degree and image vector audit


def _window(rng):
    a = rng.randint(-2, 0)
    return a, a + rng.randint(1, 3)


def _chi_qiso(_, rng, t):
    f = random_quasi_iso(rng, rng.choice("me"))
    t.require(euler_char(f.src) == euler_char(f.dst), "Euler characteristic changes along a quasi-isomorphism", f=f.arrow)


def _chi_additive(_, rng, t):
    sq = pc_square(CHAIN, rng, dist=True)
    lhs = euler_char(sq.A) + euler_char(sq.D)
    t.require(lhs == euler_char(sq.B) + euler_char(sq.C), "Euler characteristic is not additive", square=sq)


def _chi_concentrated(_, rng, t):
    A = FinSetObj(f"t{k}" for k in range(rng.randint(0, 8)))
    t.require(euler_char(concentrated(A, 0)) == len(A), "Euler characteristic of A in degree 0 is not |A|")


def _chi_truncation(_, rng, t):
    X = random_complex(rng, _window(rng))
    F, _, G, _ = truncation_sequence(X)
    t.require(euler_char(X) == euler_char(F) + euler_char(G), "Euler characteristic is not additive on truncation")


def _dist_square_in(rng, a, b):
    return pc_square(ChainCGW((a, b), 4), rng, dist=True)


def _degree_additive(_, rng, t):
    a, b = _window(rng)
    sq = _dist_square_in(rng, a, b)
    vs = [degree_vector(X, a, b) for X in (sq.A, sq.B, sq.C, sq.D)]
    ok = all(len(vs[0][k]) + len(vs[3][k]) == len(vs[1][k]) + len(vs[2][k]) for k in range(b - a + 1))
    t.require(ok, "degree vector is not additive on a distinguished square", square=sq)


def _exact_square(rng, a, b):
    """A distinguished square of exact complexes: unions of edges of an
    exact complex covering it, meeting in their common edges."""
    U = random_exact(rng, (a, b))
    bar = [(i, s) for i in U.window_range() for s in U.bar(i).elements]
    Be, Ce = set(), set()
    for e in bar:
        r = rng.random()
        if r < 0.4:
            Be.add(e)
        elif r < 0.8:
            Ce.add(e)
        else:
            Be.add(e)
            Ce.add(e)
    return U, edge_points(U, Be), edge_points(U, Ce)


def _image_additive(_, rng, t):
    a, b = _window(rng)
    U, Bp, Cp = _exact_square(rng, a, b)
    cat = ChainCGW((a, b), 4)
    objs = [cat.subobject(U, pts, "m").dom for pts in (Bp & Cp, Bp, Cp)] + [U]
    A, B, C, D = objs
    vs = [image_vector(X, a, b) for X in (A, B, C, D)]
    ok = all(len(vs[0][k]) + len(vs[3][k]) == len(vs[1][k]) + len(vs[2][k]) for k in range(b - a))
    t.require(ok, "image vector is not additive on a distinguished square of exact complexes")


def _reconstruction(_, rng, t):
    a, b = _window(rng)
    X = random_exact(rng, (a, b))
    t.require(reconstructs(X, a, b), "image vector does not rebuild the exact complex", complex=X)


GW_CHECKS = [
    ("chi:qiso", _chi_qiso),
    ("chi:additive", _chi_additive),
    ("chi:concentrated", _chi_concentrated),
    ("chi:truncation", _chi_truncation),
    ("degree_vector:additive", _degree_additive),
    ("image_vector:additive", _image_additive),
    ("image_vector:reconstruction", _reconstruction),
]


def gw_audit(trials, seed, jobs=1, checks=None):
    """Degree-vector and image-vector maps against the K0 relations."""
    return _as_k0(run_checks(checks or GW_CHECKS, None, trials, seed, jobs=jobs, instance="chain"))


__all__ = [
    "GW_CHECKS",
    "K0Report",
    "RELATION_CHECKS",
    "degree_vector",
    "euler_char",
    "from_image_vector",
    "gw_audit",
    "image_vector",
    "reconstructs",
    "relation_audit",
]
