"""
Disjointness of crooked planes.

Two crooked planes C(p, u), C(p', u') with consistently oriented directions
are disjoint exactly when p' - p lies in the open cone
A(u, u') = int(V(u') - V(u)), the cone on u'^-, -u'^+, -u^-, u^+.

Cone combinatorics (facets, rank, interior) are Euclidean notions and use
numpy's Euclidean dot and cross; only the generators come from the
Lorentzian frames.
"""
import enum
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .errors import NotConsistentlyOriented, NotUnitSpacelike
from .geometry import CrookedPlane
from .lorentz import is_unit_spacelike, lorentz_dot, null_frame_arrays, vec

PAIR_TOL = 1e-9
RANK_TOL = 1e-9


class PairClass(enum.Enum):
    ULTRAPARALLEL = "ultraparallel"
    ASYMPTOTIC = "asymptotic"
    IDENTICAL = "identical"
    OPPOSITE_IDENTICAL = "opposite_identical"
    CROSSING = "crossing"


class Containment(enum.Enum):
    IN = "in"
    OUT = "out"
    MARGINAL = "marginal"
    DEGENERATE = "degenerate"


class Verdict(enum.Enum):
    DISJOINT = "disjoint"
    INTERSECT = "intersect"
    DEGENERATE = "degenerate"
    MARGINAL = "marginal"


class SignChoice(NamedTuple):
    eps1: int
    eps2: int


def consistently_oriented(u, u2, tol=PAIR_TOL) -> bool:
    """
    True when u . u2 <= -1 and every u_i . u_j^(+/-) <= 0, up to ``tol``.

    ``tol`` is scaled by the sup-norms of the two vectors, since the null
    products grow with rapidity.
    """
    u = np.asarray(u, dtype=float)
    u2 = np.asarray(u2, dtype=float)
    s = max(1.0, float(np.max(np.abs(u)) * np.max(np.abs(u2))))
    if lorentz_dot(u, u2) > -1.0 + tol * s:
        return False
    m1, p1 = null_frame_arrays(u)
    m2, p2 = null_frame_arrays(u2)
    mixed = [lorentz_dot(u, m2), lorentz_dot(u, p2),
             lorentz_dot(u2, m1), lorentz_dot(u2, p1)]
    return all(x <= tol * s for x in mixed)


_SIGN_ORDER = (SignChoice(1, 1), SignChoice(1, -1), SignChoice(-1, 1), SignChoice(-1, -1))


def orient_pair(u, u2, tol=PAIR_TOL) -> Optional[SignChoice]:
    """First sign choice, in the order ++, +-, -+, --, making the pair consistently oriented."""
    u = np.asarray(u, dtype=float)
    u2 = np.asarray(u2, dtype=float)
    for sc in _SIGN_ORDER:
        if consistently_oriented(sc.eps1 * u, sc.eps2 * u2, tol):
            return sc
    return None


def classify_pair(u, u2, eps=PAIR_TOL) -> PairClass:
    u = vec(u)
    u2 = vec(u2)
    if not (is_unit_spacelike(u) and is_unit_spacelike(u2)):
        raise NotUnitSpacelike("classify_pair needs unit spacelike vectors")
    if np.max(np.abs(u2 - u)) <= eps:
        return PairClass.IDENTICAL
    if np.max(np.abs(u2 + u)) <= eps:
        return PairClass.OPPOSITE_IDENTICAL
    if abs(lorentz_dot(u, u2)) < 1.0 - eps:
        return PairClass.CROSSING
    sc = orient_pair(u, u2, eps)
    if sc is None:
        return PairClass.CROSSING
    d = sc.eps1 * sc.eps2 * lorentz_dot(u, u2)
    return PairClass.ULTRAPARALLEL if d < -1.0 - eps else PairClass.ASYMPTOTIC


@dataclass(frozen=True, eq=False)
class ConicalHull:
    """
    Finitely generated cone in R^3.

    ``facet_normals`` are unit Euclidean inward normals; for a rank-3 cone,
    x is interior iff every ``n @ x > 0``.
    """
    generators: np.ndarray
    extreme_rays: np.ndarray
    facet_normals: np.ndarray
    rank: int


def conical_hull(generators, rank_tol=RANK_TOL) -> ConicalHull:
    G = np.atleast_2d(np.asarray(generators, dtype=float))
    units = G / np.linalg.norm(G, axis=1)[:, None]
    sv = np.linalg.svd(units, compute_uv=False)
    rank = int(np.sum(sv > rank_tol * max(sv[0], 1e-300)))
    if rank < 3:
        return ConicalHull(G, G.copy(), np.zeros((0, 3)), rank)

    normals = []
    on_facet = np.zeros(len(G), dtype=int)
    for i in range(len(G)):
        for j in range(i + 1, len(G)):
            n = np.cross(units[i], units[j])
            nn = np.linalg.norm(n)
            if nn <= rank_tol:
                continue
            n = n / nn
            d = units @ n
            if np.all(d >= -rank_tol):
                pass
            elif np.all(d <= rank_tol):
                n, d = -n, -d
            else:
                continue
            if any(abs(n @ m) >= 1.0 - 1e-12 for m in normals):
                continue
            normals.append(n)
            on_facet += np.abs(d) <= rank_tol
    ext = G[on_facet >= 2] if normals else G.copy()
    return ConicalHull(G, ext, np.array(normals).reshape(-1, 3), rank)


def cone_A(u, u2, tol=PAIR_TOL) -> ConicalHull:
    """The hull of u2^-, -u2^+, -u^-, u^+ for a consistently oriented pair."""
    u = vec(u)
    u2 = vec(u2)
    if not consistently_oriented(u, u2, tol):
        raise NotConsistentlyOriented("cone_A needs a consistently oriented pair")
    m1, p1 = null_frame_arrays(u)
    m2, p2 = null_frame_arrays(u2)
    return conical_hull([m2, -p2, -m1, p1])


def cone_contains(hull: ConicalHull, x, strict=True, tol=PAIR_TOL) -> Containment:
    """
    Membership of ``x`` in the cone, relative to ``tol * |x|``.

    Strict mode answers for the open cone and reports MARGINAL inside the
    tolerance band; non-strict mode answers for the closed cone and only
    returns IN or OUT.
    """
    if hull.rank < 3:
        return Containment.DEGENERATE
    x = np.asarray(x, dtype=float)
    band = tol * float(np.linalg.norm(x))
    worst = float(np.min(hull.facet_normals @ x)) if len(hull.facet_normals) else np.inf
    if strict:
        if worst > band:
            return Containment.IN
        return Containment.MARGINAL if worst >= -band else Containment.OUT
    return Containment.IN if worst >= -band else Containment.OUT


def oriented_directions(u, u2, tol=PAIR_TOL):
    """Signed copies of ``u``, ``u2`` that are consistently oriented, or None."""
    sc = orient_pair(u, u2, tol)
    if sc is None:
        return None
    return sc.eps1 * np.asarray(u, dtype=float), sc.eps2 * np.asarray(u2, dtype=float)


def crooked_disjoint(P: CrookedPlane, Q: CrookedPlane, tol=PAIR_TOL) -> Verdict:
    """
    Decide whether two crooked planes are disjoint.

    Pairs admitting no consistent orientation always intersect. Parallel
    directions (u' = +/-u) are reported as DEGENERATE.
    """
    kind = classify_pair(P.direction, Q.direction, tol)
    if kind in (PairClass.IDENTICAL, PairClass.OPPOSITE_IDENTICAL):
        return Verdict.DEGENERATE
    dirs = oriented_directions(P.direction, Q.direction, tol)
    if dirs is None:
        return Verdict.INTERSECT
    hull = cone_A(*dirs, tol=tol)
    res = cone_contains(hull, Q.vertex - P.vertex, strict=True, tol=tol)
    return {
        Containment.IN: Verdict.DISJOINT,
        Containment.OUT: Verdict.INTERSECT,
        Containment.MARGINAL: Verdict.MARGINAL,
        Containment.DEGENERATE: Verdict.DEGENERATE,
    }[res]
