"""
Brute-force checks that do not rely on the cone criterion.

``crooked_intersect_oracle`` meshes two crooked planes and looks for a pair
of crossing triangles; ``cone_contains_oracle`` decides cone membership by
projected coordinate descent. Both are slow and only meant to cross-check
the exact predicates.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .geometry import CrookedPlane, PieceLabel, crooked_contains, crooked_distance, mesh_crooked_plane

WITNESS_TOL = 1e-6
MAX_BISECTIONS = 60


@dataclass(frozen=True, eq=False)
class Witness:
    point: np.ndarray
    piece_a: PieceLabel
    piece_b: PieceLabel
    separation: float


def _plane_section(T, n, offset, tol):
    # points where the edges of triangle T (3, 3) meet the plane n.x = offset
    d = T @ n - offset
    pts = [T[i] for i in range(3) if abs(d[i]) <= tol]
    for i, j in ((0, 1), (1, 2), (2, 0)):
        if (d[i] > tol and d[j] < -tol) or (d[i] < -tol and d[j] > tol):
            pts.append(T[i] + (T[j] - T[i]) * (d[i] / (d[i] - d[j])))
    return pts, d


def _seg_intersect_2d(p, q, r, s, tol):
    d1, d2 = q - p, s - r
    den = d1[0] * d2[1] - d1[1] * d2[0]
    if abs(den) <= tol * tol:
        return None
    w = r - p
    a = (w[0] * d2[1] - w[1] * d2[0]) / den
    b = (w[0] * d1[1] - w[1] * d1[0]) / den
    if -tol <= a <= 1 + tol and -tol <= b <= 1 + tol:
        return p + a * d1
    return None


def _inside_2d(x, T, tol):
    a, b, c = T
    m = np.column_stack([b - a, c - a])
    try:
        l1, l2 = np.linalg.solve(m, x - a)
    except np.linalg.LinAlgError:
        return False
    return l1 >= -tol and l2 >= -tol and l1 + l2 <= 1 + tol


def _coplanar_overlap(t1, t2, n, tol):
    e1 = t1[1] - t1[0]
    e1 = e1 / np.linalg.norm(e1)
    e2 = np.cross(n, e1)
    basis = np.stack([e1, e2])
    A = (t1 - t1[0]) @ basis.T
    B = (t2 - t1[0]) @ basis.T
    for x in A:
        if _inside_2d(x, B, tol):
            return t1[0] + x @ basis
    for x in B:
        if _inside_2d(x, A, tol):
            return t1[0] + x @ basis
    for i in range(3):
        for j in range(3):
            hit = _seg_intersect_2d(A[i], A[(i + 1) % 3], B[j], B[(j + 1) % 3], tol)
            if hit is not None:
                return t1[0] + hit @ basis
    return None


def tri_tri_intersect(t1, t2, tol=1e-9):
    """
    Intersection segment of two triangles, or None.

    Each triangle is cut by the other's plane; the two cuts lie on the
    common line of the planes and the triangles meet iff the cuts overlap.
    Coplanar triangles fall back to a 2D edge and containment test and
    return a single shared point as a degenerate segment.
    """
    t1 = np.asarray(t1, dtype=float)
    t2 = np.asarray(t2, dtype=float)
    n1 = np.cross(t1[1] - t1[0], t1[2] - t1[0])
    n2 = np.cross(t2[1] - t2[0], t2[2] - t2[0])
    n1 /= np.linalg.norm(n1)
    n2 /= np.linalg.norm(n2)

    cut1, d1 = _plane_section(t1, n2, n2 @ t2[0], tol)
    if np.all(d1 > tol) or np.all(d1 < -tol):
        return None
    cut2, d2 = _plane_section(t2, n1, n1 @ t1[0], tol)
    if np.all(d2 > tol) or np.all(d2 < -tol):
        return None
    if np.all(np.abs(d1) <= tol):
        hit = _coplanar_overlap(t1, t2, n2, tol)
        return None if hit is None else (hit, hit)

    D = np.cross(n1, n2)
    D /= np.linalg.norm(D)
    s1 = sorted(cut1, key=lambda p: p @ D)
    s2 = sorted(cut2, key=lambda p: p @ D)
    lo = s1[0] if s1[0] @ D >= s2[0] @ D else s2[0]
    hi = s1[-1] if s1[-1] @ D <= s2[-1] @ D else s2[-1]
    if lo @ D > hi @ D + tol:
        return None
    return lo, hi


def _patch_planes(mesh):
    out = []
    for k in np.unique(mesh.patches):
        idx = np.flatnonzero(mesh.patches == k)
        a, b, c = mesh.vertices[mesh.triangles[idx[0]]]
        n = np.cross(b - a, c - a)
        out.append((idx, n / np.linalg.norm(n), a))
    return out


def _cut_intervals(V, tris, n, offset, D, tol):
    # interval along D of each triangle's section by the plane n.x = offset
    d = V[tris] @ n - offset
    s = V[tris] @ D
    lo = np.full(len(tris), np.inf)
    hi = np.full(len(tris), -np.inf)
    for i in range(3):
        on = np.abs(d[:, i]) <= tol
        lo = np.where(on, np.minimum(lo, s[:, i]), lo)
        hi = np.where(on, np.maximum(hi, s[:, i]), hi)
    for i, j in ((0, 1), (1, 2), (2, 0)):
        cross = ((d[:, i] > tol) & (d[:, j] < -tol)) | ((d[:, i] < -tol) & (d[:, j] > tol))
        with np.errstate(divide="ignore", invalid="ignore"):
            x = s[:, i] + (s[:, j] - s[:, i]) * d[:, i] / (d[:, i] - d[:, j])
        lo = np.where(cross, np.minimum(lo, x), lo)
        hi = np.where(cross, np.maximum(hi, x), hi)
    return lo, hi


def _first_overlap(loA, hiA, loB, hiB, tol):
    # lowest A index whose interval meets some B interval, swept on sorted B
    order = np.argsort(loB, kind="stable")
    lo_sorted = loB[order]
    run_max = np.maximum.accumulate(hiB[order])
    cnt = np.searchsorted(lo_sorted, hiA + tol, side="right")
    ok = (cnt > 0) & (run_max[np.maximum(cnt - 1, 0)] >= loA - tol)
    for i in np.flatnonzero(ok):
        cands = order[:cnt[i]]
        js = cands[hiB[cands] >= loA[i] - tol]
        yield i, js


def _boxes(V, tris):
    P = V[tris]
    return P.min(axis=1), P.max(axis=1)


def _candidate_pairs(mesh_a, idx_a, plane_a, mesh_b, idx_b, plane_b, tol):
    Va, Vb = mesh_a.vertices, mesh_b.vertices
    Ta, Tb = mesh_a.triangles[idx_a], mesh_b.triangles[idx_b]
    (na, oa), (nb, ob) = plane_a, plane_b
    D = np.cross(na, nb)
    if np.linalg.norm(D) <= 1e-12:
        if abs(nb @ (oa - ob)) > tol:
            return
        # coplanar patches: box broad phase
        amin, amax = _boxes(Va, Ta)
        bmin, bmax = _boxes(Vb, Tb)
        for start in range(0, len(Ta), 256):
            sl = slice(start, start + 256)
            hit = np.all((amin[sl, None] <= bmax[None] + tol) & (bmin[None] <= amax[sl, None] + tol), axis=2)
            for i, j in zip(*np.nonzero(hit)):
                yield idx_a[start + i], idx_b[j]
        return
    D = D / np.linalg.norm(D)
    loA, hiA = _cut_intervals(Va, Ta, nb, nb @ ob, D, tol)
    loB, hiB = _cut_intervals(Vb, Tb, na, na @ oa, D, tol)
    ka = np.flatnonzero(np.isfinite(loA))
    kb = np.flatnonzero(np.isfinite(loB))
    if len(ka) == 0 or len(kb) == 0:
        return
    for i, js in _first_overlap(loA[ka], hiA[ka], loB[kb], hiB[kb], tol):
        for j in js:
            yield idx_a[ka[i]], idx_b[kb[j]]


def _residual(q, P, Q):
    return max(crooked_distance(q, P)[0], crooked_distance(q, Q)[0])


def _refine(seg, P, Q):
    # bisect along the crossing segment toward the smaller residual
    a, b = seg
    best = 0.5 * (a + b)
    r = _residual(best, P, Q)
    for _ in range(MAX_BISECTIONS):
        if r <= WITNESS_TOL:
            break
        m = 0.5 * (a + b)
        left, right = 0.5 * (a + m), 0.5 * (m + b)
        rl, rr = _residual(left, P, Q), _residual(right, P, Q)
        if rl <= rr:
            b, cand, rc = m, left, rl
        else:
            a, cand, rc = m, right, rr
        if rc < r:
            best, r = cand, rc
    return best, r


def crooked_intersect_oracle(P: CrookedPlane, Q: CrookedPlane, radius=20.0,
                             resolution=128, tol=1e-9) -> Optional[Witness]:
    """
    Search for an intersection of two crooked planes inside a ball.

    Returns None when the meshes of radius ``radius`` do not meet, which says
    nothing about intersections farther out.
    """
    ma = mesh_crooked_plane(P, radius, resolution)
    mb = mesh_crooked_plane(Q, radius, resolution)
    pa, pb = _patch_planes(ma), _patch_planes(mb)
    for idx_a, na, oa in pa:
        for idx_b, nb, ob in pb:
            for i, j in _candidate_pairs(ma, idx_a, (na, oa), mb, idx_b, (nb, ob), tol):
                seg = tri_tri_intersect(ma.vertices[ma.triangles[i]],
                                        mb.vertices[mb.triangles[j]], tol)
                if seg is None:
                    continue
                point, sep = _refine(seg, P, Q)
                if sep > WITNESS_TOL:
                    continue
                return Witness(point, crooked_contains(point, P, WITNESS_TOL),
                               crooked_contains(point, Q, WITNESS_TOL), sep)
    return None


def cone_contains_oracle(generators, x, tol=1e-9, interior=False) -> bool:
    """
    Cone membership by projected coordinate descent on min |G l - x|, l >= 0.

    With ``interior`` set, also requires x +/- delta e_k to be members for
    each coordinate direction, delta = 1e-4 |x|.
    """
    G = [tuple(float(c) for c in g) for g in np.atleast_2d(np.asarray(generators, dtype=float))]
    x = np.asarray(x, dtype=float)
    if not _member(G, tuple(float(c) for c in x), tol):
        return False
    if not interior:
        return True
    delta = 1e-4 * float(np.linalg.norm(x))
    if delta == 0.0:
        return False
    for k in range(3):
        for sgn in (1.0, -1.0):
            y = x.copy()
            y[k] += sgn * delta
            if not _member(G, tuple(float(c) for c in y), tol):
                return False
    return True


def _member(G, x, tol, max_sweeps=200000):
    gg = [g[0] * g[0] + g[1] * g[1] + g[2] * g[2] for g in G]
    lam = [0.0] * len(G)
    r = [-x[0], -x[1], -x[2]]
    err = r[0] * r[0] + r[1] * r[1] + r[2] * r[2]
    xn = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) ** 0.5
    thr2 = (tol * (1.0 + xn)) ** 2
    prev = None
    for _ in range(max_sweeps):
        if err <= thr2:
            return True
        for i, g in enumerate(G):
            step = -(g[0] * r[0] + g[1] * r[1] + g[2] * r[2]) / gg[i]
            new = lam[i] + step
            if new < 0.0:
                new = 0.0
            step = new - lam[i]
            if step != 0.0:
                lam[i] = new
                r[0] += step * g[0]
                r[1] += step * g[1]
                r[2] += step * g[2]
        new_err = r[0] * r[0] + r[1] * r[1] + r[2] * r[2]
        imp = err - new_err
        err = new_err
        if imp <= 0.0:
            break
        if imp < tol * tol and prev is not None:
            # linear convergence: the remaining decrease is about imp rho / (1 - rho).
            # Stop once at least half of err is out of reach; the estimate of the
            # limit is too noisy for a tighter test when rho is close to 1
            rho = imp / prev
            if rho < 1.0 and err - imp * rho / (1.0 - rho) > max(thr2, 0.5 * err):
                break
        prev = imp
    return err <= thr2
