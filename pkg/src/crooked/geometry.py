"""
Crooked planes: membership of the stem and wings, stem quadrants, meshing.

In the null-frame coordinates v = alpha u + beta u^- + gamma u^+ of a
direction u, the linear crooked plane C(u) is the union of

* the stem      {beta u^- + gamma u^+ : beta gamma >= 0},
* the + wing    {alpha u + gamma u^+ : alpha >= 0},
* the - wing    {alpha u + beta u^-  : alpha <= 0}.

The wing signs come from u x u^+ = u^+ and u x u^- = -u^-: a vector v solves
v x w = k w with w a nonzero stem vector and k >= 0 exactly on these sets.
"""
import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple

import numpy as np

from .errors import InvalidParams, NotUnitSpacelike
from .lorentz import NullFrame, is_unit_spacelike, lorentz_dot, null_frame, vec

MEMBER_TOL = 1e-9
MARGIN_FACTOR = 10.0


class Piece(enum.Enum):
    STEM = "stem"
    WING_PLUS = "wing_plus"
    WING_MINUS = "wing_minus"
    OUTSIDE = "outside"


class PieceLabel(NamedTuple):
    piece: Piece
    marginal: bool = False


class FrameCoords(NamedTuple):
    alpha: float
    beta: float
    gamma: float


@dataclass(frozen=True, eq=False)
class CrookedPlane:
    """The crooked plane ``vertex + C(direction)``."""
    vertex: np.ndarray
    direction: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "vertex", vec(self.vertex))
        object.__setattr__(self, "direction", vec(self.direction))
        if not is_unit_spacelike(self.direction):
            raise NotUnitSpacelike("crooked plane direction must be unit spacelike")

    @cached_property
    def frame(self) -> NullFrame:
        return null_frame(self.direction)

    def __repr__(self):
        return f"CrookedPlane(vertex={self.vertex.tolist()}, direction={self.direction.tolist()})"


def frame_coordinates(v, frame: NullFrame) -> FrameCoords:
    """Coordinates of ``v`` in the basis (u, u^-, u^+)."""
    # plain floats: this sits in the inner loop of every membership test
    x, y, z = np.asarray(v, dtype=float).tolist()
    u, m, p = (w.tolist() for w in frame)
    return FrameCoords(x * u[0] + y * u[1] - z * u[2],
                       -(x * p[0] + y * p[1] - z * p[2]),
                       -(x * m[0] + y * m[1] - z * m[2]))


def _scale(v, frame):
    # frame coordinates are bounded by |v|_inf |u|_inf up to a small factor
    return max(max(map(abs, v.tolist())) * max(map(abs, frame.u.tolist())), 1e-300)


def stem_contains(v, frame: NullFrame, tol=MEMBER_TOL) -> bool:
    v = np.asarray(v, dtype=float)
    s = _scale(v, frame)
    a, b, c = frame_coordinates(v, frame)
    return abs(a) <= tol * s and b * c >= -tol * s * s


def piece_classify(v, frame: NullFrame, tol=MEMBER_TOL) -> PieceLabel:
    """
    Which piece of C(u) contains ``v``.

    Points on the null lines shared by the stem and a wing are reported as
    that wing with the marginal flag; the origin is reported as a marginal
    stem point.
    """
    v = np.asarray(v, dtype=float)
    if not np.any(v):
        return PieceLabel(Piece.STEM, True)
    s = _scale(v, frame)
    a, b, c = (x / s for x in frame_coordinates(v, frame))
    m = MARGIN_FACTOR * tol

    on_stem = abs(a) <= tol and b * c >= -tol
    on_plus = abs(b) <= tol and a >= -tol
    on_minus = abs(c) <= tol and a <= tol

    if on_plus and on_minus:
        return PieceLabel(Piece.STEM, True)
    if on_plus:
        return PieceLabel(Piece.WING_PLUS, abs(a) <= m)
    if on_minus:
        return PieceLabel(Piece.WING_MINUS, abs(a) <= m)
    if on_stem:
        return PieceLabel(Piece.STEM, abs(b) <= m or abs(c) <= m)
    near = ((abs(a) <= m and b * c >= -m)
            or (abs(b) <= m and a >= -m)
            or (abs(c) <= m and a <= m))
    return PieceLabel(Piece.OUTSIDE, near)


def crooked_contains(q, plane: CrookedPlane, tol=MEMBER_TOL) -> PieceLabel:
    return piece_classify(vec(q) - plane.vertex, plane.frame, tol)


def stem_quadrant_contains(v, frame: NullFrame, strict=False, tol=MEMBER_TOL) -> bool:
    """
    Membership in V(u) = {a u^- - b u^+ : a, b >= 0} minus the origin.

    ``strict`` tests the relative interior a, b > 0 inside the plane u^perp.
    """
    v = np.asarray(v, dtype=float)
    if not np.any(v):
        return False
    s = _scale(v, frame)
    a, b, c = (x / s for x in frame_coordinates(v, frame))
    if abs(a) > tol:
        return False
    if strict:
        return b > tol and -c > tol
    return b >= -tol and -c >= -tol


def piece_sectors(frame: NullFrame):
    """
    C(u) as six planar sectors ``(piece, a, b)``, each the cone on a, b.

    The stem is two opposite quadrants; each wing is a half-plane split
    along the direction of u.
    """
    u, um, up = frame
    return [
        (Piece.STEM, um, up),
        (Piece.STEM, -um, -up),
        (Piece.WING_PLUS, u, up),
        (Piece.WING_PLUS, u, -up),
        (Piece.WING_MINUS, -u, um),
        (Piece.WING_MINUS, -u, -um),
    ]


def _sector_distance(v, a, b):
    # Euclidean distance from v to the cone {la a + mu b : la, mu >= 0}
    M = np.column_stack([a, b])
    coef, *_ = np.linalg.lstsq(M, v, rcond=None)
    if coef[0] >= 0 and coef[1] >= 0:
        return float(np.linalg.norm(M @ coef - v))
    best = float(np.linalg.norm(v))
    for g in (a, b):
        t = max(float(v @ g) / float(g @ g), 0.0)
        best = min(best, float(np.linalg.norm(t * g - v)))
    return best


def crooked_distance(q, plane: CrookedPlane):
    """Euclidean distance from ``q`` to the crooked plane, with the nearest piece."""
    v = vec(q) - plane.vertex
    return min(((_sector_distance(v, a, b), piece)
                for piece, a, b in piece_sectors(plane.frame)),
               key=lambda x: x[0])


@dataclass(eq=False)
class Mesh:
    """Triangle mesh; ``tags[i]`` and ``patches[i]`` describe triangle ``i``."""
    vertices: np.ndarray
    triangles: np.ndarray
    tags: list = field(default_factory=list)
    patches: np.ndarray = None


def _sector_patch(origin, a, b, angle, radius, n):
    rho = radius * np.arange(1, n + 1) / n
    phi = angle * np.arange(n + 1) / n
    dirs = np.cos(phi)[:, None] * a + np.sin(phi)[:, None] * b
    ring = origin + rho[:, None, None] * dirs[None, :, :]
    verts = np.vstack([origin[None, :], ring.reshape(-1, 3)])

    def idx(i, j):
        return 1 + (i - 1) * (n + 1) + j

    j = np.arange(n)
    tris = [np.column_stack([np.zeros(n, dtype=int), idx(1, j), idx(1, j + 1)])]
    for i in range(1, n):
        tris.append(np.column_stack([idx(i, j), idx(i + 1, j), idx(i + 1, j + 1)]))
        tris.append(np.column_stack([idx(i, j), idx(i + 1, j + 1), idx(i, j + 1)]))
    return verts, np.vstack(tris)


def _orthonormal(a, b):
    ea = a / np.linalg.norm(a)
    w = b - (b @ ea) * ea
    return ea, w / np.linalg.norm(w)


def mesh_crooked_plane(plane: CrookedPlane, radius=1.0, resolution=16) -> Mesh:
    """
    Triangulate ``plane`` inside the Euclidean ball of ``radius`` about its vertex.

    Each of the four planar patches (two stem quadrants, two wings) is a
    circular sector in its own plane, gridded uniformly in polar
    coordinates, so every vertex lies exactly on the surface.
    """
    if not radius > 0 or int(resolution) != resolution or resolution < 2:
        raise InvalidParams("need radius > 0 and integer resolution >= 2")
    n = int(resolution)
    u, um, up = plane.frame
    p = plane.vertex

    ea, eb = _orthonormal(um, up)
    stem_angle = float(np.arccos(np.clip(ea @ (up / np.linalg.norm(up)), -1.0, 1.0)))
    patches = [
        (Piece.STEM, ea, eb, stem_angle),
        (Piece.STEM, -ea, -eb, stem_angle),
        (Piece.WING_PLUS, *_orthonormal(up, u), np.pi),
        (Piece.WING_MINUS, *_orthonormal(um, -u), np.pi),
    ]

    verts, tris, tags, pid = [], [], [], []
    offset = 0
    for k, (piece, a, b, angle) in enumerate(patches):
        V, T = _sector_patch(p, a, b, angle, radius, n)
        verts.append(V)
        tris.append(T + offset)
        tags.extend([piece] * len(T))
        pid.append(np.full(len(T), k))
        offset += len(V)
    return Mesh(np.vstack(verts), np.vstack(tris), tags, np.concatenate(pid))
