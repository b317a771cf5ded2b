"""
Linear algebra of Lorentzian 3-space R^{2,1}.

Vectors are plain float arrays of shape (3,) (or (m, 3) for the batched
helpers). The bilinear form has signature (2, 1) with the third coordinate
timelike.
"""
import enum
from typing import NamedTuple

import numpy as np

from .errors import InvalidParams, NotSpacelike, NotUnitSpacelike

EPS_CLASS = 1e-12
UNIT_TOL = 1e-9
SQRT2 = np.sqrt(2.0)

E1 = np.array([1.0, 0.0, 0.0])
E2 = np.array([0.0, 1.0, 0.0])
E3 = np.array([0.0, 0.0, 1.0])


def vec(v) -> np.ndarray:
    """Coerce ``v`` to a finite float vector of shape (3,)."""
    a = np.array(v, dtype=float)
    if a.shape != (3,):
        raise InvalidParams(f"expected 3 coordinates, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidParams("coordinates must be finite")
    return a


def lorentz_dot(u, v):
    """u1 v1 + u2 v2 - u3 v3, broadcast over leading axes."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return u[..., 0] * v[..., 0] + u[..., 1] * v[..., 1] - u[..., 2] * v[..., 2]


def lorentz_cross(u, v) -> np.ndarray:
    """
    Lorentzian cross product.

    Characterized by ``lorentz_dot(lorentz_cross(u, v), w) == det3(u, v, w)``.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return np.stack([
        u[..., 1] * v[..., 2] - u[..., 2] * v[..., 1],
        u[..., 2] * v[..., 0] - u[..., 0] * v[..., 2],
        u[..., 1] * v[..., 0] - u[..., 0] * v[..., 1],
    ], axis=-1)


def det3(a, b, c) -> float:
    """Determinant of the matrix with rows a, b, c."""
    a, b, c = (np.asarray(x, dtype=float) for x in (a, b, c))
    return float(a[0] * (b[1] * c[2] - b[2] * c[1])
                 - a[1] * (b[0] * c[2] - b[2] * c[0])
                 + a[2] * (b[0] * c[1] - b[1] * c[0]))


class CausalClass(enum.Enum):
    SPACELIKE = "spacelike"
    TIMELIKE = "timelike"
    NULL = "null"
    ZERO = "zero"


def classify_vector(v, eps=EPS_CLASS) -> CausalClass:
    """Causal type of ``v``, with ``eps`` scaled by the sup-norm of ``v``."""
    if eps <= 0:
        raise InvalidParams("eps must be positive")
    v = vec(v)
    scale = np.max(np.abs(v))
    if scale <= eps:
        return CausalClass.ZERO
    q = lorentz_dot(v, v)
    if abs(q) <= eps * scale**2:
        return CausalClass.NULL
    return CausalClass.SPACELIKE if q > 0 else CausalClass.TIMELIKE


def normalize_spacelike(v, eps=EPS_CLASS) -> np.ndarray:
    v = vec(v)
    q = lorentz_dot(v, v)
    if q <= eps:
        raise NotSpacelike(f"self-product {q!r} is not positive")
    return v / np.sqrt(q)


def is_unit_spacelike(u, tol=UNIT_TOL) -> bool:
    u = np.asarray(u, dtype=float)
    return bool(np.all(np.isfinite(u)) and abs(lorentz_dot(u, u) - 1.0) <= tol)


def unit_spacelike(theta, rapidity) -> np.ndarray:
    """The unit spacelike vector R_theta (cosh a, 0, sinh a)."""
    ch = np.cosh(rapidity)
    return np.array([ch * np.cos(theta), ch * np.sin(theta), np.sinh(rapidity)])


class NullFrame(NamedTuple):
    """A unit spacelike ``u`` with its null companions ``minus`` and ``plus``."""
    u: np.ndarray
    minus: np.ndarray
    plus: np.ndarray


def null_frame_arrays(U):
    """
    Batched null companions of unit spacelike vectors.

    Writes u = (r cos t, r sin t, h) with r^2 - h^2 = 1; then the frame is the
    rotation by t of the frame of (r, 0, h), which is
    ((h, 1, r) / sqrt 2, (h, -1, r) / sqrt 2).

    Parameters
    ----------
    U : array_like, shape (..., 3)

    Returns
    -------
    minus, plus : numpy.ndarray, shape (..., 3)
    """
    U = np.asarray(U, dtype=float)
    r = np.hypot(U[..., 0], U[..., 1])
    c = U[..., 0] / r
    s = U[..., 1] / r
    h = U[..., 2]
    minus = np.stack([h * c - s, h * s + c, r], axis=-1) / SQRT2
    plus = np.stack([h * c + s, h * s - c, r], axis=-1) / SQRT2
    return minus, plus


def null_frame_derivative(U, dU):
    """Directional derivatives of ``null_frame_arrays`` at ``U`` along ``dU``."""
    U = np.asarray(U, dtype=float)
    dU = np.asarray(dU, dtype=float)
    r = np.hypot(U[..., 0], U[..., 1])
    c = U[..., 0] / r
    s = U[..., 1] / r
    h = U[..., 2]
    dr = (U[..., 0] * dU[..., 0] + U[..., 1] * dU[..., 1]) / r
    dc = dU[..., 0] / r - U[..., 0] * dr / r**2
    ds = dU[..., 1] / r - U[..., 1] * dr / r**2
    dh = dU[..., 2]
    base_x = dh * c + h * dc
    base_y = dh * s + h * ds
    dminus = np.stack([base_x - ds, base_y + dc, dr], axis=-1) / SQRT2
    dplus = np.stack([base_x + ds, base_y - dc, dr], axis=-1) / SQRT2
    return dminus, dplus


def null_frame(u) -> NullFrame:
    """
    Extend a unit spacelike vector to its normalized null frame.

    The null vectors are scaled so their third coordinates are equal and
    positive, with ``minus . plus = -1`` and ``det(u, minus, plus) > 0``.

    Raises
    ------
    NotUnitSpacelike
        If ``u . u`` differs from 1 by more than 1e-9.
    """
    u = vec(u)
    if not is_unit_spacelike(u):
        raise NotUnitSpacelike(f"u.u = {lorentz_dot(u, u)!r}")
    minus, plus = null_frame_arrays(u)
    # labels follow orientation; the closed form is already positive, the
    # swap only guards against rounding on near-degenerate input
    if det3(u, minus, plus) < 0:
        minus, plus = plus, minus
    return NullFrame(u, minus, plus)
