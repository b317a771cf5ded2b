"""
Crooked foliations between two disjoint crooked planes.

Given a path of directions u_t on [0, 1] and positive weights f, g, the
vertex curve

    p_t = p_0 + int_0^t (f(s) u_s^- - g(s) u_s^+) ds

moves with velocity inside the open stem quadrant of u_t, so the planes
C(p_t, u_t) are pairwise disjoint. The weights are drawn from a small family
of exponentials concentrated at the two ends of [0, 1] plus constants; a
nonnegative least-squares solve picks the weights that land on p_1.
"""
import enum
import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicHermiteSpline
from scipy.optimize import nnls

from .disjointness import (
    PAIR_TOL, Containment, PairClass, Verdict, classify_pair, cone_A, cone_contains,
    consistently_oriented, crooked_disjoint, orient_pair,
)
from .errors import (
    DegenerateCase, Infeasible, InvalidEndpoints, InvalidParams, NotDisjoint,
    OutOfRange, PreconditionFailed, QuadratureFailure,
)
from .geometry import CrookedPlane, stem_quadrant_contains
from .lorentz import (
    NullFrame, is_unit_spacelike, lorentz_dot, null_frame_arrays,
    null_frame_derivative, vec,
)

log = logging.getLogger(__name__)

QUAD_TOL = 1e-10
QUAD_MAX_LEVEL = 8
GL_ORDER = 16
N_SCHEDULE = (4, 8, 16, 32, 60)
FD_STEP = 1e-6

_GL_X, _GL_W = np.polynomial.legendre.leggauss(GL_ORDER)


# -- directing paths ---------------------------------------------------------

class DirectingPath:
    """
    A path t -> u_t of unit spacelike vectors on [0, 1].

    ``func`` and ``deriv`` map an array of parameters of shape (m,) to arrays
    of shape (m, 3). ``descriptor`` is a JSON-ready description used when
    the path is written to disk.
    """

    def __init__(self, func, deriv, descriptor=None):
        self._func = func
        self._deriv = deriv
        self.descriptor = descriptor

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return self._func(np.atleast_1d(t)).reshape(t.shape + (3,))

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        return self._deriv(np.atleast_1d(t)).reshape(t.shape + (3,))

    def frames(self, t):
        """Null companions (u_t^-, u_t^+)."""
        return null_frame_arrays(self(t))

    def frame(self, t) -> NullFrame:
        u = self(float(t))
        m, p = null_frame_arrays(u)
        return NullFrame(u, m, p)

    def frame_derivative(self, t):
        """Derivatives of (u_t^-, u_t^+) with respect to t."""
        return null_frame_derivative(self(t), self.derivative(t))


def _lnorm(W):
    return np.sqrt(lorentz_dot(W, W))


def interp_path(u0, u1) -> DirectingPath:
    """
    Normalized linear interpolation between two directions.

    Requires ``u0 . u1 >= 1``; callers fix signs beforehand so that
    (-u0, u1) is consistently oriented.
    """
    try:
        u0 = vec(u0)
        u1 = vec(u1)
    except InvalidParams as exc:
        raise InvalidEndpoints(str(exc)) from exc
    if not (is_unit_spacelike(u0) and is_unit_spacelike(u1)):
        raise InvalidEndpoints("endpoints must be unit spacelike")
    if lorentz_dot(u0, u1) < 1.0 - 1e-9:
        raise InvalidEndpoints(f"u0.u1 = {lorentz_dot(u0, u1)!r} < 1")
    du = u1 - u0

    def func(t):
        W = (1.0 - t)[:, None] * u0 + t[:, None] * u1
        U = W / _lnorm(W)[:, None]
        # exact endpoints
        U[t == 0.0] = u0
        U[t == 1.0] = u1
        return U

    def deriv(t):
        W = (1.0 - t)[:, None] * u0 + t[:, None] * u1
        q = lorentz_dot(W, W)
        return du / np.sqrt(q)[:, None] - W * (lorentz_dot(W, du) / q**1.5)[:, None]

    return DirectingPath(func, deriv, {"type": "interp", "u0": u0.tolist(), "u1": u1.tolist()})


def sampled_path(knots_t, knots_u) -> DirectingPath:
    """
    Cubic Hermite interpolation of sampled directions, renormalized.

    Knot slopes come from ``numpy.gradient``; derivatives of the normalized
    path use centered differences with step 1e-6.
    """
    T = np.asarray(knots_t, dtype=float)
    U = np.asarray(knots_u, dtype=float)
    if T.ndim != 1 or len(T) < 2 or U.shape != (len(T), 3):
        raise InvalidParams("need at least two knots with 3-vector directions")
    if T[0] != 0.0 or T[-1] != 1.0 or np.any(np.diff(T) <= 0):
        raise InvalidParams("knot parameters must increase from 0 to 1")
    if not np.all(np.isfinite(U)) or not all(is_unit_spacelike(u) for u in U):
        raise InvalidParams("knot directions must be unit spacelike")
    spline = CubicHermiteSpline(T, U, np.gradient(U, T, axis=0), axis=0)

    def func(t):
        W = spline(t)
        q = lorentz_dot(W, W)
        if np.any(q <= 0):
            raise InvalidParams("interpolated direction is not spacelike")
        out = W / np.sqrt(q)[:, None]
        out[t == 0.0] = U[0]
        out[t == 1.0] = U[-1]
        return out

    def deriv(t):
        return (func(t + FD_STEP) - func(t - FD_STEP)) / (2 * FD_STEP)

    desc = {"type": "sampled",
            "knots": [{"t": float(t), "u": u.tolist()} for t, u in zip(T, U)]}
    return DirectingPath(func, deriv, desc)


def path_from_descriptor(desc) -> DirectingPath:
    if desc["type"] == "interp":
        return interp_path(desc["u0"], desc["u1"])
    if desc["type"] == "sampled":
        return sampled_path([k["t"] for k in desc["knots"]], [k["u"] for k in desc["knots"]])
    raise InvalidParams(f"unknown path type {desc['type']!r}")


@dataclass
class ValidationReport:
    endpoint_residual: float = 0.0
    pairs_checked: int = 0
    failures: list = field(default_factory=list)
    derivative_cone_violations: list = field(default_factory=list)
    orientation_violations: list = field(default_factory=list)
    norm_violations: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not (self.failures or self.derivative_cone_violations
                    or self.orientation_violations or self.norm_violations)


def _ordered_pair_ok(ut, us, tol):
    if not consistently_oriented(-ut, us, tol):
        return False
    return classify_pair(-ut, us, tol) in (PairClass.ULTRAPARALLEL, PairClass.ASYMPTOTIC)


def validate_path(path: DirectingPath, grid_size=20, tol=1e-9) -> ValidationReport:
    """
    Check the directing-path hypotheses on a uniform grid.

    For all grid points t < s: u_t . u_s >= 1 - tol, and (-u_t, u_s) is a
    consistently oriented ultraparallel or asymptotic pair.
    """
    if grid_size < 2:
        raise InvalidParams("grid_size must be at least 2")
    ts = np.linspace(0.0, 1.0, grid_size)
    U = path(ts)
    rep = ValidationReport()
    for t, u in zip(ts, U):
        if abs(lorentz_dot(u, u) - 1.0) > tol:
            rep.norm_violations.append(float(t))
    for i in range(grid_size):
        for j in range(i + 1, grid_size):
            rep.pairs_checked += 1
            pair = (float(ts[i]), float(ts[j]))
            if lorentz_dot(U[i], U[j]) < 1.0 - tol:
                rep.failures.append(pair)
            elif not _ordered_pair_ok(U[i], U[j], tol):
                rep.orientation_violations.append(pair)
    return rep


# -- quadrature --------------------------------------------------------------

def panel_breaks(level: int) -> np.ndarray:
    """
    Panel endpoints on [0, 1], graded geometrically (ratio 1/2) toward both
    ends; level 0 has 8 panels and each level subdivides every panel in two
    and adds one more layer of grading.
    """
    depth = 3 + level
    half = np.concatenate([[0.0], 0.5 ** np.arange(depth + 1, 0, -1)])
    sub = 2 ** level
    fine = np.concatenate([np.linspace(a, b, sub + 1)[:-1] for a, b in zip(half[:-1], half[1:])])
    left = np.concatenate([fine, [0.5]])
    return np.concatenate([left, 1.0 - left[-2::-1]])


def _nodes(breaks):
    a = breaks[:-1, None]
    h = np.diff(breaks)[:, None]
    return a + 0.5 * h * (_GL_X + 1.0), 0.5 * h * _GL_W


def panel_integrals(func, breaks):
    """Per-panel 16-point Gauss-Legendre integrals of a vector-valued ``func``."""
    S, W = _nodes(breaks)
    vals = func(S.ravel())
    vals = vals.reshape(S.shape + vals.shape[1:])
    return np.einsum("pk,pk...->p...", W, vals)


def integrate(func, quad_tol=QUAD_TOL, return_level=False):
    """
    Integrate ``func`` over [0, 1] by composite Gauss-Legendre.

    Refines until two successive levels agree within ``quad_tol`` in every
    component.
    """
    prev = panel_integrals(func, panel_breaks(0)).sum(axis=0)
    for level in range(1, QUAD_MAX_LEVEL + 1):
        cur = panel_integrals(func, panel_breaks(level)).sum(axis=0)
        if np.max(np.abs(cur - prev)) <= quad_tol:
            return (cur, level) if return_level else cur
        prev = cur
    raise QuadratureFailure(f"no convergence to {quad_tol} at level {QUAD_MAX_LEVEL}")


def displacement_integral(path: DirectingPath, f, g, quad_tol=QUAD_TOL) -> np.ndarray:
    """int_0^1 (f(s) u_s^- - g(s) u_s^+) ds for vectorized weight functions f, g."""
    def v(s):
        m, p = path.frames(s)
        return np.asarray(f(s))[:, None] * m - np.asarray(g(s))[:, None] * p

    return integrate(v, quad_tol)


class Ray(enum.Enum):
    U0_MINUS = "u0_minus"
    U1_MINUS = "u1_minus"
    U0_PLUS_NEG = "u0_plus_neg"
    U1_PLUS_NEG = "u1_plus_neg"


def _conc0(n):
    return lambda s: n * np.exp(-n * s)


def _conc1(n):
    return lambda s: n * np.exp(-n * (1.0 - s))


def _small(n):
    return lambda s: np.full(np.shape(s), np.exp(-float(n)))


def extreme_ray_displacement(path: DirectingPath, n: int, which: Ray, quad_tol=QUAD_TOL):
    """
    Displacement for weights concentrating on one end of the path.

    f_n(s) = n exp(-n s), g_n = exp(-n) approaches u_0^-; the mirrored
    concentration approaches u_1^-, and swapping f and g gives -u_0^+, -u_1^+.
    """
    if n < 1:
        raise InvalidParams("n must be >= 1")
    conc = _conc0(n) if which in (Ray.U0_MINUS, Ray.U0_PLUS_NEG) else _conc1(n)
    if which in (Ray.U0_MINUS, Ray.U1_MINUS):
        return displacement_integral(path, conc, _small(n), quad_tol)
    return displacement_integral(path, _small(n), conc, quad_tol)


# -- weight family and vertex curve -------------------------------------------

@dataclass(frozen=True, eq=False)
class BasisFamily:
    """
    f(s) = c1 n e^{-ns} + c2 n e^{-n(1-s)} + c5 + delta
    g(s) = c3 n e^{-ns} + c4 n e^{-n(1-s)} + c6 + delta
    """
    n: int
    coefficients: np.ndarray
    delta: float

    def __post_init__(self):
        c = np.asarray(self.coefficients, dtype=float)
        if c.shape != (6,) or np.any(c < 0) or not np.all(np.isfinite(c)):
            raise InvalidParams("need six nonnegative coefficients")
        if self.n < 1 or not self.delta >= 0:
            raise InvalidParams("need n >= 1 and delta >= 0")
        object.__setattr__(self, "coefficients", c)

    @property
    def weights(self):
        """Weights of the seven elementary integrands (six slots then the floor)."""
        return np.append(self.coefficients, self.delta)

    def f(self, s):
        c, n = self.coefficients, self.n
        return c[0] * n * np.exp(-n * s) + c[1] * n * np.exp(-n * (1 - s)) + c[4] + self.delta

    def g(self, s):
        c, n = self.coefficients, self.n
        return c[2] * n * np.exp(-n * s) + c[3] * n * np.exp(-n * (1 - s)) + c[5] + self.delta


def _elementary(path, n):
    # seven integrands, in slot order c1..c6 then the delta floor
    def func(s):
        m, p = path.frames(s)
        e0 = (n * np.exp(-n * s))[:, None]
        e1 = (n * np.exp(-n * (1.0 - s)))[:, None]
        return np.stack([e0 * m, e1 * m, -e0 * p, -e1 * p, m, -p, m - p], axis=1)
    return func


def _tables(func, quad_tol):
    _, level = integrate(func, quad_tol, return_level=True)
    breaks = panel_breaks(level)
    per_panel = panel_integrals(func, breaks)
    return breaks, np.concatenate([np.zeros((1, 7, 3)), np.cumsum(per_panel, axis=0)])


class VertexCurve:
    """
    p_t = p_0 + int_0^t v(s) ds, with v = f u^- - g u^+ for a BasisFamily.

    The integrals of the seven elementary integrands are tabulated on a
    fixed panel grid; evaluating p_t adds one Gauss-Legendre panel from the
    last breakpoint below t.
    """

    def __init__(self, path: DirectingPath, basis: BasisFamily, p0, quad_tol=QUAD_TOL,
                 tables=None):
        self.path = path
        self.basis = basis
        self.p0 = vec(p0)
        self._func = _elementary(path, basis.n)
        self.breaks, self._cum = tables if tables is not None else _tables(self._func, quad_tol)
        self.basis_displacements = self._cum[-1]
        self.residual = None

    def velocity(self, t):
        m, p = self.path.frames(t)
        return (np.asarray(self.basis.f(t))[..., None] * m
                - np.asarray(self.basis.g(t))[..., None] * p)

    def position(self, t):
        t = float(t)
        if not 0.0 <= t <= 1.0:
            raise OutOfRange(f"t = {t} outside [0, 1]")
        if t == 0.0:
            return self.p0.copy()
        k = int(np.searchsorted(self.breaks, t, side="right")) - 1
        k = min(k, len(self.breaks) - 2)
        acc = self._cum[k].copy()
        a = self.breaks[k]
        if t > a:
            S = a + 0.5 * (t - a) * (_GL_X + 1.0)
            acc += 0.5 * (t - a) * np.einsum("k,k...->...", _GL_W, self._func(S))
        return self.p0 + self.basis.weights @ acc

    def displacement(self):
        return self.basis.weights @ self.basis_displacements


def solve_vertex_path(path: DirectingPath, p0, p1, solver_tol=1e-8, n_max=60,
                      quad_tol=QUAD_TOL, check=True) -> VertexCurve:
    """
    Find a vertex curve from ``p0`` to ``p1`` along ``path``.

    For each concentration n in (4, 8, 16, 32, 60) up to ``n_max``, solves
    sum_i c_i B_i = (p1 - p0) - delta B_floor with c >= 0 by NNLS, where B_i
    are the displacements of the elementary weights and
    delta = 1e-6 (1 + |p1 - p0|).

    Parameters
    ----------
    check : bool
        Verify that the path is valid and the end planes are disjoint
        before solving. Disable only for solver experiments on paths that
        are not valid foliation paths.

    Raises
    ------
    Infeasible
        If no n in the schedule reaches the target within
        ``solver_tol * (1 + |p1 - p0|)``.
    PreconditionFailed
        If ``check`` is set and the path or endpoints are invalid.
    """
    p0 = vec(p0)
    p1 = vec(p1)
    delta_vec = p1 - p0
    scale = 1.0 + float(np.linalg.norm(delta_vec))
    if check:
        rep = validate_path(path)
        if not rep.passed:
            raise PreconditionFailed("directing path fails validation")
        fr0, fr1 = path(0.0), path(1.0)
        verdict = crooked_disjoint(CrookedPlane(p0, -fr0), CrookedPlane(p1, fr1))
        if verdict is not Verdict.DISJOINT:
            raise PreconditionFailed(f"end planes are not disjoint ({verdict.value})")
    delta = 1e-6 * scale
    schedule = [n for n in N_SCHEDULE if n <= n_max] or [int(n_max)]
    best = np.inf
    for n in schedule:
        tables = _tables(_elementary(path, n), quad_tol)
        B = tables[1][-1]
        coef, _ = nnls(B[:6].T, delta_vec - delta * B[6])
        curve = VertexCurve(path, BasisFamily(n, coef, delta), p0, quad_tol, tables)
        resid = float(np.linalg.norm(p0 + curve.displacement() - p1))
        log.debug("n=%d residual=%.3e coefficients=%s", n, resid, coef)
        if resid <= solver_tol * scale:
            curve.residual = resid
            return curve
        best = min(best, resid)
    raise Infeasible(f"target not reached up to n={schedule[-1]} (best residual {best:.3e})")


# -- foliations --------------------------------------------------------------

@dataclass(eq=False)
class Foliation:
    """
    Leaves C(p_t, sign * u_t), t in [0, 1].

    ``path`` is normalized so that (-u_t, u_s) is consistently oriented for
    t < s; ``sign`` restores the direction of the first input plane.
    """
    path: DirectingPath
    curve: VertexCurve
    target: np.ndarray
    sign: int = 1

    @property
    def residual(self) -> float:
        return float(np.linalg.norm(self.curve.position(1.0) - self.target))


def build_foliation(P: CrookedPlane, Q: CrookedPlane, solver_tol=1e-8, n_max=60,
                    path: DirectingPath = None) -> Foliation:
    """
    A crooked foliation with first leaf ``P`` and last leaf ``Q``.

    The directing path defaults to normalized linear interpolation between
    the oriented directions. A custom ``path`` must start at +/-P.direction
    and end at +/-Q.direction.
    """
    verdict = crooked_disjoint(P, Q)
    if verdict is Verdict.DEGENERATE:
        raise DegenerateCase("planes have parallel directions")
    if verdict is not Verdict.DISJOINT:
        raise NotDisjoint(f"crooked_disjoint returned {verdict.value}")
    if path is None:
        sc = orient_pair(P.direction, Q.direction)
        u0 = -sc.eps1 * P.direction
        u1 = sc.eps2 * Q.direction
        path = interp_path(u0, u1)
        sign = -sc.eps1
    else:
        u0, u1 = path(0.0), path(1.0)
        if np.array_equal(u0, P.direction):
            sign = 1
        elif np.array_equal(u0, -P.direction):
            sign = -1
        else:
            raise InvalidParams("path must start at the direction of P")
        if np.max(np.abs(np.abs(u1) - np.abs(Q.direction))) > 1e-9:
            raise InvalidParams("path must end at the direction of Q")
    curve = solve_vertex_path(path, P.vertex, Q.vertex, solver_tol, n_max)
    return Foliation(path, curve, Q.vertex.copy(), sign)


def leaf(fol: Foliation, t) -> CrookedPlane:
    t = float(t)
    if not 0.0 <= t <= 1.0:
        raise OutOfRange(f"t = {t} outside [0, 1]")
    return CrookedPlane(fol.curve.position(t), fol.sign * fol.path(t))


def validate_foliation(fol: Foliation, samples=50, tol=PAIR_TOL) -> ValidationReport:
    """
    Certify a foliation on a uniform grid of ``samples`` parameters.

    For every pair t < s the pair (-u_t, u_s) must be consistently oriented
    and p_s - p_t must lie strictly inside cone_A(-u_t, u_s), which makes the
    two leaves disjoint. The velocity at each t must lie in the open stem
    quadrant of u_t.
    """
    if samples < 2:
        raise InvalidParams("samples must be at least 2")
    ts = np.linspace(0.0, 1.0, samples)
    U = fol.path(ts)
    Pts = np.array([fol.curve.position(t) for t in ts])
    rep = ValidationReport(endpoint_residual=float(np.linalg.norm(Pts[-1] - fol.target)))
    m, p = null_frame_arrays(U)
    V = fol.curve.velocity(ts)
    for k, t in enumerate(ts):
        if not stem_quadrant_contains(V[k], NullFrame(U[k], m[k], p[k]), strict=True, tol=tol):
            rep.derivative_cone_violations.append(float(t))
    for i in range(samples):
        for j in range(i + 1, samples):
            rep.pairs_checked += 1
            pair = (float(ts[i]), float(ts[j]))
            if not consistently_oriented(-U[i], U[j], tol):
                rep.orientation_violations.append(pair)
                continue
            hull = cone_A(-U[i], U[j], tol)
            if cone_contains(hull, Pts[j] - Pts[i], strict=True, tol=tol) is not Containment.IN:
                rep.failures.append(pair)
    return rep
