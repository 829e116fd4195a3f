"""Numerical tracing of the residual umbilical variety for generic 0 < b < a.

The variety is the 1-dimensional solution set of three equations in four
real unknowns: the ellipsoid equation plus the two homogeneous sextic
forms.  Seeds come from the exact plane-family cubic roots (guaranteed cone
points) plus sign-change cells of a deterministic spherical grid; each seed
is Newton-corrected and continued by tangent prediction along the kernel of
the 3x4 Jacobian.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .ambient import GeometryError, Point4
from .ellipsoid import (
    EllipsoidParams,
    ParameterError,
    gamma_curve,
    plane_point,
    seed_plane_roots,
    sextic_gradients,
)


class TraceError(GeometryError):
    """A guaranteed seed failed to converge."""


@dataclass(frozen=True)
class TraceConfig:
    seed_grid: int = 12          # grid points per angle of the 3-sphere chart
    newton_tol: float = 1e-10
    max_newton_iters: int = 30
    step_len: float = 0.02       # arc-length predictor step
    max_vertices: int = 4000
    min_step: float = 1e-6

    def __post_init__(self):
        if self.newton_tol <= 0 or self.step_len <= 0 or self.seed_grid < 8:
            raise ValueError("invalid trace configuration: %r" % (self,))


@dataclass
class TraceComponent:
    points: np.ndarray            # (n, 4)
    residuals: np.ndarray         # (n, 3): |rho|, |re_s|, |im_s|
    gamma_distance: np.ndarray    # (n,)
    closed: bool
    singular: list[int] = field(default_factory=list)


@dataclass
class TracedVariety:
    params: EllipsoidParams
    config: TraceConfig
    components: list[TraceComponent]

    @property
    def vertex_count(self) -> int:
        return sum(len(c.points) for c in self.components)


def scale_to_ellipsoid(d, params: EllipsoidParams) -> Point4:
    """Scale a nonzero direction of R^4 onto the ellipsoid.

    The radial equation is quadratic with exactly one positive root because
    the quadratic form is positive definite for 0 <= b <= a < 1.
    """
    x, y, u, v = (float(c) for c in d)
    if x == y == u == v == 0.0:
        raise ValueError("zero direction")
    return params.surface_point(x, y, u, v)


class _System:
    """The 3-equation system and its exact Jacobian on R^4."""

    def __init__(self, params: EllipsoidParams, surface: str = "ellipsoid"):
        if surface not in ("ellipsoid", "sphere"):
            raise ValueError("surface must be 'ellipsoid' or 'sphere'")
        self.params = params
        self.surface = surface

    def value(self, p: np.ndarray) -> np.ndarray:
        x, y, u, v = p
        (re_s, im_s), _ = _sextics(self.params, x, y, u, v)
        return np.array([self._srf(p), re_s, im_s])

    def value_jac(self, p: np.ndarray):
        x, y, u, v = p
        (re_s, im_s), (g_re, g_im) = sextic_gradients(x, y, u, v, self.params)
        F = np.array([self._srf(p), re_s, im_s])
        J = np.vstack([self._srf_grad(p), g_re, g_im])
        return F, J

    def _srf(self, p) -> float:
        x, y, u, v = p
        if self.surface == "sphere":
            return x * x + y * y + u * u + v * v - 1.0
        a, b = self.params.a, self.params.b
        return (-1.0 + (1 + a) * x * x + (1 - a) * y * y
                + (1 + b) * u * u + (1 - b) * v * v)

    def _srf_grad(self, p) -> np.ndarray:
        x, y, u, v = p
        if self.surface == "sphere":
            return 2.0 * np.array([x, y, u, v])
        a, b = self.params.a, self.params.b
        return 2.0 * np.array([(1 + a) * x, (1 - a) * y, (1 + b) * u, (1 - b) * v])


def _sextics(params, x, y, u, v):
    return sextic_gradients(x, y, u, v, params)


def _newton(sys: _System, p: np.ndarray, cfg: TraceConfig):
    """Gauss-Newton correction onto the solution set.

    Returns (point, iterations) or (None, iterations) on failure.
    """
    p = np.asarray(p, dtype=float)
    for it in range(cfg.max_newton_iters):
        F, J = sys.value_jac(p)
        if np.max(np.abs(F)) <= cfg.newton_tol:
            return p, it
        dp, *_ = np.linalg.lstsq(J, -F, rcond=None)
        if not np.all(np.isfinite(dp)) or np.linalg.norm(dp) > 1.0:
            return None, it
        p = p + dp
    F = sys.value(p)
    if np.max(np.abs(F)) <= cfg.newton_tol:
        return p, cfg.max_newton_iters
    return None, cfg.max_newton_iters


_SINGULAR_RTOL = 1e-10


def _tangent(sys: _System, p: np.ndarray, prev: np.ndarray | None):
    """Unit kernel vector of the Jacobian; flags rank deficiency."""
    _, J = sys.value_jac(p)
    _, s, Vt = np.linalg.svd(J)
    singular = s[2] <= _SINGULAR_RTOL * max(s[0], 1.0)
    t = Vt[-1]
    if prev is not None and float(np.dot(t, prev)) < 0.0:
        t = -t
    return t / np.linalg.norm(t), singular


def seed_points(params: EllipsoidParams, cfg: TraceConfig | None = None) -> list[Point4]:
    """Newton-corrected seeds of the variety, deterministic order.

    The plane-family cubic roots provide exact cone points (these must
    converge: failure is an error); a spherical grid adds sign-change seeds
    for components the plane family misses.
    """
    cfg = cfg or TraceConfig()
    a, b = params.a, params.b
    if b == 0.0 or a == b:
        raise ParameterError(
            "degenerate parameters: use special_locus_b0 / special_locus_ba")
    if not 0.0 < b < a:
        raise ParameterError("tracer needs 0 < b < a (got a=%r, b=%r)" % (a, b))
    sys = _System(params)
    seeds: list[np.ndarray] = []

    for ss, st, tau in seed_plane_roots(params):
        for sz in (1, -1):
            for sw in (1, -1):
                q = plane_point(params, tau * st, st * 1.0, sz=sz, sw=sw)
                p0 = np.array(q.as_real())
                corrected, _ = _newton(sys, p0, cfg)
                if corrected is None:
                    raise TraceError(
                        "guaranteed plane-family seed failed to converge at "
                        "tau=%r (a=%r, b=%r)" % (tau, a, b))
                seeds.append(corrected)

    n = cfg.seed_grid
    th1 = np.linspace(0.0, math.pi, n)
    th2 = np.linspace(0.0, math.pi, n)
    th3 = np.linspace(0.0, 2.0 * math.pi, n, endpoint=False)
    dirs = np.zeros((n, n, n, 4))
    vals = np.zeros((n, n, n, 2))
    for i, t1 in enumerate(th1):
        for j, t2 in enumerate(th2):
            for k, t3 in enumerate(th3):
                d = np.array([
                    math.cos(t1),
                    math.sin(t1) * math.cos(t2),
                    math.sin(t1) * math.sin(t2) * math.cos(t3),
                    math.sin(t1) * math.sin(t2) * math.sin(t3),
                ])
                q = params.surface_point(*d)
                dirs[i, j, k] = q.as_real()
                (re_s, im_s), _ = _sextics(params, *q.as_real())
                vals[i, j, k] = (re_s, im_s)

    for i in range(n - 1):
        for j in range(n - 1):
            for k in range(n):
                k2 = (k + 1) % n
                cell = vals[[i, i, i, i, i + 1, i + 1, i + 1, i + 1],
                            [j, j, j + 1, j + 1, j, j, j + 1, j + 1],
                            [k, k2, k, k2, k, k2, k, k2]]
                if cell[:, 0].min() < 0.0 < cell[:, 0].max() and \
                   cell[:, 1].min() < 0.0 < cell[:, 1].max():
                    center = dirs[i, j, k] + dirs[i + 1, j + 1, k2]
                    q = params.surface_point(*center)
                    corrected, _ = _newton(sys, np.array(q.as_real()), cfg)
                    if corrected is not None:
                        seeds.append(corrected)

    return [Point4.from_real(*s) for s in seeds]


def _segment_distance(q: np.ndarray, poly: np.ndarray, closed: bool = True) -> float:
    """Distance from a point to a polyline (segments, not just vertices)."""
    a = poly
    b = np.roll(poly, -1, axis=0) if closed else poly[1:]
    a = a if closed else poly[:-1]
    ab = b - a
    denom = np.einsum("ij,ij->i", ab, ab)
    denom[denom == 0.0] = 1.0
    t = np.clip(np.einsum("ij,ij->i", q[None, :] - a, ab) / denom, 0.0, 1.0)
    proj = a + t[:, None] * ab
    return float(np.min(np.linalg.norm(proj - q[None, :], axis=1)))


def gamma_reference(params: EllipsoidParams, samples: int = 720) -> np.ndarray:
    """720-point discretization of both gamma branches, stacked (2n, 4)."""
    ts = np.linspace(0.0, 2.0 * math.pi, samples, endpoint=False)
    rows = []
    for sign in (1, -1):
        for t in ts:
            rows.append(gamma_curve(params, sign, t).as_real())
    return np.array(rows)


def _trace_from(sys: _System, seed: np.ndarray, cfg: TraceConfig):
    """Continue the curve from a corrected seed; returns (points, closed, singular)."""
    pts = [seed.copy()]
    singular_idx: list[int] = []

    def advance(p0, direction):
        out = []
        t, sing = _tangent(sys, p0, None)
        t = t * direction
        step = cfg.step_len
        easy = 0
        p = p0
        arc = 0.0
        closed = False
        while len(out) < cfg.max_vertices:
            q, iters = _newton(sys, p + step * t, cfg)
            if q is None:
                step *= 0.5
                easy = 0
                if step < cfg.min_step:
                    break
                continue
            arc += float(np.linalg.norm(q - p))
            if iters > cfg.max_newton_iters // 2:
                step = max(step * 0.5, cfg.min_step)
                easy = 0
            else:
                easy += 1
                if easy >= 3:
                    step = min(step * 2.0, cfg.step_len)
                    easy = 0
            t_new, sing = _tangent(sys, q, t)
            out.append(q)
            if sing:
                singular_idx.append(len(out) - 1)
                break
            if arc > 4.0 * cfg.step_len and \
                    np.linalg.norm(q - p0) < max(step, 0.75 * cfg.step_len):
                closed = True
                break
            p, t = q, t_new
        return out, closed

    fwd, closed = advance(seed, +1.0)
    pts.extend(fwd)
    if not closed and not singular_idx:
        back, _ = advance(seed, -1.0)
        pts = list(reversed(back)) + pts
    return np.array(pts), closed, singular_idx


def trace_variety(params: EllipsoidParams, cfg: TraceConfig | None = None,
                  surface: str = "ellipsoid") -> TracedVariety:
    """Trace the variety cut out by the two sextics on the given surface.

    surface="sphere" traces the cone intersection with the unit 3-sphere
    instead (the sextics are cones, so radially rescaling one trace must
    reproduce the other; this is exercised by the test suite).
    """
    cfg = cfg or TraceConfig()
    sys = _System(params, surface=surface)
    seeds = seed_points(params, cfg)
    gamma = gamma_reference(params)
    comps: list[TraceComponent] = []
    polylines: list[np.ndarray] = []

    for seed in seeds:
        p = np.array(seed.as_real())
        if surface == "sphere":
            p = p / np.linalg.norm(p)
            p, _ = _newton(sys, p, cfg)
            if p is None:
                continue
        if any(_segment_distance(p, poly) < 2.0 * cfg.step_len for poly in polylines):
            continue
        points, closed, singular = _trace_from(sys, p, cfg)
        if len(points) < 4:
            continue
        res = np.abs(np.array([sys.value(q) for q in points]))
        gd = np.array([_segment_distance(q, gamma, closed=True) if surface == "ellipsoid"
                       else math.nan for q in points])
        comps.append(TraceComponent(points=points, residuals=res,
                                    gamma_distance=gd, closed=closed,
                                    singular=singular))
        polylines.append(points)

    comps.sort(key=lambda c: (-len(c.points), tuple(np.round(c.points[0], 9))))
    return TracedVariety(params=params, config=cfg, components=comps)


def hausdorff_distance(pts_a: np.ndarray, pts_b: np.ndarray,
                       closed: bool = True) -> float:
    """Symmetric polyline Hausdorff distance between two vertex arrays."""
    d_ab = max(_segment_distance(q, pts_b, closed) for q in pts_a)
    d_ba = max(_segment_distance(q, pts_a, closed) for q in pts_b)
    return max(d_ab, d_ba)
