"""Everything specific to the normalized real ellipsoid

    rho = -1 + |z|^2 + |w|^2 + Re(a z^2 + b w^2),   0 <= b <= a < 1,

i.e. the pluriharmonic perturbation with f = (a z^2 + b w^2)/2: closed-form
umbilical curves, the special-parameter loci obtained from cubic roots, the
two homogeneous sextics cutting out the residual umbilical variety, and the
Beltrami coefficient of projective umbilicity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .ambient import (
    FrameContractions,
    GeometryError,
    OffSurfaceError,
    Point4,
    PolyHolo,
    contractions,
)
from . import invariants

A_MAX = 1.0 - 1e-9


class ParameterError(ValueError):
    """Ellipsoid parameters outside the admissible range."""


class DegenerateCurveError(GeometryError):
    """The requested curve family degenerates for these parameters."""


class SphereError(GeometryError):
    """a = b = 0: the sphere is umbilical everywhere, no locus curves."""


class NoPositiveRootError(GeometryError):
    """A cubic expected to have exactly one admissible root does not."""


@dataclass(frozen=True)
class EllipsoidParams:
    """Semi-axis parameters, normalized so the mixed Hessian is the identity."""

    a: float
    b: float

    def __post_init__(self):
        if not (0.0 <= self.b <= self.a <= A_MAX):
            raise ParameterError(
                "require 0 <= b <= a < 1 (got a=%r, b=%r)" % (self.a, self.b))

    def holo(self) -> PolyHolo:
        return PolyHolo({(2, 0): self.a / 2.0, (0, 2): self.b / 2.0})

    def rho_jet(self, p: Point4):
        return self.holo().rho_jet(p)

    def contractions(self, p: Point4) -> FrameContractions:
        return contractions(self.rho_jet(p))

    def rho(self, p: Point4) -> float:
        x, y, u, v = p.as_real()
        return (-1.0 + (1 + self.a) * x * x + (1 - self.a) * y * y
                + (1 + self.b) * u * u + (1 - self.b) * v * v)

    def surface_point(self, x: float, y: float, u: float, v: float) -> Point4:
        """Radial scaling of a nonzero direction onto the ellipsoid.

        rho(lam d) = lam^2 q(d) - 1 with q positive definite for a, b < 1,
        so there is exactly one positive root lam = 1/sqrt(q).
        """
        q = ((1 + self.a) * x * x + (1 - self.a) * y * y
             + (1 + self.b) * u * u + (1 - self.b) * v * v)
        if not q > 0:
            raise ParameterError("cannot scale the zero direction onto the surface")
        lam = 1.0 / math.sqrt(q)
        return Point4.from_real(lam * x, lam * y, lam * u, lam * v)


def q11(p: Point4, params: EllipsoidParams) -> complex:
    """Cartan component at p via the invariants module."""
    return invariants.cartan_q11(params.contractions(p)).Q11


def p_functional(p: Point4, params: EllipsoidParams) -> complex:
    """The five-term umbilical functional at a surface point.

    For the ellipsoid the Cartan component factors as rho_ZZ(L,L) times
    this value.
    """
    c = params.contractions(p)
    if not c.on_surface():
        raise OffSurfaceError("point is off the ellipsoid (rho = %r)" % (c.rho,))
    return invariants.umbilical_functional(c)


def beltrami_coefficient(p: Point4, params: EllipsoidParams) -> complex:
    """Scalar Beltrami coefficient -rho_ZZ(L,L)/J; zero exactly at
    projective-umbilical points."""
    c = params.contractions(p)
    if not c.on_surface():
        raise OffSurfaceError("point is off the ellipsoid (rho = %r)" % (c.rho,))
    return -c.rzzLL / c.J


# ---------------------------------------------------------------------------
# Closed-form curves
# ---------------------------------------------------------------------------


class LocusKind(Enum):
    GAMMA_PLUS = "gamma+"
    GAMMA_MINUS = "gamma-"
    SPECIAL_B0 = "special_b0"
    SPECIAL_BA = "special_ba"
    TRACED = "traced"


@dataclass
class LocusCurve:
    """A sampled umbilical-locus curve with per-vertex residuals.

    defining_residual holds |rho_ZZ(L,L)| for the gamma families and the
    absolute umbilical functional for the special families.
    """

    kind: LocusKind
    params: EllipsoidParams
    points: np.ndarray                    # (n, 4) real rows
    rho_residual: np.ndarray              # (n,)
    defining_residual: np.ndarray         # (n,)
    tau: float | None = None
    sign: int | None = None

    def point(self, i: int) -> Point4:
        return Point4.from_real(*self.points[i])


def gamma_curve(params: EllipsoidParams, sign: int, t: float) -> Point4:
    """Point of the curve gamma_{1,2} (sign = +1 or -1) at parameter t.

    The parametrization solves rho = 0 and rho_ZZ(L,L) = 0 exactly; for
    b = 0 both branches collapse onto the w = 0 circle, which is handled by
    special_locus_b0.
    """
    a, b = params.a, params.b
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if b <= 0.0:
        raise DegenerateCurveError(
            "gamma degenerates at b = 0; use the w = 0 circle from special_locus_b0")
    fz = math.sqrt(a / (a + b))
    fw = math.sqrt(b / (a + b))
    z = fz * (math.sqrt(1 - b) * math.cos(t) / math.sqrt(1 + a)
              + 1j * math.sqrt(1 + b) * math.sin(t) / math.sqrt(1 - a))
    w = sign * fw * (math.sqrt(1 - a) * math.sin(t) / math.sqrt(1 + b)
                     - 1j * math.sqrt(1 + a) * math.cos(t) / math.sqrt(1 - b))
    return Point4(z, w)


def _curve_from_points(kind, params, pts, defining, tau=None, sign=None,
                       rho_tol=1e-10, def_tol=1e-8) -> LocusCurve:
    arr = np.array([p.as_real() for p in pts])
    rho_res = np.array([abs(params.rho(p)) for p in pts])
    def_res = np.array([defining(p) for p in pts])
    if rho_res.max() > rho_tol or def_res.max() > def_tol:
        raise GeometryError(
            "curve residuals exceed tolerance: max|rho|=%g, max defining=%g"
            % (rho_res.max(), def_res.max()))
    return LocusCurve(kind=kind, params=params, points=arr, rho_residual=rho_res,
                      defining_residual=def_res, tau=tau, sign=sign)


def _abs_rzzLL(params):
    def f(p):
        return abs(params.contractions(p).rzzLL)
    return f


def _abs_pfun(params):
    def f(p):
        return abs(p_functional(p, params))
    return f


def gamma_locus(params: EllipsoidParams, sign: int, samples: int = 720) -> LocusCurve:
    ts = np.linspace(0.0, 2.0 * math.pi, samples, endpoint=False)
    pts = [gamma_curve(params, sign, t) for t in ts]
    kind = LocusKind.GAMMA_PLUS if sign > 0 else LocusKind.GAMMA_MINUS
    return _curve_from_points(kind, params, pts, _abs_rzzLL(params), sign=sign)


# ---------------------------------------------------------------------------
# Cubic roots
# ---------------------------------------------------------------------------


def _descartes_positive(coeffs) -> int:
    signs = [c for c in coeffs if c != 0.0]
    return sum(1 for x, y in zip(signs, signs[1:]) if x * y < 0)


def cubic_unique_positive_root(c3: float, c2: float, c1: float, c0: float) -> float:
    """The unique positive root of c3 s^3 + c2 s^2 + c1 s + c0.

    Requires exactly one sign change in the coefficient sequence (Descartes:
    exactly one positive root).  Auto-brackets by doubling, then runs a
    bisection-safeguarded Newton iteration down to machine residual.
    """
    if c3 == 0.0:
        raise NoPositiveRootError("leading coefficient vanishes")
    if c3 < 0.0:
        c3, c2, c1, c0 = -c3, -c2, -c1, -c0
    if _descartes_positive((c3, c2, c1, c0)) != 1:
        raise NoPositiveRootError(
            "coefficient signs do not guarantee a unique positive root: %r"
            % ((c3, c2, c1, c0),))

    def p(s):
        return ((c3 * s + c2) * s + c1) * s + c0

    def dp(s):
        return (3.0 * c3 * s + 2.0 * c2) * s + c1

    lo, hi = 0.0, 1.0
    plo = p(lo)
    for _ in range(200):
        if plo * p(hi) <= 0.0:
            break
        hi *= 2.0
    else:
        raise NoPositiveRootError("no sign change found while doubling the bracket")

    s = 0.5 * (lo + hi)
    for _ in range(200):
        ps = p(s)
        if ps == 0.0:
            break
        if plo * ps < 0.0:
            hi = s
        else:
            lo = s
        d = dp(s)
        step = ps / d if d != 0.0 else math.inf
        cand = s - step
        if not (lo < cand < hi):
            cand = 0.5 * (lo + hi)
        if abs(cand - s) <= 1e-17 * max(1.0, abs(s)):
            s = cand
            break
        s = cand
    return s


def part_i_cubic(a: float) -> tuple[float, float, float, float]:
    """Cubic whose unique positive root locates the b = 0 special curves."""
    return (4.0, 8.0 * (1.0 + a), 4.0 + 6.0 * a + 5.0 * a * a, -2.0 * a)


def part_ii_cubic(a: float) -> tuple[float, float, float, float]:
    """Cubic whose unique positive root locates the b = a special curves."""
    return (a * a + 2.0 * a + 4.0,
            4.0 - a * (19.0 * a + 34.0),
            a * (19.0 * a - 34.0) - 4.0,
            -a * a + 2.0 * a - 4.0)


def special_locus_b0(a: float, samples: int = 720) -> list[LocusCurve]:
    """The three closed umbilical curves of the revolution ellipsoid b = 0.

    Two circles at constant real z = +-sqrt(s0/((1+a)(1+a+s0))) plus the
    w = 0 curve on which rho_ZZ(L,L) vanishes.
    """
    if a == 0.0:
        raise SphereError("a = 0 is the sphere: umbilical everywhere")
    params = EllipsoidParams(a, 0.0)
    s0 = cubic_unique_positive_root(*part_i_cubic(a))
    ts = np.linspace(0.0, 2.0 * math.pi, samples, endpoint=False)
    out = []
    zr = math.sqrt(s0 / ((1 + a) * (1 + a + s0)))
    wr = math.sqrt((1 + a) / (1 + a + s0))
    for sgn in (1, -1):
        pts = [Point4(sgn * zr + 0j, wr * complex(math.cos(t), math.sin(t))) for t in ts]
        out.append(_curve_from_points(LocusKind.SPECIAL_B0, params, pts,
                                      _abs_pfun(params), sign=sgn,
                                      tau=sgn * math.sqrt(s0)))
    pts = [Point4(complex(math.cos(t) / math.sqrt(1 + a),
                          math.sin(t) / math.sqrt(1 - a)), 0j) for t in ts]
    out.append(_curve_from_points(LocusKind.GAMMA_PLUS, params, pts,
                                  _abs_rzzLL(params), sign=1))
    return out


def _ba_point(a: float, tau: float, t: float) -> Point4:
    d = math.sqrt(1.0 - a + tau * tau * (1.0 + a))
    ca, sa = math.sqrt(1 - a) / math.sqrt(1 + a), math.sqrt(1 + a) / math.sqrt(1 - a)
    z = (ca * math.cos(t) + 1j * tau * sa * math.sin(t)) / d
    w = (ca * math.sin(t) - 1j * tau * sa * math.cos(t)) / d
    return Point4(z, w)


def special_locus_ba(a: float, samples: int = 720) -> list[LocusCurve]:
    """The four umbilical curves of the b = a ellipsoid.

    tau = +-1 gives the gamma curves (rho_ZZ(L,L) = 0); tau = +-sqrt(s0)
    gives the residual pair on which the umbilical functional vanishes.
    """
    if a == 0.0:
        raise SphereError("a = 0 is the sphere: umbilical everywhere")
    params = EllipsoidParams(a, a)
    s0 = cubic_unique_positive_root(*part_ii_cubic(a))
    ts = np.linspace(0.0, 2.0 * math.pi, samples, endpoint=False)
    out = []
    for tau, kind, defining in [
        (1.0, LocusKind.GAMMA_PLUS, _abs_rzzLL(params)),
        (-1.0, LocusKind.GAMMA_MINUS, _abs_rzzLL(params)),
        (math.sqrt(s0), LocusKind.SPECIAL_BA, _abs_pfun(params)),
        (-math.sqrt(s0), LocusKind.SPECIAL_BA, _abs_pfun(params)),
    ]:
        pts = [_ba_point(a, tau, t) for t in ts]
        out.append(_curve_from_points(kind, params, pts, defining, tau=tau,
                                      sign=1 if tau > 0 else -1))
    return out


# ---------------------------------------------------------------------------
# The two homogeneous sextics
#
# In terms of X = i rho_z^2 and Y = i rho_w^2 both are polynomials of degree
# six in the real coordinates (every |X| is the polynomial |rho_z|^2).  The
# stored orientation is J^5 * (Re P, Im P): on the surface re_s and im_s are
# exactly J^5 times the real/imaginary parts of the umbilical functional
# (the raw display forms carry the opposite sign; see README).
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SexticForms:
    re_s: float
    im_s: float


def _half_im(a: float, b: float, A: complex, B: complex):
    """Display half of the Im-sextic with Wirtinger derivatives (g, g_A, g_B)."""
    Ac, Bc = A.conjugate(), B.conjugate()
    Sx = (A * Ac).real
    Sy = (B * Bc).real
    X = 1j * A * A
    Yv = 1j * B * B
    Rx, Ry = X.real, Yv.real
    T = 1j * A ** 4 * Bc * Bc          # X^2 conj(Y)

    k1 = 0.5 * a * (b * b - 4.0)
    k2 = 2.5 * a * a * b
    k3 = -4.0 * a * (b * b + 1.0)
    k4 = 0.5 * b * (a * a + 5.0 * b * b - 4.0)

    g = k1 * Sx * Sx * Rx + k2 * T.real + k3 * Sx * Sy * Rx + k4 * Sx * Sx * Ry
    gA = (k1 * (2.0 * Sx * Ac * Rx + Sx * Sx * 1j * A)
          + k2 * 2j * A ** 3 * Bc * Bc
          + k3 * (Ac * Sy * Rx + Sx * Sy * 1j * A)
          + k4 * 2.0 * Sx * Ac * Ry)
    gB = (k2 * (-1j) * Ac ** 4 * B
          + k3 * Sx * Bc * Rx
          + k4 * Sx * Sx * 1j * B)
    return g, gA, gB


def _half_re(a: float, b: float, A: complex, B: complex):
    """Display half of the Re-sextic with Wirtinger derivatives (g, g_A, g_B)."""
    Ac, Bc = A.conjugate(), B.conjugate()
    Sx = (A * Ac).real
    Sy = (B * Bc).real
    Ix = (A * A).real                   # Im X for X = i A^2
    Iy = (B * B).real
    IT = (A ** 4 * Bc * Bc).real        # Im(X^2 conj Y)
    RXbarY = (A * A * Bc * Bc).real     # Re(X conj Y)

    k1 = 0.5 * a * (b * b + 4.0)
    k2 = 2.5 * a * a * b
    k3 = -b * b
    k4 = 4.0 * a * (1.0 - b * b)
    k5 = 4.0 * a * a + 3.0 * b * b
    k6 = -10.0 * a * b
    k7 = 0.5 * b * (4.0 + a * a + 5.0 * b * b)

    g = (k1 * Sx * Sx * Ix + k2 * IT + k3 * Sx ** 3 + k4 * Sx * Sy * Ix
         + k5 * Sx * Sx * Sy + k6 * Sx * RXbarY + k7 * Sx * Sx * Iy)
    gA = (k1 * (2.0 * Sx * Ac * Ix + Sx * Sx * A)
          + k2 * 2.0 * A ** 3 * Bc * Bc
          + k3 * 3.0 * Sx * Sx * Ac
          + k4 * (Ac * Sy * Ix + Sx * Sy * A)
          + k5 * 2.0 * Sx * Ac * Sy
          + k6 * (Ac * RXbarY + Sx * A * Bc * Bc)
          + k7 * 2.0 * Sx * Ac * Iy)
    gB = (k2 * Ac ** 4 * B
          + k4 * Sx * Bc * Ix
          + k5 * Sx * Sx * Bc
          + k6 * Sx * Ac * Ac * B
          + k7 * Sx * Sx * B)
    return g, gA, gB


def _gradients_AB(params: EllipsoidParams, x, y, u, v):
    a, b = params.a, params.b
    A = complex((1 + a) * x, (a - 1) * y)     # rho_z
    B = complex((1 + b) * u, (b - 1) * v)     # rho_w
    re1, re1A, re1B = _half_re(a, b, A, B)
    re2, re2A, re2B = _half_re(b, a, B, A)
    im1, im1A, im1B = _half_im(a, b, A, B)
    im2, im2A, im2B = _half_im(b, a, B, A)
    # overall sign: stored forms are the negated displays (= J^5 * P parts)
    re_s, re_A, re_B = -(re1 + re2), -(re1A + re2B), -(re1B + re2A)
    im_s, im_A, im_B = -(im1 + im2), -(im1A + im2B), -(im1B + im2A)
    return (re_s, im_s), (re_A, re_B, im_A, im_B)


def sextic_forms(x: float, y: float, u: float, v: float,
                 params: EllipsoidParams) -> SexticForms:
    """Values of the two degree-6 forms at a point of R^4 (defined everywhere)."""
    (re_s, im_s), _ = _gradients_AB(params, x, y, u, v)
    return SexticForms(re_s=re_s, im_s=im_s)


def sextic_gradients(x: float, y: float, u: float, v: float,
                     params: EllipsoidParams):
    """(values, gradients) of the two sextics.

    Returns ((re_s, im_s), (grad_re, grad_im)) with 4-vectors of exact
    partial derivatives with respect to (x, y, u, v).
    """
    a, b = params.a, params.b
    (re_s, im_s), (re_A, re_B, im_A, im_B) = _gradients_AB(params, x, y, u, v)

    def chain(gA, gB):
        return np.array([
            2.0 * (1 + a) * gA.real,
            2.0 * (1 - a) * gA.imag,
            2.0 * (1 + b) * gB.real,
            2.0 * (1 - b) * gB.imag,
        ])

    return (re_s, im_s), (chain(re_A, re_B), chain(im_A, im_B))


# ---------------------------------------------------------------------------
# Seed cubics on the plane family Re X = Re Y = 0
#
# Writing X = i s, Y = i t, the restriction of the Re-sextic to the points
# realizing a given sign pattern of (s, t) is an honest homogeneous cubic in
# (s, t); its admissible roots tau = s/t (sign tau = sign s * sign t) give
# exact rays of the cone cut out by both sextics.
# ---------------------------------------------------------------------------


def _plane_cubic(params: EllipsoidParams, sign_s: int, sign_t: int):
    a, b = params.a, params.b

    def half(a, b, ss, st):
        c_s3 = 0.5 * a * (b * b + 4.0) - b * b * ss
        c_s2t = (2.5 * a * a * b + 4.0 * a * (1.0 - b * b) * ss * st
                 + (4.0 * a * a + 3.0 * b * b) * st - 10.0 * a * b * ss
                 + 0.5 * b * (4.0 + a * a + 5.0 * b * b))
        return c_s3, c_s2t

    c3, c2 = half(a, b, sign_s, sign_t)
    c0, c1 = half(b, a, sign_t, sign_s)
    # stored sextics are the negated displays
    return (-c3, -c2, -c1, -c0)


def plane_point(params: EllipsoidParams, s: float, t: float,
                sz: int = 1, sw: int = 1) -> Point4:
    """A surface point realizing rho_z^2 = s, rho_w^2 = t (up to scaling).

    sz, sw = +-1 choose among the sign realizations of the square roots.
    """
    a, b = params.a, params.b
    if s >= 0:
        x, y = sz * math.sqrt(s) / (1 + a), 0.0
    else:
        x, y = 0.0, sz * math.sqrt(-s) / (a - 1)
    if t >= 0:
        u, v = sw * math.sqrt(t) / (1 + b), 0.0
    else:
        u, v = 0.0, sw * math.sqrt(-t) / (b - 1)
    return params.surface_point(x, y, u, v)


def seed_plane_roots(params: EllipsoidParams) -> list[tuple[int, int, float]]:
    """All admissible roots (sign_s, sign_t, tau) of the four quadrant cubics."""
    out = []
    for ss in (1, -1):
        for st in (1, -1):
            c = _plane_cubic(params, ss, st)

            def p(tau):
                return ((c[0] * tau + c[1]) * tau + c[2]) * tau + c[3]

            def dp(tau):
                return (3.0 * c[0] * tau + 2.0 * c[1]) * tau + c[2]

            for r in np.roots(c):
                if abs(r.imag) > 1e-8:
                    continue
                tau = float(r.real)
                for _ in range(8):
                    d = dp(tau)
                    if d == 0.0:
                        break
                    tau -= p(tau) / d
                if tau != 0.0 and (1 if tau > 0 else -1) == ss * st:
                    out.append((ss, st, tau))
    out.sort(key=lambda r: (r[0], r[1], r[2]))
    merged = []
    for r in out:
        if not any(r[0] == m[0] and r[1] == m[1] and abs(r[2] - m[2]) < 1e-9
                   for m in merged):
            merged.append(r)
    return merged


def case43_cubic_root(params: EllipsoidParams) -> float:
    """The admissible root of the canonical quadrant cubic (s > 0, t < 0).

    This quadrant carries exactly one admissible root across the whole
    parameter range; as b -> a it tends to -1/s0 with s0 the b = a cubic
    root, and the (s > 0, t > 0) quadrant cubic reduces to the b = 0 cubic.
    Admissibility forces tau < 0, so the root is found on the reflected
    polynomial, which must have exactly one positive root.
    """
    a, b = params.a, params.b
    if not (0.0 < b < a):
        raise ParameterError("generic-case cubic needs 0 < b < a (got a=%r, b=%r)"
                             % (a, b))
    c3, c2, c1, c0 = _plane_cubic(params, 1, -1)
    try:
        sigma = cubic_unique_positive_root(-c3, c2, -c1, c0)
    except NoPositiveRootError as e:
        raise NoPositiveRootError(
            "root multiplicity degeneracy in the canonical quadrant: %s" % (e,))
    return -sigma
