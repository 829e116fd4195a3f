"""Defining-function jets, frames and scalar contractions.

Everything here concerns hypersurfaces of the form

    rho(z, w) = -1 + |z|^2 + |w|^2 + 2 Re f(z, w),   f holomorphic,

for which the mixed complex Hessian is the identity and every mixed
derivative of order >= 3 vanishes.  A surface point therefore carries only
the pure holomorphic derivative block of rho (equal to the derivatives of
f), and the curvature/torsion formulas downstream consume a handful of
multilinear contractions of that block against the tangent frame
L = rho_w d_z - rho_z d_w and the normal frame N = conj(rho_z) d_z +
conj(rho_w) d_w.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, fields

import numpy as np

MEMBERSHIP_TOL = 1e-12


class GeometryError(Exception):
    """Base class for geometric degeneracies."""


class DegenerateGradientError(GeometryError):
    """The gradient of rho vanishes; L and N are undefined."""


class DegenerateLeviError(GeometryError):
    """The Levi determinant J is not positive."""


class OffSurfaceError(GeometryError):
    """An operation restricted to the hypersurface got an off-surface point."""


@dataclass(frozen=True)
class Point4:
    """A point of C^2 ~ R^4, stored as two complex coordinates."""

    z: complex
    w: complex

    @property
    def norm_sq(self) -> float:
        return abs(self.z) ** 2 + abs(self.w) ** 2

    def as_real(self) -> tuple[float, float, float, float]:
        return (self.z.real, self.z.imag, self.w.real, self.w.imag)

    @staticmethod
    def from_real(x: float, y: float, u: float, v: float) -> "Point4":
        return Point4(complex(x, y), complex(u, v))

    def __neg__(self) -> "Point4":
        return Point4(-self.z, -self.w)


@dataclass(frozen=True)
class HoloJet4:
    """Holomorphic derivatives of f(z, w) at a point, up to total order 4.

    Symmetric derivatives are stored once per multi-index, e.g. f_zw stands
    for d^2 f / dz dw.
    """

    f: complex = 0j
    f_z: complex = 0j
    f_w: complex = 0j
    f_zz: complex = 0j
    f_zw: complex = 0j
    f_ww: complex = 0j
    f_zzz: complex = 0j
    f_zzw: complex = 0j
    f_zww: complex = 0j
    f_www: complex = 0j
    f_zzzz: complex = 0j
    f_zzzw: complex = 0j
    f_zzww: complex = 0j
    f_zwww: complex = 0j
    f_wwww: complex = 0j


# Levi block of the pluriharmonic perturbation: rho_{z zbar} = rho_{w wbar} = 1,
# rho_{z wbar} = 0, and every other mixed derivative of order >= 2 vanishes.
LEVI_ZZBAR = 1.0
LEVI_WWBAR = 1.0
LEVI_ZWBAR = 0.0


@dataclass(frozen=True)
class RhoJet:
    """Assembled derivatives of rho at a point.

    Only the pure holomorphic block is stored; the antiholomorphic block is
    its conjugate (rho is real) and the mixed block is the constant Levi
    identity above.
    """

    point: Point4
    rho: float
    rho_z: complex
    rho_w: complex
    rho_zz: complex
    rho_zw: complex
    rho_ww: complex
    rho_zzz: complex
    rho_zzw: complex
    rho_zww: complex
    rho_www: complex
    rho_zzzz: complex
    rho_zzzw: complex
    rho_zzww: complex
    rho_zwww: complex
    rho_wwww: complex


def assemble_rho_jet(p: Point4, fj: HoloJet4) -> RhoJet:
    """Build the rho jet at p from the holomorphic jet of f at p.

    rho = -1 + |z|^2 + |w|^2 + (f + conj f); the pure holomorphic
    derivatives of order >= 2 are exactly those of f, while
    rho_z = conj(z) + f_z and rho_w = conj(w) + f_w.
    """
    vals = [p.z, p.w, fj.f]
    vals += [getattr(fj, fl.name) for fl in fields(HoloJet4)]
    if not all(math.isfinite(v.real) and math.isfinite(v.imag) for v in map(complex, vals)):
        raise ValueError("non-finite input components")
    rho = -1.0 + abs(p.z) ** 2 + abs(p.w) ** 2 + 2.0 * fj.f.real
    return RhoJet(
        point=p,
        rho=rho,
        rho_z=p.z.conjugate() + fj.f_z,
        rho_w=p.w.conjugate() + fj.f_w,
        rho_zz=fj.f_zz,
        rho_zw=fj.f_zw,
        rho_ww=fj.f_ww,
        rho_zzz=fj.f_zzz,
        rho_zzw=fj.f_zzw,
        rho_zww=fj.f_zww,
        rho_www=fj.f_www,
        rho_zzzz=fj.f_zzzz,
        rho_zzzw=fj.f_zzzw,
        rho_zzww=fj.f_zzww,
        rho_zwww=fj.f_zwww,
        rho_wwww=fj.f_wwww,
    )


def on_surface(j: RhoJet, tol: float = MEMBERSHIP_TOL) -> bool:
    """Membership predicate: |rho| <= tol * (1 + |p|^2)."""
    return abs(j.rho) <= tol * (1.0 + j.point.norm_sq)


def levi_fefferman(j: RhoJet) -> float:
    """Levi determinant J = -det of the 3x3 bordered complex Hessian.

    Computed via the determinant of the assembled (Hermitian) matrix; for
    the identity Levi block it equals |rho_z|^2 + |rho_w|^2 - rho.
    """
    m = np.array(
        [
            [j.rho, j.rho_z.conjugate(), j.rho_w.conjugate()],
            [j.rho_z, LEVI_ZZBAR, LEVI_ZWBAR],
            [j.rho_w, LEVI_ZWBAR, LEVI_WWBAR],
        ],
        dtype=complex,
    )
    return -np.linalg.det(m).real


def frames(j: RhoJet) -> tuple[tuple[complex, complex], tuple[complex, complex]]:
    """Tangent frame L = (rho_w, -rho_z) and normal frame N = (conj rho_z, conj rho_w)."""
    if j.rho_z == 0 and j.rho_w == 0:
        raise DegenerateGradientError("zero gradient: frames undefined at %r" % (j.point,))
    L = (j.rho_w, -j.rho_z)
    N = (j.rho_z.conjugate(), j.rho_w.conjugate())
    return L, N


@dataclass(frozen=True)
class FrameContractions:
    """Scalar contractions of the rho jet against the frames L and N.

    rho and norm_sq ride along so that surface membership can be re-checked
    by consumers whose formulas are only valid on the hypersurface.
    """

    J: float
    rzzLL: complex
    rzzNL: complex
    rzzNN: complex
    detRzz: complex
    rzzzNLL: complex
    rzzzLLL: complex
    rzzzLLSL: complex
    rzzzzLLLL: complex
    rho: float = 0.0
    norm_sq: float = 0.0

    def on_surface(self, tol: float = MEMBERSHIP_TOL) -> bool:
        return abs(self.rho) <= tol * (1.0 + self.norm_sq)


def _third(j: RhoJet, u, v, x) -> complex:
    """Contraction of the pure third-derivative tensor with three vectors."""
    t = (j.rho_zzz, j.rho_zzw, j.rho_zww, j.rho_www)
    s = 0j
    for i1 in range(2):
        for i2 in range(2):
            for i3 in range(2):
                s += t[i1 + i2 + i3] * u[i1] * v[i2] * x[i3]
    return s


def _fourth(j: RhoJet, u, v, x, y) -> complex:
    t = (j.rho_zzzz, j.rho_zzzw, j.rho_zzww, j.rho_zwww, j.rho_wwww)
    s = 0j
    for i1 in range(2):
        for i2 in range(2):
            for i3 in range(2):
                for i4 in range(2):
                    s += t[i1 + i2 + i3 + i4] * u[i1] * v[i2] * x[i3] * y[i4]
    return s


def hessian_times(j: RhoJet, v) -> tuple[complex, complex]:
    """Matrix-vector product of the pure Hessian [[rho_zz, rho_zw], [rho_zw, rho_ww]]."""
    return (j.rho_zz * v[0] + j.rho_zw * v[1], j.rho_zw * v[0] + j.rho_ww * v[1])


def contractions(j: RhoJet) -> FrameContractions:
    """Evaluate all frame contractions consumed by the invariant formulas."""
    L, N = frames(j)
    S = hessian_times(j, L)

    def h2(u, v):
        return (j.rho_zz * u[0] * v[0] + j.rho_zw * (u[0] * v[1] + u[1] * v[0])
                + j.rho_ww * u[1] * v[1])

    return FrameContractions(
        J=levi_fefferman(j),
        rzzLL=h2(L, L),
        rzzNL=h2(N, L),
        rzzNN=h2(N, N),
        detRzz=j.rho_zz * j.rho_ww - j.rho_zw ** 2,
        rzzzNLL=_third(j, N, L, L),
        rzzzLLL=_third(j, L, L, L),
        rzzzLLSL=_third(j, L, L, S),
        rzzzzLLLL=_fourth(j, L, L, L, L),
        rho=j.rho,
        norm_sq=j.point.norm_sq,
    )


# ---------------------------------------------------------------------------
# Exact directional derivatives (chain rule on the jet, no finite differences)
#
# The Wirtinger derivatives of a jet entry are jet entries one order higher;
# for the pluriharmonic family the only nonzero mixed derivatives are the
# constant Levi block, so d_zbar rho_z = 1, d_zbar rho_w = 0 and every
# d_zbar of a pure derivative of order >= 2 vanishes.
# ---------------------------------------------------------------------------


def _dz_J(j: RhoJet) -> complex:
    # product rule on J = rho_z conj(rho_z) + rho_w conj(rho_w) - rho
    return (j.rho_zz * j.rho_z.conjugate() + j.rho_z * LEVI_ZZBAR
            + j.rho_zw * j.rho_w.conjugate() + j.rho_w * LEVI_ZWBAR
            - j.rho_z)


def _dw_J(j: RhoJet) -> complex:
    return (j.rho_zw * j.rho_z.conjugate() + j.rho_z * LEVI_ZWBAR
            + j.rho_ww * j.rho_w.conjugate() + j.rho_w * LEVI_WWBAR
            - j.rho_w)


def l_J(j: RhoJet) -> complex:
    """L(J) by exact chain rule; equals rzzNL identically for this family."""
    return j.rho_w * _dz_J(j) - j.rho_z * _dw_J(j)


def _dzbar_rzzLL(j: RhoJet) -> complex:
    # d_zbar of rho_zz rho_w^2 - 2 rho_zw rho_z rho_w + rho_ww rho_z^2:
    # pure blocks have no zbar-derivative; d_zbar rho_z = 1, d_zbar rho_w = 0.
    return -2.0 * j.rho_zw * j.rho_w + 2.0 * j.rho_ww * j.rho_z


def _dwbar_rzzLL(j: RhoJet) -> complex:
    return 2.0 * j.rho_zz * j.rho_w - 2.0 * j.rho_zw * j.rho_z


def lbar_rzzLL(j: RhoJet) -> complex:
    """Lbar applied to the field p -> rho_ZZ(L, L), by exact chain rule."""
    return (j.rho_w.conjugate() * _dzbar_rzzLL(j)
            - j.rho_z.conjugate() * _dwbar_rzzLL(j))


# ---------------------------------------------------------------------------
# Built-in jet evaluator for polynomial f up to degree 4
# ---------------------------------------------------------------------------


class PolyHolo:
    """Holomorphic polynomial f(z, w) of degree <= 4 with a jet evaluator.

    Coefficients are given as {(i, j): c} for the monomial c * dz^i * dw^j,
    optionally about a center (dz = z - z0, dw = w - w0).
    """

    def __init__(self, coeffs: dict[tuple[int, int], complex], center: Point4 | None = None):
        for (i, k) in coeffs:
            if i < 0 or k < 0 or i + k > 4:
                raise ValueError("monomial degree out of range: %r" % ((i, k),))
        self.coeffs = {k: complex(v) for k, v in coeffs.items() if v != 0}
        self.center = center or Point4(0j, 0j)

    @staticmethod
    def from_jet(p: Point4, fj: HoloJet4) -> "PolyHolo":
        """Degree-4 Taylor model of f about p.

        Surfaces defined by the model osculate the original to 4th order at
        p, so every invariant built from jets of order <= 4 agrees at p.
        """
        names = {
            (0, 0): fj.f, (1, 0): fj.f_z, (0, 1): fj.f_w,
            (2, 0): fj.f_zz, (1, 1): fj.f_zw, (0, 2): fj.f_ww,
            (3, 0): fj.f_zzz, (2, 1): fj.f_zzw, (1, 2): fj.f_zww, (0, 3): fj.f_www,
            (4, 0): fj.f_zzzz, (3, 1): fj.f_zzzw, (2, 2): fj.f_zzww,
            (1, 3): fj.f_zwww, (0, 4): fj.f_wwww,
        }
        coeffs = {}
        for (i, k), v in names.items():
            coeffs[(i, k)] = v / (math.factorial(i) * math.factorial(k))
        return PolyHolo(coeffs, center=p)

    def derivative(self, p: Point4, k: int, l: int) -> complex:
        """d^{k+l} f / dz^k dw^l at p."""
        dz = p.z - self.center.z
        dw = p.w - self.center.w
        s = 0j
        for (i, m), c in self.coeffs.items():
            if i >= k and m >= l:
                fact = 1.0
                for r in range(k):
                    fact *= i - r
                for r in range(l):
                    fact *= m - r
                s += c * fact * dz ** (i - k) * dw ** (m - l)
        return s

    def jet(self, p: Point4) -> HoloJet4:
        d = self.derivative
        return HoloJet4(
            f=d(p, 0, 0), f_z=d(p, 1, 0), f_w=d(p, 0, 1),
            f_zz=d(p, 2, 0), f_zw=d(p, 1, 1), f_ww=d(p, 0, 2),
            f_zzz=d(p, 3, 0), f_zzw=d(p, 2, 1), f_zww=d(p, 1, 2), f_www=d(p, 0, 3),
            f_zzzz=d(p, 4, 0), f_zzzw=d(p, 3, 1), f_zzww=d(p, 2, 2),
            f_zwww=d(p, 1, 3), f_wwww=d(p, 0, 4),
        )

    def rho(self, p: Point4) -> float:
        return -1.0 + p.norm_sq + 2.0 * self.derivative(p, 0, 0).real

    def rho_jet(self, p: Point4) -> RhoJet:
        return assemble_rho_jet(p, self.jet(p))


SPHERE = PolyHolo({})
