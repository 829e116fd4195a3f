"""Shared fixtures and sampling helpers for the test suite."""

import numpy as np
import pytest

from pseudoherm.ambient import Point4, PolyHolo
from pseudoherm.ellipsoid import EllipsoidParams


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


def on_surface_points(params: EllipsoidParams, n: int, rng) -> list[Point4]:
    """Random points of the ellipsoid: Gaussian directions, radially scaled."""
    return [params.surface_point(*d) for d in rng.normal(size=(n, 4))]


def random_poly_surface(rng, scale: float = 0.05, degree: int = 4) -> PolyHolo:
    """Random holomorphic polynomial perturbation with small coefficients.

    Constant and linear terms are omitted so the origin stays interior and
    radial scaling onto the surface is well defined.
    """
    coeffs = {}
    for i in range(degree + 1):
        for k in range(degree + 1 - i):
            if i + k >= 2:
                coeffs[(i, k)] = scale * complex(rng.normal(), rng.normal())
    return PolyHolo(coeffs)


def project_to_surface(holo: PolyHolo, direction) -> Point4:
    """Scale a direction onto {rho = 0} by bisection plus Newton polish."""
    d = np.asarray(direction, dtype=float)
    d = d / np.linalg.norm(d)
    p = Point4.from_real(*d)

    def rho(lam):
        return holo.rho(Point4(lam * p.z, lam * p.w))

    lo, hi = 0.0, 1.0
    while rho(hi) < 0.0:
        hi *= 2.0
        if hi > 64.0:
            raise RuntimeError("no surface crossing along the ray")
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if rho(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    lam = 0.5 * (lo + hi)
    return Point4(lam * p.z, lam * p.w)
