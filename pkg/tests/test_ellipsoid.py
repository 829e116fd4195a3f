"""Ellipsoid loci, cubic roots, sextic forms and the Beltrami coefficient."""

import math

import numpy as np
import pytest

from pseudoherm.ambient import OffSurfaceError, Point4
from pseudoherm import ellipsoid
from pseudoherm.ellipsoid import (
    DegenerateCurveError,
    EllipsoidParams,
    LocusKind,
    NoPositiveRootError,
    ParameterError,
    SphereError,
    beltrami_coefficient,
    case43_cubic_root,
    cubic_unique_positive_root,
    gamma_curve,
    gamma_locus,
    p_functional,
    part_i_cubic,
    part_ii_cubic,
    plane_point,
    seed_plane_roots,
    sextic_forms,
    sextic_gradients,
    special_locus_b0,
    special_locus_ba,
)

from conftest import on_surface_points


class TestParams:
    @pytest.mark.parametrize("a,b", [(0.5, 0.6), (-0.1, 0.0), (1.0, 0.2), (0.3, -0.1)])
    def test_invalid(self, a, b):
        with pytest.raises(ParameterError):
            EllipsoidParams(a, b)

    def test_surface_point_is_on_surface(self, rng):
        params = EllipsoidParams(0.7, 0.2)
        for p in on_surface_points(params, 20, rng):
            assert abs(params.rho(p)) <= 1e-14


class TestGammaCurve:
    def test_residuals(self):
        params = EllipsoidParams(0.4, 0.2)
        p = gamma_curve(params, 1, 0.0)
        assert abs(params.rho(p)) <= 1e-12
        assert abs(params.contractions(p).rzzLL) <= 1e-12

    def test_equal_axes(self):
        params = EllipsoidParams(0.3, 0.3)
        p = gamma_curve(params, -1, math.pi / 2)
        assert abs(params.rho(p)) <= 1e-12
        assert abs(params.contractions(p).rzzLL) <= 1e-12

    def test_degenerate_b0(self):
        with pytest.raises(DegenerateCurveError):
            gamma_curve(EllipsoidParams(0.4, 0.0), 1, 1.0)

    def test_bad_sign(self):
        with pytest.raises(ValueError):
            gamma_curve(EllipsoidParams(0.4, 0.2), 0, 1.0)

    def test_locus_sampling(self):
        params = EllipsoidParams(0.5, 0.25)
        curve = gamma_locus(params, 1, 64)
        assert curve.kind is LocusKind.GAMMA_PLUS
        assert curve.rho_residual.max() <= 1e-12
        assert curve.defining_residual.max() <= 1e-12

    def test_set_symmetries(self, rng):
        # loci are invariant under conjugation and the antipodal map
        params = EllipsoidParams(0.6, 0.3)
        for t in rng.uniform(0, 2 * math.pi, size=8):
            p = gamma_curve(params, 1, float(t))
            for q in (Point4(p.z.conjugate(), p.w.conjugate()), -p):
                assert abs(params.rho(q)) <= 1e-12
                assert abs(params.contractions(q).rzzLL) <= 1e-12


class TestCubicRoot:
    def test_equal_axes_cubic_at_zero(self):
        # (a=0) factorization 4(s-1)(s+1)^2: unique positive root 1
        s0 = cubic_unique_positive_root(*part_ii_cubic(0.0))
        assert abs(s0 - 1.0) <= 1e-14

    def test_revolution_cubic_interval(self):
        c = part_i_cubic(0.5)
        s0 = cubic_unique_positive_root(*c)
        assert 0.0 < s0 < 0.25
        res = ((c[0] * s0 + c[1]) * s0 + c[2]) * s0 + c[3]
        assert abs(res) <= 1e-14 * max(abs(x) for x in c)

    def test_against_bisection_oracle(self):
        c = part_i_cubic(0.5)

        def p(s):
            return ((c[0] * s + c[1]) * s + c[2]) * s + c[3]

        lo, hi = 0.0, 0.25
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            if p(lo) * p(mid) <= 0:
                hi = mid
            else:
                lo = mid
        assert cubic_unique_positive_root(*c) == pytest.approx(0.5 * (lo + hi), abs=1e-13)

    def test_no_positive_root(self):
        with pytest.raises(NoPositiveRootError):
            cubic_unique_positive_root(1.0, 2.0, 3.0, 4.0)

    def test_sign_normalization(self):
        s1 = cubic_unique_positive_root(*part_i_cubic(0.3))
        c = [-x for x in part_i_cubic(0.3)]
        assert cubic_unique_positive_root(*c) == s1


class TestSpecialLocusB0:
    def test_three_curves(self):
        curves = special_locus_b0(0.5, samples=180)
        assert len(curves) == 3
        kinds = sorted(c.kind.value for c in curves)
        assert kinds == ["gamma+", "special_b0", "special_b0"]
        for c in curves:
            if c.kind is LocusKind.SPECIAL_B0:
                assert c.defining_residual.max() <= 1e-10

    def test_root_continuity_to_sphere(self):
        assert cubic_unique_positive_root(*part_i_cubic(1e-6)) < 1e-6

    def test_sphere_error(self):
        with pytest.raises(SphereError):
            special_locus_b0(0.0)

    def test_umbilicality_via_invariants(self):
        curves = special_locus_b0(0.5, samples=90)
        params = EllipsoidParams(0.5, 0.0)
        for c in curves:
            for i in range(0, 90, 9):
                assert abs(ellipsoid.q11(c.point(i), params)) <= 1e-9


class TestSpecialLocusBA:
    def test_four_curves(self):
        curves = special_locus_ba(0.3, samples=180)
        assert len(curves) == 4
        taus = sorted(c.tau for c in curves)
        s0 = cubic_unique_positive_root(*part_ii_cubic(0.3))
        assert taus == pytest.approx([-math.sqrt(s0), -1.0, 1.0, math.sqrt(s0)])

    def test_tau_one_is_gamma(self):
        # identical parametrization, not merely the same set
        curves = special_locus_ba(0.3, samples=16)
        plus = [c for c in curves if c.kind is LocusKind.GAMMA_PLUS][0]
        params = EllipsoidParams(0.3, 0.3)
        for i, t in enumerate(np.linspace(0, 2 * math.pi, 16, endpoint=False)):
            g = np.array(gamma_curve(params, 1, float(t)).as_real())
            assert np.allclose(plus.points[i], g, atol=1e-14)

    def test_residuals(self):
        curves = special_locus_ba(0.7, samples=180)
        for c in curves:
            assert c.rho_residual.max() <= 1e-10
            tol = 1e-12 if c.kind in (LocusKind.GAMMA_PLUS, LocusKind.GAMMA_MINUS) else 1e-10
            assert c.defining_residual.max() <= tol

    def test_merge_at_sphere_limit(self):
        s0 = cubic_unique_positive_root(*part_ii_cubic(1e-8))
        assert abs(s0 - 1.0) <= 1e-6

    def test_sphere_error(self):
        with pytest.raises(SphereError):
            special_locus_ba(0.0)


class TestPFunctional:
    def test_revolution_point(self):
        assert p_functional(Point4(0, 1), EllipsoidParams(0.5, 0.0)) == pytest.approx(0.25, abs=1e-15)

    def test_sphere(self, rng):
        params = EllipsoidParams(0.0, 0.0)
        for p in on_surface_points(params, 5, rng):
            assert p_functional(p, params) == 0

    def test_vanishes_on_b0_special_curves(self):
        for c in special_locus_b0(0.5, samples=72):
            if c.kind is LocusKind.SPECIAL_B0:
                for i in range(0, 72, 8):
                    assert abs(p_functional(c.point(i), c.params)) <= 1e-10

    def test_off_surface(self):
        with pytest.raises(OffSurfaceError):
            p_functional(Point4(0.2, 1.0), EllipsoidParams(0.5, 0.0))

    def test_factorization(self, rng):
        from pseudoherm.invariants import cartan_q11

        params = EllipsoidParams(0.5, 0.2)
        for p in on_surface_points(params, 50, rng):
            c = params.contractions(p)
            q = cartan_q11(c).Q11
            assert abs(q - c.rzzLL * p_functional(p, params)) <= 1e-12 * (1 + abs(q))


class TestSexticForms:
    def test_homogeneity(self, rng):
        params = EllipsoidParams(0.5, 0.2)
        for _ in range(20):
            x, y, u, v = rng.normal(size=4)
            f1 = sextic_forms(x, y, u, v, params)
            f2 = sextic_forms(2 * x, 2 * y, 2 * u, 2 * v, params)
            assert f2.re_s == pytest.approx(64 * f1.re_s, rel=1e-12, abs=1e-12)
            assert f2.im_s == pytest.approx(64 * f1.im_s, rel=1e-12, abs=1e-12)

    def test_im_vanishes_on_real_plane(self, rng):
        # Re X = Re Y = 0 holds when rho_z and rho_w are real: exact zero
        params = EllipsoidParams(0.7, 0.3)
        for _ in range(10):
            x, u = rng.normal(size=2)
            assert sextic_forms(x, 0.0, u, 0.0, params).im_s == 0.0

    def test_sign_agreement_with_functional(self, rng):
        for (a, b) in ((0.5, 0.2), (0.7, 0.3), (0.3, 0.3), (0.5, 0.0)):
            params = EllipsoidParams(a, b)
            for p in on_surface_points(params, 100, rng):
                pf = p_functional(p, params)
                if abs(pf) <= 1e-8:
                    continue
                s = sextic_forms(*p.as_real(), params)
                if abs(pf.real) > 1e-8:
                    assert pf.real * s.re_s > 0
                if abs(pf.imag) > 1e-8:
                    assert pf.imag * s.im_s > 0

    def test_cleared_factor_is_J5(self, rng):
        # documented empirical ratio: forms equal J^5 times the functional
        params = EllipsoidParams(0.4, 0.1)
        for p in on_surface_points(params, 20, rng):
            c = params.contractions(p)
            pf = p_functional(p, params)
            s = sextic_forms(*p.as_real(), params)
            assert s.re_s == pytest.approx(c.J ** 5 * pf.real, rel=1e-10, abs=1e-12)
            assert s.im_s == pytest.approx(c.J ** 5 * pf.imag, rel=1e-10, abs=1e-12)

    def test_gradients_match_finite_differences(self, rng):
        params = EllipsoidParams(0.6, 0.25)
        h = 1e-6
        for _ in range(10):
            q = rng.normal(size=4)
            _, (g_re, g_im) = sextic_gradients(*q, params)
            for k in range(4):
                e = np.zeros(4)
                e[k] = h
                fp = sextic_forms(*(q + e), params)
                fm = sextic_forms(*(q - e), params)
                assert g_re[k] == pytest.approx((fp.re_s - fm.re_s) / (2 * h), abs=1e-6, rel=1e-6)
                assert g_im[k] == pytest.approx((fp.im_s - fm.im_s) / (2 * h), abs=1e-6, rel=1e-6)


class TestSeedCubics:
    def test_plane_cubic_matches_forms(self, rng):
        params = EllipsoidParams(0.5, 0.2)
        for ss in (1, -1):
            for st in (1, -1):
                c3, c2, c1, c0 = ellipsoid._plane_cubic(params, ss, st)
                for _ in range(5):
                    s = ss * float(rng.uniform(0.1, 2.0))
                    t = st * float(rng.uniform(0.1, 2.0))
                    a, b = params.a, params.b
                    x, y = (math.sqrt(s) / (1 + a), 0.0) if s >= 0 else (0.0, math.sqrt(-s) / (a - 1))
                    u, v = (math.sqrt(t) / (1 + b), 0.0) if t >= 0 else (0.0, math.sqrt(-t) / (b - 1))
                    cubic = ((c3 * s + c2 * t) * s + c1 * t * t) * s + c0 * t ** 3
                    forms = sextic_forms(x, y, u, v, params)
                    assert cubic == pytest.approx(forms.re_s, rel=1e-12, abs=1e-12)

    def test_canonical_root(self):
        params = EllipsoidParams(0.5, 0.2)
        tau = case43_cubic_root(params)
        assert tau < 0
        c = ellipsoid._plane_cubic(params, 1, -1)
        res = ((c[0] * tau + c[1]) * tau + c[2]) * tau + c[3]
        assert abs(res) <= 1e-14 * max(abs(x) for x in c)

    def test_admissible_root_unique_in_canonical_quadrant(self):
        # exactly one sign change of the quadrant cubic on the admissible
        # half-line tau < 0, sampled on a log-spaced grid
        for (a, b) in ((0.5, 0.2), (0.7, 0.3), (0.4, 0.1), (0.9, 0.45)):
            c = ellipsoid._plane_cubic(EllipsoidParams(a, b), 1, -1)
            taus = -np.logspace(-4, 2, 400)
            vals = ((c[0] * taus + c[1]) * taus + c[2]) * taus + c[3]
            changes = int(np.sum(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0))
            assert changes == 1

    def test_revolution_limit_recovers_part_i_cubic(self):
        # the (s>0, t>0) quadrant cubic at b=0 is (a/2) times the b=0 cubic
        a = 0.5
        c = ellipsoid._plane_cubic(EllipsoidParams(a, 0.0), 1, 1)
        ref = part_i_cubic(a)
        for got, want in zip(c, ref):
            assert -got == pytest.approx(0.5 * a * want, abs=1e-15)

    def test_equal_axes_limit(self):
        a = 0.3
        s0 = cubic_unique_positive_root(*part_ii_cubic(a))
        tau = case43_cubic_root(EllipsoidParams(a, a - 1e-6))
        assert tau == pytest.approx(-1.0 / s0, abs=1e-3)

    def test_seed_roots_lie_on_cone(self):
        params = EllipsoidParams(0.5, 0.2)
        roots = seed_plane_roots(params)
        assert roots
        for ss, st, tau in roots:
            p = plane_point(params, tau * st, st * 1.0)
            forms = sextic_forms(*p.as_real(), params)
            assert abs(forms.re_s) <= 1e-12
            assert abs(forms.im_s) <= 1e-12
            assert abs(p_functional(p, params)) <= 1e-10

    def test_degenerate_parameters(self):
        with pytest.raises(ParameterError):
            case43_cubic_root(EllipsoidParams(0.5, 0.0))
        with pytest.raises(ParameterError):
            case43_cubic_root(EllipsoidParams(0.5, 0.5))


class TestBeltrami:
    def test_gamma_point(self):
        params = EllipsoidParams(0.4, 0.2)
        p = gamma_curve(params, 1, 1.2)
        assert abs(beltrami_coefficient(p, params)) <= 1e-12

    def test_revolution_point(self):
        assert beltrami_coefficient(Point4(0, 1), EllipsoidParams(0.5, 0.0)) == pytest.approx(-0.5, abs=1e-15)

    def test_sphere(self, rng):
        params = EllipsoidParams(0.0, 0.0)
        for p in on_surface_points(params, 5, rng):
            assert beltrami_coefficient(p, params) == 0

    def test_off_surface(self):
        with pytest.raises(OffSurfaceError):
            beltrami_coefficient(Point4(0.5, 1.0), EllipsoidParams(0.5, 0.0))
