"""Tests for characteristic functions, Erdelyi-Kober integrals, the damped
d'Alembert average, and the density-representation residual checks."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from barenblatt.family import new_family, pdf, support_radius
from barenblatt.specfun import QuadratureConfig, bessel_j
from barenblatt.transforms import (
    EKParams,
    char_fn_1d,
    char_fn_projection,
    char_fn_radial,
    ek_integral,
    epd_dalembert_1d,
    radial_prefactor_report,
    velocity_representation_residual,
    _g_bessel_ratio,
    _mean_cos_projection,
    _power_endpoint_integral,
)

# Reference values computed with mpmath at 34 significant digits.
WIGNER_CF = {
    0.5: 0.8801011714898670319194,
    3.0: -0.09222795270918853605759,
    10.0: 0.006683312417585004557899,
}
# alpha=0.7, beta=2.5, gamma=0.8, c=1.5 at xi=3.1, t=1.2
CF1D_GENERIC = -0.1228628156137441873026
# alpha=0.4, beta=1.5, gamma=1.2, c=1.3, d=3 at |xi|=2.5, t=0.8
CF_RADIAL_D3 = 0.5421235467022284921519
# alpha=0.5, beta=2.0, gamma=1.5, c=1.0, d=2 at |xi|=4.0, t=1.0
CF_RADIAL_D2 = 0.2590159554106407750515
# Gamma(1/beta+gamma+1)/Gamma(1/beta) * EK[cos(xi v t^alpha)](c) for the
# semicircle member at t=1.3, xi=1.7
EK_COSINE_WIGNER = -0.009270679569526199663456


def wigner():
    return new_family(0.5, 2.0, 0.5, 2.0, 1)


MEMBERS_1D = [
    (0.5, 2.0, 0.5, 2.0),
    (0.7, 2.5, 0.8, 1.5),
    (1.0, 1.5, 2.0, 0.7),
    (0.3, 3.0, 1.0, 1.0),
]


class TestPowerEndpointIntegral:
    def test_beta_function_all_exponent_signs(self):
        # with g = 1 the helper must reproduce B(p0+1, p1+1) through every
        # combination of singular / regular endpoints
        cfg = QuadratureConfig()
        one = lambda s: np.ones_like(np.asarray(s, dtype=float))
        for p0 in (-0.9, -0.3, 0.0, 1.7):
            for p1 in (-0.7, -0.5, 0.0, 2.4):
                want = math.exp(
                    math.lgamma(p0 + 1.0)
                    + math.lgamma(p1 + 1.0)
                    - math.lgamma(p0 + p1 + 2.0)
                )
                got = _power_endpoint_integral(one, p0, p1, cfg)
                assert got == pytest.approx(want, rel=1e-11)

    def test_seed_points_do_not_change_value(self):
        cfg = QuadratureConfig()
        g = lambda s: np.cos(7.0 * s)
        base = _power_endpoint_integral(g, -0.5, 1.5, cfg)
        seeded = _power_endpoint_integral(g, -0.5, 1.5, cfg, points=[0.13, 0.5, 0.77])
        assert seeded == pytest.approx(base, abs=1e-12)

    def test_rejects_non_integrable_exponents(self):
        cfg = QuadratureConfig()
        one = lambda s: np.ones_like(np.asarray(s, dtype=float))
        with pytest.raises(ValueError):
            _power_endpoint_integral(one, -1.0, 0.0, cfg)
        with pytest.raises(ValueError):
            _power_endpoint_integral(one, 0.0, -1.2, cfg)


class TestCharFn1d:
    def test_semicircle_frozen_values(self):
        p = wigner()
        for xi, want in WIGNER_CF.items():
            assert char_fn_1d(p, xi, 1.0) == pytest.approx(want, abs=1e-11)

    def test_semicircle_bessel_closed_form(self):
        # the semicircle member transforms to J_1(2 xi sqrt(t))/(xi sqrt(t))
        p = wigner()
        for s in np.linspace(0.1, 20.0, 23):
            for t in (0.5, 1.0, 2.0):
                xi = s / math.sqrt(t)
                want = bessel_j(1.0, 2.0 * s) / s
                assert abs(char_fn_1d(p, xi, t) - want) <= 1e-8

    def test_generic_frozen_value(self):
        p = new_family(0.7, 2.5, 0.8, 1.5, 1)
        assert char_fn_1d(p, 3.1, 1.2) == pytest.approx(CF1D_GENERIC, abs=1e-11)

    def test_zero_frequency_is_exactly_one(self):
        assert char_fn_1d(wigner(), 0.0, 0.37) == 1.0

    def test_even_in_xi(self):
        p = new_family(0.7, 2.5, 0.8, 1.5, 1)
        for xi in (0.3, 1.9, 6.0):
            assert char_fn_1d(p, -xi, 0.8) == pytest.approx(
                char_fn_1d(p, xi, 0.8), abs=1e-13
            )

    def test_bounded_by_one(self):
        for alpha, beta_exp, gamma_exp, c in MEMBERS_1D:
            p = new_family(alpha, beta_exp, gamma_exp, c, 1)
            for xi in (0.1, 1.0, 4.0, 15.0):
                assert abs(char_fn_1d(p, xi, 1.3)) <= 1.0 + 1e-10

    @settings(max_examples=30, deadline=None)
    @given(
        xi=st.floats(0.05, 8.0),
        t=st.floats(0.2, 3.0),
        member=st.sampled_from(MEMBERS_1D),
    )
    def test_depends_on_xi_through_self_similar_scale(self, xi, t, member):
        # u(., t) is a rescaling of u(., 1), so the transform at (xi, t)
        # equals the transform at (xi t^alpha, 1)
        p = new_family(*member, 1)
        assert char_fn_1d(p, xi, t) == pytest.approx(
            char_fn_1d(p, xi * t**p.alpha, 1.0), abs=1e-10
        )

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            char_fn_1d(new_family(0.5, 2.0, 1.0, 1.0, 2), 1.0, 1.0)
        with pytest.raises(ValueError):
            char_fn_1d(wigner(), 1.0, 0.0)


class TestBesselRatio:
    def test_half_integer_closed_form_across_series_seam(self):
        # J_{1/2}(w)/(w/2)^{1/2} = 2 sin(w) / (sqrt(pi) w); the series route
        # (|w| < 0.2) and the quotient route must both match it
        for w in (1e-3, 0.05, 0.19, 0.21, 1.0, 5.0, 30.0):
            want = 2.0 * math.sin(w) / (math.sqrt(math.pi) * w)
            got = float(_g_bessel_ratio(0.5, w))
            assert got == pytest.approx(want, rel=1e-13)

    def test_value_at_zero(self):
        # limit is 1/Gamma(mu+1)
        for mu, want in [(0.0, 1.0), (0.5, 2.0 / math.sqrt(math.pi)), (1.5, 1.0 / math.gamma(2.5))]:
            assert float(_g_bessel_ratio(mu, 0.0)) == pytest.approx(want, rel=1e-14)


class TestCharFnRadial:
    def test_frozen_values(self):
        p3 = new_family(0.4, 1.5, 1.2, 1.3, 3)
        assert char_fn_radial(p3, 2.5, 0.8) == pytest.approx(CF_RADIAL_D3, abs=5e-11)
        p2 = new_family(0.5, 2.0, 1.5, 1.0, 2)
        assert char_fn_radial(p2, 4.0, 1.0) == pytest.approx(CF_RADIAL_D2, abs=5e-11)

    def test_zero_frequency(self):
        p = new_family(0.5, 2.0, 1.0, 1.5, 3)
        assert char_fn_radial(p, 0.0, 0.7) == 1.0
        # the entire-quotient form has no 0/0 near zero either
        assert char_fn_radial(p, 1e-8, 0.7) == pytest.approx(1.0, abs=1e-10)

    def test_bounded_by_one(self):
        for d in (2, 3, 5):
            p = new_family(0.4, 1.5, 1.2, 1.3, d)
            for xi in (0.5, 2.0, 8.0, 20.0):
                assert abs(char_fn_radial(p, xi, 1.1)) <= 1.0 + 1e-10

    def test_self_similar_scale(self):
        p = new_family(0.7, 2.5, 0.8, 1.5, 3)
        for xi, t in [(0.8, 0.4), (3.0, 2.2)]:
            assert char_fn_radial(p, xi, t) == pytest.approx(
                char_fn_radial(p, xi * t**p.alpha, 1.0), abs=1e-10
            )

    def test_domain_errors(self):
        p = new_family(0.5, 2.0, 1.0, 1.0, 2)
        with pytest.raises(ValueError):
            char_fn_radial(wigner(), 1.0, 1.0)
        with pytest.raises(ValueError):
            char_fn_radial(p, -1.0, 1.0)
        with pytest.raises(ValueError):
            char_fn_radial(p, 1.0, -0.5)


class TestCharFnProjection:
    def test_inner_average_d3_closed_form(self):
        # in d = 3 the projection factor is uniform on (0, 1), so the inner
        # average is sin(a)/a
        for a in (0.0, 0.3, 2.0, 11.0, 40.0):
            want = 1.0 if a == 0.0 else math.sin(a) / a
            assert float(_mean_cos_projection(3, a)) == pytest.approx(want, abs=1e-10)

    def test_inner_average_d2_is_bessel_j0(self):
        # d = 2: (2/pi) int_0^{pi/2} cos(a sin theta) dtheta = J_0(a)
        for a in (0.1, 1.0, 4.0, 17.0):
            assert float(_mean_cos_projection(2, a)) == pytest.approx(
                float(bessel_j(0.0, a)), abs=1e-10
            )

    def test_matches_bessel_route(self):
        for d in (2, 3, 4, 5):
            p = new_family(0.5, 2.0, 1.0, 1.5, d)
            for xi in (0.5, 2.0, 6.0):
                assert abs(
                    char_fn_projection(p, xi, 0.9) - char_fn_radial(p, xi, 0.9)
                ) <= 1e-8

    def test_frozen_value(self):
        p3 = new_family(0.4, 1.5, 1.2, 1.3, 3)
        assert char_fn_projection(p3, 2.5, 0.8) == pytest.approx(CF_RADIAL_D3, abs=1e-8)

    def test_zero_frequency(self):
        p = new_family(0.5, 2.0, 1.0, 1.5, 2)
        assert char_fn_projection(p, 0.0, 1.0) == 1.0

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            char_fn_projection(wigner(), 1.0, 1.0)


class TestEKParams:
    def test_validation(self):
        with pytest.raises(ValueError):
            EKParams(zeta=0.0, mu=0.0, eta=1.0)
        with pytest.raises(ValueError):
            EKParams(zeta=0.0, mu=1.0, eta=-2.0)
        with pytest.raises(ValueError):
            EKParams(zeta=-1.0, mu=1.0, eta=1.0)

    def test_fields(self):
        ek = EKParams(zeta=-0.5, mu=1.5, eta=2.0)
        assert (ek.zeta, ek.mu, ek.eta) == (-0.5, 1.5, 2.0)


class TestEkIntegral:
    def test_constant_law(self):
        # for f = 1 the value is Gamma(zeta+1)/Gamma(zeta+mu+1) regardless
        # of x and eta, including singular endpoints (zeta < 0, mu < 1)
        one = lambda s: np.ones_like(np.asarray(s, dtype=float))
        for zeta in (-0.9, -0.5, 0.0, 1.7):
            for mu in (0.1, 0.4, 1.0, 3.2):
                want = math.exp(math.lgamma(zeta + 1.0) - math.lgamma(zeta + mu + 1.0))
                vals = [
                    ek_integral(EKParams(zeta, mu, eta), one, x)
                    for eta in (0.5, 1.0, 2.0, 5.0)
                    for x in (0.3, 2.3)
                ]
                for got in vals:
                    assert got == pytest.approx(want, rel=1e-10)

    def test_identity_parameters_give_plain_average(self):
        # zeta=0, mu=1, eta=1 turns the operator into the mean of f on (0, x)
        ek = EKParams(0.0, 1.0, 1.0)
        got = ek_integral(ek, lambda s: np.asarray(s) ** 2, 3.0)
        assert got == pytest.approx(3.0, rel=1e-11)

    def test_power_law(self):
        # f = tau^s maps to x^s Gamma(zeta+1+s/eta)/Gamma(zeta+mu+1+s/eta)
        x = 1.7
        for zeta, mu, eta in [(-0.5, 0.4, 2.0), (0.3, 2.0, 0.8), (1.0, 1.0, 1.0)]:
            for s in (0.5, 1.0, 2.0, 3.7):
                want = x**s * math.exp(
                    math.lgamma(zeta + 1.0 + s / eta)
                    - math.lgamma(zeta + mu + 1.0 + s / eta)
                )
                got = ek_integral(
                    EKParams(zeta, mu, eta), lambda v: np.asarray(v) ** s, x
                )
                assert got == pytest.approx(want, rel=1e-9)

    def test_cosine_reproduces_char_fn_frozen(self):
        p = wigner()
        t, xi = 1.3, 1.7
        ek = EKParams(1.0 / p.beta_exp - 1.0, p.gamma_exp + 1.0, p.beta_exp)
        raw = ek_integral(ek, lambda v: np.cos(xi * np.asarray(v) * t**p.alpha), p.c)
        got = (
            math.exp(
                math.lgamma(1.0 / p.beta_exp + p.gamma_exp + 1.0)
                - math.lgamma(1.0 / p.beta_exp)
            )
            * raw
        )
        assert got == pytest.approx(EK_COSINE_WIGNER, abs=1e-11)

    def test_cosine_reproduces_char_fn_grid(self):
        for alpha, beta_exp, gamma_exp, c in MEMBERS_1D:
            p = new_family(alpha, beta_exp, gamma_exp, c, 1)
            ek = EKParams(1.0 / beta_exp - 1.0, gamma_exp + 1.0, beta_exp)
            scale = math.exp(
                math.lgamma(1.0 / beta_exp + gamma_exp + 1.0)
                - math.lgamma(1.0 / beta_exp)
            )
            for xi, t in [(0.7, 0.6), (2.5, 1.4)]:
                raw = ek_integral(
                    ek, lambda v: np.cos(xi * np.asarray(v) * t**alpha), c
                )
                assert scale * raw == pytest.approx(
                    char_fn_1d(p, xi, t), abs=1e-8
                )

    def test_domain_error(self):
        with pytest.raises(ValueError):
            ek_integral(EKParams(0.0, 1.0, 1.0), lambda s: np.asarray(s), 0.0)


class TestEpdDalembert:
    def test_constant_initial_data_is_preserved(self):
        one = lambda y: np.ones_like(np.asarray(y, dtype=float))
        for xi_param in (0.6, 1.0, 1.5, 2.5):
            got = epd_dalembert_1d(one, xi_param, 1.3, 0.4, 0.9)
            assert got == pytest.approx(1.0, abs=1e-10)

    def test_t_zero_returns_initial_data(self):
        f = lambda x: np.cos(1.3 * np.asarray(x, dtype=float))
        assert epd_dalembert_1d(f, 1.5, 1.0, 0.4, 0.0) == math.cos(0.52)

    def test_even_in_t(self):
        f = lambda x: np.exp(-np.asarray(x, dtype=float) ** 2)
        a = epd_dalembert_1d(f, 1.2, 2.0, 0.3, 0.8)
        b = epd_dalembert_1d(f, 1.2, 2.0, 0.3, -0.8)
        assert a == pytest.approx(b, abs=1e-13)

    def test_cosine_data_separates(self):
        # plane-wave data cos(kx) evolves as cos(kx) times a function of t
        # alone, so u(x,t)/cos(kx) must be x-independent
        k = 1.3
        f = lambda x: np.cos(k * np.asarray(x, dtype=float))
        m = epd_dalembert_1d(f, 1.5, 2.0, 0.0, 0.7)
        for x in (0.3, -1.1, 2.0):
            got = epd_dalembert_1d(f, 1.5, 2.0, x, 0.7)
            assert got == pytest.approx(math.cos(k * x) * m, abs=1e-10)

    def test_cosine_data_fd_residual_is_second_order(self):
        # the average solves u_tt + (2 xi / t) u_t = c^2 u_xx; central
        # differences on it leave only the O(h^2) truncation term
        xi_param, c, k, x, t = 1.5, 1.0, 1.3, 0.4, 0.9
        f = lambda y: np.cos(k * np.asarray(y, dtype=float))

        def residual(h):
            u = lambda xx, tt: epd_dalembert_1d(f, xi_param, c, xx, tt)
            u0 = u(x, t)
            u_tt = (u(x, t + h) - 2.0 * u0 + u(x, t - h)) / h**2
            u_t = (u(x, t + h) - u(x, t - h)) / (2.0 * h)
            u_xx = (u(x + h, t) - 2.0 * u0 + u(x - h, t)) / h**2
            return u_tt + 2.0 * xi_param / t * u_t - c**2 * u_xx

        r1, r2 = abs(residual(0.04)), abs(residual(0.02))
        assert r1 / r2 == pytest.approx(4.0, abs=1.6)

    def test_domain_error(self):
        one = lambda y: np.ones_like(np.asarray(y, dtype=float))
        with pytest.raises(ValueError):
            epd_dalembert_1d(one, 0.0, 1.0, 0.0, 1.0)


class TestVelocityRepresentation:
    def test_residual_vanishes_on_interior_grid(self):
        for alpha, beta_exp, gamma_exp, c in MEMBERS_1D:
            p = new_family(alpha, beta_exp, gamma_exp, c, 1)
            for t in (0.4, 1.0, 2.7):
                xs = np.linspace(-0.98, 0.98, 21) * support_radius(p, t)
                res = velocity_representation_residual(p, xs, t)
                scale = np.maximum(pdf(p, xs, t), 1e-3)
                assert np.all(np.abs(res) <= 1e-12 * scale)

    def test_outside_support_exactly_zero(self):
        p = wigner()
        xs = np.array([-5.0, 2.0001, 3.0])
        assert np.all(velocity_representation_residual(p, xs, 1.0) == 0.0)

    def test_scalar_in_float_out(self):
        out = velocity_representation_residual(wigner(), 0.3, 1.0)
        assert isinstance(out, float)
        assert abs(out) <= 1e-15

    @settings(max_examples=40, deadline=None)
    @given(
        member=st.sampled_from(MEMBERS_1D),
        frac=st.floats(-0.999, 0.999),
        t=st.floats(0.1, 5.0),
    )
    def test_residual_property(self, member, frac, t):
        p = new_family(*member, 1)
        x = frac * support_radius(p, t)
        res = velocity_representation_residual(p, x, t)
        assert abs(res) <= 1e-12 * max(pdf(p, x, t), 1e-3)

    def test_requires_1d(self):
        with pytest.raises(ValueError):
            velocity_representation_residual(
                new_family(0.5, 2.0, 1.0, 1.0, 2), 0.3, 1.0
            )


class TestRadialPrefactorReport:
    def test_corrected_variant_closes(self):
        for d in (2, 3, 4, 5):
            p = new_family(0.5, 2.0, 1.0, 1.5, d)
            for t in (0.5, 1.0, 2.3):
                for frac in (0.1, 0.35, 0.6, 0.9):
                    r = frac * support_radius(p, t)
                    rep = radial_prefactor_report(p, r, t)
                    assert abs(rep.residual_corrected_form) <= 1e-12

    def test_stated_variant_misses_by_factor_r(self):
        # the stated identity evaluates to r times the density, so its
        # relative residual is r - 1; in particular it happens to close at
        # r = 1 and only there
        p = new_family(0.4, 1.5, 1.2, 1.3, 3)
        for r in (0.2, 0.65, 1.0, 1.2):
            rep = radial_prefactor_report(p, r, 1.1)
            assert rep.residual_paper_form == pytest.approx(
                r - 1.0, abs=1e-9 * max(1.0, r)
            )

    def test_matching_variant_recorded(self):
        p = new_family(0.5, 2.0, 1.5, 1.0, 2)
        rep = radial_prefactor_report(p, 0.4, 1.0)
        assert rep.matching_variant == "corrected"

    def test_report_carries_parameters(self):
        p = new_family(0.5, 2.0, 1.0, 1.5, 4)
        rep = radial_prefactor_report(p, 0.7, 1.3)
        assert (rep.d, rep.alpha, rep.beta_exp, rep.gamma_exp, rep.c) == (
            4,
            0.5,
            2.0,
            1.0,
            1.5,
        )
        assert (rep.r, rep.t) == (0.7, 1.3)

    def test_both_variants_vanish_at_the_front(self):
        p = new_family(0.5, 2.0, 1.2, 1.0, 3)
        t = 1.0
        r = (1.0 - 1e-7) * support_radius(p, t)
        rep = radial_prefactor_report(p, r, t)
        u = pdf(p, np.array([r, 0.0, 0.0]), t)
        stated = u * (1.0 + rep.residual_paper_form)
        corrected = u * (1.0 + rep.residual_corrected_form)
        assert abs(stated) <= 1e-5 and abs(corrected) <= 1e-5

    def test_domain_errors(self):
        p = new_family(0.5, 2.0, 1.0, 1.0, 2)
        with pytest.raises(ValueError):
            radial_prefactor_report(p, 0.0, 1.0)
        with pytest.raises(ValueError):
            radial_prefactor_report(p, 1.5, 1.0)
        with pytest.raises(ValueError):
            radial_prefactor_report(wigner(), 0.3, 1.0)
