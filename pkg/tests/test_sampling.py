import math

import numpy as np
import pytest

from barenblatt.family import (
    ball_probability,
    cdf_1d,
    new_family,
    radial_moment,
    support_radius,
)
from barenblatt.sampling import (
    KSResult,
    RngStream,
    _telegraph_integral,
    ks_test,
    parallel_draw,
    sample_beta,
    sample_direction,
    sample_epd_telegraph,
    sample_position,
    sample_position_1d,
    sample_projection_w,
    sample_velocity,
)
from barenblatt.specfun import beta_fn, integrate, reg_inc_beta

SEED = 20260816


class TestRngStream:
    def test_reproducible(self):
        a = RngStream(SEED, 3).uniform_open(50)
        b = RngStream(SEED, 3).uniform_open(50)
        assert np.array_equal(a, b)

    def test_streams_differ(self):
        a = RngStream(SEED, 0).uniform_open(50)
        b = RngStream(SEED, 1).uniform_open(50)
        assert not np.array_equal(a, b)

    def test_open_interval(self):
        u = RngStream(SEED).uniform_open(10000)
        assert np.all(u > 0.0) and np.all(u < 1.0)

    def test_substream_pure_and_spawn_schedule(self):
        base = RngStream(SEED, 7)
        ids = [base.substream(k).stream_id for k in range(4)]
        assert len(set(ids)) == 4
        # substream does not consume state; spawn(k-th) == substream(k)
        spawned = [base.spawn().stream_id for _ in range(4)]
        assert spawned == ids

    def test_normals_moments(self):
        z = RngStream(SEED, 1).normals(100000)
        assert abs(float(np.mean(z))) <= 3.0 / math.sqrt(z.size)
        assert abs(float(np.var(z)) - 1.0) <= 3.0 * math.sqrt(2.0 / z.size)

    def test_normals_deterministic(self):
        assert np.array_equal(RngStream(5, 5).normals(999), RngStream(5, 5).normals(999))


class TestSampleBeta:
    def test_open_bounds(self):
        y = sample_beta(RngStream(SEED), 0.3, 0.3, 20000)
        assert np.all(y > 0.0) and np.all(y < 1.0)

    def test_uniform_case_ks(self):
        y = sample_beta(RngStream(SEED, 2), 1.0, 1.0, 100000)
        res = ks_test(y, lambda x: x, alpha=0.01)
        assert res.passed

    def test_mean_beta_2_3(self):
        y = sample_beta(RngStream(SEED, 4), 2.0, 3.0, 1000000)
        sigma = math.sqrt(2.0 * 3.0 / (5.0**2 * 6.0) / y.size)
        assert abs(float(np.mean(y)) - 0.4) <= 3.0 * sigma

    def test_scalar_draw(self):
        v = sample_beta(RngStream(SEED), 2.0, 3.0)
        assert isinstance(v, float) and 0.0 < v < 1.0

    def test_domain(self):
        with pytest.raises(ValueError):
            sample_beta(RngStream(SEED), 0.0, 1.0)


class TestSampleVelocity:
    def family(self):
        return new_family(0.5, 2.5, 0.8, 1.5, 1)

    def test_range(self):
        p = self.family()
        v = sample_velocity(RngStream(SEED, 8), p, 20000)
        assert np.all(v > 0.0) and np.all(v < p.c)

    def test_ks_against_cdf(self):
        p = self.family()
        v = sample_velocity(RngStream(SEED, 9), p, 100000)
        cdf = lambda x: reg_inc_beta(
            (x / p.c) ** p.beta_exp, 1.0 / p.beta_exp, p.gamma_exp + 1.0
        )
        assert ks_test(v, cdf, alpha=0.01).passed

    def test_second_moment(self):
        p = self.family()
        v = sample_velocity(RngStream(SEED, 10), p, 200000)
        ref = p.c**2 * beta_fn(3.0 / p.beta_exp, p.gamma_exp + 1.0) / beta_fn(
            1.0 / p.beta_exp, p.gamma_exp + 1.0
        )
        sigma = float(np.std(v**2)) / math.sqrt(v.size)
        assert abs(float(np.mean(v**2)) - ref) <= 3.0 * sigma

    def test_requires_1d(self):
        p = new_family(0.5, 2.0, 1.0, 1.0, 2)
        with pytest.raises(ValueError):
            sample_velocity(RngStream(SEED), p)


class TestSamplePosition1d:
    def test_support_and_symmetry(self):
        p = new_family(0.5, 2.5, 0.8, 1.5, 1)
        t = 1.7
        x = sample_position_1d(RngStream(SEED, 11), p, t, 100000)
        assert np.all(np.abs(x) < support_radius(p, t))
        n_pos = int(np.count_nonzero(x > 0.0))
        assert abs(n_pos - x.size / 2) <= 3.0 * math.sqrt(x.size / 4.0)

    def test_ks_against_cdf(self):
        p = new_family(1.0, 2.0, 1.0, 1.0, 1)
        t = 0.9
        x = sample_position_1d(RngStream(SEED, 12), p, t, 100000)
        assert ks_test(x, lambda s: cdf_1d(p, s, t), alpha=0.01).passed

    def test_msd(self):
        p = new_family(0.5, 2.0, 0.5, 2.0, 1)
        t = 1.3
        x = sample_position_1d(RngStream(SEED, 13), p, t, 200000)
        sigma = float(np.std(x**2)) / math.sqrt(x.size)
        assert abs(float(np.mean(x**2)) - radial_moment(p, 2.0, t)) <= 3.0 * sigma


class TestSampleDirection:
    @pytest.mark.parametrize("d", [2, 3, 5])
    def test_unit_norm(self, d):
        theta = sample_direction(RngStream(SEED, 14), d, 5000)
        assert np.max(np.abs(np.sum(theta**2, axis=1) - 1.0)) <= 1e-14

    @pytest.mark.parametrize("d", [2, 3, 5])
    def test_coordinate_moments(self, d):
        theta = sample_direction(RngStream(SEED, 15), d, 100000)
        n = theta.shape[0]
        # Var(Theta_1) = 1/d; Var(Theta_1^2) = 3/(d(d+2)) - 1/d^2
        assert abs(float(np.mean(theta[:, 0]))) <= 3.0 * math.sqrt(1.0 / d / n)
        var_t2 = 3.0 / (d * (d + 2)) - 1.0 / d**2
        assert abs(float(np.mean(theta[:, 0] ** 2)) - 1.0 / d) <= 3.0 * math.sqrt(var_t2 / n)

    def test_scalar_call(self):
        v = sample_direction(RngStream(SEED), 3)
        assert v.shape == (3,)
        assert float(np.sum(v**2)) == pytest.approx(1.0, abs=1e-14)

    def test_domain(self):
        with pytest.raises(ValueError):
            sample_direction(RngStream(SEED), 1)


class TestSamplePosition:
    @pytest.mark.parametrize("raw", [(0.3, 1.5, 0.7, 1.2, 2), (1.0, 3.0, 2.0, 0.8, 3)])
    def test_support(self, raw):
        p = new_family(*raw)
        t = 1.4
        x = sample_position(RngStream(SEED, 16), p, t, 20000)
        assert x.shape == (20000, p.d)
        assert np.all(np.sqrt(np.sum(x**2, axis=1)) < support_radius(p, t))

    @pytest.mark.parametrize("raw", [(0.3, 1.5, 0.7, 1.2, 2), (1.0, 3.0, 2.0, 0.8, 3)])
    def test_radius_ks(self, raw):
        p = new_family(*raw)
        t = 0.8
        x = sample_position(RngStream(SEED, 17), p, t, 100000)
        radii = np.sqrt(np.sum(x**2, axis=1))
        assert ks_test(radii, lambda a: ball_probability(p, a, t), alpha=0.01).passed

    def test_msd(self):
        p = new_family(0.3, 1.5, 0.7, 1.2, 2)
        t = 2.1
        x = sample_position(RngStream(SEED, 18), p, t, 200000)
        r2 = np.sum(x**2, axis=1)
        sigma = float(np.std(r2)) / math.sqrt(r2.size)
        assert abs(float(np.mean(r2)) - radial_moment(p, 2.0, t)) <= 3.0 * sigma

    def test_delegates_in_1d(self):
        p = new_family(1.0, 2.0, 1.0, 1.0, 1)
        a = sample_position(RngStream(SEED, 19), p, 1.0, 100)
        b = sample_position_1d(RngStream(SEED, 19), p, 1.0, 100)
        assert np.array_equal(a, b)


class TestSampleProjectionW:
    def test_d3_uniform(self):
        w = sample_projection_w(RngStream(SEED, 20), 3, 100000)
        assert ks_test(w, lambda x: np.clip(x, 0.0, 1.0), alpha=0.01).passed

    def test_d2_square_is_arcsine(self):
        w = sample_projection_w(RngStream(SEED, 21), 2, 100000)
        arcsine_cdf = lambda x: 2.0 / math.pi * np.arcsin(np.sqrt(np.clip(x, 0.0, 1.0)))
        assert ks_test(w**2, arcsine_cdf, alpha=0.01).passed

    def test_arcsine_closed_form_matches_beta(self):
        xs = np.linspace(0.0, 1.0, 41)
        ref = 2.0 / math.pi * np.arcsin(np.sqrt(xs))
        assert np.max(np.abs(reg_inc_beta(xs, 0.5, 0.5) - ref)) <= 1e-13

    def test_density_normalizes_d5(self):
        d = 5
        dens = lambda w: 2.0 * (1.0 - w * w) ** ((d - 3) / 2.0) / beta_fn(0.5, (d - 1) / 2.0)
        assert integrate(dens, 0.0, 1.0) == pytest.approx(1.0, abs=1e-10)


class TestTelegraph:
    def test_speed_bound(self):
        rng = RngStream(SEED, 22)
        u = sample_epd_telegraph(rng, 2.0, 1.5, 1.0, 1e-4, 2000)
        assert np.all(np.abs(u) <= 1.5 * 1.0)

    def test_domain(self):
        with pytest.raises(ValueError):
            sample_epd_telegraph(RngStream(SEED), 2.0, 1.0, 1.0, 1.5)
        with pytest.raises(ValueError):
            sample_epd_telegraph(RngStream(SEED), -1.0, 1.0, 1.0, 1e-3)

    def test_flip_count_mean(self):
        # flips on [eps, t] are Poisson with mean xi ln(t/eps)
        xi, t, eps = 2.0, 1.0, 1e-4
        rng = RngStream(SEED, 23)
        counts = []
        for _ in range(2000):
            child = rng.spawn()
            child.signs()
            counts.append(_telegraph_integral(child, xi, t, eps)[1])
        mean = xi * math.log(t / eps)
        sem = math.sqrt(mean / len(counts))
        assert abs(float(np.mean(counts)) - mean) <= 3.0 * sem

    def test_law_matches_family(self):
        # xi = 2 maps to (alpha, beta, gamma) = (1, 2, 1)
        xi, c, t = 2.0, 1.0, 1.0
        p = new_family(1.0, 2.0, xi - 1.0, c, 1)
        u = sample_epd_telegraph(RngStream(SEED, 24), xi, c, t, 1e-6, 20000)
        res = ks_test(u, lambda x: cdf_1d(p, x, t), alpha=0.01)
        assert res.statistic < 0.02

    def test_eps_coupling(self):
        # same substream, smaller eps: the event sequence is extended, so
        # the integrals differ only by boundary terms of size O(eps)
        xi, t = 1.5, 1.0
        eps1, eps2 = 1e-2, 1e-4
        c1 = RngStream(77, 0).substream(5)
        c2 = RngStream(77, 0).substream(5)
        i1, k1 = _telegraph_integral(c1, xi, t, eps1)
        i2, k2 = _telegraph_integral(c2, xi, t, eps2)
        assert k2 >= k1
        assert abs(i1 - i2) <= 2.0 * (k2 - k1) * eps1 + eps1 + eps2


class TestKsTest:
    def test_fields_and_critical_value(self):
        x = RngStream(SEED, 25).uniform_open(100000)
        res = ks_test(x, lambda s: s, alpha=0.01)
        assert isinstance(res, KSResult)
        assert res.n == 100000
        assert res.critical_value == pytest.approx(1.6277 / math.sqrt(1e5), rel=1e-4)
        assert 0.0 <= res.statistic <= 1.0

    def test_detects_shift(self):
        x = RngStream(SEED, 26).uniform_open(100000) + 0.05
        res = ks_test(x, lambda s: np.clip(s, 0.0, 1.0), alpha=0.01)
        assert not res.passed

    def test_calibrated_grid(self):
        # plugging exact quantiles gives D_n = 1/(2n) < critical value
        x = (np.arange(1, 1001) - 0.5) / 1000.0
        assert ks_test(x, lambda s: s, alpha=0.01).passed

    def test_needs_samples(self):
        with pytest.raises(ValueError):
            ks_test(np.array([0.1, 0.2]), lambda s: s)
        with pytest.raises(ValueError):
            ks_test(np.linspace(0.1, 0.9, 50), lambda s: s, alpha=1.5)


class TestParallelDraw:
    def test_thread_count_immaterial(self):
        draw = lambda rng, m: rng.uniform_open(m)
        a = parallel_draw(SEED, 1, 200001, draw, threads=1)
        b = parallel_draw(SEED, 1, 200001, draw, threads=4)
        assert np.array_equal(a, b)

    def test_matches_documented_schedule(self):
        draw = lambda rng, m: rng.uniform_open(m)
        out = parallel_draw(SEED, 2, 70000, draw, threads=2)
        base = RngStream(SEED, 2)
        manual = np.concatenate(
            [base.substream(0).uniform_open(65536), base.substream(1).uniform_open(4464)]
        )
        assert np.array_equal(out, manual)

    def test_vector_blocks(self):
        p = new_family(0.3, 1.5, 0.7, 1.2, 2)
        draw = lambda rng, m: sample_position(rng, p, 1.0, m)
        out = parallel_draw(SEED, 3, 70000, draw, threads=3)
        assert out.shape == (70000, 2)
