import math

import numpy as np
import pytest

import polyvol as pv

from oracles import ball_section_volume


class TestUnitBallVolume:
    def test_line(self):
        assert pv.unit_ball_volume(1) == pytest.approx(2.0)

    def test_disc(self):
        assert pv.unit_ball_volume(2) == pytest.approx(math.pi)

    def test_sphere(self):
        assert pv.unit_ball_volume(3) == pytest.approx(4.18879020478639, abs=1e-10)

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            pv.unit_ball_volume(0)


class TestBallIndex:
    def test_inner_ball(self):
        assert pv.ball_index(np.array([0.3, 0.2, 0.0]), 3, 10) == 0
        assert pv.ball_index(np.array([1.0, 0.0, 0.0]), 3, 10) == 0

    def test_direct_value(self):
        x = np.zeros(10)
        x[0] = 1.5
        # ceil(10 * log2 1.5) = ceil(5.8496...) = 6
        assert pv.ball_index(x, 10, 44) == 6

    def test_exact_shell_boundary(self):
        x = np.zeros(10)
        x[0] = 2.0 ** (3.0 / 10.0)
        # |x| = 2^(3/10): the boundary belongs to the closed ball K_3.
        assert pv.ball_index(x, 10, 44) == 3

    def test_clamped_to_l(self):
        x = np.zeros(2)
        x[0] = 100.0
        assert pv.ball_index(x, 2, 5) == 5

    def test_shell_bracketing(self):
        # result i must satisfy 2^((i-1)/n) < |x| <= 2^(i/n) for i >= 1
        rng = np.random.Generator(np.random.PCG64(3))
        n, l = 7, 30
        for _ in range(500):
            x = rng.standard_normal(n)
            x *= rng.uniform(0.2, 8.0) / np.linalg.norm(x)
            i = pv.ball_index(x, n, l)
            nrm = np.linalg.norm(x)
            if 0 < i < l:
                assert 2.0 ** ((i - 1) / n) < nrm * (1.0 + 1e-12)
                assert nrm * (1.0 - 1e-12) <= 2.0 ** (i / n)

    def test_dimension_checked(self):
        with pytest.raises(ValueError):
            pv.ball_index(np.zeros(3), 4, 10)


def quadratic_root_by_bisection(epsilon, sigma, iters=200):
    """Independent root solve of the confidence quadratic.

    f(beta) = e^2 s^2 b^2 - (2 e^2 (1+s^2) + 4) b + e^2 (1/s+s)^2 + 4 is an
    upward parabola with f(1) = e^2/s^2 > 0; the smaller root is bracketed
    by [1, vertex].
    """
    e2, s2 = epsilon**2, sigma**2

    def f(beta):
        return (
            e2 * s2 * beta * beta
            - (2.0 * e2 * (1.0 + s2) + 4.0) * beta
            + e2 * (1.0 / sigma + sigma) ** 2
            + 4.0
        )

    vertex = (2.0 * e2 * (1.0 + s2) + 4.0) / (2.0 * e2 * s2)
    assert f(vertex) < 0.0, "no real root beyond 1"
    lo, hi = 1.0, vertex
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if f(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


class TestRequiredStepSize:
    @pytest.mark.parametrize("l", [20, 44, 88])
    def test_per_phase_constant(self, l):
        value = pv.required_step_size(0.2, 1.96, l)
        assert 1560.0 <= value / l <= 1580.0

    @pytest.mark.parametrize("l", [1, 20, 44, 88, 200])
    def test_matches_bisection_oracle(self, l):
        beta1 = quadratic_root_by_bisection(0.2, 1.96)
        expected = math.ceil(4.0 / (beta1 ** (1.0 / l) - 1.0))
        assert pv.required_step_size(0.2, 1.96, l) == expected

    def test_monotone_decreasing_in_epsilon(self):
        values = [pv.required_step_size(e, 1.96, 44) for e in (0.1, 0.2, 0.3, 0.5)]
        assert values == sorted(values, reverse=True)
        assert values[0] > values[-1]

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            pv.required_step_size(0.0, 1.96, 44)
        with pytest.raises(ValueError):
            pv.required_step_size(0.2, -1.0, 44)
        with pytest.raises(ValueError):
            pv.required_step_size(0.2, 1.96, 0)


class TestExpectedReuseSavings:
    def test_all_ratios_two(self):
        assert pv.expected_reuse_savings(np.full(10, 2.0), 100) == 450

    def test_full_reuse(self):
        l = 13
        assert pv.expected_reuse_savings(np.ones(l), 640) == 640 * (l - 1)

    def test_ratio_bounds_enforced(self):
        with pytest.raises(ValueError):
            pv.expected_reuse_savings(np.array([1.0, 2.5]), 100)


class TestEstimateVolume:
    def test_cube2_accuracy_over_seeds(self, cube2):
        good = 0
        for seed in range(20):
            rep = pv.estimate_volume(cube2, pv.EstimationConfig(seed=seed))
            if abs(rep.volume - 4.0) <= 0.4:
                good += 1
        assert good >= 18

    def test_cross3_accuracy_over_seeds(self, cross3):
        exact = 8.0 / 6.0
        good = 0
        for seed in range(20):
            rep = pv.estimate_volume(cross3, pv.EstimationConfig(seed=seed))
            if abs(rep.volume - exact) <= 0.1 * exact:
                good += 1
        assert good >= 18

    def test_interval_volume(self, interval):
        rep = pv.estimate_volume(interval, pv.EstimationConfig(seed=4))
        assert rep.l == 1
        assert rep.volume == pytest.approx(2.0, rel=0.1)

    def test_report_identity(self, cube2):
        rep = pv.estimate_volume(cube2, pv.EstimationConfig(seed=11))
        recomputed = rep.gamma * pv.unit_ball_volume(rep.n) * float(
            np.prod(rep.alphas)
        )
        assert rep.volume == pytest.approx(recomputed, rel=1e-12)
        assert np.all(rep.alphas >= 1.0)
        assert rep.ledger.fresh_points == rep.fresh_points

    def test_deterministic_reports(self, rh412):
        cfg = pv.EstimationConfig(seed=31337)
        a = pv.estimate_volume(rh412, cfg)
        b = pv.estimate_volume(rh412, cfg)
        assert a.volume == b.volume
        assert np.array_equal(a.alphas, b.alphas)
        assert a.fresh_points == b.fresh_points
        assert a.reused_fraction == b.reused_fraction

    def test_prerounded_path_identical(self, rh412):
        cfg = pv.EstimationConfig(seed=55)
        direct = pv.estimate_volume(rh412, cfg)
        rounded = pv.round_polytope(rh412, beta=1.0 / (2 * rh412.n))
        shared = pv.estimate_volume(rounded, cfg)
        assert direct.volume == shared.volume
        assert np.array_equal(direct.alphas, shared.alphas)

    def test_reuse_accounting(self, cube2):
        rep = pv.estimate_volume(cube2, pv.EstimationConfig(seed=2))
        total = rep.step_size * rep.l
        assert 0 < rep.fresh_points <= total
        assert rep.reused_fraction == (total - rep.fresh_points) / total
        # Reused points cover the gap exactly: in every phase the fresh
        # count equals step_size minus the carried-over count.
        assert rep.fresh_points < total  # reuse actually happened

    def test_no_reuse_regenerates_everything(self, cube2):
        rep = pv.estimate_volume(cube2, pv.EstimationConfig(seed=2, reuse=False))
        assert rep.fresh_points == rep.step_size * rep.l
        assert rep.reused_fraction == 0.0

    def test_walk_variant_recorded(self, cube2):
        rep = pv.estimate_volume(
            cube2, pv.EstimationConfig(seed=2, walk="hypersphere")
        )
        assert rep.walk == "hypersphere"
        assert rep.volume == pytest.approx(4.0, rel=0.2)

    def test_count_zero_aborts(self, cube2):
        # step_size=1 makes an empty inner-ball count reachable; seed 1
        # is a frozen trigger for this configuration.
        with pytest.raises(pv.EstimationError):
            pv.estimate_volume(cube2, pv.EstimationConfig(seed=1, step_size=1))

    def test_config_validation(self):
        with pytest.raises(ValueError):
            pv.EstimationConfig(step_size=0)
        with pytest.raises(ValueError):
            pv.EstimationConfig(r=1.0)
        with pytest.raises(ValueError):
            pv.EstimationConfig(walk="dikin")
        with pytest.raises(ValueError):
            pv.EstimationConfig(epsilon=1.5)

    def test_serialization_fields(self, cube2):
        rep = pv.estimate_volume(cube2, pv.EstimationConfig(seed=3))
        record = rep.to_dict()
        for key in (
            "volume",
            "gamma",
            "l",
            "alphas",
            "fresh_points",
            "reused_fraction",
            "seed",
            "walk",
            "elapsed_ms",
        ):
            assert key in record
        assert len(record["alphas"]) == rep.l


class TestSubdivisionGeometry:
    def test_oracle_ratios_within_bounds(self, rh412):
        # Consecutive ball-section volumes of the rounded body must have
        # ratios in [1, 2] (up to oracle noise).
        rounded = pv.round_polytope(rh412)
        P = rounded.polytope
        n = P.n
        l = math.ceil(n * math.log2(1.0 / rounded.beta))
        vols = []
        errs = []
        for i in range(l + 1):
            v, se = ball_section_volume(P, 2.0 ** (i / n), 2_000_000, seed=40 + i)
            vols.append(v)
            errs.append(se)
        for i in range(l):
            ratio = vols[i + 1] / vols[i]
            sigma = ratio * math.sqrt(
                (errs[i] / vols[i]) ** 2 + (errs[i + 1] / vols[i + 1]) ** 2
            )
            assert ratio >= 1.0 - 3.0 * sigma
            assert ratio <= 2.0 + 3.0 * sigma

    def test_ball_only_phases_estimate_two(self, cube10):
        # The rounded cube contains the phase balls outright for small k;
        # there the true ratio is exactly 2 and estimates must sit near 2.
        rounded = pv.round_polytope(cube10)
        inradius = rounded.inscribed_radius
        n = cube10.n
        values = []
        for seed in range(10):
            rep = pv.estimate_volume(rounded, pv.EstimationConfig(seed=seed))
            for k in range(rep.l):
                if 2.0 ** ((k + 1) / n) <= inradius:
                    values.append(rep.alphas[k])
        values = np.asarray(values)
        assert values.size >= 100
        in_band = np.count_nonzero((values >= 1.9) & (values <= 2.1))
        assert in_band >= 0.95 * values.size
