import numpy as np
import pytest

import polyvol as pv

from oracles import ball_section_volume


def unit_ball_points(n, count, seed):
    rng = np.random.Generator(np.random.PCG64(seed))
    g = rng.standard_normal((count, n))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    radii = rng.random(count) ** (1.0 / n)
    return g * radii[:, None]


def shifted_cube2(offset=5.0):
    cube = pv.gen_cube(2)
    return pv.Polytope(cube.A, cube.b + cube.A @ np.full(2, offset))


class TestInitEllipsoid:
    def test_cube2(self, cube2):
        ell = pv.init_ellipsoid(cube2)
        assert np.allclose(ell.o, 0.0, atol=1e-9)
        # widths are 2 per axis: radius sqrt(2^2 + 2^2)
        assert np.allclose(np.diag(ell.T), 8.0)

    def test_interval(self, interval):
        ell = pv.init_ellipsoid(interval)
        assert ell.o[0] == pytest.approx(0.0, abs=1e-12)
        assert ell.T[0, 0] == pytest.approx(4.0)

    def test_translation_equivariance(self, cube2):
        moved = shifted_cube2(5.0)
        ell = pv.init_ellipsoid(moved)
        base = pv.init_ellipsoid(cube2)
        assert np.allclose(ell.o, 5.0, atol=1e-9)
        assert np.allclose(ell.T, base.T)

    def test_enclosure(self, rh412):
        ell = pv.init_ellipsoid(rh412)
        _, _, vertices = rh412.coordinate_bounds()
        for v in vertices:
            assert ell.contains(v, slack=1e-9)


class TestCholesky:
    def test_identity(self):
        assert np.array_equal(pv.cholesky(np.eye(3)), np.eye(3))

    def test_diagonal(self):
        L = pv.cholesky(np.diag([4.0, 9.0]))
        assert np.allclose(L, np.diag([2.0, 3.0]))

    def test_random_spd_reconstruction(self):
        rng = np.random.Generator(np.random.PCG64(2))
        for _ in range(20):
            n = int(rng.integers(2, 8))
            R = rng.standard_normal((n, n))
            M = R.T @ R + np.eye(n)
            L = pv.cholesky(M)
            assert np.all(np.diag(L) > 0.0)
            assert np.triu(L) == pytest.approx(L)  # upper triangular
            assert np.linalg.norm(L.T @ L - M) <= 1e-10 * np.linalg.norm(M)

    def test_indefinite_rejected(self):
        with pytest.raises(pv.NotPositiveDefiniteError):
            pv.cholesky(np.array([[1.0, 0.0], [0.0, -1.0]]))

    def test_asymmetric_rejected(self):
        with pytest.raises(ValueError):
            pv.cholesky(np.array([[1.0, 0.5], [0.0, 1.0]]))


class TestRoundPolytope:
    def test_cube2_certificate(self, cube2):
        rounded = pv.round_polytope(cube2, beta=0.25)
        P = rounded.polytope
        ratios = P.b / np.linalg.norm(P.A, axis=1)
        assert float(np.min(ratios)) >= 1.0
        assert rounded.inscribed_radius == pytest.approx(float(np.min(ratios)))
        assert rounded.gamma > 0.0

    def test_cube2_gamma_consistency(self, cube2):
        rounded = pv.round_polytope(cube2, beta=0.25)
        oracle = pv.oracle_volume(rounded.polytope, samples=10_000_000, seed=31)
        # gamma * vol(P'') must recover the square's volume 4. The tiny
        # absolute term covers the degenerate tight-box case (SE = 0).
        est = rounded.gamma * oracle.volume
        assert abs(est - 4.0) <= 3.0 * rounded.gamma * oracle.standard_error + 1e-9

    def test_stretched_box_many_iterations(self):
        cube = pv.gen_cube(2)
        b = cube.b.copy()
        b[0] = 100.0
        b[2] = 100.0
        stretched = pv.Polytope(cube.A, b)  # volume 400
        rounded = pv.round_polytope(stretched, beta=0.25)
        assert rounded.iterations > 10
        assert rounded.inscribed_radius >= 1.0
        oracle = pv.oracle_volume(rounded.polytope, samples=4_000_000, seed=32)
        est = rounded.gamma * oracle.volume
        assert abs(est - 400.0) <= 3.0 * rounded.gamma * oracle.standard_error + 1e-9

    def test_enclosure_throughout_iteration(self):
        stretched = shifted_cube2(3.0)
        b = stretched.b.copy()
        b[0] += 50.0  # skew it so several cuts happen
        P = pv.Polytope(stretched.A, b)
        rounded = pv.round_polytope(P, beta=0.25, trace=True)
        assert rounded.trace is not None
        _, _, vertices = P.coordinate_bounds()
        for ell in rounded.trace[:: max(1, len(rounded.trace) // 50)]:
            for v in vertices:
                assert ell.contains(v, slack=1e-6)

    def test_affine_sandwich_ball_samples(self, rh412):
        rounded = pv.round_polytope(rh412)  # default beta = 1/(2n)
        P = rounded.polytope
        assert rounded.inscribed_radius >= 1.0
        for x in unit_ball_points(P.n, 10_000, seed=9):
            assert P.contains(x)

    def test_original_points_map_into_outer_ball(self, rh412):
        rounded = pv.round_polytope(rh412)
        _, _, vertices = rh412.coordinate_bounds()
        bound = 1.0 / rounded.beta
        for v in vertices:
            y = rounded.to_rounded(v)
            assert np.linalg.norm(y) <= bound * (1.0 + 1e-9)

    def test_round_trip_transform(self, rh412):
        rounded = pv.round_polytope(rh412)
        rng = np.random.Generator(np.random.PCG64(4))
        for _ in range(50):
            x = rng.uniform(-0.2, 0.2, size=rh412.n)
            assert np.allclose(rounded.to_original(rounded.to_rounded(x)), x)

    def test_determinant_identity(self, rh412):
        rounded = pv.round_polytope(rh412, beta=0.05, trace=True)
        T_final = rounded.trace[-1].T
        det_L_sq = float(np.prod(np.diag(rounded.L))) ** 2
        det_T = float(np.linalg.det(T_final))
        assert abs(det_L_sq - det_T) <= 1e-8 * abs(det_T)

    def test_gamma_consistency_small_instances(self, cross3):
        for P, exact in ((pv.gen_cube(3), 8.0), (cross3, 8.0 / 6.0)):
            rounded = pv.round_polytope(P)
            oracle = pv.oracle_volume(rounded.polytope, samples=4_000_000, seed=33)
            est = rounded.gamma * oracle.volume
            assert (
                abs(est - exact)
                <= 3.0 * rounded.gamma * oracle.standard_error + 1e-9
            )

    def test_interval_analytic(self, interval):
        rounded = pv.round_polytope(interval, beta=0.5)
        assert rounded.inscribed_radius >= 1.0
        # gamma * vol(P'') == interval length 2; P'' is [-x, x] with
        # x = b''/a'', so vol(P'') = 2 * inscribed_radius-ish bound.
        P = rounded.polytope
        lb, ub, _ = P.coordinate_bounds()
        assert rounded.gamma * (ub[0] - lb[0]) == pytest.approx(2.0, rel=1e-9)

    def test_beta_range_enforced(self, cube2):
        with pytest.raises(ValueError):
            pv.round_polytope(cube2, beta=0.6)  # 1/n = 0.5 for n = 2
        with pytest.raises(ValueError):
            pv.round_polytope(cube2, beta=0.0)

    def test_iteration_counts_recorded(self, cube10):
        rounded = pv.round_polytope(cube10)
        # Symmetric cube: the initial ball already satisfies the shallow
        # test at beta = 1/20, so no cuts are needed.
        assert rounded.iterations == 0


def test_sheared_cube_rounds(cube10):
    sheared = pv.apply_shear(cube10, times=10, seed=3)
    rounded = pv.round_polytope(sheared)
    assert rounded.inscribed_radius >= 1.0
    assert rounded.iterations > 0
