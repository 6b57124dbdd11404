import numpy as np
import pytest

from mmfv import geometry as geo
from mmfv.errors import RegularityError, UnsupportedDegree

from conftest import (
    UNIT_SQUARE,
    dense_edge_integral,
    quad_moments_oracle,
    random_regular_quads,
)

SPEC_QUAD = np.array([[0.0, 0.0], [1.0, 0.0], [1.2, 1.1], [0.0, 1.0]])


class TestBilinearCoefficients:
    def test_unit_square(self):
        a, b = geo.bilinear_coefficients(UNIT_SQUARE)
        # reference square [-1/2, 1/2]^2: x = 0.5 + xi, y = 0.5 + eta
        assert np.allclose(a, [0.5, 1.0, 0.0, 0.0], atol=1e-15)
        assert np.allclose(b, [0.5, 0.0, 1.0, 0.0], atol=1e-15)

    def test_scaling_linearity(self):
        a1, b1 = geo.bilinear_coefficients(UNIT_SQUARE)
        a2, b2 = geo.bilinear_coefficients(2.0 * UNIT_SQUARE)
        assert np.allclose(a2, 2.0 * a1) and np.allclose(b2, 2.0 * b1)

    def test_twist_coefficient_closed_form(self):
        a, _ = geo.bilinear_coefficients(SPEC_QUAD)
        x = SPEC_QUAD[:, 0]
        assert a[3] == pytest.approx(x[0] - x[1] + x[2] - x[3], abs=1e-15)

    def test_corners_reproduced(self):
        cells = random_regular_quads(11, 200)
        a, b = geo.bilinear_coefficients(cells)
        diam = geo.cell_diameters(cells)
        for (xi, eta), k in zip([(-0.5, -0.5), (0.5, -0.5), (0.5, 0.5), (-0.5, 0.5)], range(4)):
            pts = geo.map_points(a, b, xi, eta)
            err = np.linalg.norm(pts - cells[:, k], axis=-1)
            assert np.all(err <= 1e-14 * diam)


class TestExactMoments:
    def test_unit_square(self):
        m = geo.exact_moments(UNIT_SQUARE)
        assert np.allclose(m, [1.0, 0.5, 0.5, 1.0 / 3.0, 0.25, 1.0 / 3.0], rtol=1e-15)

    def test_spec_quad_area(self):
        assert geo.exact_moments(SPEC_QUAD)[0] == pytest.approx(1.15, abs=1e-14)

    def test_matches_triangle_oracle(self):
        cells = random_regular_quads(7, 10_000)
        got = geo.exact_moments(cells)
        want = np.array([quad_moments_oracle(c) for c in cells[:500]])
        rel = np.abs(got[:500] - want) / np.maximum(np.abs(want), 1e-14)
        assert rel.max() < 1e-12
        # spot-check the full batch against the shoelace area
        assert np.allclose(got[..., 0], geo.shoelace_area(cells), rtol=1e-12)


class TestEdgeQuadrature:
    def test_unit_square_bottom_edge(self):
        n = geo.unit_normals(UNIT_SQUARE)
        lengths = geo.edge_lengths(UNIT_SQUARE)
        pts = geo.edge_points(UNIT_SQUARE)
        assert np.allclose(n[0], [0.0, -1.0])
        assert lengths[0] == pytest.approx(1.0)
        assert np.allclose(pts[0], [[0, 0], [0.5, 0], [1, 0]])
        assert geo.GL_WEIGHTS.sum() == pytest.approx(1.0)

    def test_normals_point_outward(self):
        cells = random_regular_quads(3, 100)
        n = geo.unit_normals(cells)
        centroid = cells.mean(axis=1)
        mid = 0.5 * (cells + np.roll(cells, -1, axis=1))
        outward = np.sum(n * (mid - centroid[:, None, :]), axis=-1)
        assert np.all(outward > 0.0)

    def test_closed_polygon_constant_flux_vanishes(self):
        cells = random_regular_quads(5, 50)
        rates = geo.moment_rhs(cells, np.broadcast_to([1.0, 0.0], cells.shape))
        # d(m00)/dtau = 0 under rigid translation
        assert np.abs(rates[..., 0]).max() < 1e-14

    def test_cubic_exactness_vs_dense_quadrature(self):
        cells = random_regular_quads(9, 40)
        rng = np.random.default_rng(1)
        vels = rng.random(cells.shape) - 0.5
        rates = geo.edge_moment_rates(cells, vels)
        for idx in range(5):
            cell = cells[idx]
            vel = vels[idx]
            for k in range(4):
                p0, p1 = cell[k], cell[(k + 1) % 4]
                w0, w1 = vel[k], vel[(k + 1) % 4]
                nstar = geo.scaled_normals(cell)[k]
                nunit = nstar / np.linalg.norm(nstar)

                def integrand(x, y):
                    s = np.where(
                        np.abs(p1[0] - p0[0]) > np.abs(p1[1] - p0[1]),
                        (x - p0[0]) / (p1[0] - p0[0] + 1e-300),
                        (y - p0[1]) / (p1[1] - p0[1] + 1e-300),
                    )
                    w = w0[None, :] + s[:, None] * (w1 - w0)[None, :]
                    return x * x * (w @ nunit)

                want = dense_edge_integral(p0, p1, integrand)
                got = rates[idx, k, 3]  # (s, r) = (2, 0)
                assert got == pytest.approx(want, rel=1e-12, abs=1e-13)


class TestCellAt:
    def test_identity(self):
        assert np.array_equal(geo.cell_at(UNIT_SQUARE, np.ones((4, 2)), 0.0), UNIT_SQUARE)

    def test_rigid_translation(self):
        vel = np.broadcast_to([1.0, 0.0], (4, 2))
        moved = geo.cell_at(UNIT_SQUARE, vel, 0.3)
        assert np.allclose(moved, UNIT_SQUARE + [0.3, 0.0])

    def test_trapezoid_area(self):
        vel = np.zeros((4, 2))
        vel[1, 0] = vel[2, 0] = 1.0  # move right vertices only
        moved = geo.cell_at(UNIT_SQUARE, vel, 0.5)
        assert geo.shoelace_area(moved) == pytest.approx(1.5)
        assert geo.exact_moments(moved)[0] == pytest.approx(1.5)


class TestRegularity:
    def test_unit_square_ok(self):
        ok, msg = geo.regularity_check(UNIT_SQUARE)
        assert ok and msg == "ok"

    def test_clockwise_rejected(self):
        ok, msg = geo.regularity_check(UNIT_SQUARE[::-1])
        assert not ok and "counterclockwise" in msg

    def test_bowtie_rejected(self):
        bowtie = np.array([[0.0, 0.0], [1.0, 1.0], [1.0, 0.0], [0.0, 1.0]])
        ok, msg = geo.regularity_check(bowtie)
        assert not ok

    def test_nonconvex_rejected(self):
        dart = np.array([[0.0, 0.0], [1.0, 0.0], [0.4, 0.4], [0.0, 1.0]])
        ok, msg = geo.regularity_check(dart)
        assert not ok and msg == "non-convex"

    def test_require_regular_raises_with_location(self):
        cells = np.stack([UNIT_SQUARE, UNIT_SQUARE[::-1]])
        with pytest.raises(RegularityError, match="cell"):
            geo.require_regular(cells, context="unit test")


class TestBasisIntegrals:
    def test_degree_zero_is_m00_bitwise(self):
        cells = random_regular_quads(13, 64)
        mom = geo.exact_moments(cells)
        frame = geo.frames(mom[..., 0], mom)
        got = geo.basis_integral(mom, frame, 0, 0)
        assert np.array_equal(got, mom[..., 0])

    def test_centered_frame_zeroes_first_moments(self):
        cells = random_regular_quads(17, 64)
        mom = geo.exact_moments(cells)
        frame = geo.frames(mom[..., 0], mom)
        assert np.abs(geo.basis_integral(mom, frame, 1, 0)).max() < 1e-14
        assert np.abs(geo.basis_integral(mom, frame, 0, 1)).max() < 1e-14

    def test_unit_square_second_moment(self):
        mom = geo.exact_moments(UNIT_SQUARE)
        frame = np.array([0.5, 0.5, 1.0])
        got = geo.basis_integral(mom, frame, 2, 0)
        assert got == pytest.approx(1.0 / 12.0, rel=1e-14)

    def test_unsupported_degree(self):
        mom = geo.exact_moments(UNIT_SQUARE)
        frame = np.array([0.5, 0.5, 1.0])
        with pytest.raises(UnsupportedDegree):
            geo.basis_integral(mom, frame, 2, 1)


class TestMomentTransport:
    def test_zero_velocity_rates(self):
        rates = geo.moment_rhs(UNIT_SQUARE, np.zeros((4, 2)))
        assert np.array_equal(rates, np.zeros(6))

    def test_translation_rate(self):
        vel = np.broadcast_to([1.0, 0.0], (4, 2)).copy()
        rates = geo.moment_rhs(UNIT_SQUARE, vel)
        # d m10/dtau = m00; d m20/dtau = 2 m10; d m11/dtau = m01
        assert rates[1] == pytest.approx(1.0, rel=1e-14)
        assert rates[3] == pytest.approx(2 * 0.5, rel=1e-14)
        assert rates[4] == pytest.approx(0.5, rel=1e-14)

    def test_dilation_rate(self):
        vel = UNIT_SQUARE.copy()  # w = x about the origin corner
        rates = geo.moment_rhs(UNIT_SQUARE, vel)
        assert rates[0] == pytest.approx(2.0, rel=1e-14)  # div w = 2

    def test_finite_difference_oracle(self):
        cells = random_regular_quads(23, 20)
        rng = np.random.default_rng(5)
        vels = rng.random(cells.shape) - 0.5
        rates = geo.moment_rhs(cells, vels)
        eps = 1e-6
        fd = (
            geo.exact_moments(geo.cell_at(cells, vels, eps))
            - geo.exact_moments(geo.cell_at(cells, vels, -eps))
        ) / (2 * eps)
        assert np.allclose(rates, fd, rtol=1e-8, atol=1e-8)

    def test_closed_surface_identity(self):
        # sum_k of the boundary flux of 1 equals d(m00)/dtau
        cells = random_regular_quads(29, 30)
        rng = np.random.default_rng(8)
        vels = rng.random(cells.shape) - 0.5
        per_edge = geo.edge_moment_rates(cells, vels)
        total = per_edge[..., 0].sum(axis=-1)
        eps = 1e-7
        fd = (
            geo.shoelace_area(geo.cell_at(cells, vels, eps))
            - geo.shoelace_area(geo.cell_at(cells, vels, -eps))
        ) / (2 * eps)
        assert np.allclose(total, fd, rtol=1e-7, atol=1e-9)


class TestTranslateMoments:
    def test_against_explicit_binomial(self):
        import math

        cells = random_regular_quads(31, 16)
        mom = geo.exact_moments(cells)
        shift = np.array([0.7, -1.3])
        got = geo.translate_moments(mom, shift)
        powers = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]
        index = {pq: k for k, pq in enumerate(powers)}
        for col, (s, r) in enumerate(powers):
            want = np.zeros(len(cells))
            for p in range(s + 1):
                for q in range(r + 1):
                    want += (
                        math.comb(s, p) * math.comb(r, q)
                        * shift[0] ** (s - p) * shift[1] ** (r - q)
                        * mom[:, index[(p, q)]]
                    )
            assert np.allclose(got[:, col], want, rtol=1e-13)

    def test_translation_matches_moved_geometry(self):
        cells = random_regular_quads(37, 16)
        mom = geo.exact_moments(cells)
        shift = np.array([0.25, 0.5])
        want = geo.exact_moments(cells + shift)
        got = geo.translate_moments(mom, shift)
        assert np.allclose(got, want, rtol=1e-12, atol=1e-13)
