import numpy as np
import pytest

from mmfv import geometry as geo
from mmfv.boundary import (
    BoundarySpec,
    TimeContext,
    extend_conserved,
    extend_egm_moments,
    extend_vertices,
)
from mmfv.equations import Advection, Euler
from mmfv.errors import ConfigError
from mmfv.mesh import Mesh, cell_corners
from mmfv.problems import QuadraticAdvection

from conftest import binomial_shift_average, distorted_mesh


def test_periodic_vertex_wrap():
    verts = Mesh.uniform(4, 4, (0, 1, 0, 1)).verts
    bc = BoundarySpec.all_sides("periodic", period=(1.0, 1.0))
    ext = extend_vertices(verts, bc)
    assert ext.shape == (9, 9, 2)
    assert np.allclose(ext[0, 2:-2], verts[2] - [1.0, 0.0])
    assert np.allclose(ext[-1, 2:-2], verts[2] + [1.0, 0.0])


def test_mirrored_vertices_keep_cells_regular():
    verts = distorted_mesh(6, 6, 1)
    bc = BoundarySpec.all_sides("outflow", period=(1.0, 1.0))
    ext = extend_vertices(verts, bc)
    ok, _ = geo.regularity_violations(cell_corners(ext))
    assert ok.all()
    # boundary line is straight: mirrored x ghost flips only x
    assert np.allclose(ext[1, 2:-2, 1], verts[1, :, 1])
    assert np.allclose(ext[1, 2:-2, 0], -verts[1, :, 0])


def test_periodic_ghost_state_and_moments():
    verts = distorted_mesh(5, 5, 2)
    bc = BoundarySpec.all_sides("periodic", period=(1.0, 1.0))
    ext_verts = extend_vertices(verts, bc)
    corners_ext = cell_corners(ext_verts)
    exact_ext = geo.exact_moments(corners_ext)
    mom = geo.exact_moments(cell_corners(verts))
    egm_ext = extend_egm_moments(mom, None, bc)
    # ghost moments equal the exact moments of the ghost geometry
    assert np.allclose(egm_ext, exact_ext, rtol=1e-12, atol=1e-13)

    avg = np.full((5, 5, 1), 3.25)
    V = avg * mom[..., 0:1]
    out = extend_conserved(V, bc, Advection(1, 1), TimeContext.at(0.0),
                           egm_ext[..., 0], exact_ext, corners_ext)
    ghost_avg = out / egm_ext[..., 0:1]
    assert np.allclose(ghost_avg, 3.25, rtol=1e-13)


def test_reflective_rest_state_ghosts_match_interior():
    model = Euler(1.4)
    verts = Mesh.uniform(4, 4, (0, 1, 0, 1)).verts
    bc = BoundarySpec.all_sides("reflective", period=(1.0, 1.0))
    ext_verts = extend_vertices(verts, bc)
    corners_ext = cell_corners(ext_verts)
    exact_ext = geo.exact_moments(corners_ext)
    mom = geo.exact_moments(cell_corners(verts))
    egm_ext = extend_egm_moments(mom, exact_ext, bc)
    rest = model.from_primitive(np.array([1.2, 0.0, 0.0, 2.0]))
    V = np.broadcast_to(rest, (4, 4, 4)) * mom[..., 0:1]
    out = extend_conserved(V, bc, model, TimeContext.at(0.0),
                           egm_ext[..., 0], exact_ext, corners_ext)
    avg_ext = out / egm_ext[..., 0:1]
    assert np.allclose(avg_ext, rest, rtol=1e-13)


def test_reflective_flips_normal_momentum():
    model = Euler(1.4)
    verts = Mesh.uniform(4, 4, (0, 1, 0, 1)).verts
    bc = BoundarySpec(left="reflective", right="reflective",
                      bottom="outflow", top="outflow", period=(1.0, 1.0))
    ext_verts = extend_vertices(verts, bc)
    corners_ext = cell_corners(ext_verts)
    exact_ext = geo.exact_moments(corners_ext)
    mom = geo.exact_moments(cell_corners(verts))
    egm_ext = extend_egm_moments(mom, exact_ext, bc)
    moving = model.from_primitive(np.array([1.0, 0.7, 0.2, 1.0]))
    V = np.broadcast_to(moving, (4, 4, 4)) * mom[..., 0:1]
    out = extend_conserved(V, bc, model, TimeContext.at(0.0),
                           egm_ext[..., 0], exact_ext, corners_ext)
    avg_ext = out / egm_ext[..., 0:1]
    # left ghost column mirrors interior column 0 with mom_x negated
    assert np.allclose(avg_ext[1, 2:-2, 1], -moving[1])
    assert np.allclose(avg_ext[1, 2:-2, 2], moving[2])
    # outflow top copies the nearest interior row
    assert np.allclose(avg_ext[2:-2, -1], moving)


def test_exact_ghosts_match_binomial_oracle(quad_coeffs):
    prob = QuadraticAdvection(np.asarray(quad_coeffs, dtype=float), 1.0, 1.0)
    bc = BoundarySpec.all_sides("exact", analytic=prob.boundary_handle())
    verts = distorted_mesh(6, 6, 9)
    ext_verts = extend_vertices(verts, bc)
    corners_ext = cell_corners(ext_verts)
    exact_ext = geo.exact_moments(corners_ext)
    mom = geo.exact_moments(cell_corners(verts))
    egm_ext = extend_egm_moments(mom, exact_ext, bc)
    t = 0.07
    avg = prob.exact_averages(mom, t)
    out = extend_conserved(avg * mom[..., 0:1], bc, Advection(1, 1),
                           TimeContext.at(t), egm_ext[..., 0], exact_ext, corners_ext)
    ghost_avg = (out / egm_ext[..., 0:1])[..., 0]
    want = binomial_shift_average(quad_coeffs, 1.0, 1.0, t, exact_ext)
    assert np.abs(ghost_avg - want).max() < 1e-13


def test_stage_coefficients_follow_rk_algebra(quad_coeffs):
    prob = QuadraticAdvection(np.asarray(quad_coeffs, dtype=float), 1.0, 1.0)
    dt = 0.17
    c0 = prob.coefficients_at(0.0)
    fe = lambda c: c - dt * prob._advective_derivative(c)
    got1 = prob.stage_coefficients(TimeContext(t=dt, t_base=0.0, dt=dt, stage=1))
    assert np.allclose(got1, fe(c0), rtol=1e-14)
    got2 = prob.stage_coefficients(TimeContext(t=dt / 2, t_base=0.0, dt=dt, stage=2))
    assert np.allclose(got2, 0.75 * c0 + 0.25 * fe(fe(c0)), rtol=1e-14)


def test_periodic_must_pair():
    with pytest.raises(ConfigError):
        BoundarySpec(left="periodic", right="outflow")


def test_exact_requires_handle():
    bc = BoundarySpec.all_sides("exact")
    verts = Mesh.uniform(3, 3, (0, 1, 0, 1)).verts
    ext_verts = extend_vertices(verts, bc)
    corners_ext = cell_corners(ext_verts)
    exact_ext = geo.exact_moments(corners_ext)
    mom = geo.exact_moments(cell_corners(verts))
    with pytest.raises(ConfigError):
        extend_conserved(np.ones((3, 3, 1)) * mom[..., 0:1], bc, Advection(1, 1),
                         TimeContext.at(0.0), exact_ext[..., 0], exact_ext, corners_ext)
