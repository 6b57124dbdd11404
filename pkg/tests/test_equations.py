import numpy as np
import pytest

from mmfv.equations import Advection, Euler, make_model
from mmfv.errors import StateError


class TestAdvection:
    def test_flux_example(self):
        model = Advection(1.0, 1.0)
        got = model.normal_flux(np.array([2.0]), np.array([1.0, 0.0]))
        assert got[0] == pytest.approx(2.0)

    def test_wavespeed(self):
        model = Advection(1.0, 1.0)
        assert model.max_wavespeed(np.array([2.0]), np.array([1.0, 0.0])) == pytest.approx(1.0)

    def test_flux_linear_in_state(self):
        model = Advection(0.3, -0.7)
        n = np.array([0.6, 0.8])
        u = np.array([1.7])
        assert np.allclose(
            model.normal_flux(3.0 * u, n), 3.0 * model.normal_flux(u, n)
        )


class TestEuler:
    def test_rest_state_flux_is_pressure_only(self):
        model = Euler(1.4)
        U = model.from_primitive(np.array([1.3, 0.0, 0.0, 2.0]))
        n = np.array([0.6, 0.8])
        f = model.normal_flux(U, n)
        assert np.allclose(f, [0.0, 2.0 * 0.6, 2.0 * 0.8, 0.0], atol=1e-15)

    def test_flux_hand_example(self):
        model = Euler(1.4)
        U = model.from_primitive(np.array([1.0, 1.0, 1.0, 1.0]))
        # E = 1/0.4 + 1 = 3.5
        assert U[3] == pytest.approx(3.5)
        f = model.normal_flux(U, np.array([1.0, 0.0]))
        assert np.allclose(f, [1.0, 2.0, 1.0, 4.5])

    def test_rest_wavespeed_is_sound_speed(self):
        model = Euler(1.4)
        U = model.from_primitive(np.array([1.0, 0.0, 0.0, 1.0]))
        got = model.max_wavespeed(U, np.array([1.0, 0.0]))
        assert got == pytest.approx(np.sqrt(1.4))

    def test_sine_state_wavespeed(self):
        model = Euler(1.4)
        U = model.from_primitive(np.array([1.2, 1.0, 1.0, 1.0]))
        got = model.max_wavespeed(U, np.array([0.0, 1.0]))
        assert got == pytest.approx(1.0 + np.sqrt(1.4 / 1.2))

    def test_wavespeed_bounds_eigenvalues(self):
        model = Euler(1.4)
        rng = np.random.default_rng(0)
        prim = np.stack(
            [
                0.1 + rng.random(200),
                2 * rng.random(200) - 1,
                2 * rng.random(200) - 1,
                0.1 + rng.random(200),
            ],
            axis=-1,
        )
        U = model.from_primitive(prim)
        theta = 2 * np.pi * rng.random(200)
        n = np.stack([np.cos(theta), np.sin(theta)], axis=-1)
        amax = model.max_wavespeed(U, n)
        vn = prim[:, 1] * n[:, 0] + prim[:, 2] * n[:, 1]
        c = np.sqrt(1.4 * prim[:, 3] / prim[:, 0])
        for lam in (vn, vn - c, vn + c):
            assert np.all(amax >= np.abs(lam) - 1e-12)

    def test_conversion_examples(self):
        model = Euler(1.4)
        U = model.from_primitive(np.array([1.0, 0.0, 0.0, 1.0]))
        assert np.allclose(U, [1.0, 0.0, 0.0, 2.5])
        prim = model.to_primitive(np.array([1.0, 1.0, 1.0, 3.5]))
        assert prim[3] == pytest.approx(1.0)

    def test_round_trip_identity(self):
        model = Euler(1.4)
        rng = np.random.default_rng(42)
        prim = np.stack(
            [
                0.05 + rng.random(1000),
                4 * rng.random(1000) - 2,
                4 * rng.random(1000) - 2,
                0.05 + rng.random(1000),
            ],
            axis=-1,
        )
        back = model.to_primitive(model.from_primitive(prim))
        assert np.allclose(back, prim, rtol=1e-14, atol=1e-14)

    def test_rotational_consistency(self):
        # flux in a rotated frame equals the rotated flux
        model = Euler(1.4)
        U = model.from_primitive(np.array([1.1, 0.7, -0.4, 2.3]))
        theta = 0.83
        n = np.array([np.cos(theta), np.sin(theta)])
        direct = model.normal_flux(U, n)
        # rotate velocity into the n-frame, take the x-flux, rotate back
        R = np.array([[n[0], n[1]], [-n[1], n[0]]])
        Urot = U.copy()
        Urot[1:3] = R @ U[1:3]
        frot = model.normal_flux(Urot, np.array([1.0, 0.0]))
        frot[1:3] = R.T @ frot[1:3]
        assert np.allclose(direct, frot, rtol=1e-14, atol=1e-14)

    def test_negative_pressure_rejected(self):
        model = Euler(1.4)
        with pytest.raises(StateError):
            model.to_primitive(np.array([1.0, 3.0, 0.0, 1.0]))
        with pytest.raises(StateError):
            model.from_primitive(np.array([1.0, 0.0, 0.0, -1.0]))

    def test_invalid_mask(self):
        model = Euler(1.4)
        good = model.from_primitive(np.array([1.0, 0.5, 0.0, 1.0]))
        bad = np.array([1.0, 3.0, 0.0, 1.0])  # negative pressure
        mask = model.invalid_mask(np.stack([good, bad]))
        assert mask.tolist() == [False, True]


def test_make_model():
    assert make_model("advection", ax=2.0, ay=0.0).m == 1
    assert make_model("euler", gamma=1.4).m == 4
    with pytest.raises(ValueError):
        make_model("mhd")
    with pytest.raises(StateError):
        Euler(0.9)
