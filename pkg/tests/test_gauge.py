"""Gauge transform: profile-level identities and the trajectory frame shift."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from dnlslab import (Field, Trajectory, gauge_profile, gauge_trajectory,
                     lp_norm, mass, psi, ungauge_profile)

from conftest import l2_dist, plane_wave, random_band_field


class TestGaugeProfile:
    def test_plane_wave_unchanged(self, grid2pi):
        f = plane_wave(grid2pi, A=1.2, m=2)
        assert l2_dist(gauge_profile(f, 0.75), f) < 1e-12

    def test_beta_zero_identity(self, grid2pi, rng):
        f = random_band_field(grid2pi, rng)
        assert l2_dist(gauge_profile(f, 0.0), f) == 0.0

    def test_modulus_preserved(self, grid2pi, rng):
        f = random_band_field(grid2pi, rng, band=16)
        g = gauge_profile(f, 0.75)
        assert np.max(np.abs(np.abs(g.values) - np.abs(f.values))) < 1e-13

    def test_mass_preserved(self, grid2pi, rng):
        f = random_band_field(grid2pi, rng, band=16)
        for beta in (0.5, 0.75, 1.0):
            assert_allclose(mass(gauge_profile(f, beta)), mass(f), rtol=1e-12)

    def test_composition_in_beta(self, grid2pi, rng):
        f = random_band_field(grid2pi, rng, band=16)
        a = gauge_profile(gauge_profile(f, 0.5), 0.25)
        b = gauge_profile(f, 0.75)
        assert l2_dist(a, b) <= 1e-12 * lp_norm(f, 2)


class TestUngauge:
    def test_round_trip(self, grid2pi, rng):
        f = random_band_field(grid2pi, rng, band=16)
        back = ungauge_profile(gauge_profile(f, 0.75), 0.75)
        assert l2_dist(back, f) <= 1e-12 * lp_norm(f, 2)

    def test_beta_zero_identity(self, grid2pi, rng):
        f = random_band_field(grid2pi, rng)
        assert l2_dist(ungauge_profile(f, 0.0), f) == 0.0

    def test_two_mode_round_trip(self, grid2pi):
        x = grid2pi.x
        f = Field(grid2pi, np.exp(1j * x) + 0.5 * np.exp(2j * x))
        back = ungauge_profile(gauge_profile(f, 0.75), 0.75)
        assert l2_dist(back, f) < 1e-12


class TestPsi:
    def test_plane_wave_closed_form(self, grid2pi):
        A, m, beta = 0.8, 2, 0.75
        k = 2 * np.pi * m / grid2pi.L
        v = plane_wave(grid2pi, A=A, m=m)
        want = beta * (-2 * k * A**2 + (1.5 - 2 * beta) * A**4) + beta**2 * A**4
        assert_allclose(psi(v, beta, A**2, "plus"), want, rtol=1e-12)

    def test_zero_field(self, grid2pi):
        z = Field(grid2pi, np.zeros(grid2pi.N))
        assert psi(z, 0.75, 0.0) == 0.0

    def test_beta_zero(self, grid2pi, rng):
        v = random_band_field(grid2pi, rng)
        assert psi(v, 0.0, 1.0) == 0.0

    def test_sign_choices_differ_by_offset(self, grid2pi, rng):
        v = random_band_field(grid2pi, rng, band=16)
        beta, mu_val = 0.75, 1.3
        plus = psi(v, beta, mu_val, "plus")
        minus = psi(v, beta, mu_val, "minus")
        assert_allclose(plus - minus, 2 * beta**2 * mu_val**2, rtol=1e-12)

    def test_unknown_sign_rejected(self, grid2pi):
        with pytest.raises(ValueError):
            psi(plane_wave(grid2pi), 0.75, 1.0, "maybe")


class TestGaugeTrajectory:
    def _plane_wave_trajectory(self, grid, A, m, times):
        k = 2 * np.pi * m / grid.L
        omega = k**2 - k * A**2
        frames = tuple(
            (t, Field(grid, A * np.exp(1j * (k * grid.x - omega * t))))
            for t in times)
        return Trajectory(frames), omega, k

    def test_plane_wave_closed_form(self, grid2pi):
        A, m, beta = 1.1, 1, 0.75
        times = (0.0, 0.25, 0.5, 0.75)
        traj, omega, k = self._plane_wave_trajectory(grid2pi, A, m, times)
        gauged = gauge_trajectory(traj, beta)
        mu0 = A**2
        for (t, v) in gauged.frames:
            want = A * np.exp(1j * (k * (grid2pi.x - 2 * beta * mu0 * t) - omega * t))
            assert np.max(np.abs(v.values - want)) < 1e-11

    def test_beta_zero_identity(self, grid2pi):
        traj, _, _ = self._plane_wave_trajectory(grid2pi, 0.9, 2, (0.0, 0.5))
        gauged = gauge_trajectory(traj, 0.0)
        for (_, a), (_, b) in zip(gauged.frames, traj.frames):
            assert l2_dist(a, b) < 1e-13

    def test_initial_frame_has_no_shift(self, grid2pi, rng):
        f = random_band_field(grid2pi, rng, band=16)
        traj = Trajectory(((0.0, f), (0.5, f)))
        gauged = gauge_trajectory(traj, 0.75)
        assert l2_dist(gauged.frames[0][1], gauge_profile(f, 0.75)) < 1e-13
