import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import neelwall as nw
from neelwall.energy import energy_delta, energy_parts, gradient_values
from conftest import make_random_admissible

# frozen after the first validated run; the stray part was cross-checked
# against the double-integral seminorm (0.9% truncation gap) and exchange
# and anisotropy against plain trapezoid quadrature
REFERENCE_ENERGY_NU1_H0 = 3.9252691626668152


def _grid_params(h=0.0, nu=1.0, half_length=20.0, n=1024):
    return nw.make_grid(half_length, n), nw.ModelParams(nu, h)


class TestEnergy:
    def test_constant_plateau_field_has_zero_energy(self):
        g, params = _grid_params(h=0.3)
        p = nw.Profile(g, np.full(g.n_samples, params.theta_h), params)
        e = nw.energy(p)
        assert e.exchange == 0.0
        assert e.anisotropy == 0.0
        assert e.stray == 0.0
        assert e.total == 0.0

    def test_reference_regression_value(self):
        g = nw.make_grid(40.0, 4096)
        params = nw.ModelParams(1.0, 0.0)
        e = nw.energy(nw.reference_profile(g, params))
        assert e.total == pytest.approx(REFERENCE_ENERGY_NU1_H0, rel=1e-12)

    def test_parts_nonnegative_and_total_exact(self):
        g, params = _grid_params(h=0.25, nu=1.7)
        rng = np.random.default_rng(5)
        for _ in range(10):
            p = make_random_admissible(g, params, rng)
            e = nw.energy(p)
            assert e.exchange >= 0 and e.anisotropy >= 0 and e.stray >= 0
            assert e.total == e.exchange + e.anisotropy + e.stray

    def test_doubling_nu_doubles_stray_exactly(self):
        g = nw.make_grid(20.0, 512)
        ref1 = nw.reference_profile(g, nw.ModelParams(1.0, 0.2))
        ref2 = nw.Profile(g, ref1.values, nw.ModelParams(2.0, 0.2))
        e1, e2 = nw.energy(ref1), nw.energy(ref2)
        assert e2.stray == 2.0 * e1.stray
        assert e2.exchange == e1.exchange
        assert e2.anisotropy == e1.anisotropy

    def test_reflection_invariance(self):
        g, params = _grid_params(h=0.3)
        rng = np.random.default_rng(11)
        p = make_random_admissible(g, params, rng)
        reflected = nw.Profile(g, (np.pi - p.values)[::-1], params)
        assert nw.energy(reflected).total == pytest.approx(
            nw.energy(p).total, rel=1e-12)

    def test_energy_delta_matches_difference(self):
        g, params = _grid_params(h=0.15, nu=0.8)
        rng = np.random.default_rng(21)
        p = make_random_admissible(g, params, rng)
        q = make_random_admissible(g, params, rng)
        delta = energy_delta(p.values, q.values, g, params)
        brute = nw.energy(q).total - nw.energy(p).total
        assert delta == pytest.approx(brute, rel=1e-9, abs=1e-12)


class TestGradient:
    def test_finite_difference_consistency(self):
        g = nw.make_grid(40.0, 1024)
        params = nw.ModelParams(1.0, 0.0)
        v = nw.reference_profile(g, params).values
        rng = np.random.default_rng(42)
        grad = gradient_values(v, g, params)
        for _ in range(20):
            phi = np.zeros_like(v)
            phi[1:-1] = rng.normal(size=v.size - 2)
            phi /= np.max(np.abs(phi))
            analytic = g.spacing * np.dot(grad, phi)
            t = 1e-5
            fd = (sum(energy_parts(v + t * phi, g, params))
                  - sum(energy_parts(v - t * phi, g, params))) / (2 * t)
            assert abs(fd - analytic) <= 1e-6 * abs(analytic)

    def test_zero_at_constant_plateau_field(self):
        g, params = _grid_params(h=0.4)
        v = np.full(g.n_samples, params.theta_h)
        assert np.array_equal(gradient_values(v, g, params), np.zeros_like(v))

    def test_zero_at_endpoints(self):
        g, params = _grid_params()
        rng = np.random.default_rng(0)
        p = make_random_admissible(g, params, rng)
        grad = nw.energy_gradient(p)
        assert grad.values[0] == 0.0 and grad.values[-1] == 0.0

    def test_el_residual_equals_gradient(self):
        g, params = _grid_params(h=0.2)
        rng = np.random.default_rng(1)
        p = make_random_admissible(g, params, rng)
        assert np.array_equal(nw.el_residual(p).values, nw.energy_gradient(p).values)

    def test_reference_is_not_a_solution(self):
        g, params = _grid_params()
        p = nw.reference_profile(g, params)
        assert np.max(np.abs(nw.el_residual(p).values)) > 1e-2


class TestClampRotations:
    def test_identity_on_admissible_range(self):
        g, params = _grid_params(h=0.3)
        rng = np.random.default_rng(9)
        p = nw.clamp_rotations(make_random_admissible(g, params, rng))
        again = nw.clamp_rotations(p)
        assert np.array_equal(again.values, p.values)

    def test_output_range(self):
        g, params = _grid_params(h=0.2)
        rng = np.random.default_rng(10)
        for _ in range(20):
            p = make_random_admissible(g, params, rng, amp=1.5)
            out = nw.clamp_rotations(p)
            assert np.all(out.values >= params.theta_h)
            assert np.all(out.values <= np.pi - params.theta_h)

    def test_never_increases_energy(self):
        g, params = _grid_params(h=0.35, nu=1.3)
        rng = np.random.default_rng(12)
        for _ in range(30):
            p = make_random_admissible(g, params, rng, amp=1.2)
            assert nw.energy(nw.clamp_rotations(p)).total \
                <= nw.energy(p).total + 1e-12

    def test_overshoot_fold_strictly_decreases(self):
        g, params = _grid_params(h=0.0, half_length=10.0, n=512)
        ref = nw.reference_profile(g, params)
        v = ref.values + 0.3 * np.exp(-((g.points + 1.5) ** 2))
        assert np.max(v) > np.pi  # overshoots past pi near the center
        p = nw.Profile(g, v, params)
        folded = nw.clamp_rotations(p)
        assert np.max(folded.values) <= np.pi - params.theta_h
        assert nw.energy(folded).total < nw.energy(p).total - 1e-6

    @given(seed=st.integers(0, 2 ** 31))
    @settings(max_examples=25, deadline=None)
    def test_idempotent(self, seed):
        g, params = _grid_params(h=0.1, n=256)
        rng = np.random.default_rng(seed)
        p = make_random_admissible(g, params, rng, amp=1.0)
        once = nw.clamp_rotations(p)
        twice = nw.clamp_rotations(once)
        assert np.array_equal(once.values, twice.values)


class TestSymmetrizeRearrange:
    def test_output_invariants(self):
        g, params = _grid_params(h=0.25)
        rng = np.random.default_rng(14)
        for _ in range(20):
            p = nw.clamp_rotations(make_random_admissible(g, params, rng))
            out = nw.symmetrize_rearrange(p)
            v = out.values
            assert v[g.center_index] == np.pi / 2
            assert np.max(np.abs(v + v[::-1] - np.pi)) == 0.0
            assert np.all(np.diff(v) <= 0.0)

    def test_never_increases_energy(self):
        g, params = _grid_params(h=0.3, nu=0.7)
        rng = np.random.default_rng(15)
        for _ in range(100):
            p = nw.clamp_rotations(make_random_admissible(g, params, rng))
            assert nw.energy(nw.symmetrize_rearrange(p)).total \
                <= nw.energy(p).total + 1e-12

    def test_fixed_point_on_symmetric_decreasing(self):
        g, params = _grid_params(h=0.2, half_length=8.0, n=512)
        ref = nw.reference_profile(g, params)
        out = nw.symmetrize_rearrange(ref)
        assert np.array_equal(out.values, ref.values)

    def test_anisotropy_preserved_on_symmetric_decreasing_input(self):
        # equimeasurability is exact when the folded profile is already
        # symmetric decreasing (the rearrangement is then the identity)
        g, params = _grid_params(h=0.2, half_length=8.0, n=512)
        ref = nw.reference_profile(g, params)
        assert nw.energy(nw.symmetrize_rearrange(ref)).anisotropy \
            == nw.energy(ref).anisotropy

    def test_anisotropy_nearly_preserved_in_general(self):
        g, params = _grid_params(h=0.25)
        rng = np.random.default_rng(16)
        for _ in range(10):
            p = nw.clamp_rotations(make_random_admissible(g, params, rng))
            before = nw.energy(p).anisotropy
            after = nw.energy(nw.symmetrize_rearrange(p)).anisotropy
            assert after == pytest.approx(before, rel=2e-2)

    def test_range_violation_rejected(self):
        g, params = _grid_params(h=0.3)
        v = np.full(g.n_samples, params.theta_h)
        v[10] = params.theta_h - 0.5
        with pytest.raises(ValueError):
            nw.symmetrize_rearrange(nw.Profile(g, v, params))

    @given(seed=st.integers(0, 2 ** 31))
    @settings(max_examples=25, deadline=None)
    def test_idempotent(self, seed):
        g, params = _grid_params(h=0.15, n=256)
        rng = np.random.default_rng(seed)
        p = nw.clamp_rotations(make_random_admissible(g, params, rng))
        once = nw.symmetrize_rearrange(p)
        twice = nw.symmetrize_rearrange(once)
        assert np.array_equal(once.values, twice.values)


class TestSinMidpoint:
    def _recentered_pair(self, g, params, seed):
        rng = np.random.default_rng(seed)
        while True:
            try:
                p1 = nw.recenter(nw.clamp_rotations(
                    make_random_admissible(g, params, rng, amp=0.45)))
                p2 = nw.recenter(nw.clamp_rotations(
                    make_random_admissible(g, params, rng, amp=0.45)))
                return p1, p2
            except ValueError:
                continue  # profile crossed pi/2 multiple times; resample

    def test_equal_profiles_fixed(self, baseline):
        p = baseline.profile
        for t in (0.0, 0.37, 1.0):
            out = nw.sin_midpoint(p, p, t)
            assert np.allclose(out.values, p.values, atol=1e-13)

    def test_endpoints(self, baseline):
        g = baseline.profile.grid
        params = baseline.profile.params
        ref = nw.recenter(nw.reference_profile(g, params))
        assert np.allclose(nw.sin_midpoint(baseline.profile, ref, 1.0).values,
                           baseline.profile.values, atol=1e-13)
        assert np.allclose(nw.sin_midpoint(baseline.profile, ref, 0.0).values,
                           ref.values, atol=1e-13)

    def test_midpoint_energy_below_average(self):
        g, params = _grid_params(h=0.2)
        for seed in range(8):
            p1, p2 = self._recentered_pair(g, params, seed)
            mid = nw.sin_midpoint(p1, p2, 0.5)
            avg = 0.5 * (nw.energy(p1).total + nw.energy(p2).total)
            gap = nw.energy(mid).total - avg
            assert gap <= 1e-12
            if np.max(np.abs(np.sin(p1.values) - np.sin(p2.values))) >= 1e-6:
                assert gap < 0.0

    def test_pointwise_exchange_inequality(self):
        g, params = _grid_params(h=0.2)
        p1, p2 = self._recentered_pair(g, params, 123)
        mid = nw.sin_midpoint(p1, p2, 0.5)
        d_mid = np.diff(mid.values) ** 2
        d_avg = 0.5 * (np.diff(p1.values) ** 2 + np.diff(p2.values) ** 2)
        assert np.all(d_mid <= d_avg + 1e-12)

    def test_unrecentered_rejected(self):
        g, params = _grid_params()
        ref = nw.reference_profile(g, params)
        shifted = np.interp(g.points + 3 * g.spacing, g.points, ref.values)
        shifted[0] = params.left_plateau
        shifted[-1] = params.right_plateau
        with pytest.raises(ValueError):
            nw.sin_midpoint(nw.Profile(g, shifted, params), ref, 0.5)

    def test_mismatched_params_rejected(self):
        g, params = _grid_params()
        ref = nw.reference_profile(g, params)
        other = nw.reference_profile(g, nw.ModelParams(2.0, 0.0))
        with pytest.raises(ValueError):
            nw.sin_midpoint(ref, other, 0.5)
