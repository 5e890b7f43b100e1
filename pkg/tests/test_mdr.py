import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fsq import mdr
from fsq.errors import DomainError

from oracles import series_bessel_j

N = 1.5


def sphere(nu, n=N):
    return mdr.SphereSystem(n, 1e-6, nu)


@pytest.fixture(scope="module")
def nu20():
    s = sphere(20)
    return s, mdr.find_resonances(s, 20 / N, 1.5 * 20, 20000)


class TestSystem:
    @pytest.mark.parametrize("args", [(1.0, 1e-6, 5), (1.5, 0.0, 5), (1.5, 1e-6, 0)])
    def test_invalid(self, args):
        with pytest.raises(DomainError):
            mdr.SphereSystem(*args)


class TestEffectivePotential:
    def test_far_limit(self):
        s = sphere(10)
        assert mdr.effective_potential(s, 8.0, 1e4) == pytest.approx(110 / 1e8, rel=1e-14)

    def test_jump_at_surface(self):
        s = sphere(10)
        inside = mdr.effective_potential(s, 8.0, 1.0)
        outside = mdr.effective_potential(s, 8.0, 1.0 + 1e-15)
        assert outside - inside == pytest.approx(64 * (N * N - 1), rel=1e-9)

    def test_array(self):
        out = mdr.effective_potential(sphere(3), 2.0, np.array([0.5, 2.0]))
        assert out.shape == (2,)

    def test_window_from_turning_points(self):
        s = sphere(20)
        lo, hi = mdr.barrier_window(s)
        # at x = lo the well floor just inside r = a equals x^2; at x = hi the barrier top does
        assert mdr.effective_potential(s, lo, 1.0) == pytest.approx(lo * lo, rel=1e-12)
        assert mdr.effective_potential(s, hi, 1.0 + 1e-15) == pytest.approx(hi * hi, rel=1e-12)


class TestResponse:
    @settings(max_examples=50)
    @given(st.integers(1, 40), st.floats(0.1, 60.0))
    def test_no_sphere_identity(self, nu, x):
        assert mdr.interior_intensity(1.0, nu, x) == pytest.approx(1.0, abs=1e-12)

    def test_identity_on_grid(self):
        x = np.linspace(0.5, 40.0, 2000)
        for nu in (1, 10, 25):
            assert np.max(np.abs(mdr.interior_intensity(1.0, nu, x) - 1.0)) <= 1e-12

    def test_positive_and_finite(self):
        for nu in (10, 20, 30):
            x = np.linspace(nu / N, 2 * nu, 10000)
            r = mdr.te_response(sphere(nu), x)
            assert np.all(np.isfinite(r)) and np.all(r > 0)

    def test_matches_series_low_order(self):
        # independent evaluation through the Bessel series: psi_nu(z) = sqrt(pi z/2) J_{nu+1/2}(z)
        nu, x = 1, 0.7
        psi = lambda z: math.sqrt(math.pi * z / 2) * series_bessel_j(nu + 0.5, z)
        h = 1e-5
        dpsi = lambda z: (psi(z + h) - psi(z - h)) / (2 * h)
        # chi_1(z) = cos z / z + sin z, closed form
        chi = lambda z: math.cos(z) / z + math.sin(z)
        dchi = lambda z: -math.sin(z) / z - math.cos(z) / z**2 + math.cos(z)
        u, du = psi(N * x), N * dpsi(N * x)
        a = du * chi(x) - u * dchi(x)
        b = u * dpsi(x) - du * psi(x)
        assert mdr.te_response(sphere(nu), x) == pytest.approx(1 / (a * a + b * b), rel=1e-8)

    def test_domain(self):
        with pytest.raises(DomainError):
            mdr.te_response(sphere(3), 0.0)
        with pytest.raises(DomainError):
            mdr.interior_intensity(0.9, 3, 1.0)


class TestFindResonances:
    def test_spec_window(self):
        s = sphere(20)
        coarse = mdr.find_resonances(s, 10.0, 20.0, 20000)
        fine = mdr.find_resonances(s, 10.0, 20.0, 40000)
        assert len(coarse) >= 1 and len(fine) == len(coarse)
        step = 10.0 / 19999
        for a, b in zip(coarse, fine):
            assert abs(a.x_res - b.x_res) < step

    def test_records(self, nu20):
        s, recs = nu20
        assert [r.order for r in recs[:3]] == [1, 2, 3]
        for r in recs:
            assert r.nu == 20 and r.width > 0
            assert r.q_factor == pytest.approx(r.x_res / r.width, rel=1e-12)

    def test_peaks_are_strict_local_maxima(self):
        s = sphere(20)
        x = np.linspace(10.0, 20.0, 20000)
        resp = mdr.te_response(s, x)
        recs = mdr.find_resonances(s, 10.0, 20.0, 20000)
        assert recs
        for r in recs:
            d = 1e-3 * r.width
            peak = mdr.te_response(s, r.x_res)
            assert peak > mdr.te_response(s, r.x_res - d) and peak > mdr.te_response(s, r.x_res + d)
            # local background: lowest response within five widths
            near = np.abs(x - r.x_res) < 5 * r.width
            assert peak > 10 * resp[near].min()

    def test_half_height_width(self, nu20):
        s, recs = nu20
        r = recs[0]
        # width brackets the half-height points
        left = mdr.te_response(s, r.x_res - 0.5 * r.width * 0.9)
        right = mdr.te_response(s, r.x_res + 0.5 * r.width * 1.1)
        assert left > 0.5 * r.enhancement > right

    def test_q_decreases_with_order(self):
        for nu in (15, 20, 25, 30):
            recs = mdr.find_resonances(sphere(nu), nu / N, 1.5 * nu, 20000)
            qs = [r.q_factor for r in recs[:3]]
            assert all(a > b for a, b in zip(qs, qs[1:]))

    def test_q_grows_with_nu(self):
        q = {nu: mdr.find_resonances(sphere(nu), nu / N, 1.5 * nu, 20000)[0].q_factor for nu in (10, 30)}
        assert q[30] > q[10]

    def test_low_orders_inside_barrier_window(self):
        for nu in (15, 20, 25, 30):
            s = sphere(nu)
            lo, hi = mdr.barrier_window(s)
            recs = mdr.find_resonances(s, nu / N, 1.5 * nu, 20000)
            for r in recs:
                if r.order <= 2:
                    assert lo < r.x_res < hi

    def test_above_barrier_peaks_are_broad(self, nu20):
        s, recs = nu20
        _, top = mdr.barrier_window(s)
        inside = [r.q_factor for r in recs if r.x_res < top]
        above = [r.q_factor for r in recs if r.x_res > top]
        assert above and max(above) < min(inside)

    def test_vanishing_well(self):
        assert mdr.find_resonances(sphere(20, 1.0001), 10.0, 20.0, 2000) == []

    def test_trace(self):
        trace = []
        mdr.find_resonances(sphere(5), 3.0, 6.0, 200, trace=trace)
        assert len(trace) == 200 and trace[0][0] == 3.0

    def test_domain(self):
        with pytest.raises(DomainError):
            mdr.find_resonances(sphere(5), 3.0, 2.0, 200)
        with pytest.raises(DomainError):
            mdr.find_resonances(sphere(5), 1.0, 2.0, 99)


class TestShapeResonance:
    @pytest.mark.parametrize("nu", [15, 20, 25])
    def test_agrees_with_scan(self, nu):
        recs = mdr.find_resonances(sphere(nu), nu / N, 1.5 * nu, 20000)
        for order in (1, 2, 3):
            rec = next(r for r in recs if r.order == order)
            est = mdr.shape_resonance_estimate(sphere(nu), order)
            assert abs(est - rec.x_res) / rec.x_res <= 1e-3

    def test_levels_ascend(self):
        est = [mdr.shape_resonance_estimate(sphere(20), k) for k in (1, 2, 3)]
        assert est == sorted(est)

    def test_first_level_in_window(self):
        for nu in (15, 20, 25):
            lo, hi = mdr.barrier_window(sphere(nu))
            assert lo < mdr.shape_resonance_estimate(sphere(nu), 1) < hi

    def test_bad_order(self):
        with pytest.raises(DomainError):
            mdr.shape_resonance_estimate(sphere(20), 0)


class TestModeOrder:
    def test_counts_zeros(self):
        # first zeros of j_1: 4.4934, 7.7253
        assert mdr.mode_order(1, 4.4) == 1
        assert mdr.mode_order(1, 4.6) == 2
        assert mdr.mode_order(1, 7.8) == 3
