import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fsq import fiber as fb
from fsq import numerics as nm
from fsq.errors import DomainError, InvalidProfile

from oracles import lp_cutoffs, lp_mode_count

V_SET = (1.5, 2.0, 3.0, 5.0, 8.0)
N1, N2 = 1.5, 1.0


def step_for_v(v, k0=1.0, n1=N1, n2=N2):
    return fb.StepProfile(n1, n2, v / (k0 * math.sqrt(n1 * n1 - n2 * n2)))


def stencil_d2(f, h):
    """Fourth-order central second difference at the interior points f[2:-2]."""
    return (-f[4:] + 16 * f[3:-1] - 30 * f[2:-2] + 16 * f[1:-3] - f[:-4]) / (12 * h * h)


class TestProfiles:
    @pytest.mark.parametrize("args", [(1.4, 1.5, 1e-6), (1.5, 0.9, 1e-6), (1.5, 1.4, 0.0)])
    def test_step_invalid(self, args):
        with pytest.raises(InvalidProfile):
            fb.StepProfile(*args)

    def test_tabulated_validation(self):
        with pytest.raises(InvalidProfile):
            fb.TabulatedProfile((0.0, 1.0, 0.5), (1.5, 1.4, 1.4))
        with pytest.raises(InvalidProfile):
            fb.TabulatedProfile((0.0, 1.0), (1.4, 1.4))
        with pytest.raises(InvalidProfile):
            fb.TabulatedProfile((0.0,), (1.4,))

    def test_tabulated_limits(self):
        p = fb.TabulatedProfile((0.0, 1e-6, 2e-6), (1.46, 1.45, 1.44))
        assert p.n_max == 1.46 and p.n_clad == 1.44 and p.r_tail == 2e-6
        assert p.index(1e-3) == 1.44
        assert p.index(0.5e-6) == pytest.approx(1.455)

    def test_csv_with_header(self, tmp_path):
        f = tmp_path / "p.csv"
        f.write_text("r,n\n0,1.46\n1e-6,1.45\n2e-6,1.44\n")
        p = fb.TabulatedProfile.from_csv(f)
        assert p.r_grid == (0.0, 1e-6, 2e-6) and p.n_values == (1.46, 1.45, 1.44)

    def test_csv_without_header(self, tmp_path):
        f = tmp_path / "p.csv"
        f.write_text("0,1.46\n2e-6,1.44\n")
        assert fb.TabulatedProfile.from_csv(f).n_max == 1.46

    def test_csv_bad_row(self, tmp_path):
        f = tmp_path / "p.csv"
        f.write_text("0,1.46\nx,y\n")
        with pytest.raises(InvalidProfile):
            fb.TabulatedProfile.from_csv(f)


class TestTransform:
    p = fb.StepProfile(1.45, 1.44, 4e-6)
    k0 = 2 * math.pi / 1.55e-6

    def test_core_potential_is_centrifugal(self):
        view = fb.okoshi_transform(self.p, 2, self.k0, 1.445 * self.k0)
        r = 1e-6
        assert view.V_of_r(r) == pytest.approx(3.75 / r**2, rel=1e-14)

    def test_far_limit(self):
        view = fb.okoshi_transform(self.p, 0, self.k0, 1.445 * self.k0)
        expected = (1.45**2 - 1.44**2) * self.k0**2
        assert view.V_inf == pytest.approx(expected, rel=1e-14)
        assert view.V_of_r(1.0) == pytest.approx(expected, rel=1e-9)

    def test_boundary_energy(self):
        view = fb.okoshi_transform(self.p, 0, self.k0, 1.44 * self.k0)
        assert view.E_val == pytest.approx(view.V_inf, rel=1e-12)

    def test_array_input(self):
        view = fb.okoshi_transform(self.p, 1, self.k0, 1.445 * self.k0)
        out = view.V_of_r(np.array([1e-6, 1e-5]))
        assert out.shape == (2,)


class TestStepSolver:
    @pytest.mark.parametrize("v", V_SET + tuple(float(x) for x in range(1, 11)))
    def test_count_matches_oracle(self, v):
        assert len(fb.lp_solve_all_step(step_for_v(v), 1.0)) == lp_mode_count(v)

    def test_v2_single_mode(self):
        p = step_for_v(2.0)
        assert len(fb.lp_solve_step(p, 0, 1.0)) == 1
        assert fb.lp_solve_step(p, 1, 1.0) == []

    def test_v5_mode_set(self):
        labels = {m.label for m in fb.lp_solve_all_step(step_for_v(5.0), 1.0)}
        assert labels == {"LP01", "LP11", "LP21", "LP02"}

    def test_lp11_cutoff(self):
        j01 = lp_cutoffs(1, 3.0)[0]
        assert j01 == pytest.approx(2.404825557695773, rel=1e-12)
        assert fb.lp_solve_step(step_for_v(j01 * (1 - 1e-6)), 1, 1.0) == []
        assert len(fb.lp_solve_step(step_for_v(j01 * (1 + 1e-3)), 1, 1.0)) == 1

    @pytest.mark.parametrize("v", V_SET)
    def test_invariants(self, v):
        p = step_for_v(v)
        for m in fb.lp_solve_all_step(p, 1.0):
            assert abs(m.u**2 + m.w**2 - v * v) <= 1e-10 * v * v
            assert N2 < m.beta < N1
            assert m.classification is fb.Classification.GUIDED
            assert m.E_val == pytest.approx(N1**2 - m.beta**2, rel=1e-12, abs=1e-15)

    @pytest.mark.parametrize("v", V_SET)
    def test_roots_satisfy_characteristic_equation(self, v):
        p = step_for_v(v)
        for m in fb.lp_solve_all_step(p, 1.0):
            lhs = m.u * nm.bessel_j(m.l - 1, m.u) / nm.bessel_j(m.l, m.u)
            rhs = -m.w * nm.bessel_k_mod(m.l - 1, m.w) / nm.bessel_k_mod(m.l, m.w)
            assert lhs == pytest.approx(rhs, rel=1e-8, abs=1e-9)

    def test_ordering(self):
        modes = fb.lp_solve_step(step_for_v(12.0), 0, 1.0)
        assert [m.radial_order for m in modes] == list(range(1, len(modes) + 1))
        assert all(a.beta > b.beta for a, b in zip(modes, modes[1:]))

    def test_count_monotone_in_v(self):
        counts = [len(fb.lp_solve_all_step(step_for_v(float(v)), 1.0)) for v in range(1, 11)]
        assert counts == sorted(counts)

    def test_realistic_fiber(self):
        p = fb.StepProfile(1.45, 1.44, 4e-6)
        k0 = 2 * math.pi / 1.55e-6
        assert fb.v_number(p, k0) == pytest.approx(2.7564941992787926, rel=1e-14)
        labels = [m.label for m in fb.lp_solve_all_step(p, k0)]
        assert labels == ["LP01", "LP11"]

    def test_rejects_tabulated(self):
        with pytest.raises(InvalidProfile):
            fb.lp_solve_step(fb.TabulatedProfile((0.0, 1.0), (1.5, 1.4)), 0, 1.0)

    def test_bad_inputs(self):
        with pytest.raises(DomainError):
            fb.lp_solve_step(step_for_v(2.0), -1, 1.0)
        with pytest.raises(DomainError):
            fb.lp_solve_step(step_for_v(2.0), 0, 0.0)


class TestShooting:
    @pytest.mark.parametrize("v", V_SET)
    def test_agrees_with_step_solver(self, v):
        p = step_for_v(v)
        ref = fb.lp_solve_all_step(p, 1.0)
        got = fb.lp_solve_all_shooting(p, 1.0)
        assert [m.label for m in got] == [m.label for m in ref]
        for a, b in zip(ref, got):
            assert abs(a.beta - b.beta) / a.beta <= 1e-6

    def test_window_restriction_keeps_absolute_order(self):
        p = step_for_v(8.0)
        full = fb.lp_solve_shooting(p, 0, 1.0)
        part = fb.lp_solve_shooting(p, 0, 1.0, beta_hi=0.5 * (full[0].beta + full[1].beta))
        assert [m.radial_order for m in part] == [2, 3]

    def test_empty_window(self):
        with pytest.raises(DomainError):
            fb.lp_solve_shooting(step_for_v(3.0), 0, 1.0, beta_lo=1.4, beta_hi=1.3)

    def test_tabulated_step(self):
        a = 2.0
        tab = fb.TabulatedProfile((0.0, a, a * (1 + 1e-9), 2 * a), (N1, N1, N2, N2))
        ref = fb.lp_solve_step(fb.StepProfile(N1, N2, a), 0, 1.0)
        got = fb.lp_solve_shooting(tab, 0, 1.0)
        assert len(got) == len(ref) == 1
        assert got[0].beta == pytest.approx(ref[0].beta, rel=1e-6)

    def test_graded_profile(self):
        # parabolic core: modes come in near-degenerate groups, all inside the window
        r = np.linspace(0.0, 1.0, 201)
        n = np.sqrt(N1**2 - (N1**2 - N2**2) * r**2)
        tab = fb.TabulatedProfile(tuple(np.append(r, 1.5)), tuple(np.append(n, N2)))
        k0 = 6.0
        modes = fb.lp_solve_shooting(tab, 0, k0) + fb.lp_solve_shooting(tab, 1, k0)
        assert all(N2 * k0 < m.beta < N1 * k0 for m in modes)
        # unbounded-parabola levels: E = 2 k0 NA (2 - 1 + l + 2(m - 1)) / a
        na = math.sqrt(N1**2 - N2**2)
        lp01, lp11 = modes[0], next(m for m in modes if m.l == 1)
        assert lp01.E_val == pytest.approx(2 * k0 * na, rel=0.05)
        assert lp11.E_val == pytest.approx(4 * k0 * na, rel=0.05)

    def test_infinite_well_limit(self):
        # large index step: lowest levels approach (j_{0,m}/a)^2 from below
        a = 1.0
        zeros = lp_cutoffs(1, 12.0)  # zeros of J_0
        errs = []
        for v in (10.0, 20.0):
            p = fb.StepProfile(math.sqrt(1.0 + v * v), 1.0, a)
            modes = fb.lp_solve_shooting(p, 0, 1.0)
            energies = [m.E_val for m in modes]
            assert energies == sorted(energies)
            for e, j in zip(energies[:3], zeros):
                assert e < (j / a) ** 2
            errs.append(1 - energies[0] / (zeros[0] / a) ** 2)
        assert errs[1] < errs[0] < 0.2

    def test_transform_residual(self):
        for v in (3.0, 8.0):
            p = step_for_v(v)
            a, h = p.core_radius, 1e-3 * p.core_radius
            for m in fb.lp_solve_all_shooting(p, 1.0):
                view = fb.okoshi_transform(p, m.l, 1.0, m.beta)
                for r in (np.arange(0.1 * a, 0.95 * a, h), np.arange(1.05 * a, 1.45 * a, h)):
                    f = fb.radial_field(p, m.l, 1.0, m.beta, r)
                    resid = stencil_d2(f, h) + (view.E_val - view.V_of_r(r[2:-2])) * f[2:-2]
                    assert np.max(np.abs(resid)) <= 1e-6

    def test_field_decays_in_cladding(self):
        p = step_for_v(3.0)
        m = fb.lp_solve_shooting(p, 0, 1.0)[0]
        r = np.linspace(1.0, 1.5, 20) * p.core_radius
        f = fb.radial_field(p, 0, 1.0, m.beta, r)
        assert np.all(np.diff(np.abs(f)) < 0)

    def test_field_bad_radii(self):
        p = step_for_v(3.0)
        with pytest.raises(DomainError):
            fb.radial_field(p, 0, 1.0, 1.2, [2.0, 1.0])


class TestClassification:
    p = step_for_v(12.0)

    def view(self, v):
        return fb.okoshi_transform(self.p, v, 1.0, 0.0)

    def test_half_depth_guided(self):
        view = self.view(0)
        assert fb.classify_solution(view, view.V_inf / 2) is fb.Classification.GUIDED

    def test_window_biconditional(self):
        for beta in np.linspace(N2, N1, 102)[1:-1]:
            view = fb.okoshi_transform(self.p, 0, 1.0, beta)
            assert 0 < view.E_val < view.V_inf
            assert fb.classify_solution(view, view.E_val) is fb.Classification.GUIDED
        for beta in np.linspace(0.1, N2, 50):
            view = fb.okoshi_transform(self.p, 0, 1.0, beta)
            assert fb.classify_solution(view, view.E_val) is not fb.Classification.GUIDED

    def test_no_barrier_for_v0(self):
        view = self.view(0)
        for e in (view.V_inf * 1.001, view.V_inf * 2):
            assert fb.classify_solution(view, e) is fb.Classification.LEAKY_REFRACT

    def test_tunnel_v8(self):
        view = self.view(8)
        a = self.p.core_radius
        barrier_top = view.V_of_r(a * (1 + 1e-12))
        assert barrier_top > view.V_inf
        assert fb.classify_solution(view, view.V_inf * 1.01) is fb.Classification.LEAKY_TUNNEL
        assert fb.classify_solution(view, barrier_top * 1.01) is fb.Classification.LEAKY_REFRACT

    def test_nonpositive_energy(self):
        with pytest.raises(DomainError):
            fb.classify_solution(self.view(0), 0.0)


class TestAsymptotic:
    def test_zero_at_pi(self):
        assert fb.asymptotic_fields(0, 2.0, [math.pi / 2])[0] == pytest.approx(0.0, abs=1e-15)

    def test_envelope(self):
        r = 2 * math.pi * np.array([1e2, 1e3, 1e4]) + 0.25 * math.pi
        vals = np.abs(fb.asymptotic_fields(0, 1.0, r))
        assert vals * r == pytest.approx(np.ones(3) * math.sin(0.25 * math.pi), rel=1e-9)

    @settings(max_examples=100)
    @given(st.floats(1e-3, 1e3), st.floats(1e-3, 1e2))
    def test_riccati_identity(self, k, r):
        # sin(kr)/r is psi_0(kr)/r; it equals psi_0(kr)/(kr) only when k = 1
        psi, _ = nm.riccati_psi(0, k * r)
        assert fb.asymptotic_fields(0, k, [r])[0] == pytest.approx(psi / r, rel=1e-12, abs=1e-15)

    def test_domain(self):
        with pytest.raises(DomainError):
            fb.asymptotic_fields(0, 0.0, [1.0])
        with pytest.raises(DomainError):
            fb.asymptotic_fields(0, 1.0, [0.0])
