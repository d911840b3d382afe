"""Confined Levy flow, invariant measures, and structural conditions."""

import numpy as np
import pytest
from scipy.special import exp1

from levylab import (
    LevyDensity,
    LevyTriplet,
    SpectralField,
    build_steady_state,
    check_domination,
    check_log_tail,
    check_radial_decay,
    drift_correction,
    fp_evolve,
    jump_symbol,
    limit_levy_density,
    stable_density,
    steady_exponent,
)
from levylab.errors import Con1Violation, InterpolationDegradation
from levylab.levy import _stable_norm_constant
from levylab.spectral import Grid

from conftest import gaussian


def stable_triplet(alpha, d=1):
    return LevyTriplet(
        sigma=np.zeros((d, d)), b=np.zeros(d), nu=stable_density(alpha, d), d=d
    )


def diffusion_triplet(d=1):
    return LevyTriplet(sigma=np.eye(d), b=np.zeros(d), nu=None, d=d)


@pytest.fixture(scope="module")
def cauchy_steady(grid1):
    return build_steady_state(stable_triplet(1.0), grid1)


@pytest.fixture(scope="module")
def gauss_steady(grid1):
    return build_steady_state(diffusion_triplet(), grid1)


class TestFpEvolve:
    def test_ou_variance_oracle(self, grid1):
        # v(t) = 1 + (v0 - 1) e^{-2t}: variance 4 reaches 1.75 at t = ln 2
        out = fp_evolve(gaussian(grid1, var=4.0), diffusion_triplet(), np.log(2.0))
        exact = gaussian(grid1, var=1.75)
        assert np.max(np.abs(out.values - exact.values)) < 1e-8

    def test_zero_time_identity(self, grid1):
        f = gaussian(grid1)
        out = fp_evolve(f, stable_triplet(1.5), 0.0)
        np.testing.assert_array_equal(out.values, f.values)

    def test_long_time_convergence_to_steady(self):
        # the flow contracts toward the invariant law at rate e^{-t}
        g = Grid(1, 80.0, 2048)
        tr = stable_triplet(1.0)
        steady = build_steady_state(tr, g)
        u = fp_evolve(gaussian(g, var=1.0, center=1.0), tr, 16.0)
        dist = np.sum(np.abs(u.values - steady.density.values)) * g.dx
        assert dist < 1e-6

    def test_mass_conservation(self, grid1):
        f = gaussian(grid1, var=0.5, center=-1.0)
        out = fp_evolve(f, stable_triplet(0.8), 1.3)
        assert out.mass() == pytest.approx(f.mass(), rel=1e-12)

    def test_flow_property_diffusion(self, grid1):
        u0 = gaussian(grid1, var=4.0)
        tr = diffusion_triplet()
        two = fp_evolve(fp_evolve(u0, tr, 0.3), tr, 0.7)
        one = fp_evolve(u0, tr, 1.0)
        assert np.max(np.abs(two.values - one.values)) < 1e-8

    def test_flow_property_stable(self, grid1):
        # heavy-tailed steady laws limit off-grid interpolation accuracy;
        # the composition error shrinks like 1/L under box refinement
        u0 = gaussian(grid1, var=1.0)
        tr = stable_triplet(1.0)
        two = fp_evolve(fp_evolve(u0, tr, 0.3), tr, 0.7)
        one = fp_evolve(u0, tr, 1.0)
        assert np.max(np.abs(two.values - one.values)) < 1e-3

    def test_nyquist_warning(self, grid1):
        rng = np.random.default_rng(3)
        noisy = SpectralField(grid1, values=rng.standard_normal(grid1.shape))
        with pytest.warns(InterpolationDegradation):
            fp_evolve(noisy, diffusion_triplet(), 0.5)


class TestStationarity:
    @pytest.mark.parametrize("t", [0.5, 1.0, 5.0])
    def test_gaussian_steady_is_fixed(self, t, gauss_steady):
        out = fp_evolve(gauss_steady.density, diffusion_triplet(), t)
        drift = np.sum(np.abs(out.values - gauss_steady.density.values))
        assert drift * gauss_steady.density.grid.dx < 1e-12

    @pytest.mark.parametrize("t", [0.5, 1.0, 5.0])
    def test_cauchy_steady_is_fixed_coarsely(self, t, cauchy_steady):
        # the kink of e^{-|xi|} at 0 caps the interpolation accuracy here
        out = fp_evolve(cauchy_steady.density, stable_triplet(1.0), t)
        drift = np.sum(np.abs(out.values - cauchy_steady.density.values))
        assert drift * cauchy_steady.density.grid.dx < 0.05


class TestBuildSteadyState:
    def test_gaussian_oracle(self, gauss_steady, grid1):
        exact = np.exp(-grid1.x1**2 / 2.0) / np.sqrt(2.0 * np.pi)
        assert np.max(np.abs(gauss_steady.density.values - exact)) < 1e-12
        assert gauss_steady.exponent(1.0) == pytest.approx(-0.5)

    @pytest.mark.parametrize("alpha", [0.5, 1.0, 1.5])
    def test_stable_exponent_closed_form(self, alpha):
        tr = stable_triplet(alpha)
        for xi in (0.1, 1.0, 4.0, 10.0):
            assert steady_exponent(tr, xi) == pytest.approx(
                -abs(xi) ** alpha / alpha, abs=1e-12
            )

    def test_cauchy_density_coarse(self, cauchy_steady, grid1):
        cauchy = 1.0 / (np.pi * (1.0 + grid1.x1**2))
        assert np.max(np.abs(cauchy_steady.density.values - cauchy)) < 5e-3

    def test_unit_mass_and_small_defect(self, cauchy_steady, grid1):
        assert cauchy_steady.density.mass() == pytest.approx(1.0, abs=1e-10)
        assert abs(cauchy_steady.mass_defect) < 1e-6

    def test_quadrature_exponent_matches_stable_route(self, grid1):
        # analytic wrapper forces the s-integral quadrature path
        nu = LevyDensity(
            kind="analytic", d=1, func=stable_density(1.0, 1), is_even=True
        )
        tr = LevyTriplet(sigma=np.zeros((1, 1)), b=np.zeros(1), nu=nu, d=1)
        for xi in (0.1, 1.0, 10.0):
            assert steady_exponent(tr, xi) == pytest.approx(-abs(xi), abs=1e-9)

    def test_divergent_log_tail_rejected(self, coarse_grid):
        nu = LevyDensity(
            kind="analytic", d=1,
            func=lambda z: 1.0 / (abs(z) * np.log(abs(z)) ** 2)
            if abs(z) >= np.e else 0.0,
            is_even=True,
        )
        tr = LevyTriplet(sigma=np.zeros((1, 1)), b=np.zeros(1), nu=nu, d=1)
        with pytest.raises(Con1Violation):
            build_steady_state(tr, coarse_grid)

    def test_steady_law_triplet_consistency(self, grid1):
        # exp(Psi) must match the Levy-Khinchine form with density N/alpha
        tr = stable_triplet(1.0)
        n_inf = LevyDensity(
            kind="analytic", d=1,
            func=lambda z, n=tr.nu: n(z) / 1.0, is_even=True,
        )
        for xi in (0.5, 2.0, 7.0):
            lhs = np.exp(steady_exponent(tr, xi))
            rhs = np.exp(jump_symbol(n_inf, xi))
            assert lhs == pytest.approx(rhs, abs=1e-7)


class TestLimitLevyDensity:
    @pytest.mark.parametrize("alpha", [0.5, 1.0, 1.5])
    @pytest.mark.parametrize("z", [0.03, 1.0, 30.0])
    def test_stable_scaling(self, alpha, z):
        nu = stable_density(alpha, 1)
        assert limit_levy_density(nu, z) == pytest.approx(
            nu(z) / alpha, rel=1e-6
        )

    def test_compact_support_vanishes(self):
        nu = LevyDensity(
            kind="analytic", d=1,
            func=lambda z: 1.0 if abs(z) <= 1.0 else 0.0, is_even=True,
        )
        assert limit_levy_density(nu, 2.0) == 0.0

    def test_exponential_density(self):
        nu = LevyDensity(
            kind="analytic", d=1,
            func=lambda z: np.exp(-abs(z)) / abs(z), is_even=True,
        )
        # int_1^inf e^{-2t}/(2t) dt = E1(2)/2
        assert limit_levy_density(nu, 2.0) == pytest.approx(
            exp1(2.0) / 2.0, abs=1e-8
        )


class TestDriftCorrection:
    def test_even_density(self):
        assert drift_correction(stable_density(1.3, 1)) == pytest.approx(0.0)

    def test_no_jumps(self):
        assert drift_correction(None) == pytest.approx(0.0)

    def test_half_line_density_positive(self):
        nu = LevyDensity(
            kind="analytic", d=1,
            func=lambda z: np.exp(-z) if z > 0 else 0.0, is_even=False,
        )
        val = drift_correction(nu)
        assert val[0] > 0.0


class TestLogTail:
    def test_stable_alpha_one(self):
        rep = check_log_tail(stable_density(1.0, 1))
        c = _stable_norm_constant(1, 1.0)
        # 2c int_1^inf ln(z) z^{-2} dz = 2c / alpha^2
        assert not rep.diverged
        assert rep.value == pytest.approx(2.0 * c, rel=1e-10)

    def test_log_divergent_tail_flagged(self):
        nu = LevyDensity(
            kind="analytic", d=1,
            func=lambda z: 1.0 / (abs(z) * np.log(abs(z)) ** 2)
            if abs(z) >= np.e else 0.0,
            is_even=True,
        )
        assert check_log_tail(nu).diverged

    def test_compact_support(self):
        nu = LevyDensity(
            kind="analytic", d=1,
            func=lambda z: 1.0 if abs(z) <= 1.0 else 0.0, is_even=True,
        )
        rep = check_log_tail(nu)
        assert rep.value == pytest.approx(0.0, abs=1e-12)


class TestDomination:
    @pytest.mark.parametrize("alpha", [0.5, 1.0, 1.5])
    def test_stable_ratio_is_constant(self, alpha):
        rep = check_domination(stable_density(alpha, 1))
        ratios = np.array([r for _, r in rep.table])
        assert not rep.unbounded
        np.testing.assert_allclose(ratios, 1.0 / alpha, rtol=1e-6)

    def test_exponential_counterexample(self):
        nu = LevyDensity(
            kind="analytic", d=1,
            func=lambda z: np.exp(-abs(z)) / abs(z), is_even=True,
        )
        rep = check_domination(nu)
        assert rep.unbounded
        small = [r for z, r in rep.table if z < 1e-3]
        assert max(small) > 10.0

    def test_no_jumps(self):
        rep = check_domination(None)
        assert rep.C_est == 0.0 and rep.table == []


class TestRadialDecay:
    def test_stable_equality_case(self):
        alpha = 1.5
        nu = stable_density(alpha, 1)
        rep = check_radial_decay(
            lambda x: limit_levy_density(nu, x),
            nu,
            points=[0.5, 1.0, 2.0],
            C=1.0 / alpha,
        )
        assert rep.monotone_ok
        assert rep.max_identity_error < 1e-5

    def test_compact_support_tail(self):
        nu = LevyDensity(
            kind="analytic", d=1,
            func=lambda z: 1.0 if abs(z) <= 1.0 else 0.0, is_even=True,
        )
        rep = check_radial_decay(
            lambda x: limit_levy_density(nu, x), nu, points=[3.0], C=1.0,
            t_grid=np.linspace(1.0, 10.0, 10),
        )
        assert rep.monotone_ok
