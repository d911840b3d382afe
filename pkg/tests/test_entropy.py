"""Phi-entropies, Bregman distances, dissipation, and decay tracking."""

import numpy as np
import pytest

from levylab import (
    LevyDensity,
    LevyTriplet,
    PhiFunction,
    SpectralField,
    WeightedMeasure,
    bregman,
    build_steady_state,
    decay_track,
    dissipation,
    entropy_production_check,
    modified_lsi_check,
    phi_entropy,
    stable_density,
)
from levylab.entropy import _fd_gradient
from levylab.errors import DomainError
from levylab.spectral import Grid

from conftest import gaussian

XLOGX = PhiFunction.xlogx()
QUAD = PhiFunction.quadratic()


def stable_triplet(alpha, d=1):
    return LevyTriplet(
        sigma=np.zeros((d, d)), b=np.zeros(d), nu=stable_density(alpha, d), d=d
    )


def diffusion_triplet(d=1):
    return LevyTriplet(sigma=np.eye(d), b=np.zeros(d), nu=None, d=d)


def two_cell_measure():
    g = Grid(1, 4.0, 8)
    w = np.zeros(8)
    w[2] = w[5] = 0.5 / g.dx
    return g, WeightedMeasure(g, w)


@pytest.fixture(scope="module")
def cauchy_steady(grid1):
    return build_steady_state(stable_triplet(1.0), grid1)


@pytest.fixture(scope="module")
def gauss_steady(grid1):
    return build_steady_state(diffusion_triplet(), grid1)


class TestBregman:
    def test_quadratic_closed_form(self):
        assert bregman(QUAD, 3.0, 1.0) == pytest.approx(2.0)

    @pytest.mark.parametrize("phi", [XLOGX, QUAD])
    def test_zero_at_diagonal(self, phi):
        assert bregman(phi, 1.7, 1.7) == pytest.approx(0.0, abs=1e-14)

    def test_xlogx_value(self):
        assert bregman(XLOGX, 2.0, 1.0) == pytest.approx(2.0 * np.log(2.0) - 1.0)

    def test_xlogx_rejects_zero_base(self):
        with pytest.raises(DomainError):
            bregman(XLOGX, 1.0, 0.0)

    @pytest.mark.parametrize("phi", [XLOGX, QUAD])
    def test_nonnegative_on_random_pairs(self, phi):
        rng = np.random.default_rng(4)
        for _ in range(50):
            a, b = rng.uniform(0.01, 5.0, 2)
            assert bregman(phi, a, b) >= -1e-14

    @pytest.mark.parametrize("phi", [XLOGX, QUAD])
    def test_admissible(self, phi):
        assert phi.admissible
        # a zero Hessian eigenvalue limits the finite-difference certificate
        assert phi.check_admissible(h=1e-4) > -1e-6


class TestPhiEntropy:
    @pytest.mark.parametrize("phi", [XLOGX, QUAD])
    def test_constant_field(self, phi):
        g, mu = two_cell_measure()
        v = SpectralField(g, values=np.full(8, 3.0))
        assert phi_entropy(v, mu, phi) == pytest.approx(0.0, abs=1e-12)

    def test_two_cell_variance(self):
        g, mu = two_cell_measure()
        v = np.zeros(8)
        v[5] = 2.0
        assert phi_entropy(v, mu, QUAD) == pytest.approx(0.5)

    def test_two_cell_xlogx(self):
        g, mu = two_cell_measure()
        v = np.zeros(8)
        v[2] = 2.0
        assert phi_entropy(v, mu, XLOGX) == pytest.approx(np.log(2.0))

    def test_quadratic_scaling(self, gauss_steady):
        mu = WeightedMeasure.from_field(gauss_steady.density)
        g = gauss_steady.density.grid
        v = SpectralField.from_function(g, lambda x: 1.0 + 0.5 * np.exp(-(x**2)))
        e1 = phi_entropy(v, mu, QUAD)
        e3 = phi_entropy(v.with_values(3.0 * v.values), mu, QUAD)
        assert e3 == pytest.approx(9.0 * e1, rel=1e-10)

    def test_nonnegative_on_random_fields(self, gauss_steady):
        mu = WeightedMeasure.from_field(gauss_steady.density)
        g = gauss_steady.density.grid
        rng = np.random.default_rng(5)
        for _ in range(5):
            c = rng.uniform(-2, 2)
            w = rng.uniform(0.5, 2)
            v = SpectralField.from_function(
                g, lambda x: 0.2 + np.exp(-((x - c) ** 2) / w)
            )
            for phi in (XLOGX, QUAD):
                assert phi_entropy(v, mu, phi) >= -1e-12


class TestDissipation:
    def test_constant_ratio_field(self, cauchy_steady):
        mu = WeightedMeasure.from_field(cauchy_steady.density)
        g = cauchy_steady.density.grid
        v = SpectralField(g, values=np.ones(g.shape))
        gauss, jump = dissipation(v, mu, stable_triplet(1.0), XLOGX)
        assert gauss == 0.0
        assert jump == pytest.approx(0.0, abs=1e-14)

    def test_classical_dirichlet_form(self, gauss_steady):
        # nu = 0, quadratic Phi: reduces to the weighted Dirichlet energy
        mu = WeightedMeasure.from_field(gauss_steady.density)
        g = gauss_steady.density.grid
        v = SpectralField.from_function(g, lambda x: 1.0 + 0.3 * np.exp(-(x**2)))
        gauss, jump = dissipation(v, mu, diffusion_triplet(), QUAD)
        assert jump == 0.0
        grad = _fd_gradient(v.values, g)[0]
        ref = float(np.sum(grad**2 * mu.weights) * g.dx)
        assert gauss == pytest.approx(ref, rel=1e-12)

    def test_brute_force_jump_part(self):
        # compound-Poisson density against an explicit double Riemann sum
        g = Grid(1, 20.0, 64)
        nu = LevyDensity(
            kind="analytic", d=1,
            func=lambda z: 1.0 if abs(z) <= 1.0 else 0.0, is_even=True,
        )
        tr = LevyTriplet(sigma=np.zeros((1, 1)), b=np.zeros(1), nu=nu, d=1)
        mu = WeightedMeasure(g, np.full(g.shape, 1.0 / (2.0 * g.L)))
        v = SpectralField(g, values=1.5 + np.sin(np.pi * g.x1 / g.L))
        _, jump = dissipation(v, mu, tr, QUAD)

        vals = v.values
        K = g.M  # z extent 2L, matching the module's lattice
        ref = 0.0
        for k in range(-K, K + 1):
            if k == 0:
                continue
            nz = nu(k * g.dx)
            if nz == 0.0:
                continue
            for j in range(g.M):
                a = vals[j]
                b = vals[(j + k) % g.M]
                ref += nz * 0.5 * (a - b) ** 2 * mu.weights[j] * g.dx * g.dx
        grad = _fd_gradient(vals, g)[0]
        m2 = nu.small_ball_second_moment(0.5 * g.dx)
        ref += 0.5 * m2 * float(np.sum(grad**2 * mu.weights) * g.dx)
        assert jump == pytest.approx(ref, abs=1e-6)

    def test_even_density_shift_symmetry(self, cauchy_steady):
        # D(v(x), v(x+z)) integrates to the same value as D(v(x), v(x-z))
        mu = WeightedMeasure.from_field(cauchy_steady.density)
        g = cauchy_steady.density.grid
        v = SpectralField.from_function(
            g, lambda x: 1.0 + 0.4 * np.exp(-((x - 0.7) ** 2))
        )
        tr = stable_triplet(1.0)
        _, jump = dissipation(v, mu, tr, XLOGX)
        flipped = SpectralField(g, values=v.values[::-1].copy())
        mu_f = WeightedMeasure(g, mu.weights[::-1].copy())
        _, jump_f = dissipation(flipped, mu_f, tr, XLOGX)
        assert jump_f == pytest.approx(jump, rel=1e-10)

    @pytest.mark.parametrize("alpha", [0.5, 1.5])
    def test_limit_density_domination(self, alpha, grid1):
        # jump dissipation under N_inf is at most (1/alpha) times under N
        steady = build_steady_state(stable_triplet(alpha), grid1)
        mu = WeightedMeasure.from_field(steady.density)
        nu = stable_density(alpha, 1)
        nu_inf = LevyDensity(
            kind="analytic", d=1,
            func=lambda z, n=nu, a=alpha: n(z) / a, is_even=True,
        )
        tr = lambda n: LevyTriplet(  # noqa: E731
            sigma=np.zeros((1, 1)), b=np.zeros(1), nu=n, d=1
        )
        rng = np.random.default_rng(6)
        for _ in range(3):
            c = rng.uniform(-1.5, 1.5)
            v = SpectralField.from_function(
                grid1, lambda x: 1.0 + 0.5 * np.exp(-((x - c) ** 2))
            )
            _, with_n = dissipation(v, mu, tr(nu), QUAD)
            _, with_inf = dissipation(v, mu, tr(nu_inf), QUAD)
            assert with_inf <= with_n / alpha * (1.0 + 1e-9)


class TestModifiedLsi:
    def test_constant_function(self, gauss_steady):
        mu = WeightedMeasure.from_field(gauss_steady.density)
        g = gauss_steady.density.grid
        v = SpectralField(g, values=np.ones(g.shape))
        law = LevyTriplet(sigma=0.5 * np.eye(1), b=np.zeros(1), nu=None, d=1)
        ent, rhs, ratio = modified_lsi_check(v, mu, law, XLOGX)
        assert ratio == 0.0

    def test_gross_inequality_instance(self, gauss_steady):
        # exponential tilt against the standard Gaussian law
        mu = WeightedMeasure.from_field(gauss_steady.density)
        g = gauss_steady.density.grid
        v = SpectralField.from_function(g, lambda x: np.exp(x / 2.0))
        law = LevyTriplet(sigma=0.5 * np.eye(1), b=np.zeros(1), nu=None, d=1)
        ent, rhs, ratio = modified_lsi_check(v, mu, law, XLOGX)
        assert ent > 0
        assert ratio <= 1.0 + 1e-6

    def test_cauchy_law_quadratic(self, cauchy_steady):
        g = cauchy_steady.density.grid
        nu = stable_density(1.0, 1)
        law = LevyTriplet(sigma=np.zeros((1, 1)), b=np.zeros(1), nu=nu, d=1)
        v = SpectralField.from_function(
            g, lambda x: 1.0 + 0.5 * np.exp(-(x**2)) * np.sin(x) ** 2
        )
        ent, rhs, ratio = modified_lsi_check(v, cauchy_steady, law, QUAD)
        assert ratio <= 1.0 + 1e-6


class TestEntropyProduction:
    def test_steady_initial_data(self, gauss_steady):
        rep = entropy_production_check(
            gauss_steady.density, diffusion_triplet(), QUAD, 0.5, 1e-3,
            gauss_steady,
        )
        assert rep.residual < 1e-10

    def test_gaussian_rate_two(self, gauss_steady, grid1):
        # quadratic entropy of the linear-Gaussian flow decays at rate 2
        u0 = gaussian(grid1, var=1.0, center=0.1)
        rep = entropy_production_check(
            u0, diffusion_triplet(), QUAD, 0.5, 1e-3, gauss_steady
        )
        assert rep.passed
        mu = WeightedMeasure.from_field(gauss_steady.density)
        from levylab.entropy import _ratio_field
        from levylab.fokker_planck import fp_evolve

        ent = phi_entropy(
            _ratio_field(fp_evolve(u0, diffusion_triplet(), 0.5), gauss_steady),
            mu, QUAD,
        )
        # rate 2 holds to O(shift^2) for a mean-shifted initial Gaussian
        assert rep.finite_difference == pytest.approx(-2.0 * ent, rel=5e-3)


class TestDecayTrack:
    def test_steady_initial_data(self, gauss_steady):
        rep = decay_track(
            gauss_steady.density, diffusion_triplet(), QUAD,
            [0.25, 0.5, 1.0], 0.5, gauss_steady,
        )
        assert rep.violations == []
        assert all(e < 1e-12 for e in rep.entropies)

    def test_gaussian_fitted_rate(self, gauss_steady, grid1):
        u0 = gaussian(grid1, var=1.0, center=0.1)
        rep = decay_track(
            u0, diffusion_triplet(), QUAD, [0.25, 0.5, 1.0, 2.0], 0.5,
            gauss_steady,
        )
        assert rep.violations == []
        assert rep.fitted_rate == pytest.approx(2.0, abs=0.01)

    def test_invalid_constant_flags_violations(self, gauss_steady, grid1):
        # a bound rate far above the true decay rate must be caught
        u0 = gaussian(grid1, var=1.0, center=0.1)
        rep = decay_track(
            u0, diffusion_triplet(), QUAD, [0.25, 0.5, 1.0, 2.0], 0.1,
            gauss_steady,
        )
        assert len(rep.violations) > 0
