"""Levy-Fokker-Planck dynamics with linear confinement F(x) = x.

In Fourier variables the equation du/dt = I[u] + div(u x) becomes a
transport equation along the contracting frequency flow xi -> exp(-t) xi,
solved exactly by

    u^(t, xi) = u0^(exp(-t) xi) * exp( int_0^t psi(exp(-s) xi) ds ).

Its invariant measure is the infinitely divisible law with exponent
Psi(xi) = int_0^1 psi(s xi) ds / s, whose Levy density is the radial tail
average N_inf(z) = int_1^inf N(t z) t^{d-1} dt.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import Con1Violation, InterpolationDegradation, NegativeDensity
from .levy import LevyTriplet, characteristic_exponent
from .quadrature import integrate_scaled, try_integrate
from .spectral import Grid, SpectralField

__all__ = [
    "fp_evolve",
    "steady_exponent",
    "build_steady_state",
    "SteadyState",
    "limit_levy_density",
    "drift_correction",
    "check_log_tail",
    "LogTailReport",
    "check_domination",
    "DominationReport",
    "check_radial_decay",
    "RadialDecayReport",
]

# fixed Gauss-Legendre rule for the smooth time integral in fp_evolve
_GL_NODES = 32


def _grid_freq_vectors(grid: Grid):
    axes = grid.freqs()
    if grid.d == 1:
        return axes[0]
    return np.stack(axes, axis=-1)


def _gauss_drift_exponent(triplet: LevyTriplet, grid: Grid):
    """-xi.sigma xi and i b.xi on the frequency mesh."""
    axes = grid.freqs()
    if grid.d == 1:
        xi = axes[0]
        gauss = -triplet.sigma[0, 0] * xi**2
        drift = 1j * triplet.b[0] * xi
    else:
        x0, x1 = axes
        s = triplet.sigma
        gauss = -(s[0, 0] * x0**2 + 2.0 * s[0, 1] * x0 * x1 + s[1, 1] * x1**2)
        drift = 1j * (triplet.b[0] * x0 + triplet.b[1] * x1)
    return gauss, drift


def _jump_exponent_mesh(triplet: LevyTriplet, grid: Grid, tol):
    """a(xi) on the frequency mesh, exploiting radial symmetry when possible."""
    if triplet.nu is None:
        return np.zeros(grid.shape, dtype=complex)
    r = grid.freq_norm()
    if triplet.is_stable_jump:
        return (-(r**triplet.nu.alpha)).astype(complex)
    if triplet.nu.is_even and (grid.d == 1 or triplet.nu.kind == "stable"):
        # even 1-D densities give an even, real symbol: evaluate per |xi|
        uniq, inv = np.unique(np.round(np.abs(r), 14), return_inverse=True)
        vals = np.array(
            [triplet.jump_exponent(u, tol) for u in uniq], dtype=complex
        )
        return vals[inv].reshape(grid.shape)
    flat = _grid_freq_vectors(grid).reshape(-1, grid.d) if grid.d > 1 else None
    if flat is not None:
        return np.array(
            [triplet.jump_exponent(v, tol) for v in flat], dtype=complex
        ).reshape(grid.shape)
    return np.array(
        [triplet.jump_exponent(float(x), tol) for x in grid.xi1], dtype=complex
    )


def _nudft_coefficients(u0: SpectralField, scale: float):
    """Continuum-transform values of u0 at the scaled frequencies scale*xi_k.

    Separable non-uniform DFT: exact trigonometric interpolation of the grid
    coefficients, valid because |scale| <= 1 keeps the targets inside the
    resolved band.
    """
    g = u0.grid
    x = g.x1
    xi_t = scale * g.xi1
    if g.d == 1:
        # row blocks keep the dense M x M kernel out of memory on big grids
        out = np.empty(g.M, dtype=complex)
        block = max(1, int(2**22 // g.M))
        for i in range(0, g.M, block):
            E = np.exp(1j * np.outer(xi_t[i:i + block], x)) * g.dx
            out[i:i + block] = E @ u0.values
        return out
    E = np.exp(1j * np.outer(xi_t, x)) * g.dx
    return E @ u0.values @ E.T


def fp_evolve(
    u0: SpectralField, triplet: LevyTriplet, t: float, tol: float = 1e-10
) -> SpectralField:
    """Evolve the Fokker-Planck flow for time t >= 0.

    Warns with InterpolationDegradation when the initial coefficients have
    not decayed below 1e-12 (relative) at the Nyquist edge.
    """
    if t < 0:
        raise ValueError("time must be nonnegative")
    if t == 0:
        return u0
    g = u0.grid
    c0 = u0.coefficients
    cmax = np.max(np.abs(c0)) or 1.0
    edge = np.abs(np.fft.fftshift(c0))
    edge_mass = max(float(edge[0]), float(edge[-1])) if g.d == 1 else max(
        np.max(edge[0, :]), np.max(edge[-1, :]), np.max(edge[:, 0]), np.max(edge[:, -1])
    )
    if edge_mass > 1e-12 * cmax:
        warnings.warn(
            f"coefficients at the Nyquist edge are {edge_mass / cmax:.2e} of max; "
            "band-limited interpolation may degrade",
            InterpolationDegradation,
        )
    scale = float(np.exp(-t))
    shifted = _nudft_coefficients(u0, scale)

    gauss, drift = _gauss_drift_exponent(triplet, g)
    J = gauss * (1.0 - np.exp(-2.0 * t)) / 2.0 + drift * (1.0 - np.exp(-t))
    if triplet.nu is not None:
        if triplet.is_stable_jump:
            al = triplet.nu.alpha
            r = g.freq_norm()
            J = J - (r**al) * (1.0 - np.exp(-al * t)) / al
        else:
            nodes, wts = np.polynomial.legendre.leggauss(_GL_NODES)
            s = 0.5 * t * (nodes + 1.0)
            w = 0.5 * t * wts
            acc = np.zeros(g.shape, dtype=complex)
            for si, wi in zip(s, w):
                mesh = _jump_exponent_mesh_scaled(triplet, g, float(np.exp(-si)), tol)
                acc = acc + wi * mesh
            J = J + acc
    return SpectralField(g, coefficients=shifted * np.exp(J))


def _jump_exponent_mesh_scaled(triplet, grid, scale, tol):
    r = scale * grid.freq_norm()
    if triplet.nu is not None and triplet.nu.is_even and grid.d == 1:
        uniq, inv = np.unique(np.round(np.abs(r), 14), return_inverse=True)
        vals = np.array([triplet.jump_exponent(u, tol) for u in uniq], dtype=complex)
        return vals[inv].reshape(grid.shape)
    flat = (scale * _grid_freq_vectors(grid)).reshape(-1, grid.d)
    return np.array(
        [triplet.jump_exponent(v if grid.d > 1 else float(v), tol) for v in flat],
        dtype=complex,
    ).reshape(grid.shape)


def steady_exponent(triplet: LevyTriplet, xi, tol: float = 1e-10):
    """Psi(xi) = int_0^1 psi(s xi) ds / s at a single frequency.

    The Gaussian and drift parts integrate in closed form (half and identity
    respectively); the jump part uses adaptive quadrature, or the closed
    form psi/alpha for the stable family.
    """
    xi_arr = np.atleast_1d(np.asarray(xi, dtype=float))
    v = xi_arr if triplet.d > 1 else float(xi_arr[0])
    if triplet.d == 1:
        gauss = -0.5 * triplet.sigma[0, 0] * v * v
        drift = 1j * triplet.b[0] * v
    else:
        gauss = -0.5 * float(xi_arr @ triplet.sigma @ xi_arr)
        drift = 1j * float(triplet.b @ xi_arr)
    if triplet.nu is None:
        return gauss + drift
    if triplet.is_stable_jump:
        al = triplet.nu.alpha
        return gauss + drift + triplet.jump_exponent(v, tol) / al
    jump = integrate_scaled(
        lambda s: triplet.jump_exponent(
            s * xi_arr if triplet.d > 1 else s * v, tol
        ) / s,
        (0.0, 1.0),
        tol,
    )
    return gauss + drift + jump


@dataclass(frozen=True)
class SteadyState:
    """Invariant measure of the confined Levy flow."""

    exponent: Callable
    density: SpectralField
    limit_density: Callable
    drift_correction: np.ndarray
    mass_defect: float
    log_tail: float


@dataclass(frozen=True)
class LogTailReport:
    value: float
    diverged: bool


def check_log_tail(nu, tol: float = 1e-10) -> LogTailReport:
    """int_{|z| > 1} ln|z| N(z) dz; divergence is a flag, not an error."""
    if nu is None:
        return LogTailReport(0.0, False)
    if nu.kind == "stable":
        # 2 c int_1^inf ln(z) z^{-1-a} dz = 2 c / a^2 (d=1); polar analogue in d=2
        from .levy import _stable_norm_constant

        c = _stable_norm_constant(nu.d, nu.alpha)
        surf = 2.0 if nu.d == 1 else 2.0 * np.pi
        return LogTailReport(surf * c / nu.alpha**2, False)
    if nu.d == 1:
        val, div = try_integrate(
            lambda z: np.log(z) * (nu(z) + nu(-z)), (1.0, np.inf), tol
        )
    else:
        val, div = try_integrate(
            lambda r: np.log(r) * r * nu._angular_average(r), (1.0, np.inf),
            max(tol, 1e-8),
        )
    return LogTailReport(float(val) if val is not None else np.inf, div)


def limit_levy_density(nu, z, tol: float = 1e-10) -> float:
    """N_inf(z) = int_1^inf N(t z) t^{d-1} dt by adaptive quadrature."""
    z_arr = np.atleast_1d(np.asarray(z, dtype=float))
    if np.all(z_arr == 0.0):
        raise ValueError("N_inf is undefined at z = 0")
    d = nu.d

    # substitute t = e^s: the integrand becomes smoothly exponentially
    # decaying, which keeps the adaptive error estimate trustworthy across
    # many decades of |z| (the raw power-law tail does not)
    def integrand(s):
        if s > 690.0:
            return 0.0
        t = np.exp(s)
        return nu(t * z_arr if d > 1 else t * float(z_arr[0])) * t**d

    return float(integrate_scaled(integrand, (0.0, np.inf), tol))


def drift_correction(nu, tol: float = 1e-8) -> np.ndarray:
    """b_A: the drift shift between the flow's exponent and its Levy form.

    Vanishes identically for even densities (odd integrand in z).
    """
    if nu is None:
        return np.zeros(1)
    if nu.is_even:
        return np.zeros(nu.d)
    if nu.d != 1:
        raise NotImplementedError("drift correction implemented for d = 1")

    def tau_factor(z):
        z2 = z * z
        return integrate_scaled(
            lambda tau: (1.0 - tau**2) * z2 / ((1.0 + tau**2 * z2) * (1.0 + z2)),
            (0.0, 1.0),
            tol * 1e-2,
        )

    val = integrate_scaled(
        lambda z: z * tau_factor(z) * (nu(z) - nu(-z)), (0.0, np.inf), tol
    )
    return np.array([val])


def build_steady_state(
    triplet: LevyTriplet, grid: Grid, tol: float = 1e-10
) -> SteadyState:
    """Construct the invariant measure on a grid.

    Raises Con1Violation when the logarithmic tail integral of the jump
    density diverges, and NegativeDensity when the inverse transform dips
    below -1e-6 of its maximum (an under-resolved grid).
    """
    tail = check_log_tail(triplet.nu, tol)
    if tail.diverged:
        raise Con1Violation(
            "log-tail integral of the jump density diverges; no steady state"
        )
    gauss, drift = _gauss_drift_exponent(triplet, grid)
    psi_jump = _jump_exponent_mesh(triplet, grid, tol)
    if triplet.is_stable_jump:
        jump = psi_jump / triplet.nu.alpha
    elif triplet.nu is None:
        jump = psi_jump
    else:
        r = grid.freq_norm()
        if triplet.nu.is_even and grid.d == 1:
            uniq, inv = np.unique(np.round(np.abs(r), 14), return_inverse=True)
            vals = np.array(
                [
                    0.0
                    if u == 0.0
                    else integrate_scaled(
                        lambda s, _u=u: triplet.jump_exponent(s * _u, tol) / s,
                        (0.0, 1.0),
                        tol,
                    )
                    for u in uniq
                ],
                dtype=complex,
            )
            jump = vals[inv].reshape(grid.shape)
        else:
            flat = _grid_freq_vectors(grid).reshape(-1, grid.d)
            jump = np.array(
                [
                    steady_exponent(triplet, v, tol)
                    for v in (flat if grid.d > 1 else flat.ravel())
                ],
                dtype=complex,
            ).reshape(grid.shape) - (0.5 * gauss + drift).reshape(grid.shape)
    psi_mesh = 0.5 * gauss + drift + jump
    coeff = np.exp(psi_mesh)
    dens = SpectralField(grid, coefficients=coeff)
    vals = dens.values
    vmax = float(np.max(vals))
    if float(np.min(vals)) < -1e-6 * vmax:
        raise NegativeDensity(
            f"steady density dips to {np.min(vals):.3e} (max {vmax:.3e}); "
            "the grid under-resolves the invariant measure"
        )
    mass = grid.integrate(vals)
    defect = abs(mass - 1.0)
    dens = SpectralField(grid, values=np.clip(vals, 0.0, None) / mass)

    nu = triplet.nu
    b_corr = drift_correction(nu) if nu is not None else np.zeros(triplet.d)

    def exponent(xi):
        return steady_exponent(triplet, xi, tol)

    def n_inf(z, _tol=tol):
        return limit_levy_density(nu, z, _tol)

    return SteadyState(
        exponent=exponent,
        density=dens,
        limit_density=n_inf if nu is not None else (lambda z: 0.0),
        drift_correction=b_corr,
        mass_defect=defect,
        log_tail=tail.value,
    )


@dataclass(frozen=True)
class DominationReport:
    C_est: float
    table: list  # (|z|, ratio) pairs
    unbounded: bool


def check_domination(
    nu, sample_points=None, tol: float = 1e-10
) -> DominationReport:
    """Estimate the best constant C with N_inf <= C N on a log sample grid.

    Flags ``unbounded`` when a sampled ratio exceeds 1e6 or when the ratios
    grow monotonically across at least three decades at either end of the
    grid.  The default grid spans |z| in [1e-6, 1e3] along the first
    coordinate ray.
    """
    if nu is None:
        return DominationReport(C_est=0.0, table=[], unbounded=False)
    if sample_points is None:
        sample_points = np.logspace(-6.0, 3.0, 28)
    table = []
    for r in np.asarray(sample_points, dtype=float):
        if nu.d == 1:
            z = r
        else:
            z = np.zeros(nu.d)
            z[0] = r
        n_val = float(nu(z))
        n_inf = limit_levy_density(nu, z, tol)
        ratio = n_inf / n_val if n_val > 0 else (np.inf if n_inf > 0 else 0.0)
        table.append((float(r), float(ratio)))
    ratios = np.array([t[1] for t in table])
    unbounded = bool(np.any(~np.isfinite(ratios)) or np.any(ratios > 1e6))
    if not unbounded and len(ratios) >= 2:
        # three decades at 3 samples per decade
        span = min(10, len(ratios))
        head, tail_r = ratios[:span], ratios[-span:]

        def _diverging(seq):
            # monotone growth whose per-step increments do not level off;
            # a ratio converging to a finite C has geometrically shrinking
            # increments, a log divergence keeps them constant
            if not np.all(np.diff(seq) > 0) or seq[-1] < 1.2 * seq[0]:
                return False
            mid = len(seq) // 2
            return seq[-1] - seq[mid] >= 0.5 * (seq[mid] - seq[0])

        unbounded = bool(_diverging(head[::-1]) or _diverging(tail_r))
    c_est = float(np.max(ratios[np.isfinite(ratios)])) if len(ratios) else 0.0
    return DominationReport(C_est=c_est, table=table, unbounded=unbounded)


@dataclass(frozen=True)
class RadialDecayReport:
    monotone_ok: bool
    max_monotone_violation: float
    max_identity_error: float


def check_radial_decay(
    n_inf, n_density, points, C: float, t_grid=None
) -> RadialDecayReport:
    """Radial decay of N_inf and the divergence identity N = -div(x N_inf).

    (i) along each ray through a sample point, N_inf(t x) t^{d + 1/C} must be
    nonincreasing for t >= 1 and nondecreasing for t <= 1;
    (ii) -d N_inf(x) - x . grad N_inf(x) = N(x), gradient by central
    differences with step 1e-4 |x|.
    """
    if t_grid is None:
        t_grid = np.logspace(-1.0, 1.0, 21)
    d = 1
    worst_mono = 0.0
    worst_ident = 0.0
    for x in np.atleast_1d(np.asarray(points, dtype=float)):
        prof = np.array([n_inf(t * x) for t in t_grid])
        weighted = prof * t_grid ** (d + 1.0 / C)
        scale = np.max(np.abs(weighted)) or 1.0
        lower = t_grid <= 1.0
        upper = t_grid >= 1.0
        if np.any(lower):
            worst_mono = max(worst_mono, float(np.max(-np.diff(weighted[lower]) / scale, initial=0.0)))
        if np.any(upper):
            worst_mono = max(worst_mono, float(np.max(np.diff(weighted[upper]) / scale, initial=0.0)))
        h = 1e-4 * abs(x)
        grad = (n_inf(x + h) - n_inf(x - h)) / (2.0 * h)
        lhs = -d * n_inf(x) - x * grad
        rhs = float(n_density(x))
        worst_ident = max(worst_ident, abs(lhs - rhs) / (1.0 + abs(rhs)))
    return RadialDecayReport(
        monotone_ok=worst_mono <= 1e-9,
        max_monotone_violation=worst_mono,
        max_identity_error=worst_ident,
    )
