"""Cartan one-form, presymplectic two-form and the duality moment map.

With variations given by Cauchy data (dA, dE) on a t = const slice:

    alpha_s(v)   = int E . dA
    omega(v1, v2) = int (v2.dA . v1.dE - v1.dA . v2.dE)

so that omega = d alpha.  With J = chi_cs the moment-map relation reads
omega(generator, v) = sign * D_v J with sign = +1 in this orientation.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .duality import generator_direction, rotate_variation
from .evolution import evolve_exact
from .grid import (
    SpectralVectorField,
    _check_grid,
    gradient,
    half_space_modes,
    integrate,
    mode_field,
    random_field,
    scalar_to_spectral,
)
from .helicity import cs_helicity
from .state import (
    Variation,
    add_scaled,
    coulomb_potential,
    state_from_variation,
    variation_from_state,
)

DEGENERACY_RTOL = 1e-12


def _l2(f):
    return math.sqrt(max(integrate(f, f), 0.0))


def cartan_alpha(s, v):
    _check_grid(s.E, v.dA)
    return integrate(s.E, v.dA)


def alpha_scale(s, v):
    return _l2(s.E) * _l2(v.dA)


def omega(v1, v2):
    _check_grid(v1.dA, v2.dA)
    return integrate(v2.dA, v1.dE) - integrate(v1.dA, v2.dE)


def omega_scale(v1, v2):
    """Cauchy-Schwarz bound on |omega(v1, v2)|."""
    return _l2(v2.dA) * _l2(v1.dE) + _l2(v1.dA) * _l2(v2.dE)


def gauge_direction(grid, f):
    """Pure-gauge variation dA = grad f, dE = 0 for a real lattice scalar f."""
    f_hat = scalar_to_spectral(grid, f)
    f_hat[0, 0, 0] = 0.0
    f_hat[grid.nyquist_mask] = 0.0
    return Variation(grid, gradient(grid, f_hat), SpectralVectorField.zeros(grid))


def is_gauge(v, rtol=DEGENERACY_RTOL):
    """True when v has no field-strength content (dE = 0 and curl dA = 0)."""
    field = max(v.dE_hat.max_abs(), v.dB_hat.max_abs())
    ref = max(v.dA_hat.max_abs() * float(np.max(v.grid.kmag)), v.dE_hat.max_abs())
    return field <= rtol * ref or ref == 0.0


def single_mode_variations(grid, cutoff=2):
    """Helical single-mode probes: each |m| <= cutoff pair, both helicities,
    both quadratures, placed either in dA or in dE."""
    probes = []
    zero = SpectralVectorField.zeros(grid)
    for m in half_space_modes(grid, cutoff):
        idx = grid.index_of(m)
        for basis in (grid.e_plus, grid.e_minus):
            vec = basis[(slice(None),) + idx]
            for phase in (1.0, 1j):
                f = mode_field(grid, m, phase * vec)
                probes.append(Variation(grid, f, zero))
                probes.append(Variation(grid, zero, f))
    return probes


def random_variation(grid, rng, cutoff=3):
    """Random variation; dA carries a longitudinal part as well."""
    dA = random_field(grid, rng, cutoff, transverse=False)
    dE = random_field(grid, rng, cutoff)
    return Variation(grid, dA, dE)


def probe_basis(grid, cutoff=2, n_random=20, seed=0):
    rng = np.random.default_rng(seed)
    probes = single_mode_variations(grid, cutoff)
    probes += [random_variation(grid, rng) for _ in range(n_random)]
    return probes


def probe_residual(v, probes):
    """max_i |omega(v, p_i)| / omega_scale(v, p_i)."""
    worst = 0.0
    for p in probes:
        scale = omega_scale(v, p)
        if scale > 0:
            worst = max(worst, abs(omega(v, p)) / scale)
    return worst


def kernel_residual(s, f, probes=None):
    """Normalized pairing of the gauge direction grad f with the probe basis."""
    grid = s.grid
    if probes is None:
        probes = probe_basis(grid)
    return probe_residual(gauge_direction(grid, f), probes)


def duality_invariance_residual(v1, v2, theta):
    r1, r2 = rotate_variation(v1, theta), rotate_variation(v2, theta)
    return abs(omega(r1, r2) - omega(v1, v2))


def evolve_variation(v, dt):
    """Transport a variation along the exact flow (temporal-Coulomb gauge).

    The transverse part follows the solution it describes; a longitudinal
    (gauge) part of dA is static.
    """
    grid = v.grid
    moved = evolve_exact(state_from_variation(v), dt)
    transverse_dA = coulomb_potential(moved.B_hat)
    khat = grid.khat
    longitudinal = khat * np.sum(khat * v.dA_hat.data, axis=0)
    dA = SpectralVectorField(grid, transverse_dA.data + longitudinal)
    return Variation(grid, dA, moved.E_hat)


def directional_derivative(fn, s, v, h=1.0):
    """Centered difference (fn(s + h v) - fn(s - h v)) / 2h; exact for quadratics."""
    return (fn(add_scaled(s, v, h)) - fn(add_scaled(s, v, -h))) / (2 * h)


@dataclass(frozen=True)
class MomentMapReport:
    omega_value: float
    dJ_value: float
    residual: float
    sign: int
    scale: float
    secondary_residual: float


def _calibration_state():
    from .grid import GridSpec
    from .scenarios import circular_plane_wave

    grid = GridSpec(8)
    s = circular_plane_wave(grid, (0, 0, 1), 1.0, +1)
    v = variation_from_state(circular_plane_wave(grid, (0, 1, 1), 1.0, -1))
    v = v + variation_from_state(s) * 0.5
    return s, v


@lru_cache(maxsize=1)
def moment_map_sign():
    """Orientation constant, fixed once from a calibration pair."""
    s, v = _calibration_state()
    lhs = omega(generator_direction(s), v)
    rhs = directional_derivative(cs_helicity, s, v)
    if abs(rhs) == 0:
        raise RuntimeError("degenerate calibration pair")
    return 1 if lhs * rhs > 0 else -1


def moment_map_check(s, v, h=1.0, h_secondary=1e-3):
    """Compare omega(generator(s), v) with sign * D_v chi_cs at s."""
    if is_gauge(v):
        warnings.warn("variation is pure gauge: both sides vanish, check is vacuous", RuntimeWarning)
    gen = generator_direction(s)
    sign = moment_map_sign()
    lhs = omega(gen, v)
    dJ = directional_derivative(cs_helicity, s, v, h)
    dJ2 = directional_derivative(cs_helicity, s, v, h_secondary)
    scale = omega_scale(gen, v)
    return MomentMapReport(
        omega_value=lhs,
        dJ_value=dJ,
        residual=abs(lhs - sign * dJ),
        sign=sign,
        scale=scale,
        secondary_residual=abs(lhs - sign * dJ2),
    )
