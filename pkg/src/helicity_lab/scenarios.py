"""Reproducible initial conditions.

Plane-wave amplitudes are pointwise field magnitudes: a circular wave of
amplitude E0 has |E| = |B| = E0 everywhere, a linear wave has peak |E| = E0.
"""

from __future__ import annotations

import inspect
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ScenarioError
from .grid import (
    SpectralVectorField,
    gradient,
    mode_field,
    random_field,
    random_scalar_spectrum,
    scalar_to_real,
    to_spectral,
    VectorField,
)
from .state import MaxwellState, Variation, make_state_spectral, zero_state


def _check_mode(grid, m):
    try:
        m = tuple(int(v) for v in m)
    except TypeError:
        raise ScenarioError(f"mode must be an integer triple, got {m!r}") from None
    if len(m) != 3:
        raise ScenarioError(f"mode must be an integer triple, got {m!r}")
    if m == (0, 0, 0):
        raise ScenarioError("mode m = 0 carries no wave")
    if any(abs(v) >= grid.n // 2 for v in m):
        raise ScenarioError(f"mode {m} outside the lattice range |m_i| < {grid.n // 2}")
    return m


def _frame_at(grid, m):
    idx = (slice(None),) + grid.index_of(m)
    e1, e2 = grid.helical_frame
    return grid.khat[idx], e1[idx], e2[idx]


def _travelling(grid, m, E_vec, direction=+1):
    """Single travelling wave with spectral E vector at k(m), moving along direction*khat."""
    khat, _, _ = _frame_at(grid, m)
    E_hat = mode_field(grid, m, E_vec)
    B_hat = mode_field(grid, m, np.cross(direction * khat, E_vec))
    return E_hat, B_hat


def circular_plane_wave(grid, m, amplitude=1.0, handedness=+1, phase=0.0):
    """Travelling circularly polarized wave on the single mode pair +-k(m)."""
    m = _check_mode(grid, m)
    if handedness not in (1, -1):
        raise ScenarioError(f"handedness must be +1 or -1, got {handedness!r}")
    basis = grid.e_plus if handedness == 1 else grid.e_minus
    vec = basis[(slice(None),) + grid.index_of(m)]
    E_vec = amplitude / np.sqrt(2) * np.exp(1j * phase) * vec
    E_hat, B_hat = _travelling(grid, m, E_vec)
    return MaxwellState(grid, E_hat, B_hat, 0.0)


def linear_plane_wave(grid, m, amplitude=1.0, polarization_angle=0.0, phase=0.0):
    """Travelling linearly polarized wave: E = E0 cos(k.x + phase) p."""
    m = _check_mode(grid, m)
    _, e1, e2 = _frame_at(grid, m)
    p = np.cos(polarization_angle) * e1 + np.sin(polarization_angle) * e2
    E_hat, B_hat = _travelling(grid, m, 0.5 * amplitude * np.exp(1j * phase) * p)
    return MaxwellState(grid, E_hat, B_hat, 0.0)


def standing_wave(grid, m, amplitude=1.0):
    """Two equal, crossed linear waves travelling along +k and -k.

    Forward: E polarized along e1, phase 0.  Backward: E along e2, phase pi/2.
    Then int E.B = -V E0^2 sin(2 |k| t), which vanishes at t = 0.
    """
    m = _check_mode(grid, m)
    _, e1, e2 = _frame_at(grid, m)
    E1, B1 = _travelling(grid, m, 0.5 * amplitude * e1, +1)
    E2, B2 = _travelling(grid, m, 0.5 * amplitude * 1j * e2, -1)
    return MaxwellState(grid, E1 + E2, B1 + B2, 0.0)


def random_transverse(grid, seed=0, cutoff=2, amplitude=1.0):
    """Seeded Gaussian (E, B) on modes 0 < |m| <= cutoff."""
    if not 1 <= cutoff < grid.n // 2:
        raise ScenarioError(f"cutoff must satisfy 1 <= cutoff < {grid.n // 2}, got {cutoff!r}")
    rng = np.random.default_rng(seed)
    E_hat = amplitude * random_field(grid, rng, cutoff)
    B_hat = amplitude * random_field(grid, rng, cutoff)
    return MaxwellState(grid, E_hat, B_hat, 0.0)


# --- hopfion --------------------------------------------------------------

def _bateman_gradients(Y):
    """Gradients of alpha = (r^2 - 1 + 2iz)/(r^2 + 1), beta = 2(x - iy)/(r^2 + 1)."""
    x, y, z = Y
    s = np.sum(Y * Y, axis=0) + 1.0
    grad_alpha = 4.0 * Y * (1.0 - 1j * z) / s**2
    grad_alpha[2] += 2j / s
    grad_beta = -4.0 * Y * (x - 1j * y) / s**2
    grad_beta[0] += 2.0 / s
    grad_beta[1] += -2j / s
    return grad_alpha, grad_beta


def hopfion_field(grid, scale=1.0 / 16, mirror=False):
    """Riemann-Silberstein field grad(alpha) x grad(beta) sampled on the lattice.

    The core radius is ``scale * L`` and the core sits at the box centre.  The
    result is normalized so |E| = |B| = 1 at the centre.  ``mirror`` builds the
    field with z -> -z substituted into alpha and beta.
    """
    a = scale * grid.box_length
    Y = (grid.coordinates - 0.5 * grid.box_length) / a
    if mirror:
        Y[2] = -Y[2]
    ga, gb = _bateman_gradients(Y)
    if mirror:
        ga[2] = -ga[2]
        gb[2] = -gb[2]
    return np.cross(ga, gb, axis=0) / 4.0


def boundary_truncation(F):
    """Largest |F| on the faces of the box, relative to the peak |F|."""
    mag = np.sqrt(np.sum(np.abs(F) ** 2, axis=0))
    faces = max(mag[0].max(), mag[:, 0].max(), mag[:, :, 0].max())
    return float(faces / mag.max())


def hopfion(grid, scale=1.0 / 16, amplitude=1.0, mirror=False, truncation_tolerance=1e-3):
    """Null hopfion (Bateman construction) at t = 0, mean-freed and transverse-projected.

    Rejects the construction when the field on the box faces exceeds
    ``truncation_tolerance`` of its peak (core too large for the box) or when
    projection onto the torus alters the sampled spectrum by more than the
    same tolerance (max pointwise change over peak field).  That change is
    kept in ``state.projection_residual``.
    """
    if not 0 < scale:
        raise ScenarioError(f"scale must be positive, got {scale!r}")
    F = amplitude * hopfion_field(grid, scale, mirror)
    truncation = boundary_truncation(F)
    if truncation > truncation_tolerance:
        raise ScenarioError(
            f"hopfion core too large for the box: boundary field {truncation:.2e} "
            f"of peak exceeds {truncation_tolerance:.1e}"
        )
    E_hat = to_spectral(VectorField(grid, F.real))
    B_hat = to_spectral(VectorField(grid, F.imag))
    s = make_state_spectral(E_hat, B_hat, 0.0, policy=np.inf)
    peak = float(np.max(np.abs(F)))
    delta = max(
        float(np.max(np.abs(s.E.data - F.real))), float(np.max(np.abs(s.B.data - F.imag)))
    ) / peak
    if delta > truncation_tolerance:
        raise ScenarioError(
            f"hopfion does not fit the lattice: projection changed the field by "
            f"{delta:.2e} of peak (tolerance {truncation_tolerance:.1e})"
        )
    return replace(s, projection_residual=delta)


def null_field_residuals(s):
    """(max |E.B|, max ||E| - |B||) divided by peak-field^2 and peak-field."""
    E, B = s.E.data, s.B.data
    e = np.sqrt(np.sum(E**2, axis=0))
    b = np.sqrt(np.sum(B**2, axis=0))
    peak = max(e.max(), b.max())
    if peak == 0:
        return 0.0, 0.0
    eb = float(np.max(np.abs(np.sum(E * B, axis=0)))) / peak**2
    diff = float(np.max(np.abs(e - b))) / peak
    return eb, diff


# --- gauge directions -----------------------------------------------------

def random_gauge_function(grid, seed=0, cutoff=3):
    """Mean-free, band-limited real scalar on the lattice."""
    rng = np.random.default_rng(seed)
    return scalar_to_real(grid, random_scalar_spectrum(grid, rng, cutoff))


def gauge_variation(grid, seed=0, cutoff=3):
    """Pure-gauge variation dA = grad f, dE = 0 for a seeded random f."""
    rng = np.random.default_rng(seed)
    f_hat = random_scalar_spectrum(grid, rng, cutoff)
    return Variation(grid, gradient(grid, f_hat), SpectralVectorField.zeros(grid))


# --- registry -------------------------------------------------------------

def zero(grid):
    return zero_state(grid)


SCENARIOS = {
    "zero": zero,
    "circular_plane_wave": circular_plane_wave,
    "linear_plane_wave": linear_plane_wave,
    "standing_wave": standing_wave,
    "random_transverse": random_transverse,
    "hopfion": hopfion,
}


@dataclass(frozen=True)
class ScenarioSpec:
    name: str
    parameters: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.name not in SCENARIOS:
            raise ScenarioError(f"unknown scenario {self.name!r}; choose from {sorted(SCENARIOS)}")
        allowed = set(inspect.signature(SCENARIOS[self.name]).parameters) - {"grid"}
        unknown = set(self.parameters) - allowed
        if unknown:
            raise ScenarioError(f"unknown parameters for {self.name}: {sorted(unknown)}")

    def to_dict(self):
        return {"name": self.name, "parameters": dict(self.parameters)}


def build_scenario(grid, spec):
    try:
        return SCENARIOS[spec.name](grid, **spec.parameters)
    except ScenarioError:
        raise
    except (TypeError, ValueError) as exc:
        raise ScenarioError(f"invalid parameters for {spec.name}: {exc}") from exc
