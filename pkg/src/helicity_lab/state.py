"""Vacuum Cauchy data (E, B), their Coulomb-gauge potentials, and tangent vectors.

A :class:`MaxwellState` holds the Fourier coefficients of E and B; real-space
fields are derived on demand.  Potentials are never stored: ``A`` and ``C``
are the unique transverse, mean-free solutions of ``curl A = B`` and
``curl C = -E`` on the torus.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ConstraintViolationError, GridMismatchError, TransversalityError
from .grid import (
    SpectralVectorField,
    VectorField,
    curl,
    divergence,
    longitudinal_defect,
    reflect,
    to_real,
    to_spectral,
    transverse_project,
)

PROJECTION_POLICY = 1e-8


@dataclass(frozen=True, eq=False)
class MaxwellState:
    """A point of the evolution space: transverse, mean-free (E, B) at time t.

    Constructing this class directly performs no validation; use
    :func:`make_state` for caller-supplied data.
    """

    grid: object
    E_hat: SpectralVectorField
    B_hat: SpectralVectorField
    t: float = 0.0
    projection_residual: float = 0.0

    @cached_property
    def E(self):
        return to_real(self.E_hat)

    @cached_property
    def B(self):
        return to_real(self.B_hat)


@dataclass(frozen=True, eq=False)
class PotentialPair:
    A: VectorField
    C: VectorField
    A_hat: SpectralVectorField
    C_hat: SpectralVectorField


@dataclass(frozen=True, eq=False)
class Variation:
    """Tangent vector to the evolution space, given by its Cauchy data.

    ``dA_hat`` may carry a longitudinal (pure-gauge) part; ``dE_hat`` must be
    transverse and mean-free.  The magnetic variation is ``curl dA``.
    """

    grid: object
    dA_hat: SpectralVectorField
    dE_hat: SpectralVectorField

    @cached_property
    def dA(self):
        return to_real(self.dA_hat)

    @cached_property
    def dE(self):
        return to_real(self.dE_hat)

    @cached_property
    def dB_hat(self):
        return curl(self.dA_hat)

    def __add__(self, other):
        return Variation(self.grid, self.dA_hat + other.dA_hat, self.dE_hat + other.dE_hat)

    def __mul__(self, c):
        return Variation(self.grid, c * self.dA_hat, c * self.dE_hat)

    __rmul__ = __mul__


def _relative_change(before, after):
    """L2 norm of the change over the L2 norm of the input (Parseval-equivalent)."""
    norm = float(np.sqrt(np.sum(np.abs(before.data) ** 2)))
    if norm == 0:
        return 0.0
    return float(np.sqrt(np.sum(np.abs(before.data - after.data) ** 2))) / norm


def make_state(E, B, t=0.0, policy=PROJECTION_POLICY):
    """Validate caller-supplied real fields and return a state.

    Fields are mean-freed and transverse-projected; if that changes either
    field by more than ``policy`` (relative L2 norm) the data are rejected
    as non-vacuum.
    """
    if E.grid != B.grid:
        raise GridMismatchError("E and B live on different grids")
    E_hat, B_hat = to_spectral(E), to_spectral(B)
    return make_state_spectral(E_hat, B_hat, t, policy)


def make_state_spectral(E_hat, B_hat, t=0.0, policy=PROJECTION_POLICY):
    if E_hat.grid != B_hat.grid:
        raise GridMismatchError("E and B live on different grids")
    E_proj, B_proj = transverse_project(E_hat), transverse_project(B_hat)
    residual = max(_relative_change(E_hat, E_proj), _relative_change(B_hat, B_proj))
    if residual > policy:
        raise ConstraintViolationError(
            f"projection changed the fields by {residual:.3e} (policy {policy:.1e}); "
            "data do not satisfy div E = div B = 0 with zero mean"
        )
    return MaxwellState(E_hat.grid, E_proj, B_proj, float(t), residual)


def zero_state(grid, t=0.0):
    z = SpectralVectorField.zeros(grid)
    return MaxwellState(grid, z, z, float(t))


def potentials(s):
    """Coulomb-gauge A (curl A = B) and C (curl C = -E)."""
    grid = s.grid
    A_hat = SpectralVectorField(grid, 1j * np.cross(grid.k, s.B_hat.data, axis=0) / grid.k2_safe)
    C_hat = SpectralVectorField(grid, -1j * np.cross(grid.k, s.E_hat.data, axis=0) / grid.k2_safe)
    return PotentialPair(to_real(A_hat), to_real(C_hat), A_hat, C_hat)


def coulomb_potential(fhat):
    """Transverse solution a of curl a = f for a transverse mean-free f."""
    grid = fhat.grid
    return SpectralVectorField(grid, 1j * np.cross(grid.k, fhat.data, axis=0) / grid.k2_safe)


def energy(s):
    """0.5 * int (|E|^2 + |B|^2) d^3x."""
    V = s.grid.volume
    return 0.5 * V * float(np.sum(np.abs(s.E_hat.data) ** 2 + np.abs(s.B_hat.data) ** 2))


def state_scale(s):
    """RMS field strength sqrt(2 U / V); zero only for the zero state."""
    return float(np.sqrt(2.0 * energy(s) / s.grid.volume))


def constraint_residuals(s):
    """Max spectral |div E| and |div B|, each divided by the RMS field strength."""
    scale = state_scale(s)
    div_e = float(np.max(np.abs(divergence(s.E_hat))))
    div_b = float(np.max(np.abs(divergence(s.B_hat))))
    if scale == 0.0:
        return div_e, div_b
    return div_e / scale, div_b / scale


def riemann_silberstein(s):
    """Spectrum of E + iB (not Hermitian)."""
    return SpectralVectorField(s.grid, s.E_hat.data + 1j * s.B_hat.data)


def from_riemann_silberstein(F_hat, t=0.0):
    """Recover (E, B) from the spectrum of E + iB."""
    grid = F_hat.grid
    conj_neg = np.conj(reflect(F_hat.data))
    E_hat = SpectralVectorField(grid, 0.5 * (F_hat.data + conj_neg))
    B_hat = SpectralVectorField(grid, -0.5j * (F_hat.data - conj_neg))
    return MaxwellState(grid, E_hat, B_hat, float(t))


def add_scaled(s, v, h):
    """The state s + h v: E -> E + h dE, B -> B + h curl dA."""
    return MaxwellState(
        s.grid, s.E_hat + h * v.dE_hat, s.B_hat + h * v.dB_hat, s.t
    )


def make_variation(dA, dE, rtol=1e-10):
    """Validate real Cauchy data of a variation."""
    if dA.grid != dE.grid:
        raise GridMismatchError("dA and dE live on different grids")
    return make_variation_spectral(to_spectral(dA), to_spectral(dE), rtol)


def make_variation_spectral(dA_hat, dE_hat, rtol=1e-10):
    grid = dA_hat.grid
    scale = max(dE_hat.max_abs(), dA_hat.max_abs() * float(np.max(grid.kmag)), 1e-300)
    mean = max(np.max(np.abs(dE_hat.data[:, 0, 0, 0])), np.max(np.abs(dA_hat.data[:, 0, 0, 0])))
    if longitudinal_defect(dE_hat) > rtol * scale or mean > rtol * scale:
        raise TransversalityError("dE must be transverse and dA, dE mean-free")
    return Variation(grid, dA_hat, dE_hat)


def variation_from_state(s):
    """A solution viewed as a tangent vector: (dA, dE) = (A, E) in Coulomb gauge."""
    return Variation(s.grid, coulomb_potential(s.B_hat), s.E_hat)


def state_from_variation(v, t=0.0):
    """The solution whose Cauchy data are (dE, curl dA)."""
    return MaxwellState(v.grid, v.dE_hat, v.dB_hat, float(t))


def zero_variation(grid):
    z = SpectralVectorField.zeros(grid)
    return Variation(grid, z, z)
