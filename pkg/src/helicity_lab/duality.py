"""SO(2) duality rotations of states, potentials and variations.

Orientation: the quarter turn sends (E, B) to (B, -E), which is the choice
compatible with curl A = B, curl C = -E and A -> C at theta = pi/2.
"""

from __future__ import annotations

import numpy as np

from .state import MaxwellState, PotentialPair, Variation, coulomb_potential, potentials
from .grid import SpectralVectorField, to_real


def rotate_state(s, theta):
    c, sn = np.cos(theta), np.sin(theta)
    E_hat = SpectralVectorField(s.grid, c * s.E_hat.data + sn * s.B_hat.data)
    B_hat = SpectralVectorField(s.grid, c * s.B_hat.data - sn * s.E_hat.data)
    return MaxwellState(s.grid, E_hat, B_hat, s.t)


def rotate_potentials(p, theta):
    c, sn = np.cos(theta), np.sin(theta)
    A_hat = c * p.A_hat + sn * p.C_hat
    C_hat = c * p.C_hat - sn * p.A_hat
    return PotentialPair(to_real(A_hat), to_real(C_hat), A_hat, C_hat)


def generator_direction(s):
    """Unit infinitesimal duality direction at s: (dA, dE) = (C, B)."""
    return Variation(s.grid, potentials(s).C_hat, s.B_hat)


def rotate_variation(v, theta):
    """Act on Cauchy data of a variation as on fields.

    dA -> cos dA + sin dC with dC the Coulomb potential of -dE, and
    dE -> cos dE + sin curl dA.
    """
    c, sn = np.cos(theta), np.sin(theta)
    dC_hat = coulomb_potential(-v.dE_hat)
    dA_hat = c * v.dA_hat + sn * dC_hat
    dE_hat = c * v.dE_hat + sn * v.dB_hat
    return Variation(v.grid, dA_hat, dE_hat)
