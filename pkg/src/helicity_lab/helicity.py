"""Helicity functionals, the E.B budget, photon-number difference and the
Pontryagin densities.

All quadratures are over the full periodic box.  The Chern-Simons helicity
``chi_cs = 0.5 * int (A.B - C.E)`` is the duality moment map in this package's
orientation (sign +1 in ``omega(generator, v) = +D_v chi_cs``).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass, fields

import numpy as np

from .errors import InsufficientDataError
from .grid import helical_decompose, integrate, spectral_inner
from .state import energy, potentials


def magnetic_helicity(s):
    return 0.5 * integrate(potentials(s).A, s.B)


def electric_helicity(s):
    return -0.5 * integrate(potentials(s).C, s.E)


def chern_simons(s, A, C):
    """0.5 * int (A.B - C.E) for caller-chosen potentials (any gauge)."""
    return 0.5 * (integrate(A, s.B) - integrate(C, s.E))


def cs_helicity(s):
    p = potentials(s)
    return chern_simons(s, p.A, p.C)


def eb_integral(s):
    """int E.B d^3x by real-space quadrature."""
    return integrate(s.E, s.B)


def eb_integral_spectral(s):
    return spectral_inner(s.E_hat, s.B_hat)


def photon_numbers(s):
    """(N_plus, N_minus): per-mode energy over |k|, split by handedness."""
    grid = s.grid
    e = helical_decompose(s.E_hat)
    b = helical_decompose(s.B_hat)
    inv_k = np.where(grid.k2 > 0, 1.0 / np.sqrt(grid.k2_safe), 0.0)
    w = 0.5 * grid.volume * inv_k
    n_plus = float(np.sum(w * (np.abs(e.plus) ** 2 + np.abs(b.plus) ** 2)))
    n_minus = float(np.sum(w * (np.abs(e.minus) ** 2 + np.abs(b.minus) ** 2)))
    return n_plus, n_minus


def photon_number_difference(s):
    n_plus, n_minus = photon_numbers(s)
    return n_plus - n_minus


def helicity_scale(s):
    """N_plus + N_minus, an upper bound on |chi_mag|, |chi_el| and |chi_cs|."""
    return sum(photon_numbers(s))


@dataclass(frozen=True)
class HelicityReport:
    chi_mag: float
    chi_el: float
    chi_cs: float
    eb: float
    n_diff: float
    t: float


def helicity_report(s):
    chi_mag = magnetic_helicity(s)
    chi_el = electric_helicity(s)
    return HelicityReport(
        chi_mag=chi_mag,
        chi_el=chi_el,
        chi_cs=chi_mag + chi_el,
        eb=eb_integral(s),
        n_diff=photon_number_difference(s),
        t=s.t,
    )


# --- Pontryagin densities -------------------------------------------------

METRIC = np.diag([1.0, -1.0, -1.0, -1.0])


def _permutation_symbol():
    eps = np.zeros((4, 4, 4, 4))
    for perm in itertools.permutations(range(4)):
        inversions = sum(1 for i in range(4) for j in range(i + 1, 4) if perm[i] > perm[j])
        eps[perm] = -1.0 if inversions % 2 else 1.0
    return eps


PERMUTATION_SYMBOL = _permutation_symbol()
# orientation of the lowered Levi-Civita tensor; eps_0123 = -1 makes the Hodge
# star of (E, B) equal to (B, -E), the duality quarter turn
LEVI_CIVITA_LOWER = -PERMUTATION_SYMBOL


def field_tensor(E, B):
    """F_{mu nu} with F_{0i} = E_i and F_{ij} = -eps_{ijk} B_k; E, B arrays (3, ...)."""
    E = np.asarray(E)
    B = np.asarray(B)
    F = np.zeros((4, 4) + E.shape[1:])
    eps3 = PERMUTATION_SYMBOL[0, 1:, 1:, 1:]
    F[0, 1:] = E
    F[1:, 0] = -E
    F[1:, 1:] = -np.einsum("ijk,k...->ij...", eps3, B)
    return F


def hodge_dual(F):
    """(*F)_{mu nu} = 1/2 eps_{mu nu rho sigma} F^{rho sigma}."""
    F_up = np.einsum("ra,sb,ab...->rs...", METRIC, METRIC, F)
    return 0.5 * np.einsum("mnrs,rs...->mn...", LEVI_CIVITA_LOWER, F_up)


def electric_magnetic(F):
    """Inverse of :func:`field_tensor`."""
    E = F[0, 1:].copy()
    B = np.stack([-F[2, 3], -F[3, 1], -F[1, 2]])
    return E, B


def wedge_density(F, G):
    """Coefficient p of F ^ G = (p / 2) dt^dx^dy^dz, i.e. p = 1/2 [mnrs] F_mn G_rs."""
    return 0.5 * np.einsum("mnrs,mn...,rs...->...", PERMUTATION_SYMBOL, F, G)


def pontryagin_pair(s):
    """Pointwise densities of F^F and *F^*F; p1 = -4 E.B and p2 = +4 E.B."""
    F = field_tensor(s.E.data, s.B.data)
    G = hodge_dual(F)
    return wedge_density(F, F), wedge_density(G, G)


# --- diagnostics time series ----------------------------------------------

@dataclass(frozen=True)
class DiagnosticsRecord:
    t: float
    energy: float = math.nan
    chi_mag: float = math.nan
    chi_el: float = math.nan
    chi_cs: float = math.nan
    eb_integral: float = math.nan
    n_diff: float = math.nan

    def as_dict(self):
        return asdict(self)


COLUMNS = tuple(f.name for f in fields(DiagnosticsRecord))

DIAGNOSTICS = {
    "energy": energy,
    "chi_mag": magnetic_helicity,
    "chi_el": electric_helicity,
    "chi_cs": cs_helicity,
    "eb_integral": eb_integral,
    "n_diff": photon_number_difference,
}


def evaluate_diagnostics(s, diagnostics=None):
    if diagnostics is None:
        diagnostics = DIAGNOSTICS
    elif not isinstance(diagnostics, dict):
        diagnostics = {name: DIAGNOSTICS[name] for name in diagnostics}
    values = {name: float(fn(s)) for name, fn in diagnostics.items()}
    return DiagnosticsRecord(t=s.t, **values)


@dataclass(frozen=True)
class BudgetReport:
    dt: float
    scale: float
    mag_residual: float
    el_residual: float
    cs_residual: float
    max_eb: float


def helicity_budget(series):
    """Check d chi_mag/dt = -int E.B, d chi_el/dt = +int E.B, d chi_cs/dt = 0.

    Centered differences on interior samples; residuals are divided by the
    largest sampled energy, which bounds |int E.B| and hence every rate.
    """
    if len(series) < 3:
        raise InsufficientDataError(f"need at least 3 samples, got {len(series)}")
    t = np.array([r.t for r in series])
    steps = np.diff(t)
    dt = float(steps.mean())
    if np.max(np.abs(steps - dt)) > 1e-9 * max(1.0, abs(dt)):
        raise InsufficientDataError("series is not uniformly sampled")
    col = lambda name: np.array([getattr(r, name) for r in series])
    mag, el, cs, eb = col("chi_mag"), col("chi_el"), col("chi_cs"), col("eb_integral")
    en = col("energy")
    scale = float(np.nanmax(en)) if np.any(np.isfinite(en)) else 1.0
    if not scale > 0:
        scale = 1.0
    d = lambda y: (y[2:] - y[:-2]) / (2 * dt)
    eb_mid = eb[1:-1]
    return BudgetReport(
        dt=dt,
        scale=scale,
        mag_residual=float(np.max(np.abs(d(mag) + eb_mid))) / scale,
        el_residual=float(np.max(np.abs(d(el) - eb_mid))) / scale,
        cs_residual=float(np.max(np.abs(d(cs)))) / scale,
        max_eb=float(np.max(np.abs(eb))),
    )
