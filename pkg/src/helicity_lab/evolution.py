"""Time evolution of vacuum states.

The exact propagator rotates the helical components of the Riemann-Silberstein
spectrum E + iB by exp(-+ i|k| dt); RK4 integrates (dE/dt, dB/dt) =
(curl B, -curl E) in spectral space and exists as a reference integrator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DivergenceError, InvalidFieldError
from .grid import HelicalAmplitudes, SpectralVectorField, curl, helical_decompose, helical_recompose
from .state import MaxwellState, from_riemann_silberstein, riemann_silberstein

INTEGRATORS = ("exact", "rk4")


@dataclass(frozen=True)
class EvolutionConfig:
    dt: float
    t_final: float
    integrator: str = "exact"
    sample_every: int = 1

    def __post_init__(self):
        if not (math.isfinite(self.dt) and self.dt > 0):
            raise ConfigError(f"dt must be positive, got {self.dt!r}")
        if not (math.isfinite(self.t_final) and self.t_final >= 0):
            raise ConfigError(f"t_final must be >= 0, got {self.t_final!r}")
        if self.integrator not in INTEGRATORS:
            raise ConfigError(f"integrator must be one of {INTEGRATORS}, got {self.integrator!r}")
        if int(self.sample_every) != self.sample_every or self.sample_every < 1:
            raise ConfigError(f"sample_every must be a positive integer, got {self.sample_every!r}")

    def to_dict(self):
        return {
            "dt": self.dt,
            "t_final": self.t_final,
            "integrator": self.integrator,
            "sample_every": int(self.sample_every),
        }


def evolve_exact(s, dt):
    """Advance s by dt (any sign) with the closed-form vacuum propagator."""
    if dt == 0:
        return MaxwellState(s.grid, s.E_hat, s.B_hat, s.t)
    grid = s.grid
    amps = helical_decompose(riemann_silberstein(s))
    phase = np.exp(-1j * grid.kmag * dt)
    rotated = HelicalAmplitudes(grid, amps.plus * phase, amps.minus * np.conj(phase))
    out = from_riemann_silberstein(helical_recompose(rotated), s.t + dt)
    return out


def _rhs(E_hat, B_hat):
    return curl(B_hat), -curl(E_hat)


def rk4_step(s, dt):
    """One classical fourth-order Runge-Kutta step."""
    E0, B0 = s.E_hat, s.B_hat
    k1e, k1b = _rhs(E0, B0)
    k2e, k2b = _rhs(E0 + 0.5 * dt * k1e, B0 + 0.5 * dt * k1b)
    k3e, k3b = _rhs(E0 + 0.5 * dt * k2e, B0 + 0.5 * dt * k2b)
    k4e, k4b = _rhs(E0 + dt * k3e, B0 + dt * k3b)
    E1 = SpectralVectorField(s.grid, E0.data + dt / 6 * (k1e.data + 2 * k2e.data + 2 * k3e.data + k4e.data))
    B1 = SpectralVectorField(s.grid, B0.data + dt / 6 * (k1b.data + 2 * k2b.data + 2 * k3b.data + k4b.data))
    return MaxwellState(s.grid, E1, B1, s.t + dt)


def rk4_evolve(s, dt, n_steps):
    for _ in range(n_steps):
        s = rk4_step(s, dt)
    return s


def _is_finite(s):
    return bool(np.all(np.isfinite(s.E_hat.data)) and np.all(np.isfinite(s.B_hat.data)))


def step_times(cfg):
    """Step sizes covering [0, t_final]; the last step may be shortened."""
    n_full = int(math.floor(cfg.t_final / cfg.dt + 1e-9))
    steps = [cfg.dt] * n_full
    rest = cfg.t_final - n_full * cfg.dt
    if rest > 1e-9 * max(1.0, cfg.t_final):
        steps.append(rest)
    return steps


def run(s, cfg, diagnostics=None):
    """Integrate from s over a duration cfg.t_final and sample diagnostics.

    Samples are taken every ``cfg.sample_every`` steps, always including the
    initial and final states.  ``diagnostics`` maps column names to
    functionals of a state; by default every column of
    :class:`~helicity_lab.helicity.DiagnosticsRecord` is evaluated.
    """
    from .helicity import evaluate_diagnostics

    steps = step_times(cfg)
    t0 = s.t
    records = [evaluate_diagnostics(s, diagnostics)]
    current = s
    for i, h in enumerate(steps, start=1):
        # i * dt rather than a running sum keeps sample times free of drift
        elapsed = cfg.t_final if h != cfg.dt else i * cfg.dt
        if cfg.integrator == "exact":
            # jump from the initial state: no accumulation of roundoff
            current = evolve_exact(s, elapsed)
        else:
            current = rk4_step(current, h)
        if not _is_finite(current):
            raise DivergenceError(t0 + elapsed)
        if i % cfg.sample_every == 0 or i == len(steps):
            records.append(_sample(current, diagnostics, t0 + elapsed))
    return records


def _sample(s, diagnostics, t):
    from .helicity import evaluate_diagnostics

    # fields can be finite yet large enough that quadratic diagnostics overflow
    try:
        record = evaluate_diagnostics(s, diagnostics)
    except InvalidFieldError:
        raise DivergenceError(t) from None
    values = record.as_dict()
    names = values if diagnostics is None else diagnostics
    if not all(math.isfinite(values[name]) for name in names):
        raise DivergenceError(t)
    return record
