"""Electric-magnetic duality and Chern-Simons helicity of vacuum Maxwell fields on a periodic box."""

from .duality import generator_direction, rotate_state
from .evolution import EvolutionConfig, evolve_exact, rk4_step, run
from .grid import GridSpec
from .helicity import (
    cs_helicity,
    electric_helicity,
    helicity_report,
    magnetic_helicity,
    photon_number_difference,
)
from .scenarios import ScenarioSpec, build_scenario
from .state import MaxwellState, Variation, energy, make_state, potentials

__all__ = [
    "EvolutionConfig",
    "GridSpec",
    "MaxwellState",
    "ScenarioSpec",
    "Variation",
    "build_scenario",
    "cs_helicity",
    "electric_helicity",
    "energy",
    "evolve_exact",
    "generator_direction",
    "helicity_report",
    "magnetic_helicity",
    "make_state",
    "photon_number_difference",
    "potentials",
    "rk4_step",
    "rotate_state",
    "run",
]
