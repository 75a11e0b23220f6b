"""Invariant battery behind ``helicity-lab check``.

Every check yields :class:`CheckResult` records.  A check passes when its
residual is at most the tolerance, except for witness checks (``kind =
"min"``) which pass when the measured gap exceeds the tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import duality, evolution, helicity, scenarios, state, symplectic
from .evolution import EvolutionConfig, evolve_exact, rk4_evolve, rk4_step
from .grid import (
    GridSpec,
    SpectralVectorField,
    VectorField,
    curl,
    divergence,
    gradient,
    integrate,
    random_field,
    random_scalar_spectrum,
    spectral_inner,
    to_real,
    to_spectral,
    transverse_project,
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    residual: float
    tolerance: float
    status: str

    def as_dict(self):
        return {
            "name": self.name,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "status": self.status,
        }


def result(name, residual, tolerance, kind="max"):
    residual = float(residual)
    if not math.isfinite(residual):
        ok = False
    elif kind == "max":
        ok = residual <= tolerance
    else:
        ok = residual > tolerance
    return CheckResult(name, residual, float(tolerance), "pass" if ok else "fail")


def skipped(name, tolerance):
    return CheckResult(name, math.nan, float(tolerance), "skip")


@dataclass(frozen=True)
class CheckContext:
    grid: GridSpec
    seed: int
    evolution: EvolutionConfig

    @property
    def exact(self):
        return self.evolution.integrator == "exact"

    def rng(self, offset=0):
        return np.random.default_rng(self.seed * 1000 + offset)

    def random_state(self, offset=0, cutoff=2):
        return scenarios.random_transverse(self.grid, seed=self.seed * 1000 + offset, cutoff=cutoff)


def _rel(a, b):
    scale = max(np.max(np.abs(a)), np.max(np.abs(b)), 1e-300)
    return float(np.max(np.abs(a - b)) / scale)


def _state_diff(s1, s2):
    scale = max(state.state_scale(s1), state.state_scale(s2), 1e-300)
    d = max(np.max(np.abs(s1.E_hat.data - s2.E_hat.data)), np.max(np.abs(s1.B_hat.data - s2.B_hat.data)))
    return float(d) / scale


def check_spectral(ctx):
    g = ctx.grid
    rng = ctx.rng(1)
    f = VectorField(g, rng.standard_normal((3,) + g.shape))
    yield result("spectral_roundtrip", _rel(to_real(to_spectral(f)).data, f.data), 1e-12)
    worst = 0.0
    for _ in range(100):
        a = VectorField(g, rng.standard_normal((3,) + g.shape))
        b = VectorField(g, rng.standard_normal((3,) + g.shape))
        direct, parseval = integrate(a, b), spectral_inner(to_spectral(a), to_spectral(b))
        scale = math.sqrt(integrate(a, a) * integrate(b, b))
        worst = max(worst, abs(direct - parseval) / scale)
    yield result("parseval", worst, 1e-12)
    phi = random_scalar_spectrum(g, rng, g.n // 2)
    grad = gradient(g, phi)
    kmax = float(np.max(g.kmag))
    yield result("curl_of_gradient", np.max(np.abs(curl(grad).data)) / (kmax * grad.max_abs()), 1e-13)
    u = random_field(g, rng, g.n // 2, transverse=False)
    yield result("div_of_curl", np.max(np.abs(divergence(curl(u)))) / (kmax**2 * u.max_abs()), 1e-13)
    p = transverse_project(u)
    yield result("projector_idempotent", np.max(np.abs(transverse_project(p).data - p.data)) / p.max_abs(), 1e-14)
    w = random_field(g, rng, g.n // 2, transverse=False)
    lhs, rhs = spectral_inner(transverse_project(u), w), spectral_inner(u, transverse_project(w))
    scale = math.sqrt(spectral_inner(u, u) * spectral_inner(w, w))
    yield result("projector_self_adjoint", abs(lhs - rhs) / scale, 1e-12)
    mask = g.k2 > 0
    for label, e, sign in (("plus", g.e_plus, 1), ("minus", g.e_minus, -1)):
        ikxe = 1j * np.cross(g.khat, e, axis=0)
        yield result(f"helical_eigenvector_{label}", np.max(np.abs(ikxe - sign * e)[:, mask]), 1e-14)


def check_state(ctx):
    worst_c = worst_curl = worst_gauge = 0.0
    for i in range(20):
        s = ctx.random_state(10 + i)
        worst_c = max(worst_c, *state.constraint_residuals(s))
        p = state.potentials(s)
        sc = state.state_scale(s)
        worst_curl = max(
            worst_curl,
            np.max(np.abs(curl(p.A_hat).data - s.B_hat.data)) / sc,
            np.max(np.abs(curl(p.C_hat).data + s.E_hat.data)) / sc,
        )
        f_hat = random_scalar_spectrum(ctx.grid, ctx.rng(40 + i), 3)
        shifted = p.A + to_real(gradient(ctx.grid, f_hat))
        chi = 0.5 * integrate(p.A, s.B)
        worst_gauge = max(
            worst_gauge,
            abs(0.5 * integrate(shifted, s.B) - chi) / helicity.helicity_scale(s),
        )
    yield result("constraints", worst_c, 1e-12)
    yield result("potential_curl", worst_curl, 1e-11)
    yield result("chi_mag_gauge_invariance", worst_gauge, 1e-12)


def lowest_period(grid):
    return 2 * math.pi / grid.k0


def check_exact_evolution(ctx):
    names = ("exact_conserves_energy", "exact_conserves_chi_cs", "exact_conserves_n_diff",
             "exact_time_reversible", "exact_composition")
    if not ctx.exact:
        for name, tol in zip(names, (1e-12, 1e-12, 1e-12, 1e-13, 1e-12)):
            yield skipped(name, tol)
        return
    s = ctx.random_state(50)
    T = 100 * lowest_period(ctx.grid)
    s1 = evolve_exact(s, T)
    hs = helicity.helicity_scale(s)
    yield result(names[0], abs(state.energy(s1) - state.energy(s)) / state.energy(s), 1e-12)
    yield result(names[1], abs(helicity.cs_helicity(s1) - helicity.cs_helicity(s)) / hs, 1e-12)
    yield result(names[2], abs(helicity.photon_number_difference(s1) - helicity.photon_number_difference(s)) / hs, 1e-12)
    yield result(names[3], _state_diff(evolve_exact(evolve_exact(s, 1.7), -1.7), s), 1e-13)
    yield result(names[4], _state_diff(evolve_exact(evolve_exact(s, 0.3), 0.9), evolve_exact(s, 1.2)), 1e-12)


def rk4_global_errors(s, T, dts):
    errors = []
    exact = evolve_exact(s, T)
    for dt in dts:
        n = int(round(T / dt))
        errors.append(_state_diff(rk4_evolve(s, dt, n), exact))
    return errors


def fitted_order(dts, errors):
    return float(np.polyfit(np.log(dts), np.log(errors), 1)[0])


def check_rk4(ctx):
    s = ctx.random_state(60)
    dts = [0.05, 0.025, 0.0125]
    errors = rk4_global_errors(s, 2.0, dts)
    yield result("rk4_global_order", abs(fitted_order(dts, errors) - 4.0), 0.2)
    worst = 0.0
    for _ in range(3):
        before = state.constraint_residuals(s)
        s = rk4_step(s, 0.1)
        worst = max(worst, *state.constraint_residuals(s), *before)
    yield result("rk4_preserves_constraints", worst, 1e-12)


def check_duality(ctx):
    rng = ctx.rng(70)
    s = ctx.random_state(70)
    group = 0.0
    for _ in range(20):
        t1, t2 = rng.uniform(-2 * math.pi, 2 * math.pi, 2)
        group = max(group, _state_diff(duality.rotate_state(duality.rotate_state(s, t1), t2),
                                       duality.rotate_state(s, t1 + t2)))
    yield result("duality_group_law", group, 1e-13)
    q = duality.rotate_state(s, math.pi / 2)
    sc = state.state_scale(s)
    quarter = max(np.max(np.abs(q.E_hat.data - s.B_hat.data)), np.max(np.abs(q.B_hat.data + s.E_hat.data))) / sc
    yield result("duality_quarter_turn", quarter, 1e-13)
    en = max(abs(state.energy(duality.rotate_state(s, th)) - state.energy(s)) for th in rng.uniform(0, 2 * math.pi, 10))
    yield result("duality_energy_invariance", en / state.energy(s), 1e-13)
    sq = 0.0
    for th in rng.uniform(0, 2 * math.pi, 5):
        a = state.potentials(duality.rotate_state(s, th))
        b = duality.rotate_potentials(state.potentials(s), th)
        scale = max(a.A_hat.max_abs(), a.C_hat.max_abs())
        sq = max(sq, np.max(np.abs(a.A_hat.data - b.A_hat.data)) / scale, np.max(np.abs(a.C_hat.data - b.C_hat.data)) / scale)
    yield result("duality_potentials_square", sq, 1e-12)
    if ctx.exact:
        comm = max(_state_diff(evolve_exact(duality.rotate_state(s, th), 2.3), duality.rotate_state(evolve_exact(s, 2.3), th))
                   for th in rng.uniform(0, 2 * math.pi, 5))
        yield result("duality_commutes_with_evolution", comm, 1e-12)
    else:
        yield skipped("duality_commutes_with_evolution", 1e-12)


def check_helicity(ctx):
    rng = ctx.rng(80)
    rot = eq = pont = gauge = 0.0
    for i in range(20):
        s = ctx.random_state(80 + i)
        hs = helicity.helicity_scale(s)
        chi = helicity.cs_helicity(s)
        th = rng.uniform(0, 2 * math.pi)
        rot = max(rot, abs(helicity.cs_helicity(duality.rotate_state(s, th)) - chi) / hs)
        eq = max(eq, abs(helicity.photon_number_difference(s) - chi) / hs)
        p1, p2 = helicity.pontryagin_pair(s)
        pont = max(pont, np.max(np.abs(p1 + p2)) / state.state_scale(s) ** 2)
        p = state.potentials(s)
        gA = to_real(gradient(ctx.grid, random_scalar_spectrum(ctx.grid, rng, 3)))
        gC = to_real(gradient(ctx.grid, random_scalar_spectrum(ctx.grid, rng, 3)))
        gauge = max(gauge, abs(helicity.chern_simons(s, p.A + gA, p.C + gC) - chi) / hs)
    yield result("chi_cs_duality_invariance", rot, 1e-12)
    yield result("photon_number_equals_chi_cs", eq, 1e-11)
    yield result("pontryagin_pointwise", pont, 1e-13)
    yield result("chi_cs_gauge_invariance", gauge, 1e-12)


def standing_wave_series(grid, dt, integrator="exact", periods=1.0, m=(1, 0, 0)):
    s = scenarios.standing_wave(grid, m, 1.0)
    omega = float(np.linalg.norm(grid.wavevector(m)))
    T = periods * 2 * math.pi / omega
    n = max(int(round(T / dt)), 2)
    cfg = EvolutionConfig(dt=dt, t_final=n * dt, integrator=integrator)
    return evolution.run(s, cfg), omega


def check_budget(ctx):
    dt = ctx.evolution.dt
    series, omega = standing_wave_series(ctx.grid, dt, ctx.evolution.integrator)
    report = helicity.helicity_budget(series)
    # centred differencing: |error| <= (2/3) (omega dt)^2 of the energy scale
    tol = (omega * dt) ** 2
    cs_tol = 1e-11 if ctx.exact else 1e-11 + (omega * dt) ** 4
    yield result("budget_magnetic", report.mag_residual, tol)
    yield result("budget_electric", report.el_residual, tol)
    yield result("budget_chi_cs_constant", report.cs_residual, cs_tol)
    yield result("standing_wave_eb_nonzero", report.max_eb / report.scale, 1e-3, kind="min")


def check_symplectic(ctx):
    g = ctx.grid
    rng = ctx.rng(90)
    rv = lambda: symplectic.random_variation(g, rng)
    anti = bil = 0.0
    for _ in range(10):
        v1, v2, v3 = rv(), rv(), rv()
        a, b = rng.standard_normal(2)
        sc = symplectic.omega_scale(v1, v2)
        anti = max(anti, abs(symplectic.omega(v1, v2) + symplectic.omega(v2, v1)) / sc)
        lhs = symplectic.omega(v1 * a + v2 * b, v3)
        rhs = a * symplectic.omega(v1, v3) + b * symplectic.omega(v2, v3)
        bil = max(bil, abs(lhs - rhs) / (abs(a) * symplectic.omega_scale(v1, v3) + abs(b) * symplectic.omega_scale(v2, v3)))
    yield result("omega_antisymmetric", anti, 1e-13)
    yield result("omega_bilinear", bil, 1e-13)

    s = ctx.random_state(90)
    probes = symplectic.probe_basis(g, seed=ctx.seed)
    kernel = max(
        symplectic.kernel_residual(s, scenarios.random_gauge_function(g, seed=ctx.seed * 100 + i), probes)
        for i in range(20)
    )
    yield result("omega_gauge_kernel", kernel, 1e-12)
    witness = state.variation_from_state(scenarios.circular_plane_wave(g, (0, 1, 1), 1.0, 1))
    yield result("omega_non_gauge_witness", symplectic.probe_residual(witness, probes), 1e-3, kind="min")

    dual = 0.0
    for _ in range(20):
        v1, v2 = rv(), rv()
        sc = symplectic.omega_scale(v1, v2)
        for th in np.linspace(0, 2 * math.pi, 16, endpoint=False):
            dual = max(dual, symplectic.duality_invariance_residual(v1, v2, th) / sc)
    yield result("omega_duality_invariance", dual, 1e-12)

    worst, signs = 0.0, set()
    for i in range(100):
        si = ctx.random_state(200 + i)
        rep = symplectic.moment_map_check(si, rv())
        worst = max(worst, rep.residual / rep.scale)
        signs.add(rep.sign)
    yield result("moment_map_identity", worst, 1e-10)
    yield result("moment_map_sign_constant", len(signs) - 1, 0)

    if ctx.exact:
        ev = 0.0
        for _ in range(5):
            v1, v2 = rv(), rv()
            dt = rng.uniform(0.1, 10.0)
            moved = symplectic.omega(symplectic.evolve_variation(v1, dt), symplectic.evolve_variation(v2, dt))
            ev = max(ev, abs(moved - symplectic.omega(v1, v2)) / symplectic.omega_scale(v1, v2))
        yield result("omega_evolution_invariance", ev, 1e-12)
    else:
        yield skipped("omega_evolution_invariance", 1e-12)

    dalpha = 0.0
    for _ in range(5):
        v1, v2 = rv(), rv()
        d1 = symplectic.directional_derivative(lambda x: symplectic.cartan_alpha(x, v2), s, v1)
        d2 = symplectic.directional_derivative(lambda x: symplectic.cartan_alpha(x, v1), s, v2)
        dalpha = max(dalpha, abs(d1 - d2 - symplectic.omega(v1, v2)) / symplectic.omega_scale(v1, v2))
    yield result("omega_is_d_alpha", dalpha, 1e-12)

    circ = scenarios.circular_plane_wave(g, (0, 0, 1), 1.0, 1)
    gap, scale = alpha_gap(circ, math.pi / 4)
    yield result("alpha_not_duality_invariant", abs(gap) / scale, 1e-6, kind="min")


def alpha_witness_variation(s):
    """Electric-only variation (dA, dE) = (0, E)."""
    return state.Variation(s.grid, SpectralVectorField.zeros(s.grid), s.E_hat)


def alpha_gap(s, theta, v=None):
    """alpha(R s, R v) - alpha(s, v) and the larger Cauchy-Schwarz bound of the two."""
    if v is None:
        v = alpha_witness_variation(s)
    rs, rv = duality.rotate_state(s, theta), duality.rotate_variation(v, theta)
    rotated = symplectic.cartan_alpha(rs, rv)
    base = symplectic.cartan_alpha(s, v)
    scale = max(symplectic.alpha_scale(s, v), symplectic.alpha_scale(rs, rv), 1e-300)
    return rotated - base, scale


HOPFION_GRID = GridSpec(64, 16.0)


@lru_cache(maxsize=2)
def _hopfion_measurements(exact):
    """Null-field residuals and separate-conservation drift; seed-independent."""
    s = scenarios.hopfion(HOPFION_GRID, 1.0 / 16)
    eb, diff = scenarios.null_field_residuals(s)
    if not exact:
        return eb, diff, None
    crossing = 2.0  # core diameter in core radii; the box is 16 core radii
    mag0, el0 = helicity.magnetic_helicity(s), helicity.electric_helicity(s)
    drift = 0.0
    for t in np.linspace(0, crossing, 9)[1:]:
        st = evolve_exact(s, t)
        drift = max(drift, abs(helicity.magnetic_helicity(st) - mag0) / abs(mag0),
                    abs(helicity.electric_helicity(st) - el0) / abs(el0))
    return eb, diff, drift


def check_hopfion(ctx):
    eb, diff, drift = _hopfion_measurements(ctx.exact)
    yield result("hopfion_null_eb", eb, 1e-6)
    yield result("hopfion_null_magnitude", diff, 1e-6)
    if drift is None:
        yield skipped("hopfion_separate_conservation", 1e-6)
    else:
        yield result("hopfion_separate_conservation", drift, 1e-6)


CHECKS = (
    check_spectral,
    check_state,
    check_exact_evolution,
    check_rk4,
    check_duality,
    check_helicity,
    check_budget,
    check_symplectic,
    check_hopfion,
)


def run_checks(grid, seed=0, evolution_config=None):
    if evolution_config is None:
        evolution_config = EvolutionConfig(dt=0.01, t_final=1.0)
    ctx = CheckContext(grid, int(seed), evolution_config)
    results = []
    for check in CHECKS:
        results.extend(check(ctx))
    return results
