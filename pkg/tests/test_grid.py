import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from helicity_lab.errors import NonRealFieldError, TransversalityError
from helicity_lab.grid import (
    GridSpec,
    HelicalAmplitudes,
    SpectralVectorField,
    VectorField,
    curl,
    divergence,
    gradient,
    helical_decompose,
    helical_recompose,
    integrate,
    mode_field,
    random_field,
    random_scalar_spectrum,
    spectral_inner,
    to_real,
    to_spectral,
    transverse_project,
)


def random_real(grid, rng):
    return VectorField(grid, rng.standard_normal((3,) + grid.shape))


@pytest.mark.parametrize("n, L", [(3, 1.0), (5, 1.0), (2, 1.0), (8, 0.0), (8, -1.0)])
def test_grid_rejects_bad_parameters(n, L):
    with pytest.raises(ValueError):
        GridSpec(n, L)


def test_zero_field_transforms_to_zero(grid8):
    assert np.all(to_spectral(VectorField.zeros(grid8)).data == 0)
    assert np.all(to_real(SpectralVectorField.zeros(grid8)).data == 0)


def test_cosine_has_two_half_amplitude_modes():
    grid = GridSpec(8, 3.0)
    x = grid.coordinates
    data = np.zeros((3,) + grid.shape)
    data[0] = np.cos(2 * np.pi * x[0] / grid.box_length)
    fhat = to_spectral(VectorField(grid, data)).data
    nonzero = np.argwhere(np.abs(fhat) > 1e-14)
    assert sorted(map(tuple, nonzero)) == [(0, 1, 0, 0), (0, 7, 0, 0)]
    assert fhat[0, 1, 0, 0] == pytest.approx(0.5, abs=1e-15)
    assert fhat[0, 7, 0, 0] == pytest.approx(0.5, abs=1e-15)


def test_single_mode_pair_gives_direct_fourier_sum(grid8):
    m = (1, -2, 3)
    vec = np.array([0.3 + 0.1j, -0.2j, 0.7])
    f = to_real(mode_field(grid8, m, vec)).data
    # direct evaluation: vec e^{ik.x} + conj(vec) e^{-ik.x}
    phase = np.einsum("i,i...->...", grid8.wavevector(m), grid8.coordinates)
    expected = 2 * np.real(vec[:, None, None, None] * np.exp(1j * phase))
    assert np.max(np.abs(f - expected)) < 1e-14


def test_broken_hermitian_symmetry_is_rejected(grid8):
    fhat = mode_field(grid8, (1, 0, 0), [1.0, 0, 0])
    data = fhat.data.copy()
    data[0, 1, 0, 0] += 1e-3
    with pytest.raises(NonRealFieldError):
        to_real(SpectralVectorField(grid8, data))


@pytest.mark.parametrize("n", [8, 16, 32])
def test_round_trips(n, rng):
    grid = GridSpec(n)
    f = random_real(grid, rng)
    back = to_real(to_spectral(f)).data
    assert np.max(np.abs(back - f.data)) <= 1e-12 * np.max(np.abs(f.data))
    fhat = random_field(grid, rng, n // 2, transverse=False)
    again = to_spectral(to_real(fhat)).data
    assert np.max(np.abs(again - fhat.data)) <= 1e-12 * fhat.max_abs()


def test_integrate_trivial_cases():
    grid = GridSpec(4, 2.0)
    z = VectorField.zeros(grid)
    assert integrate(z, z) == 0.0
    xhat = np.zeros((3,) + grid.shape)
    xhat[0] = 1.0
    u = VectorField(grid, xhat)
    assert integrate(u, u) == pytest.approx(8.0, rel=1e-15)


def test_parseval_on_100_random_pairs(grid8, rng):
    for _ in range(100):
        f, g = random_real(grid8, rng), random_real(grid8, rng)
        scale = np.sqrt(integrate(f, f) * integrate(g, g))
        assert abs(integrate(f, g) - spectral_inner(to_spectral(f), to_spectral(g))) <= 1e-12 * scale


def test_curl_gradient_and_div_curl_vanish(grid16, rng):
    kmax = np.max(grid16.kmag)
    phi = random_scalar_spectrum(grid16, rng, 7)
    grad = gradient(grid16, phi)
    assert np.max(np.abs(to_real(curl(grad)).data)) <= 1e-13 * kmax * grad.max_abs()
    u = random_field(grid16, rng, 7, transverse=False)
    assert np.max(np.abs(divergence(curl(u)))) <= 1e-13 * kmax**2 * u.max_abs()


def test_curl_of_single_mode_by_hand():
    grid = GridSpec(8)
    kappa = 2 * grid.k0
    f = mode_field(grid, (0, 0, 2), [1.0, 0, 0])
    c = curl(f).data[:, 0, 0, 2]
    # i k x f with k = kappa z and f = x gives +i kappa y
    assert np.allclose(c, [0, 1j * kappa, 0], atol=1e-15)
    # real space: f = 2 cos(kappa z) x, so (curl f)_y = d_z f_x = -2 kappa sin(kappa z)
    z = grid.coordinates[2]
    assert np.max(np.abs(to_real(curl(f)).data[1] + 2 * kappa * np.sin(kappa * z))) < 1e-13


def test_transverse_project_properties(grid16, rng):
    u = random_field(grid16, rng, 5, transverse=False)
    p = transverse_project(u)
    assert np.max(np.abs(transverse_project(p).data - p.data)) <= 1e-14 * p.max_abs()
    assert np.max(np.abs(divergence(p))) <= 1e-13 * p.max_abs() * np.max(grid16.kmag)
    phi = random_scalar_spectrum(grid16, rng, 5)
    assert transverse_project(gradient(grid16, phi)).max_abs() <= 1e-14 * np.max(grid16.kmag) * np.max(np.abs(phi))
    w = random_field(grid16, rng, 5, transverse=False)
    lhs = spectral_inner(transverse_project(u), w)
    rhs = spectral_inner(u, transverse_project(w))
    assert abs(lhs - rhs) <= 1e-12 * np.sqrt(spectral_inner(u, u) * spectral_inner(w, w))


def test_helical_basis_is_curl_eigenbasis(grid16):
    mask = grid16.k2 > 0
    for e, sign in ((grid16.e_plus, 1), (grid16.e_minus, -1)):
        lhs = 1j * np.cross(grid16.khat, e, axis=0)
        assert np.max(np.abs(lhs - sign * e)[:, mask]) <= 1e-14


def test_helical_decompose_examples(grid8, rng):
    zero = helical_decompose(SpectralVectorField.zeros(grid8))
    assert not np.any(zero.plus) and not np.any(zero.minus)
    idx = grid8.index_of((1, 2, 0))
    data = np.zeros((3,) + grid8.shape, dtype=complex)
    data[(slice(None),) + idx] = grid8.e_plus[(slice(None),) + idx]
    amps = helical_decompose(SpectralVectorField(grid8, data))
    assert amps.plus[idx] == pytest.approx(1.0, abs=1e-15)
    assert amps.minus[idx] == pytest.approx(0.0, abs=1e-15)
    f = random_field(grid8, rng, 3)
    back = helical_recompose(helical_decompose(f))
    assert np.max(np.abs(back.data - f.data)) <= 1e-12 * f.max_abs()


def test_helical_decompose_rejects_longitudinal(grid8, rng):
    with pytest.raises(TransversalityError):
        helical_decompose(gradient(grid8, random_scalar_spectrum(grid8, rng, 3)))


@settings(max_examples=30, deadline=None)
@given(m=st.tuples(*[st.integers(-3, 3)] * 3).filter(any),
       re=st.floats(-5, 5), im=st.floats(-5, 5))
def test_single_mode_round_trip_property(m, re, im):
    grid = GridSpec(8)
    f = mode_field(grid, m, [re + 1j * im, 0.5, -1j])
    assert np.max(np.abs(to_spectral(to_real(f)).data - f.data)) <= 1e-13 * max(f.max_abs(), 1.0)
