"""Periodic cubic lattice, Fourier transforms and exact spectral operators.

Fourier convention: ``f(x) = sum_k fhat(k) exp(i k.x)`` with ``k = (2 pi / L) m``
and ``m`` in the standard FFT index range, so ``fhat = fftn(f) / n**3`` and
Parseval reads ``int |f|^2 d^3x = V sum_k |fhat(k)|^2``.

Vector fields are stored as arrays of shape ``(3, n, n, n)``; component first.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import (
    GridMismatchError,
    InvalidFieldError,
    NonRealFieldError,
    TransversalityError,
)

_AXES = (1, 2, 3)
HERMITIAN_RTOL = 1e-10
TRANSVERSE_RTOL = 1e-10


@dataclass(frozen=True)
class GridSpec:
    """Periodic cube with ``n`` points per axis and side ``box_length``."""

    n: int
    box_length: float = 2 * np.pi

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 4 or self.n % 2:
            raise ValueError(f"n must be an even integer >= 4, got {self.n!r}")
        if not (np.isfinite(self.box_length) and self.box_length > 0):
            raise ValueError(f"box_length must be positive, got {self.box_length!r}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "box_length", float(self.box_length))

    @property
    def shape(self):
        return (self.n,) * 3

    @property
    def spacing(self):
        return self.box_length / self.n

    @property
    def volume(self):
        return self.box_length**3

    @property
    def cell_volume(self):
        return self.spacing**3

    @property
    def k0(self):
        """Fundamental wavenumber 2 pi / L."""
        return 2 * np.pi / self.box_length

    @cached_property
    def mode_index(self):
        """Integer wavevector indices m, shape (3, n, n, n)."""
        m1 = np.fft.fftfreq(self.n, d=1.0 / self.n).round().astype(int)
        return np.array(np.meshgrid(m1, m1, m1, indexing="ij"))

    @cached_property
    def k(self):
        return self.k0 * self.mode_index

    @cached_property
    def k2(self):
        return np.sum(self.k**2, axis=0)

    @cached_property
    def kmag(self):
        return np.sqrt(self.k2)

    @cached_property
    def k2_safe(self):
        """|k|^2 with the zero mode replaced by 1, for divisions."""
        k2 = self.k2.copy()
        k2[0, 0, 0] = 1.0
        return k2

    @cached_property
    def khat(self):
        return self.k / np.sqrt(self.k2_safe)

    @cached_property
    def nyquist_mask(self):
        """True on every mode with some index equal to -n/2."""
        return np.any(self.mode_index == -(self.n // 2), axis=0)

    @cached_property
    def active_mask(self):
        """Modes that may carry physical field content (not zero, not Nyquist)."""
        mask = ~self.nyquist_mask
        mask[0, 0, 0] = False
        return mask

    @cached_property
    def coordinates(self):
        """Lattice points x_j = j L / n, shape (3, n, n, n)."""
        x1 = np.arange(self.n) * self.spacing
        return np.array(np.meshgrid(x1, x1, x1, indexing="ij"))

    @cached_property
    def helical_frame(self):
        """Unit vectors (e1, e2) with (e1, e2, khat) right-handed, per mode.

        e1 = normalize(z x khat) unless khat is parallel to z, in which case
        e1 = x.  At k = 0 the frame is (x, y).
        """
        khat = self.khat
        zhat = np.zeros_like(khat)
        zhat[2] = 1.0
        e1 = np.cross(zhat, khat, axis=0)
        norm = np.sqrt(np.sum(e1**2, axis=0))
        parallel = norm < 1e-12
        e1 = e1 / np.where(parallel, 1.0, norm)
        e1[:, parallel] = np.array([1.0, 0.0, 0.0])[:, None]
        e2 = np.cross(khat, e1, axis=0)
        zero = self.k2 == 0
        e2[:, zero] = np.array([0.0, 1.0, 0.0])[:, None]
        return e1, e2

    @cached_property
    def e_plus(self):
        e1, e2 = self.helical_frame
        return (e1 + 1j * e2) / np.sqrt(2)

    @cached_property
    def e_minus(self):
        e1, e2 = self.helical_frame
        return (e1 - 1j * e2) / np.sqrt(2)

    def wavevector(self, m):
        """Physical wavevector for an integer triple m."""
        return self.k0 * np.asarray(m, dtype=float)

    def index_of(self, m):
        """Array index of the integer wavevector m; rejects Nyquist/out of range."""
        m = tuple(int(v) for v in m)
        half = self.n // 2
        if any(abs(v) >= half for v in m):
            raise ValueError(f"mode {m} outside the non-Nyquist range |m_i| < {half}")
        return tuple(v % self.n for v in m)


def reflect(a):
    """Return the array evaluated at -k, i.e. index j -> (-j) mod n on the last three axes."""
    return np.roll(np.flip(a, axis=(-3, -2, -1)), 1, axis=(-3, -2, -1))


def _check_grid(*fields):
    grid = fields[0].grid
    for f in fields[1:]:
        if f.grid != grid:
            raise GridMismatchError(f"grid mismatch: {grid} vs {f.grid}")
    return grid


@dataclass(frozen=True, eq=False)
class VectorField:
    """Real 3-vector field sampled on the lattice."""

    grid: GridSpec
    data: np.ndarray

    def __post_init__(self):
        data = np.asarray(self.data, dtype=float)
        if data.shape != (3,) + self.grid.shape:
            raise InvalidFieldError(
                f"expected shape {(3,) + self.grid.shape}, got {data.shape}"
            )
        if not np.all(np.isfinite(data)):
            raise InvalidFieldError("field contains non-finite values")
        object.__setattr__(self, "data", data)

    @classmethod
    def zeros(cls, grid):
        return cls(grid, np.zeros((3,) + grid.shape))

    def __add__(self, other):
        _check_grid(self, other)
        return VectorField(self.grid, self.data + other.data)

    def __sub__(self, other):
        _check_grid(self, other)
        return VectorField(self.grid, self.data - other.data)

    def __neg__(self):
        return VectorField(self.grid, -self.data)

    def __mul__(self, c):
        return VectorField(self.grid, c * self.data)

    __rmul__ = __mul__

    def max_norm(self):
        return float(np.max(np.sqrt(np.sum(self.data**2, axis=0))))


@dataclass(frozen=True, eq=False)
class SpectralVectorField:
    """Fourier coefficients of a 3-vector field (complex, shape (3, n, n, n))."""

    grid: GridSpec
    data: np.ndarray

    def __post_init__(self):
        data = np.asarray(self.data, dtype=complex)
        if data.shape != (3,) + self.grid.shape:
            raise InvalidFieldError(
                f"expected shape {(3,) + self.grid.shape}, got {data.shape}"
            )
        object.__setattr__(self, "data", data)

    @classmethod
    def zeros(cls, grid):
        return cls(grid, np.zeros((3,) + grid.shape, dtype=complex))

    def __add__(self, other):
        _check_grid(self, other)
        return SpectralVectorField(self.grid, self.data + other.data)

    def __sub__(self, other):
        _check_grid(self, other)
        return SpectralVectorField(self.grid, self.data - other.data)

    def __neg__(self):
        return SpectralVectorField(self.grid, -self.data)

    def __mul__(self, c):
        return SpectralVectorField(self.grid, c * self.data)

    __rmul__ = __mul__

    def max_abs(self):
        return float(np.max(np.abs(self.data))) if self.data.size else 0.0

    def hermitian_defect(self):
        """max |fhat(-k) - conj(fhat(k))|, absolute."""
        return float(np.max(np.abs(reflect(self.data) - np.conj(self.data))))


@dataclass(frozen=True, eq=False)
class HelicalAmplitudes:
    """Per-mode amplitudes on e+(k) and e-(k); zero at k = 0."""

    grid: GridSpec
    plus: np.ndarray
    minus: np.ndarray


def to_spectral(f):
    if not np.all(np.isfinite(f.data)):
        raise InvalidFieldError("field contains non-finite values")
    n3 = f.grid.n**3
    return SpectralVectorField(f.grid, np.fft.fftn(f.data, axes=_AXES) / n3)


def to_real(fhat, rtol=HERMITIAN_RTOL):
    """Inverse transform; refuses spectra that are not those of a real field."""
    scale = fhat.max_abs()
    defect = fhat.hermitian_defect()
    if defect > rtol * scale:
        raise NonRealFieldError(
            f"Hermitian symmetry violated: defect {defect:.3e} vs scale {scale:.3e}"
        )
    n3 = fhat.grid.n**3
    return VectorField(fhat.grid, np.fft.ifftn(fhat.data * n3, axes=_AXES).real)


def scalar_to_spectral(grid, f):
    return np.fft.fftn(np.asarray(f, dtype=float)) / grid.n**3


def scalar_to_real(grid, fhat):
    return np.fft.ifftn(fhat * grid.n**3).real


def integrate(f, g):
    """Riemann-sum quadrature of f.g over the box."""
    grid = _check_grid(f, g)
    return float(grid.cell_volume * np.sum(f.data * g.data))


def spectral_inner(fhat, ghat):
    """Parseval form V sum_k Re(conj(fhat) . ghat) of the real-space integral."""
    grid = _check_grid(fhat, ghat)
    return float(grid.volume * np.sum(np.real(np.conj(fhat.data) * ghat.data)))


def curl(fhat):
    grid = fhat.grid
    return SpectralVectorField(grid, 1j * np.cross(grid.k, fhat.data, axis=0))


def divergence(fhat):
    """Spectral scalar i k . fhat."""
    return 1j * np.sum(fhat.grid.k * fhat.data, axis=0)


def gradient(grid, ghat):
    """Spectral vector i k ghat of a spectral scalar."""
    return SpectralVectorField(grid, 1j * grid.k * np.asarray(ghat)[None])


def transverse_project(fhat):
    """Remove the longitudinal part, the mean and the Nyquist modes."""
    grid = fhat.grid
    khat = grid.khat
    data = fhat.data - khat * np.sum(khat * fhat.data, axis=0)
    data[:, ~grid.active_mask] = 0.0
    return SpectralVectorField(grid, data)


def longitudinal_defect(fhat):
    """max_k |khat . fhat(k)|, the size of the longitudinal component."""
    return float(np.max(np.abs(np.sum(fhat.grid.khat * fhat.data, axis=0))))


def helical_decompose(fhat, rtol=TRANSVERSE_RTOL):
    grid = fhat.grid
    scale = fhat.max_abs()
    defect = longitudinal_defect(fhat)
    if defect > rtol * scale:
        raise TransversalityError(
            f"field is not transverse: |khat.f| = {defect:.3e}, scale {scale:.3e}"
        )
    plus = np.sum(np.conj(grid.e_plus) * fhat.data, axis=0)
    minus = np.sum(np.conj(grid.e_minus) * fhat.data, axis=0)
    plus[0, 0, 0] = 0.0
    minus[0, 0, 0] = 0.0
    return HelicalAmplitudes(grid, plus, minus)


def helical_recompose(amps):
    grid = amps.grid
    data = amps.plus[None] * grid.e_plus + amps.minus[None] * grid.e_minus
    return SpectralVectorField(grid, data)


def mode_field(grid, m, vector):
    """Spectral field with ``vector`` at k(m) and its conjugate at -k(m)."""
    idx = grid.index_of(m)
    if not any(m):
        raise ValueError("mode m = 0 carries no physical field")
    neg = grid.index_of(tuple(-int(v) for v in m))
    data = np.zeros((3,) + grid.shape, dtype=complex)
    vector = np.asarray(vector, dtype=complex)
    data[(slice(None),) + idx] = vector
    data[(slice(None),) + neg] = np.conj(vector)
    return SpectralVectorField(grid, data)


def half_space_modes(grid, radius):
    """Integer wavevectors 0 < |m| <= radius, one representative per +-pair."""
    out = []
    r = int(np.floor(radius))
    rng = range(-r, r + 1)
    for mx in rng:
        for my in rng:
            for mz in rng:
                m = (mx, my, mz)
                if m == (0, 0, 0) or mx * mx + my * my + mz * mz > radius * radius:
                    continue
                if m > (0, 0, 0):
                    out.append(m)
    return out


def random_scalar_spectrum(grid, rng, cutoff):
    """Hermitian, mean-free Gaussian scalar spectrum supported on 0 < |m| <= cutoff."""
    m2 = np.sum(grid.mode_index**2, axis=0)
    support = (m2 <= cutoff * cutoff) & grid.active_mask
    raw = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
    data = np.where(support, raw, 0.0)
    return 0.5 * (data + np.conj(reflect(data)))


def random_field(grid, rng, cutoff, transverse=True):
    """Seeded Hermitian, mean-free Gaussian vector spectrum with 0 < |m| <= cutoff."""
    data = np.stack([random_scalar_spectrum(grid, rng, cutoff) for _ in range(3)])
    f = SpectralVectorField(grid, data)
    return transverse_project(f) if transverse else f
