"""d-dimensional periodic grids, unitary DFT, norms, and test fields.

The box is [0, L)^d sampled with N points per axis.  Frequencies are
xi = k / L with integer lattice k in [-N/2, N/2)^d (numpy FFT layout).
The transform is normalized so that the discrete Parseval identity

    sum |f(x)|^2 (L/N)^d  =  sum |F(k)|^2

holds exactly, matching the unitary continuum convention; multiplier
operator norms then equal symbol sup-norms.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DomainError, ResourceError

__all__ = [
    "GridSpec",
    "SpatialField",
    "SpectralField",
    "forward_transform",
    "inverse_transform",
    "l2_norm",
    "lp_norm",
    "sup_norm",
    "random_band_limited",
    "save_field",
    "load_field",
]

MAX_SAMPLES = 2 ** 24  # memory budget in grid samples


@dataclass(frozen=True)
class GridSpec:
    """Sampling of the periodic box [0, L)^d with N points per axis."""

    dimension: int
    points_per_axis: int
    period: float = 1.0

    def __post_init__(self):
        if self.dimension < 1:
            raise DomainError(f"dimension must be >= 1, got {self.dimension}")
        if self.points_per_axis < 4 or self.points_per_axis % 2 != 0:
            raise DomainError(
                f"points_per_axis must be even and >= 4, got {self.points_per_axis}")
        if self.period <= 0:
            raise DomainError(f"period must be positive, got {self.period}")
        if self.n_samples > MAX_SAMPLES:
            raise ResourceError(
                f"N^d = {self.n_samples} exceeds the sample budget {MAX_SAMPLES}")

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.points_per_axis,) * self.dimension

    @property
    def n_samples(self) -> int:
        return self.points_per_axis ** self.dimension

    @property
    def cell_volume(self) -> float:
        return (self.period / self.points_per_axis) ** self.dimension

    def freq_axis(self) -> np.ndarray:
        """1-d frequency axis k/L in FFT layout."""
        n, length = self.points_per_axis, self.period
        return np.fft.fftfreq(n, d=length / n)

    def freq_component(self, axis: int) -> np.ndarray:
        """xi_axis over the full lattice (FFT layout); axis counts from 1."""
        if not 1 <= axis <= self.dimension:
            raise DomainError(f"axis must be in 1..{self.dimension}, got {axis}")
        shape = [1] * self.dimension
        shape[axis - 1] = self.points_per_axis
        return np.broadcast_to(self.freq_axis().reshape(shape), self.shape)

    def freq_radius(self) -> np.ndarray:
        """|xi| over the full lattice (FFT layout)."""
        axis_sq = self.freq_axis() ** 2
        total = np.zeros(self.shape)
        for j in range(self.dimension):
            shape = [1] * self.dimension
            shape[j] = self.points_per_axis
            total = total + axis_sq.reshape(shape)
        return np.sqrt(total)


@dataclass(frozen=True)
class SpatialField:
    """Samples of a function on the grid, complex-valued, FFT axis order."""

    spec: GridSpec
    samples: np.ndarray

    def __post_init__(self):
        if self.samples.shape != self.spec.shape:
            raise DomainError(
                f"samples shape {self.samples.shape} != grid shape {self.spec.shape}")
        if not np.all(np.isfinite(self.samples)):
            raise DomainError("field samples must be finite")


@dataclass(frozen=True)
class SpectralField:
    """Fourier coefficients on the lattice k in [-N/2, N/2)^d, FFT layout."""

    spec: GridSpec
    coefficients: np.ndarray

    def __post_init__(self):
        if self.coefficients.shape != self.spec.shape:
            raise DomainError(
                f"coefficient shape {self.coefficients.shape} != grid shape "
                f"{self.spec.shape}")


def forward_transform(f: SpatialField) -> SpectralField:
    """Unitary DFT: coefficients approximating the continuum transform at xi=k/L."""
    spec = f.spec
    scale = spec.period ** (spec.dimension / 2.0) / spec.n_samples
    return SpectralField(spec, np.fft.fftn(f.samples) * scale)


def inverse_transform(F: SpectralField) -> SpatialField:
    """Inverse of forward_transform (exact round trip up to rounding)."""
    spec = F.spec
    scale = spec.n_samples / spec.period ** (spec.dimension / 2.0)
    return SpatialField(spec, np.fft.ifftn(F.coefficients) * scale)


def _cell_volume(f) -> float:
    return f.spec.cell_volume


def l2_norm(f: SpatialField) -> float:
    return float(np.sqrt(np.sum(np.abs(f.samples) ** 2) * _cell_volume(f)))


def lp_norm(f: SpatialField, p: float) -> float:
    if p < 1:
        raise DomainError(f"lp_norm requires p >= 1, got {p}")
    return float((np.sum(np.abs(f.samples) ** p) * _cell_volume(f)) ** (1.0 / p))


def sup_norm(f: SpatialField) -> float:
    return float(np.max(np.abs(f.samples)))


def random_band_limited(spec: GridSpec, band_radius: float,
                        seed: int) -> SpatialField:
    """Real-valued mean-zero field with i.i.d. Gaussian coefficients on
    0 < |xi| <= band_radius, conjugate-symmetrized; deterministic per seed."""
    nyquist = spec.points_per_axis / (2.0 * spec.period)
    if not 0 < band_radius < nyquist:
        raise DomainError(
            f"band_radius must lie in (0, N/(2L)) = (0, {nyquist}), got {band_radius}")
    rng = np.random.default_rng(seed)
    coeff = rng.standard_normal(spec.shape) + 1j * rng.standard_normal(spec.shape)
    radius = spec.freq_radius()
    mask = (radius > 0) & (radius <= band_radius)
    coeff = np.where(mask, coeff, 0.0)
    # Hermitian part: average with the conjugate at -k
    reflected = coeff
    for axis in range(spec.dimension):
        reflected = np.roll(np.flip(reflected, axis=axis), 1, axis=axis)
    coeff = 0.5 * (coeff + np.conj(reflected))
    field = inverse_transform(SpectralField(spec, coeff))
    return SpatialField(spec, field.samples.real.astype(complex))


_HEADER = struct.Struct("<qqd")  # d, N as int64; L as float64; little-endian


def save_field(f: SpatialField, path) -> None:
    """Flat binary layout: header (d, N, L) then row-major interleaved
    float64 (re, im) pairs, all little-endian."""
    data = np.ascontiguousarray(f.samples, dtype="<c16")
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(f.spec.dimension, f.spec.points_per_axis,
                              f.spec.period))
        fh.write(data.tobytes())


def load_field(path) -> SpatialField:
    raw = Path(path).read_bytes()
    d, n, length = _HEADER.unpack_from(raw)
    spec = GridSpec(dimension=int(d), points_per_axis=int(n), period=float(length))
    body = np.frombuffer(raw, dtype="<c16", offset=_HEADER.size)
    if body.size != spec.n_samples:
        raise DomainError(
            f"file holds {body.size} samples, header implies {spec.n_samples}")
    return SpatialField(spec, body.reshape(spec.shape).astype(complex))
