"""Spectral and spatial operators on periodic fields.

Covers the Riesz transform, its truncations (spectral route via the radial
factorization profile, spatial route via the periodized kernel), the
Poisson semigroup with its maximal/square/projection companions, maximal
operators over finite truncation grids, directional truncated Hilbert
transforms, and the method-of-rotations reconstruction.

Maximal operators over a truncation grid exploit that every supported
family has a symbol of the form  angular(xi) * profile(t * |xi|):  a
band-limited field splits into a few frequency-radius classes, each class
is transformed back once, and the sweep over truncation values becomes a
dense matrix product instead of one inverse FFT per t.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import (gammaln, j0 as bessel_j0, j1 as bessel_j1, sici,
                           struve)

from . import multiplier
from .errors import DomainError, UnsupportedDimensionError
from .fields import (GridSpec, SpatialField, SpectralField, forward_transform,
                     inverse_transform)
from .specfun import QuadratureConfig

__all__ = [
    "MultiplierSymbol",
    "TruncationGrid",
    "Kernel",
    "riesz_radial_profile",
    "apply_symbol",
    "truncated_riesz_spatial",
    "maximal_over",
    "vector_truncated_riesz",
    "vector_maximal",
    "square_function",
    "poisson_projection",
    "poisson_projection_sum",
    "directional_hilbert_trunc",
    "rotation_reconstruct",
    "sphere_moment",
    "RadialBundle",
    "radial_bundle",
]

MAXIMAL_FAMILIES = ("truncated_riesz", "factor_m", "poisson", "conjugate_poisson")


# ---------------------------------------------------------------------------
# truncation grids


@dataclass(frozen=True)
class TruncationGrid:
    """Dyadic truncation values 2^n, n_min <= n <= n_max, refined inside
    each octave by binary subdivision down to depth levels."""

    n_min: int
    n_max: int
    depth: int = 0

    def __post_init__(self):
        if self.n_min > self.n_max:
            raise DomainError(f"n_min {self.n_min} > n_max {self.n_max}")
        if self.depth < 0:
            raise DomainError(f"depth must be >= 0, got {self.depth}")

    def values(self) -> np.ndarray:
        """All t = 2^n (1 + m 2^-l), sorted and deduplicated."""
        fractions = np.unique(
            np.concatenate([np.arange(2 ** level) / 2 ** level
                            for level in range(self.depth + 1)]))
        octaves = 2.0 ** np.arange(self.n_min, self.n_max + 1)
        return np.unique(np.outer(octaves, 1.0 + fractions).ravel())

    def dyadic_values(self) -> np.ndarray:
        return 2.0 ** np.arange(self.n_min, self.n_max + 1)

    def octave_values(self, n: int) -> np.ndarray:
        """Refinement nodes of [2^n, 2^(n+1)] including both endpoints."""
        steps = np.arange(2 ** self.depth + 1) / 2 ** self.depth
        return 2.0 ** n * (1.0 + steps)


# ---------------------------------------------------------------------------
# the radial factorization profile, all supported dimensions


def riesz_radial_profile(d: int, xs, q: QuadratureConfig | None = None) -> np.ndarray:
    """The radial factor of the truncated-Riesz symbol at argument x = t |xi|.

    For d >= 4 this is the multiplier m from the tail quadrature.  For
    d in {2, 3} the same tail integral collapses to closed forms in J_0,
    J_1 and the sine integral, used here because the quadrature's crude
    tail cutoff is not affordable below d = 4.
    """
    q = q or QuadratureConfig()
    xs = np.asarray(xs, dtype=float)
    if d >= 4:
        return multiplier.m_values(d, xs, q)
    if d == 3:
        a = 2.0 * math.pi * xs
        small = a < 1e-3
        a_safe = np.where(small, 1.0, a)
        si, _ = sici(a)
        exact = (np.sin(a_safe) / (2.0 * a_safe ** 2)
                 - np.cos(a_safe) / (2.0 * a_safe)
                 + (math.pi / 2.0 - si) / 2.0)
        series = a / 6.0 - a ** 3 / 60.0 + (math.pi / 2.0 - si) / 2.0
        return (4.0 / math.pi) * np.where(small, series, exact)
    if d == 2:
        a = 2.0 * math.pi * xs
        # int_0^a J_0 via the Struve identity (itj0y0 loses accuracy for a > 25)
        int_j0 = a * bessel_j0(a) + (math.pi * a / 2.0) \
            * (struve(0, a) * bessel_j1(a) - struve(1, a) * bessel_j0(a))
        return bessel_j1(a) + 1.0 - int_j0
    raise UnsupportedDimensionError(
        f"the radial profile is available for d >= 2, got d={d}")


def _profile_matrix(d: int, radii: np.ndarray, ts: np.ndarray, family: str,
                    q: QuadratureConfig | None) -> np.ndarray:
    """profile(t * r) as an (n_radii, n_t) matrix."""
    args = np.outer(radii, ts)
    if family in ("factor_m", "truncated_riesz"):
        flat = np.asarray(args).ravel()
        uniq, inv = np.unique(np.round(flat, 10), return_inverse=True)
        return riesz_radial_profile(d, uniq, q)[inv].reshape(args.shape)
    if family in ("poisson", "conjugate_poisson"):
        return np.exp(-args / math.sqrt(d))
    raise DomainError(f"unknown maximal family {family!r}; "
                      f"expected one of {MAXIMAL_FAMILIES}")


# ---------------------------------------------------------------------------
# symbols


def _riesz_angular(spec: GridSpec, j: int) -> np.ndarray:
    radius = spec.freq_radius()
    comp = spec.freq_component(j)
    with np.errstate(invalid="ignore", divide="ignore"):
        sym = -1j * np.where(radius > 0, comp / np.where(radius > 0, radius, 1.0), 0.0)
    return sym


@dataclass(frozen=True)
class MultiplierSymbol:
    """Tagged radial-times-angular Fourier symbol.

    kind is one of riesz, truncated_riesz, factor_m, poisson,
    conjugate_poisson, poisson_projection, heat1d, directional_hilbert.
    """

    kind: str
    j: int | None = None
    t: float | None = None
    n: int | None = None
    theta: tuple[float, ...] | None = None
    eps: float | None = None

    # constructors ----------------------------------------------------------

    @classmethod
    def riesz(cls, j: int) -> "MultiplierSymbol":
        return cls(kind="riesz", j=j)

    @classmethod
    def truncated_riesz(cls, j: int, t: float) -> "MultiplierSymbol":
        cls._positive(t, "t")
        return cls(kind="truncated_riesz", j=j, t=t)

    @classmethod
    def factor_m(cls, t: float) -> "MultiplierSymbol":
        cls._positive(t, "t")
        return cls(kind="factor_m", t=t)

    @classmethod
    def poisson(cls, t: float) -> "MultiplierSymbol":
        if t < 0:
            raise DomainError(f"poisson requires t >= 0, got {t}")
        return cls(kind="poisson", t=t)

    @classmethod
    def conjugate_poisson(cls, j: int, t: float) -> "MultiplierSymbol":
        cls._positive(t, "t")
        return cls(kind="conjugate_poisson", j=j, t=t)

    @classmethod
    def poisson_projection(cls, n: int) -> "MultiplierSymbol":
        return cls(kind="poisson_projection", n=n)

    @classmethod
    def heat1d(cls, j: int, t: float) -> "MultiplierSymbol":
        cls._positive(t, "t")
        return cls(kind="heat1d", j=j, t=t)

    @classmethod
    def directional_hilbert(cls, theta, eps: float) -> "MultiplierSymbol":
        cls._positive(eps, "eps")
        theta = tuple(float(c) for c in theta)
        norm = math.sqrt(sum(c * c for c in theta))
        if abs(norm - 1.0) > 1e-12:
            raise DomainError(f"theta must be a unit vector, |theta| = {norm}")
        return cls(kind="directional_hilbert", theta=theta, eps=eps)

    @staticmethod
    def _positive(value: float, name: str) -> None:
        if not value > 0:
            raise DomainError(f"{name} must be positive, got {value}")

    # evaluation ------------------------------------------------------------

    def values(self, spec: GridSpec,
               q: QuadratureConfig | None = None) -> np.ndarray:
        """Symbol values over the frequency lattice (FFT layout).

        Odd symbols take the value 0 at xi = 0, keeping outputs mean-zero.
        """
        d = spec.dimension
        if self.kind == "riesz":
            return _riesz_angular(spec, self.j)
        if self.kind == "truncated_riesz":
            return _riesz_angular(spec, self.j) * self._radial(spec, q)
        if self.kind == "factor_m":
            return self._radial(spec, q).astype(complex)
        if self.kind == "poisson":
            return np.exp(-self.t * spec.freq_radius() / math.sqrt(d)).astype(complex)
        if self.kind == "conjugate_poisson":
            decay = np.exp(-self.t * spec.freq_radius() / math.sqrt(d))
            return _riesz_angular(spec, self.j) * decay
        if self.kind == "poisson_projection":
            radius = spec.freq_radius() / math.sqrt(d)
            return (np.exp(-2.0 ** (self.n - 1) * radius)
                    - np.exp(-2.0 ** self.n * radius)).astype(complex)
        if self.kind == "heat1d":
            comp = spec.freq_component(self.j)
            return np.exp(-4.0 * math.pi ** 2 * self.t * comp ** 2).astype(complex)
        if self.kind == "directional_hilbert":
            return _directional_hilbert_symbol(spec, self.theta, self.eps)
        raise DomainError(f"unknown symbol kind {self.kind!r}")

    def _radial(self, spec: GridSpec, q: QuadratureConfig | None) -> np.ndarray:
        radius = self.t * spec.freq_radius()
        flat = radius.ravel()
        uniq, inv = np.unique(np.round(flat, 10), return_inverse=True)
        vals = riesz_radial_profile(spec.dimension, uniq, q)
        return vals[inv].reshape(radius.shape)


def _directional_hilbert_symbol(spec: GridSpec, theta, eps: float) -> np.ndarray:
    if spec.dimension not in (2, 3):
        raise UnsupportedDimensionError(
            f"directional Hilbert transforms support d in {{2, 3}}, "
            f"got d={spec.dimension}")
    dot = np.zeros(spec.shape)
    for axis, comp in enumerate(theta, start=1):
        dot = dot + comp * spec.freq_component(axis)
    si, _ = sici(2.0 * math.pi * eps * np.abs(dot))
    return -1j * np.sign(dot) * (2.0 / math.pi) * (math.pi / 2.0 - si)


def apply_symbol(f: SpatialField, s: MultiplierSymbol,
                 q: QuadratureConfig | None = None) -> SpatialField:
    """Pointwise multiplication of the Fourier coefficients by the symbol."""
    coeff = forward_transform(f).coefficients * s.values(f.spec, q)
    return inverse_transform(SpectralField(f.spec, coeff))


# ---------------------------------------------------------------------------
# the spatial (kernel) route


@dataclass(frozen=True)
class Kernel:
    """Truncated Riesz kernel c_d x_j / |x|^(d+1) on |x| > t, periodized
    over image_radius neighbor cells per axis."""

    dimension: int
    axis: int
    truncation: float
    image_radius: int = 1

    def __post_init__(self):
        if self.truncation <= 0:
            raise DomainError(f"truncation must be positive, got {self.truncation}")
        if self.image_radius < 0:
            raise DomainError("image_radius must be >= 0")

    def normalization(self) -> float:
        d = self.dimension
        return math.exp(float(gammaln((d + 1) / 2))
                        - 0.5 * (d + 1) * math.log(math.pi))

    def sample(self, spec: GridSpec) -> np.ndarray:
        """Kernel values at the lattice offsets (FFT order), image sum."""
        if spec.dimension != self.dimension:
            raise DomainError("kernel dimension does not match the grid")
        d, length = spec.dimension, spec.period
        c_d = self.normalization()
        # offsets in (-L/2, L/2], FFT order
        base = np.fft.fftfreq(spec.points_per_axis) * length
        total = np.zeros(spec.shape)
        shifts = np.arange(-self.image_radius, self.image_radius + 1) * length
        grids = np.meshgrid(*([base] * d), indexing="ij")
        for image in np.stack(np.meshgrid(*([shifts] * d), indexing="ij"),
                              axis=-1).reshape(-1, d):
            coords = [g + s for g, s in zip(grids, image)]
            r2 = np.zeros(spec.shape)
            for c in coords:
                r2 += c ** 2
            r = np.sqrt(r2)
            with np.errstate(divide="ignore", invalid="ignore"):
                vals = np.where(r > self.truncation,
                                coords[self.axis - 1] / np.where(r > 0, r, 1.0)
                                ** (d + 1), 0.0)
            total += vals
        # The periodized kernel is exactly odd; the finite image sum breaks
        # that on the -L/2 edge planes (their +L/2 counterparts fall outside
        # the image range).  Antisymmetrizing restores oddness exactly.
        reflected = total
        for axis in range(d):
            reflected = np.roll(np.flip(reflected, axis=axis), 1, axis=axis)
        return c_d * 0.5 * (total - reflected)


def truncated_riesz_spatial(f: SpatialField, j: int, t: float,
                            image_radius: int = 1) -> SpatialField:
    """Truncated Riesz transform by discrete periodic convolution with the
    sampled periodized kernel (executed through the transform pair)."""
    spec = f.spec
    if not 0 < t < spec.period / 2:
        raise DomainError(
            f"truncation t must satisfy 0 < t < L/2 = {spec.period / 2}, got {t}")
    kernel = Kernel(dimension=spec.dimension, axis=j, truncation=t,
                    image_radius=image_radius)
    k_hat = np.fft.fftn(kernel.sample(spec))
    f_hat = np.fft.fftn(f.samples)
    out = np.fft.ifftn(k_hat * f_hat) * spec.cell_volume
    return SpatialField(spec, out)


# ---------------------------------------------------------------------------
# radius-class decomposition


@dataclass
class RadialBundle:
    """A field pre-filtered by an angular symbol and split into frequency
    radius classes: samples(op_t f) = sum_i profile(t r_i) * u_i."""

    spec: GridSpec
    radii: np.ndarray                   # (n_r,)
    components: np.ndarray              # (n_samples, n_r), real or complex
    is_real: bool

    _BLOCK = 1 << 17

    def sup_abs(self, profiles: np.ndarray) -> np.ndarray:
        """sup over columns tau of |sum_i u_i P[i, tau]|, flattened samples."""
        out = np.empty(self.components.shape[0])
        for lo in range(0, self.components.shape[0], self._BLOCK):
            block = self.components[lo:lo + self._BLOCK]
            if self.is_real:
                vals = np.abs(block @ profiles)
            else:
                vals = np.abs(block.real @ profiles) ** 2 \
                    + np.abs(block.imag @ profiles) ** 2
                np.sqrt(vals, out=vals)
            out[lo:lo + self._BLOCK] = vals.max(axis=1)
        return out

    def sup_abs_sq(self, profiles: np.ndarray) -> np.ndarray:
        """sup over columns of |...|^2 (no final sqrt), for accumulation."""
        sup = self.sup_abs(profiles)
        return sup * sup

    def combine(self, profile: np.ndarray) -> np.ndarray:
        """Spatial samples of the operator with radial values profile (n_r,)."""
        return (self.components @ profile).reshape(self.spec.shape)


def radial_bundle(f: SpatialField, angular: np.ndarray | None = None,
                  rel_tol: float = 1e-13) -> RadialBundle:
    """Split angular-filtered coefficients of f into radius classes.

    Coefficients below rel_tol of the peak count as inactive, so band-limited
    fields produce only the handful of radii inside the band.
    """
    spec = f.spec
    coeff = forward_transform(f).coefficients
    if angular is not None:
        coeff = coeff * angular
    radius = spec.freq_radius().ravel()
    flat = coeff.ravel()
    active = np.abs(flat) > rel_tol * max(np.max(np.abs(flat)), 1e-300)
    uniq = np.unique(np.round(radius[active], 10))
    scale = spec.n_samples / spec.period ** (spec.dimension / 2.0)
    cols = []
    for r in uniq:
        mask = active & (np.round(radius, 10) == r)
        restricted = np.where(mask.reshape(spec.shape), coeff, 0.0)
        cols.append((np.fft.ifftn(restricted) * scale).ravel())
    comps = np.stack(cols, axis=1) if cols else np.zeros((spec.n_samples, 0),
                                                         dtype=complex)
    peak = float(np.max(np.abs(comps))) if comps.size else 0.0
    is_real = comps.size == 0 or float(np.max(np.abs(comps.imag))) <= 1e-10 * max(peak, 1e-300)
    if is_real and comps.size:
        comps = np.ascontiguousarray(comps.real)
    return RadialBundle(spec=spec, radii=uniq, components=comps, is_real=is_real)


def _too_many_radii(n_radii: int, n_t: int) -> bool:
    return n_radii > max(64, 2 * n_t)


# ---------------------------------------------------------------------------
# maximal and square operators


def maximal_over(f: SpatialField, family: str, grid: TruncationGrid,
                 j: int = 1, q: QuadratureConfig | None = None) -> SpatialField:
    """Pointwise sup over the grid's truncation values of |op_t f|."""
    if family not in MAXIMAL_FAMILIES:
        raise DomainError(f"family must be one of {MAXIMAL_FAMILIES}, got {family!r}")
    ts = grid.values()
    if ts.size == 0:
        raise DomainError("empty truncation grid")
    spec = f.spec
    angular = _riesz_angular(spec, j) \
        if family in ("truncated_riesz", "conjugate_poisson") else None
    bundle = radial_bundle(f, angular)
    if _too_many_radii(len(bundle.radii), len(ts)):
        return _maximal_per_t(f, family, ts, j, q)
    profiles = _profile_matrix(spec.dimension, bundle.radii, ts, family, q)
    sup = bundle.sup_abs(profiles)
    return SpatialField(spec, sup.reshape(spec.shape).astype(complex))


def _maximal_per_t(f: SpatialField, family: str, ts: np.ndarray, j: int,
                   q: QuadratureConfig | None) -> SpatialField:
    spec = f.spec
    coeff = forward_transform(f).coefficients
    angular = _riesz_angular(spec, j) \
        if family in ("truncated_riesz", "conjugate_poisson") else 1.0
    radius = spec.freq_radius()
    scale = spec.n_samples / spec.period ** (spec.dimension / 2.0)
    flat_r = radius.ravel()
    uniq, inv = np.unique(np.round(flat_r, 10), return_inverse=True)
    sup = np.zeros(spec.shape)
    for t in ts:
        prof = _profile_matrix(spec.dimension, uniq, np.array([t]), family, q)[:, 0]
        sym = prof[inv].reshape(spec.shape) * angular
        vals = np.abs(np.fft.ifftn(coeff * sym) * scale)
        np.maximum(sup, vals, out=sup)
    return SpatialField(spec, sup.astype(complex))


def vector_truncated_riesz(f: SpatialField, t: float,
                           q: QuadratureConfig | None = None) -> SpatialField:
    """(sum_j |R_j^t f|^2)^(1/2) via the spectral route."""
    spec = f.spec
    acc = np.zeros(spec.shape)
    for j in range(1, spec.dimension + 1):
        comp = apply_symbol(f, MultiplierSymbol.truncated_riesz(j, t), q)
        acc += np.abs(comp.samples) ** 2
    return SpatialField(spec, np.sqrt(acc).astype(complex))


def vector_maximal(f: SpatialField, grid: TruncationGrid,
                   q: QuadratureConfig | None = None) -> SpatialField:
    """sup_t (sum_j |R_j^t f|^2)^(1/2) over the grid."""
    ts = grid.values()
    if ts.size == 0:
        raise DomainError("empty truncation grid")
    spec = f.spec
    first = radial_bundle(f, _riesz_angular(spec, 1))
    if _too_many_radii(len(first.radii), len(ts)):
        sup = np.zeros(spec.shape)
        for t in ts:
            vals = np.abs(vector_truncated_riesz(f, float(t), q).samples)
            np.maximum(sup, vals, out=sup)
        return SpatialField(spec, sup.astype(complex))

    profiles = _profile_matrix(spec.dimension, first.radii, ts,
                               "truncated_riesz", q).astype(np.float32)
    n_samples = spec.n_samples
    block = RadialBundle._BLOCK
    bundles = [first] + [radial_bundle(f, _riesz_angular(spec, j))
                         for j in range(2, spec.dimension + 1)]
    comp32 = []
    for b in bundles:
        if b.is_real:
            comp32.append((np.asarray(b.components, dtype=np.float32), None))
        else:
            comp32.append((b.components.real.astype(np.float32),
                           b.components.imag.astype(np.float32)))
    sup = np.empty(n_samples)
    for lo in range(0, n_samples, block):
        hi = min(lo + block, n_samples)
        acc_blk = np.zeros((hi - lo, len(ts)), dtype=np.float32)
        for re, im in comp32:
            v = re[lo:hi] @ profiles
            acc_blk += v * v
            if im is not None:
                w = im[lo:hi] @ profiles
                acc_blk += w * w
        sup[lo:hi] = np.sqrt(acc_blk.max(axis=1))
    return SpatialField(spec, sup.reshape(spec.shape).astype(complex))


def square_function(f: SpatialField, t_nodes: np.ndarray,
                    q: QuadratureConfig | None = None) -> SpatialField:
    """Vertical square function of the Poisson semigroup, discretized on
    increasing positive nodes by the trapezoid rule:

        g(f)(x)^2 ~ int t |d/dt P_t f(x)|^2 dt.
    """
    t_nodes = np.asarray(t_nodes, dtype=float)
    if t_nodes.size == 0:
        raise DomainError("square_function requires at least one t node")
    if np.any(t_nodes <= 0) or np.any(np.diff(t_nodes) <= 0):
        raise DomainError("t_nodes must be positive and strictly increasing")
    spec = f.spec
    d = spec.dimension
    bundle = radial_bundle(f)
    # trapezoid weights for int ... dt
    w = np.zeros_like(t_nodes)
    w[:-1] += 0.5 * np.diff(t_nodes)
    w[1:] += 0.5 * np.diff(t_nodes)
    # d/dt P_t has radial profile -(r/sqrt(d)) exp(-t r / sqrt(d))
    rate = bundle.radii / math.sqrt(d)
    profiles = -rate[:, None] * np.exp(-np.outer(rate, t_nodes))
    acc = np.zeros(spec.n_samples)
    blk = RadialBundle._BLOCK
    weights = (w * t_nodes)
    for lo in range(0, spec.n_samples, blk):
        part = bundle.components[lo:lo + blk]
        if bundle.is_real:
            sq = np.abs(part @ profiles) ** 2
        else:
            sq = np.abs(part.real @ profiles) ** 2 + np.abs(part.imag @ profiles) ** 2
        acc[lo:lo + blk] = sq @ weights
    return SpatialField(spec, np.sqrt(acc).reshape(spec.shape).astype(complex))


def poisson_projection(f: SpatialField, n: int) -> SpatialField:
    """S_n f = (P_{2^(n-1)} - P_{2^n}) f."""
    return apply_symbol(f, MultiplierSymbol.poisson_projection(n))


def poisson_projection_sum(f: SpatialField, n_min: int, n_max: int) -> SpatialField:
    """sum_{n=n_min}^{n_max} S_n f = (P_{2^(n_min-1)} - P_{2^n_max}) f,
    evaluated in its telescoped form (exact spectrally)."""
    if n_min > n_max:
        raise DomainError(f"n_min {n_min} > n_max {n_max}")
    spec = f.spec
    radius = spec.freq_radius() / math.sqrt(spec.dimension)
    sym = np.exp(-2.0 ** (n_min - 1) * radius) - np.exp(-2.0 ** n_max * radius)
    coeff = forward_transform(f).coefficients * sym
    return inverse_transform(SpectralField(spec, coeff))


# ---------------------------------------------------------------------------
# method of rotations


def directional_hilbert_trunc(f: SpatialField, theta, eps: float,
                              q: QuadratureConfig | None = None) -> SpatialField:
    """Truncated Hilbert transform along the unit direction theta."""
    return apply_symbol(f, MultiplierSymbol.directional_hilbert(theta, eps), q)


def rotation_reconstruct(f: SpatialField, j: int, t: float,
                         n_angles: int) -> SpatialField:
    """Truncated Riesz transform as a sphere average of directional
    truncated Hilbert transforms:

        R_j^t f = (c_d pi / 2) int_{S^(d-1)} theta_j H_theta^t f dtheta.

    Composite midpoint rule on the circle for d = 2, with the two panels
    containing the integrand's sign jumps (the angles where theta is
    orthogonal to xi, known exactly per frequency) split at the jump, which
    restores second-order convergence; Gauss-Legendre in the polar cosine
    times midpoint azimuths for d = 3.  Accumulated in the spectral domain,
    so the cost is one inverse transform total.
    """
    spec = f.spec
    d = spec.dimension
    if d not in (2, 3):
        raise UnsupportedDimensionError(
            f"rotation_reconstruct supports d in {{2, 3}}, got d={d}")
    if n_angles < 16:
        raise DomainError(f"n_angles must be >= 16, got {n_angles}")
    c_d = math.exp(float(gammaln((d + 1) / 2)) - 0.5 * (d + 1) * math.log(math.pi))

    if d == 2:
        sym_total = _rotation_symbol_2d(spec, j, t, n_angles)
    else:
        sym_total = _rotation_symbol_3d(spec, j, t, n_angles, c_d)
    coeff = forward_transform(f).coefficients * sym_total
    return inverse_transform(SpectralField(spec, coeff))


def _rotation_symbol_3d(spec: GridSpec, j: int, t: float, n_angles: int,
                        c_3: float) -> np.ndarray:
    """Product quadrature of the sphere integral in a frame adapted to each
    frequency: polar axis along xi.

    In that frame the directional symbol depends only on the polar cosine u
    (sigma jumps in sign at the equator u = 0), and the azimuthal average of
    theta_j is the exact degree-1 trigonometric value 2 pi u xi_j / |xi| (any
    midpoint rule with >= 2 azimuths reproduces it).  What remains is the
    even polar integral 2 int_0^1 u (pi/2 - Si(2 pi t |xi| u)) du, done by
    Gauss-Legendre clear of the u = 0 kink.
    """
    n_polar = max(4, int(round(math.sqrt(n_angles / 2.0))))
    nodes, wts = np.polynomial.legendre.leggauss(n_polar)
    u = 0.5 * (nodes + 1.0)          # Gauss nodes mapped to (0, 1)
    w = 0.5 * wts

    radius = spec.freq_radius()
    comp = spec.freq_component(j)
    flat_r = radius.ravel()
    uniq, inv = np.unique(np.round(flat_r, 10), return_inverse=True)
    si, _ = sici(2.0 * math.pi * t * np.outer(uniq, u))
    polar = 2.0 * ((math.pi / 2.0 - si) * u) @ w
    polar_full = polar[inv].reshape(radius.shape)
    with np.errstate(invalid="ignore", divide="ignore"):
        zeta_j = np.where(radius > 0, comp / np.where(radius > 0, radius, 1.0),
                          0.0)
    return -2j * math.pi * c_3 * zeta_j * polar_full


def _rotation_symbol_2d(spec: GridSpec, j: int, t: float,
                        n_angles: int) -> np.ndarray:
    """Quadrature of (pi/2) c_2 int_0^{2pi} theta_j(alpha) sigma_theta(xi)
    dalpha, vectorized over lattice frequencies.

    The integrand jumps in sign at alpha = beta +- pi/2 where beta is the
    angle of xi; the two panels containing a jump are split there and each
    half handled by its own midpoint, so the composite rule keeps its
    second-order accuracy despite the discontinuity.
    """
    xi1 = spec.freq_component(1).ravel()
    xi2 = spec.freq_component(2).ravel()
    radius = np.hypot(xi1, xi2)
    active = radius > 0
    r = radius[active]
    beta = np.arctan2(xi2[active], xi1[active])

    def integrand(alpha):
        """theta_j(alpha) sigma_theta(xi) at per-mode angles alpha."""
        comp = np.cos(alpha) if j == 1 else np.sin(alpha)
        dot = r * np.cos(alpha - beta)
        si, _ = sici(2.0 * math.pi * t * np.abs(dot))
        return comp * (-1j) * np.sign(dot) * (2.0 / math.pi) \
            * (math.pi / 2.0 - si)

    h = 2.0 * math.pi / n_angles
    mids = h * (np.arange(n_angles) + 0.5)
    acc = np.zeros(r.shape, dtype=complex)
    for alpha in mids:
        acc += integrand(np.full(r.shape, alpha))
    acc *= h

    for shift in (0.5 * math.pi, 1.5 * math.pi):
        s = np.mod(beta + shift, 2.0 * math.pi)
        panel = np.minimum((s / h).astype(int), n_angles - 1)
        lo, hi = panel * h, (panel + 1) * h
        acc -= h * integrand(mids[panel])
        left, right = s - lo, hi - s
        acc += left * integrand(lo + 0.5 * left)
        acc += right * integrand(s + 0.5 * right)

    c_2 = math.exp(float(gammaln(1.5)) - 1.5 * math.log(math.pi))
    sym = np.zeros(radius.shape, dtype=complex)
    sym[active] = acc * c_2 * math.pi / 2.0
    return sym.reshape(spec.shape)


def sphere_moment(q_exp: float, d: int) -> float:
    """int_{S^(d-1)} |theta_1|^q dtheta by the closed gamma-ratio form."""
    if q_exp <= 0:
        raise DomainError(f"sphere_moment requires q > 0, got {q_exp}")
    if d < 1:
        raise DomainError(f"sphere_moment requires d >= 1, got {d}")
    log_area = math.log(2.0) + 0.5 * d * math.log(math.pi) - float(gammaln(d / 2.0))
    log_ratio = float(gammaln(d / 2.0)) + float(gammaln((q_exp + 1) / 2.0)) \
        - 0.5 * math.log(math.pi) - float(gammaln((d + q_exp) / 2.0))
    return math.exp(log_area + log_ratio)
