"""Special functions and explicit analytic bounds on them.

Bessel functions of the first kind are evaluated by adaptive Gauss panels
applied to the classical integral representation

    J_nu(t) = t^nu / (2^nu Gamma(nu + 1/2) sqrt(pi))
              * int_{-1}^{1} e^{its} (1 - s^2)^(nu - 1/2) ds,

with the substitution s = sin(phi) so the integrand is smooth for every
nu >= 0.  The module also provides the gamma-function brackets (Stirling,
Gautschi) and the explicit exponential envelope that dominates |J_nu|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, sici

from .errors import AccuracyError, DomainError

__all__ = [
    "QuadratureConfig",
    "BoundCheck",
    "bessel_j",
    "bessel_envelope",
    "log_gamma",
    "stirling_bounds",
    "gautschi_bounds",
    "sine_integral",
]


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances and subdivision limits for oscillatory integrals.

    abs_tol    -- absolute error target for the quadrature itself
    max_panels -- hard cap on the number of panels before giving up
    tail_tol   -- allowed bound on truncated infinite tails
    """

    abs_tol: float = 1e-8
    max_panels: int = 2_097_152
    tail_tol: float = 1e-6

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise DomainError(f"abs_tol must be positive, got {self.abs_tol}")
        if not self.tail_tol > 0:
            raise DomainError(f"tail_tol must be positive, got {self.tail_tol}")
        if self.max_panels < 8:
            raise DomainError(f"max_panels must be >= 8, got {self.max_panels}")


@dataclass(frozen=True)
class BoundCheck:
    """Result of testing |value| <= bound at one argument."""

    argument: float
    value: float
    bound: float
    holds: bool
    margin: float

    @classmethod
    def compare(cls, argument: float, value: float, bound: float) -> "BoundCheck":
        margin = bound - abs(value)
        return cls(argument=argument, value=value, bound=bound,
                   holds=margin >= 0.0, margin=margin)


# Gauss-Legendre nodes/weights reused by every panel quadrature.
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(10)


def _panel_quad(func, a: float, b: float, n_panels: int) -> float:
    """Composite 10-point Gauss-Legendre over n_panels equal panels of [a, b]."""
    edges = np.linspace(a, b, n_panels + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])[:, None]
    half = 0.5 * (edges[1] - edges[0])
    pts = mid + half * _GL_NODES[None, :]
    return half * float(np.sum(func(pts) @ _GL_WEIGHTS))


def bessel_j(nu: float, t: float, q: QuadratureConfig | None = None) -> float:
    """J_nu(t) for nu >= 0, t >= 0, from the integral definition.

    Panel width tracks the oscillation scale: the initial panel count is
    max(8, ceil(t)) and doubles until two refinements agree to abs_tol.
    """
    q = q or QuadratureConfig()
    if nu < 0:
        raise DomainError(f"bessel_j requires nu >= 0, got {nu}")
    if t < 0:
        raise DomainError(f"bessel_j requires t >= 0, got {t}")
    if t == 0.0:
        return 1.0 if nu == 0.0 else 0.0

    # s = sin(phi) turns (1 - s^2)^(nu - 1/2) ds into cos(phi)^(2 nu) d(phi),
    # smooth at the endpoints for every nu >= 0.
    def integrand(phi):
        return np.cos(t * np.sin(phi)) * np.cos(phi) ** (2.0 * nu)

    log_pref = nu * math.log(t) - nu * math.log(2.0) \
        - float(gammaln(nu + 0.5)) - 0.5 * math.log(math.pi)

    n = max(8, math.ceil(t))
    est = _panel_quad(integrand, -math.pi / 2, math.pi / 2, n)
    while True:
        n *= 2
        if n > q.max_panels:
            raise AccuracyError(
                f"bessel_j({nu}, {t}) did not converge within {q.max_panels} panels",
                best_estimate=_from_log(log_pref, est),
            )
        refined = _panel_quad(integrand, -math.pi / 2, math.pi / 2, n)
        if abs(refined - est) <= 0.5 * q.abs_tol:
            return _from_log(log_pref, refined)
        est = refined


def _from_log(log_pref: float, integral: float) -> float:
    if integral == 0.0:
        return 0.0
    return math.copysign(math.exp(log_pref + math.log(abs(integral))), integral)


def bessel_envelope(nu: float, t: float) -> float:
    """Explicit envelope dominating |J_nu(t)|:

        2100 * t^nu / (2^nu Gamma(nu + 1/2) sqrt(nu pi))
             * (exp(-t / sqrt(nu)) + exp(-nu / 5)).

    Evaluated in log space so large nu and t cannot overflow.
    """
    if nu <= 0:
        raise DomainError(f"bessel_envelope requires nu > 0, got {nu}")
    if t < 0:
        raise DomainError(f"bessel_envelope requires t >= 0, got {t}")
    if t == 0.0:
        return 0.0
    log_pref = math.log(2100.0) + nu * math.log(t) - nu * math.log(2.0) \
        - float(gammaln(nu + 0.5)) - 0.5 * math.log(nu * math.pi)
    decay = np.logaddexp(-t / math.sqrt(nu), -nu / 5.0)
    return float(np.exp(log_pref + decay))


def log_gamma(x: float) -> float:
    """ln Gamma(x) for x > 0."""
    if x <= 0:
        raise DomainError(f"log_gamma requires x > 0, got {x}")
    return float(gammaln(x))


def stirling_bounds(x: float) -> tuple[float, float]:
    """Two-sided Stirling bracket:

        sqrt(2 pi) x^(x - 1/2) e^(-x)  <=  Gamma(x)  <=  lower * e^(1/(12x)).
    """
    if x <= 0:
        raise DomainError(f"stirling_bounds requires x > 0, got {x}")
    log_lower = 0.5 * math.log(2.0 * math.pi) + (x - 0.5) * math.log(x) - x
    return math.exp(log_lower), math.exp(log_lower + 1.0 / (12.0 * x))


def gautschi_bounds(x: float, s: float) -> tuple[float, float]:
    """Gautschi bracket for the ratio Gamma(x+1)/Gamma(x+s):

        x^(1-s) < Gamma(x+1)/Gamma(x+s) < (x+1)^(1-s),  0 < s < 1.
    """
    if x <= 0:
        raise DomainError(f"gautschi_bounds requires x > 0, got {x}")
    if not 0.0 < s < 1.0:
        raise DomainError(f"gautschi_bounds requires s in (0, 1), got {s}")
    return x ** (1.0 - s), (x + 1.0) ** (1.0 - s)


def sine_integral(u, q: QuadratureConfig | None = None):
    """Si(u) = int_0^u sin(s)/s ds for u >= 0.  Accepts scalars or arrays.

    Delegates to scipy's sici; q is accepted for interface uniformity with
    the other quadrature-backed operations and is not consulted.
    """
    arr = np.asarray(u, dtype=float)
    if np.any(arr < 0):
        raise DomainError("sine_integral requires u >= 0")
    si, _ = sici(arr)
    if np.isscalar(u) or arr.ndim == 0:
        return float(si)
    return si
