"""Closed-form edge dynamics and ensemble activation curves.

A two-qubit edge state evolving under an Ising-type coupling of strength
``omega`` has larger Schmidt coefficient ``lambda(t) = (1 + |cos(omega t)|)/2``
and optimal singlet-conversion probability
``phi(t) = min(1, 2 (1 - lambda)) = 1 - |cos(omega t)|``.

Averaging phi over a frequency density P_w gives the expected active-edge
fraction ``p(t) = 1 - E[|cos(w t)|]``.  Expanding |cos| in its Fourier series

    |cos y| = 2/pi + (4/pi) * sum_k (-1)^(k+1) cos(2 k y) / (4 k^2 - 1)

turns this into a series over the characteristic function F(q) = E[exp(iqw)]:

    p(t) = 1 - 2/pi + (4/pi) * sum_k (-1)^k Re[F(2 k t)] / (4 k^2 - 1).

For any continuous density F decays, so p(t) -> 1 - 2/pi at long times; the
shape of the density only controls the pre-asymptotic transient.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import integrate

from .errors import ConfigurationError, DomainError

P_INFINITY = 1.0 - 2.0 / np.pi

#: absolute tolerance for rational detection in bernoulli_period
RATIONAL_TOL = 1e-12
#: largest denominator considered when detecting a rational frequency ratio
RATIONAL_MAX_DEN = 10**6


@dataclass(frozen=True)
class TwoQubitState:
    """Amplitude matrix Psi of a pure two-qubit state, sum |Psi_ij|^2 = 1."""

    amplitudes: np.ndarray

    def __post_init__(self):
        psi = np.asarray(self.amplitudes, dtype=complex)
        if psi.shape != (2, 2):
            raise DomainError("amplitudes must be a 2x2 matrix")
        norm = float(np.sum(np.abs(psi) ** 2))
        if abs(norm - 1.0) > 1e-12:
            raise DomainError(f"state is not normalized: sum |Psi|^2 = {norm!r}")
        object.__setattr__(self, "amplitudes", psi)


def edge_state(omega: float, t: float) -> TwoQubitState:
    """The edge state after evolving |00> for time t under coupling omega."""
    half = 0.5 * omega * t
    return TwoQubitState(np.array([[np.cos(half), 0.0],
                                   [0.0, -1j * np.sin(half)]]))


def schmidt_lambda(state: TwoQubitState) -> float:
    """Larger squared Schmidt coefficient, (1 + sqrt(1 - 4 |det Psi|^2)) / 2.

    1/2 marks a maximally entangled state, 1 a product state.
    """
    det = abs(np.linalg.det(state.amplitudes))
    return 0.5 * (1.0 + np.sqrt(max(0.0, 1.0 - 4.0 * det * det)))


def conversion_probability(omega, t):
    """Optimal singlet-conversion probability 1 - |cos(omega t)|.

    Broadcasts over numpy arrays; periodic in t with period pi/omega.
    """
    return 1.0 - np.abs(np.cos(np.multiply(omega, t)))


def p_bernoulli(t, eta: float, omega1: float, omega2: float):
    """Active fraction for the two-point mixture: omega1 w.p. eta, else omega2."""
    if not 0.0 <= eta <= 1.0:
        raise DomainError("eta must lie in [0, 1]")
    return 1.0 - eta * np.abs(np.cos(omega1 * np.asarray(t))) \
               - (1.0 - eta) * np.abs(np.cos(omega2 * np.asarray(t)))


def p_gaussian(t, omega: float, sigma_omega: float, k_max: int = 100):
    """Active fraction for N(omega, sigma_omega^2) frequencies.

    Truncated series with terms cos(2 k omega t) exp(-2 sigma^2 t^2 k^2);
    the truncation error is bounded by 4 / (pi (4 k_max^2 - 1)), so values
    near t = 0 may undershoot [0, 1] by up to that slack (no clipping is
    applied, to keep oracle comparisons exact).
    """
    if k_max < 1:
        raise ConfigurationError("k_max must be >= 1")
    t = np.asarray(t, dtype=float)
    k = np.arange(1, k_max + 1, dtype=float)
    signs = np.where(k.astype(int) % 2 == 0, 1.0, -1.0)
    coeff = signs / (4.0 * k * k - 1.0)
    tt = t[..., None]
    series = np.sum(coeff * np.cos(2.0 * omega * k * tt)
                    * np.exp(-2.0 * (sigma_omega * tt * k) ** 2), axis=-1)
    out = P_INFINITY + (4.0 / np.pi) * series
    return out if out.shape else float(out)


def p_asymptotic_gaussian(t, omega: float, sigma_omega: float):
    """Leading-order long-time form 1 - 2/pi - (4/(3 pi)) cos(2 omega t) e^{-2 sigma^2 t^2}.

    Valid for sigma_omega * t of order one and larger; at small t it can go
    negative, which simply signals that the higher harmonics were dropped.
    """
    t = np.asarray(t, dtype=float)
    out = P_INFINITY - (4.0 / (3.0 * np.pi)) * np.cos(2.0 * omega * t) \
        * np.exp(-2.0 * (sigma_omega * t) ** 2)
    return out if out.shape else float(out)


def p_numeric(density: Callable[[float], float], t: float, tolerance: float = 1e-10,
              support: Optional[tuple] = None, points: Optional[Sequence[float]] = None) -> float:
    """Quadrature evaluation of p(t) = 1 - integral P_w(x) |cos(x t)| dx.

    The defining integral, evaluated adaptively; serves as the independent
    oracle for the series formulas.  ``density`` must integrate to 1 within
    1e-6 over ``support`` (default: the whole line).  ``points`` marks known
    sharp features for the quadrature (finite support only).
    """
    if tolerance <= 0:
        raise ConfigurationError("tolerance must be positive")
    lo, hi = support if support is not None else (-np.inf, np.inf)
    mass, _ = integrate.quad(density, lo, hi, epsabs=1e-12, limit=400, points=points)
    if abs(mass - 1.0) > 1e-6:
        raise DomainError(f"density integrates to {mass!r}, not 1")
    val, _ = integrate.quad(lambda x: density(x) * abs(np.cos(x * t)), lo, hi,
                            epsabs=tolerance, limit=400, points=points)
    return 1.0 - val


def bernoulli_period(omega1: float, omega2: float) -> Optional[float]:
    """Period of the two-frequency activation curve, or None if quasi-periodic.

    If omega2/omega1 equals a reduced fraction l/m within RATIONAL_TOL
    (denominators up to RATIONAL_MAX_DEN), the curve repeats with period
    m*pi/omega1.  Irrational ratios (e.g. pi) fall outside the tolerance and
    return None.
    """
    if omega1 <= 0 or omega2 <= 0:
        raise DomainError("frequencies must be positive")
    ratio = omega2 / omega1
    frac = Fraction(ratio).limit_denominator(RATIONAL_MAX_DEN)
    if abs(ratio - frac.numerator / frac.denominator) > RATIONAL_TOL:
        return None
    return frac.denominator * np.pi / omega1


@dataclass(frozen=True)
class AnalyticCurveSpec:
    """Parameters for a closed-form p(t) curve (CLI `analytic-p`)."""

    kind: str  # "gaussian" | "bernoulli" | "numeric"
    omega: float = 1.0
    sigma_omega: float = 0.1
    k_max: int = 100
    eta: float = 0.5
    omega1: float = 1.0
    omega2: float = 2.0
    tolerance: float = 1e-10
    density: Optional[Callable[[float], float]] = None
    support: Optional[tuple] = None
    points: Optional[tuple] = None

    def __post_init__(self):
        if self.kind not in ("gaussian", "bernoulli", "numeric"):
            raise ConfigurationError(f"unknown analytic curve kind {self.kind!r}")
        if self.k_max < 1:
            raise ConfigurationError("k_max must be >= 1")
        if not 0.0 <= self.eta <= 1.0:
            raise ConfigurationError("eta must lie in [0, 1]")
        if self.tolerance <= 0:
            raise ConfigurationError("tolerance must be positive")


def evaluate_curve(spec: AnalyticCurveSpec, times) -> np.ndarray:
    """Evaluate an analytic p(t) specification on a time grid."""
    times = np.asarray(times, dtype=float)
    if spec.kind == "gaussian":
        return np.asarray(p_gaussian(times, spec.omega, spec.sigma_omega, spec.k_max))
    if spec.kind == "bernoulli":
        return np.asarray(p_bernoulli(times, spec.eta, spec.omega1, spec.omega2))
    if spec.density is None:
        raise ConfigurationError("numeric curve requires a density callable")
    return np.array([p_numeric(spec.density, t, spec.tolerance, spec.support,
                               spec.points) for t in times])
