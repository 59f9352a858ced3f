"""Statistics of the correlated length disorder on a perturbed lattice.

When every node of a unit-spacing lattice is displaced by i.i.d. N(0, sigma^2)
noise in each coordinate, the length of an edge is the norm of a fixed unit
vector plus an isotropic N(0, 2 sigma^2) jitter, i.e. Rice-distributed with
density

    R(x; nu=1, s=sqrt(2) sigma) = x/(2 sigma^2) exp(-(x^2+1)/(4 sigma^2)) I0(x/(2 sigma^2)).

Lengths of edges sharing a node are correlated: collinear neighbours are
anti-correlated (their covariance is -sigma^2 to lowest order), perpendicular
neighbours essentially uncorrelated.  For a two-frequency threshold model the
whole joint structure reduces to three numbers,

    eta    = P[d > lam]                      (marginal),
    beta_X = P[d1 < lam and d2 < lam | X]    (X = collinear or perpendicular),
    rho_X  = (beta_X - (1 - eta)^2) / (eta (1 - eta))   (Pearson coefficient),

with cell probabilities P_ss = beta, P_sl = P_ls = 1 - eta - beta and
P_ll = beta + 2 eta - 1 (s/l = shorter/longer than lam).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import ConfigurationError, DomainError
from .frequencies import FrequencyAssignment, ThresholdDistanceModel
from .lattice import PerturbedLattice, square_edge_ids
from .rng import stream

# Crossover between the power series and the asymptotic expansion of I0.
_I0_CUT = 15.0
_I0_SERIES_TERMS = 80
_I0_ASYM_TERMS = 24


def bessel_i0(x):
    """Modified Bessel function I0.

    Power series sum_k (x^2/4)^k / (k!)^2 below |x| = 15, the large-argument
    expansion e^x/sqrt(2 pi x) sum_k c_k / (8x)^k beyond; relative error is
    below 1e-10 on both branches (all series terms are positive, so there is
    no cancellation).
    """
    x = np.abs(np.asarray(x, dtype=float))
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    out = np.empty_like(x)
    small = x < _I0_CUT
    out[small] = _i0_series(x[small])
    out[~small] = _i0_asymptotic(x[~small]) * np.exp(np.minimum(x[~small], 700.0))
    return float(out[0]) if scalar else out


def bessel_i0e(x):
    """Exponentially scaled I0: exp(-|x|) I0(x).  Overflow-safe."""
    x = np.abs(np.asarray(x, dtype=float))
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    out = np.empty_like(x)
    small = x < _I0_CUT
    out[small] = _i0_series(x[small]) * np.exp(-x[small])
    out[~small] = _i0_asymptotic(x[~small])
    return float(out[0]) if scalar else out


def _i0_series(x):
    q = 0.25 * x * x
    term = np.ones_like(x)
    total = np.ones_like(x)
    for k in range(1, _I0_SERIES_TERMS + 1):
        term = term * q / (k * k)
        total += term
    return total


def _i0_asymptotic(x):
    # e^{-x} I0(x) ~ (2 pi x)^{-1/2} sum_k prod_{j<=k} (2j-1)^2 / (k! (8x)^k)
    term = np.ones_like(x)
    total = np.ones_like(x)
    for k in range(1, _I0_ASYM_TERMS + 1):
        term = term * (2 * k - 1) ** 2 / (8.0 * k * x)
        total += term
    return total / np.sqrt(2.0 * np.pi * x)


def rice_pdf(x, nu: float, sigma: float):
    """Density of |nu * e_x + N(0, 2 sigma^2 I)|: the perturbed edge length.

    Parameterized so that ``rice_pdf(x, 1, sigma)`` is the length density of
    a unit edge whose endpoints are displaced with per-coordinate std sigma.
    """
    if sigma <= 0:
        raise DomainError("sigma must be positive")
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    s2 = 2.0 * sigma * sigma
    arg = x * nu / s2
    # exp(-(x^2+nu^2)/(2 s2)) I0(arg) == exp(-(x-nu)^2/(2 s2)) i0e(arg)
    out = np.where(x < 0, 0.0,
                   (x / s2) * np.exp(-(x - nu) ** 2 / (2.0 * s2)) * bessel_i0e(arg))
    return float(out[0]) if scalar else out


def rice_mean(sigma: float, nu: float = 1.0) -> float:
    """E[d] for the perturbed edge length, by adaptive quadrature."""
    val, _ = integrate.quad(lambda x: x * rice_pdf(x, nu, sigma),
                            0.0, nu + 14.0 * sigma + 1.0, limit=200)
    return val


def eta(sigma: float, lam: float, method: str = "quadrature",
        n_samples: int = 10**6, seed: int = 0) -> float:
    """Probability that a perturbed edge is longer than lam.

    ``quadrature`` integrates the Rice density on (lam, inf); ``montecarlo``
    displaces actual node pairs.  The two agree within Monte Carlo error.
    """
    if sigma <= 0:
        raise DomainError("sigma must be positive")
    if lam <= 0:
        return 1.0
    if method == "quadrature":
        hi = 1.0 + 14.0 * sigma + 1.0
        if lam >= hi:
            return 0.0
        val, _ = integrate.quad(lambda x: rice_pdf(x, 1.0, sigma), lam, hi, limit=200)
        return min(1.0, max(0.0, val))
    if method == "montecarlo":
        g = stream(seed)
        da = g.normal(0.0, sigma, size=(n_samples, 2))
        db = g.normal(0.0, sigma, size=(n_samples, 2))
        d = np.hypot(1.0 + db[:, 0] - da[:, 0], db[:, 1] - da[:, 1])
        return float(np.mean(d > lam))
    raise ConfigurationError(f"unknown eta method {method!r}")


def _motif_distances(sigma: float, n_samples: int, seed: int):
    """Distances (d1, d2, d3) of the four-node motif under Gaussian displacement.

    Nodes 1, 0, 2 are collinear neighbours, node 3 is the orthogonal
    neighbour of node 0; all four are displaced independently.
    """
    g = stream(seed)
    d0, d1_, d2_, d3_ = (g.normal(0.0, sigma, size=(n_samples, 2)) for _ in range(4))
    d1 = np.hypot(1.0 + d1_[:, 0] - d0[:, 0], d1_[:, 1] - d0[:, 1])
    d2 = np.hypot(-1.0 + d2_[:, 0] - d0[:, 0], d2_[:, 1] - d0[:, 1])
    d3 = np.hypot(d3_[:, 0] - d0[:, 0], 1.0 + d3_[:, 1] - d0[:, 1])
    return d1, d2, d3


def beta(sigma: float, lam: float, orientation: str,
         n_samples: int = 10**6, seed: int = 0) -> float:
    """Monte Carlo estimate of P[both adjacent edges shorter than lam].

    ``orientation`` selects the collinear pair (d1, d2) or the perpendicular
    pair (d1, d3) of the four-node motif.  No small-noise approximation.
    """
    if n_samples < 10**4:
        raise ConfigurationError("n_samples must be >= 1e4")
    d1, d2, d3 = _motif_distances(sigma, n_samples, seed)
    if orientation == "collinear":
        return float(np.mean((d1 < lam) & (d2 < lam)))
    if orientation == "perpendicular":
        return float(np.mean((d1 < lam) & (d3 < lam)))
    raise ConfigurationError(f"unknown orientation {orientation!r}")


def motif_cell_probabilities(sigma: float, lam: float, orientation: str,
                             n_samples: int = 10**6, seed: int = 0) -> dict:
    """All four joint cells P_ss, P_sl, P_ls, P_ll from direct counting."""
    d1, d2, d3 = _motif_distances(sigma, n_samples, seed)
    other = d2 if orientation == "collinear" else d3
    s1, s2 = d1 < lam, other < lam
    return {
        "ss": float(np.mean(s1 & s2)),
        "sl": float(np.mean(s1 & ~s2)),
        "ls": float(np.mean(~s1 & s2)),
        "ll": float(np.mean(~s1 & ~s2)),
    }


def pearson(eta_value: float, beta_value: float) -> float:
    """Pearson coefficient of adjacent two-valued frequencies.

    rho = (beta - (1-eta)^2) / (eta (1-eta)).  Requires a non-degenerate
    marginal; values outside [-1, 1] beyond numerical slack indicate an
    infeasible (eta, beta) pair and raise rather than being clipped silently.
    """
    if not 0.0 < eta_value < 1.0:
        raise DomainError("eta in {0, 1}: marginal is degenerate")
    rho = (beta_value - (1.0 - eta_value) ** 2) / (eta_value * (1.0 - eta_value))
    if abs(rho) > 1.0 + 1e-9:
        raise DomainError(f"(eta, beta) = ({eta_value}, {beta_value}) is not a "
                          f"valid joint distribution (rho = {rho})")
    return float(min(1.0, max(-1.0, rho)))


def collinear_pairs(L: int):
    """Index pairs of adjacent collinear edges on the periodic square lattice."""
    h, v = square_edge_ids(L)
    pair_h = (h.ravel(), np.roll(h, -1, axis=1).ravel())
    pair_v = (v.ravel(), np.roll(v, -1, axis=0).ravel())
    return (np.concatenate((pair_h[0], pair_v[0])),
            np.concatenate((pair_h[1], pair_v[1])))


def perpendicular_pairs(L: int):
    """One horizontal/vertical adjacent pair per node (east and north edges)."""
    h, v = square_edge_ids(L)
    return h.ravel(), v.ravel()


def pearson_from_assignment(lattice: PerturbedLattice, assignment, orientation: str) -> float:
    """Empirical Pearson coefficient over all adjacent edge pairs of a lattice.

    Accepts a two-valued FrequencyAssignment (or a raw per-edge label array)
    on a periodic square lattice.  eta is estimated from the marginal and
    beta from the pair counts; the result is invariant under swapping the
    two labels.
    """
    omegas = assignment.omegas if isinstance(assignment, FrequencyAssignment) else np.asarray(assignment)
    values = np.unique(omegas)
    if values.size != 2:
        raise DomainError("assignment must take exactly two values")
    if lattice.spec.topology != "square" or lattice.spec.boundary != "periodic":
        raise ConfigurationError("estimator requires a periodic square lattice")
    model = assignment.model if isinstance(assignment, FrequencyAssignment) else None
    if isinstance(model, ThresholdDistanceModel):
        short_value = model.omega1
    else:
        short_value = values[0]
    L = lattice.spec.side
    if orientation == "collinear":
        i, j = collinear_pairs(L)
    elif orientation == "perpendicular":
        i, j = perpendicular_pairs(L)
    else:
        raise ConfigurationError(f"unknown orientation {orientation!r}")
    short = omegas == short_value
    eta_hat = 1.0 - float(np.mean(short))
    beta_hat = float(np.mean(short[i] & short[j]))
    return pearson(eta_hat, beta_hat)


@dataclass(frozen=True)
class CorrelationStats:
    """Summary of the threshold-model disorder at one (sigma, lam) point."""

    sigma: float
    lam: float
    eta: float
    beta_par: float
    beta_perp: float
    rho_par: float
    rho_perp: float
    n_samples: int


def _estimator_rho(eta_value: float, beta_value: float, n_samples: int) -> float:
    """Pearson estimate combining quadrature eta with a Monte Carlo beta.

    When eta (1 - eta) falls below the Monte Carlo resolution the labels
    carry no measurable variance and the raw ratio is pure noise, so the
    correlation is reported as zero; otherwise sampling jitter may push the
    ratio marginally outside [-1, 1] and it is clamped to the boundary.
    """
    if eta_value * (1.0 - eta_value) * n_samples < 25.0:
        return 0.0
    raw = (beta_value - (1.0 - eta_value) ** 2) / (eta_value * (1.0 - eta_value))
    return float(min(1.0, max(-1.0, raw)))


def correlation_stats(sigma: float, lam: float, n_samples: int = 10**6,
                      seed: int = 0) -> CorrelationStats:
    """eta by quadrature plus motif Monte Carlo betas and Pearson coefficients."""
    eta_value = eta(sigma, lam, method="quadrature")
    beta_par = beta(sigma, lam, "collinear", n_samples, seed)
    beta_perp = beta(sigma, lam, "perpendicular", n_samples, seed)
    return CorrelationStats(
        sigma=sigma, lam=lam, eta=eta_value,
        beta_par=beta_par, beta_perp=beta_perp,
        rho_par=_estimator_rho(eta_value, beta_par, n_samples),
        rho_perp=_estimator_rho(eta_value, beta_perp, n_samples),
        n_samples=n_samples,
    )
