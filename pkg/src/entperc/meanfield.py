"""Branching-process mean-field theory of the two-colour model.

The graph is a 4-regular random graph with exactly two edges of each colour
per node.  Writing m_c for the probability that following an active colour-c
edge leads to the giant component, the tree approximation gives

    m1 = 1 - (1 - phi1 m1) (1 - phi2 m2)^2
    m2 = 1 - (1 - phi1 m1)^2 (1 - phi2 m2)
    S  = 1 - (1 - phi1 m1*)^2 (1 - phi2 m2*)^2.

The trivial fixed point (0, 0) destabilizes when the largest Jacobian
eigenvalue

    Lambda = (phi1 + phi2 + sqrt(phi1^2 + phi2^2 + 14 phi1 phi2)) / 2

crosses 1, i.e. on the line 3 phi1 phi2 + phi1 + phi2 = 1 (diagonal onset at
p = 1/3, endpoints (0, 1) and (1, 0)).  Averaging colours over a reshuffled
placement collapses both equations onto the uniform bond-percolation pair
m = 1 - (1 - p m)^3, P = 1 - (1 - p m)^4 with p = (phi1 + phi2)/2.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numba
import numpy as np

from .errors import ConfigurationError, DomainError
from .twocolour import gamma_trajectory

DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 10**6


@numba.njit(cache=True)
def _iterate_pair(phi1, phi2, damping, tol, max_iter):  # pragma: no cover
    m1 = 1.0
    m2 = 1.0
    prev_step = 0.0
    flips = 0
    for it in range(1, max_iter + 1):
        g1 = 1.0 - (1.0 - phi1 * m1) * (1.0 - phi2 * m2) ** 2
        g2 = 1.0 - (1.0 - phi1 * m1) ** 2 * (1.0 - phi2 * m2)
        new1 = (1.0 - damping) * m1 + damping * g1
        new2 = (1.0 - damping) * m2 + damping * g2
        step = new1 - m1
        if step * prev_step < 0.0:
            flips += 1
        prev_step = step
        delta = max(abs(new1 - m1), abs(new2 - m2))
        m1, m2 = new1, new2
        if delta < tol:
            return m1, m2, it, True, flips
    return m1, m2, max_iter, False, flips


@numba.njit(cache=True)
def _iterate_scalar(p, tol, max_iter):  # pragma: no cover
    m = 1.0
    for it in range(1, max_iter + 1):
        new = 1.0 - (1.0 - p * m) ** 3
        delta = abs(new - m)
        m = new
        if delta < tol:
            return m, it, True
    return m, max_iter, False


@dataclass(frozen=True)
class MeanFieldSolution:
    phi1: float
    phi2: float
    m1: float
    m2: float
    S: float
    iterations: int
    converged: bool


def solve_fixed_point(phi1: float, phi2: float, tol: float = DEFAULT_TOL,
                      max_iter: int = DEFAULT_MAX_ITER) -> MeanFieldSolution:
    """Stable fixed point by damped forward iteration from (1, 1).

    The map is monotone, so plain iteration (damping 1) converges from
    above; if oscillation is ever detected the solve restarts with damping
    0.5.  Failure to converge within ``max_iter`` is reported in the
    ``converged`` flag, never hidden (near-critical points converge slowly).
    """
    if not (0.0 <= phi1 <= 1.0 and 0.0 <= phi2 <= 1.0):
        raise DomainError("phi values must lie in [0, 1]")
    if tol <= 0:
        raise ConfigurationError("tol must be positive")
    m1, m2, iters, converged, flips = _iterate_pair(phi1, phi2, 1.0, tol, max_iter)
    if not converged and flips > 8:
        m1, m2, iters, converged, _ = _iterate_pair(phi1, phi2, 0.5, tol, max_iter)
    S = 1.0 - (1.0 - phi1 * m1) ** 2 * (1.0 - phi2 * m2) ** 2
    return MeanFieldSolution(phi1=float(phi1), phi2=float(phi2), m1=m1, m2=m2,
                             S=S, iterations=iters, converged=converged)


def jacobian_eigenvalue(phi1: float, phi2: float) -> float:
    """Largest eigenvalue of the linearized map at the trivial fixed point."""
    return 0.5 * (phi1 + phi2 + np.sqrt(phi1**2 + phi2**2 + 14.0 * phi1 * phi2))


def critical_line_phi2(phi1: float) -> float:
    """The phi2 at which Lambda(phi1, phi2) = 1: phi2 = (1 - phi1)/(1 + 3 phi1)."""
    if not 0.0 <= phi1 <= 1.0:
        raise DomainError("phi1 must lie in [0, 1]")
    return (1.0 - phi1) / (1.0 + 3.0 * phi1)


@dataclass(frozen=True)
class UniformSolution:
    m: float
    P: float
    iterations: int
    converged: bool

    def __iter__(self):  # unpack as (m, P)
        return iter((self.m, self.P))


def uniform_reshuffled(p: float, tol: float = DEFAULT_TOL,
                       max_iter: int = DEFAULT_MAX_ITER) -> UniformSolution:
    """Uniform bond percolation on the 4-regular random graph.

    Scalar fixed point of m = 1 - (1 - p m)^3 iterated from m = 1, and
    P = 1 - (1 - p m)^4.  Subcritical for p <= 1/3.
    """
    if not 0.0 <= p <= 1.0:
        raise DomainError("p must lie in [0, 1]")
    if tol <= 0:
        raise ConfigurationError("tol must be positive")
    m, iters, converged = _iterate_scalar(p, tol, max_iter)
    return UniformSolution(m=m, P=1.0 - (1.0 - p * m) ** 4,
                           iterations=iters, converged=converged)


@dataclass(frozen=True)
class MeanFieldDynamics:
    times: np.ndarray
    phi1: np.ndarray
    phi2: np.ndarray
    p: np.ndarray
    P: np.ndarray
    converged: bool


def meanfield_dynamic(omega_ratio: float, times: Sequence[float],
                      tol: float = DEFAULT_TOL) -> MeanFieldDynamics:
    """P(t) = S(gamma(t)) along the two-frequency activation curve."""
    path = gamma_trajectory(omega_ratio, times)
    P = np.empty(path.times.size)
    ok = True
    for i in range(path.times.size):
        sol = solve_fixed_point(path.phi1[i], path.phi2[i], tol)
        P[i] = sol.S
        ok = ok and sol.converged
    return MeanFieldDynamics(times=path.times, phi1=path.phi1, phi2=path.phi2,
                             p=path.p, P=P, converged=ok)
