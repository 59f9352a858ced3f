"""Edge-frequency disorder models and the reshuffling control.

A model maps a lattice to one positive angular frequency per edge.  The
distance-based kinds read the (possibly perturbed) edge lengths; the i.i.d.
kinds ignore geometry.  ``reshuffle`` randomly permutes an assignment over
the edges, preserving the frequency multiset exactly, which destroys spatial
correlations while keeping the marginal distribution identical.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, ClassVar, Optional, Union

import numpy as np

from .errors import ConfigurationError, DomainError
from .lattice import PerturbedLattice
from .rng import stream


@dataclass(frozen=True)
class UniformModel:
    """All edges share the frequency ``omega``."""

    kind: ClassVar[str] = "uniform"
    omega: float = 1.0

    def __post_init__(self):
        if self.omega <= 0:
            raise ConfigurationError("omega must be positive")


@dataclass(frozen=True)
class GaussianIIDModel:
    """i.i.d. N(omega, sigma_omega^2) draws per edge.

    Draws are kept untruncated: only |cos(omega*t)| enters the dynamics, so
    the sign of a frequency is irrelevant and truncation would distort the
    characteristic function used by the analytic curves.
    """

    kind: ClassVar[str] = "gaussian_iid"
    omega: float = 1.0
    sigma_omega: float = 0.1

    def __post_init__(self):
        if self.sigma_omega < 0:
            raise ConfigurationError("sigma_omega must be nonnegative")


@dataclass(frozen=True)
class BernoulliIIDModel:
    """i.i.d. two-point draws: omega1 with probability eta, else omega2."""

    kind: ClassVar[str] = "bernoulli_iid"
    eta: float = 0.5
    omega1: float = 1.0
    omega2: float = 2.0

    def __post_init__(self):
        if not 0.0 <= self.eta <= 1.0:
            raise ConfigurationError("eta must lie in [0, 1]")
        if self.omega1 <= 0 or self.omega2 <= 0:
            raise ConfigurationError("frequencies must be positive")


@dataclass(frozen=True)
class ExponentialDistanceModel:
    """omega(d) = omega * exp(-d / decay_length)."""

    kind: ClassVar[str] = "exponential_distance"
    omega: float = 2.0
    decay_length: float = 2.0

    def __post_init__(self):
        if self.omega <= 0:
            raise ConfigurationError("omega must be positive")
        if self.decay_length <= 0:
            raise ConfigurationError("decay_length must be positive")


@dataclass(frozen=True)
class ThresholdDistanceModel:
    """omega1 for edges shorter than ``threshold``, omega2 otherwise.

    The tie d == threshold goes to omega2 (a measure-zero event, fixed for
    determinism).  omega1 != omega2 is required: equal values make the
    disorder trivial.
    """

    kind: ClassVar[str] = "threshold_distance"
    omega1: float = 1.0
    omega2: float = 2.0
    threshold: float = 1.0

    def __post_init__(self):
        if self.omega1 <= 0 or self.omega2 <= 0:
            raise ConfigurationError("frequencies must be positive")
        if self.omega1 == self.omega2:
            raise ConfigurationError("omega1 and omega2 must differ")
        if self.threshold <= 0:
            raise ConfigurationError("threshold must be positive")


@dataclass(frozen=True)
class CustomNodeWeightModel:
    """Extension point: omega_e = f(g_a, g_b) for per-node weights g.

    ``weight_fn`` must be symmetric in its two array arguments and return
    strictly positive frequencies.
    """

    kind: ClassVar[str] = "custom_node_weight"
    weight_fn: Callable[[np.ndarray, np.ndarray], np.ndarray] = None
    node_weights: np.ndarray = None

    def __post_init__(self):
        if self.weight_fn is None or self.node_weights is None:
            raise ConfigurationError("weight_fn and node_weights are required")


FrequencyModel = Union[
    UniformModel,
    GaussianIIDModel,
    BernoulliIIDModel,
    ExponentialDistanceModel,
    ThresholdDistanceModel,
    CustomNodeWeightModel,
]


@dataclass(frozen=True)
class FrequencyAssignment:
    """One angular frequency per edge, plus the model and seed that made it."""

    omegas: np.ndarray
    model: Optional[FrequencyModel]
    seed: int

    @property
    def n_edges(self) -> int:
        return self.omegas.shape[0]


def assign(lattice: PerturbedLattice, model: FrequencyModel, seed: int) -> FrequencyAssignment:
    """Apply a frequency model to a lattice; pure function of (lattice, model, seed)."""
    E = lattice.n_edges
    if isinstance(model, UniformModel):
        omegas = np.full(E, model.omega)
    elif isinstance(model, GaussianIIDModel):
        omegas = stream(seed).normal(model.omega, model.sigma_omega, size=E)
    elif isinstance(model, BernoulliIIDModel):
        pick1 = stream(seed).random(E) < model.eta
        omegas = np.where(pick1, model.omega1, model.omega2)
    elif isinstance(model, ExponentialDistanceModel):
        omegas = model.omega * np.exp(-lattice.lengths / model.decay_length)
    elif isinstance(model, ThresholdDistanceModel):
        omegas = np.where(lattice.lengths < model.threshold, model.omega1, model.omega2)
    elif isinstance(model, CustomNodeWeightModel):
        g = np.asarray(model.node_weights, dtype=float)
        if g.shape[0] != lattice.n_nodes:
            raise ConfigurationError("node_weights length must equal node count")
        omegas = np.asarray(model.weight_fn(g[lattice.edges[:, 0]], g[lattice.edges[:, 1]]),
                            dtype=float)
        if omegas.shape != (E,):
            raise ConfigurationError("weight_fn must return one value per edge")
        if np.any(omegas <= 0):
            raise DomainError("weight_fn produced non-positive frequencies")
    else:
        raise ConfigurationError(f"unknown frequency model {model!r}")
    omegas = np.ascontiguousarray(omegas, dtype=float)
    omegas.setflags(write=False)
    return FrequencyAssignment(omegas, model, int(seed))


def reshuffle(assignment: FrequencyAssignment, seed: int) -> FrequencyAssignment:
    """Uniformly permute frequencies over the edges (multiset preserved)."""
    perm = stream(seed).permutation(assignment.n_edges)
    omegas = assignment.omegas[perm]
    omegas.setflags(write=False)
    return replace(assignment, omegas=omegas, seed=int(seed))


def frequency_histogram(assignment: FrequencyAssignment, bins: int = 50):
    """Histogram of assigned frequencies; counts sum to the edge count."""
    if bins < 1:
        raise ConfigurationError("bins must be >= 1")
    return np.histogram(assignment.omegas, bins=bins)
