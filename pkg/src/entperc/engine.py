"""Monte Carlo percolation engine: activation sampling, union-find
connectivity and trajectory aggregation.

The hot path is a JIT-compiled union-find with path halving and union by
size over 32-bit parent indices; one pass over the active edges of a
million-node lattice takes milliseconds.  All sampling draws from named
streams (see ``rng``), results are accumulated in task-index order, and the
output is therefore byte-identical for any thread count.

Stream layout for ``run_trajectory`` with master seed ``s``:

    lattice of disorder realization d     stream (s, 0, d)
    frequency assignment of realization d stream (s, 1, d)
    reshuffle of realization d            stream (s, 2, d)
    activation at time index i, sample j  stream (s, 3, d, i, j)
    coupled-mode uniforms for sample j    stream (s, 4, d, j)

``static_percolation_curve`` uses (s, 5, pi, j) for grid point pi, sample j.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numba
import numpy as np

from .dynamics import conversion_probability
from .errors import BudgetError, ConfigurationError
from .frequencies import FrequencyAssignment, FrequencyModel, assign, reshuffle
from .lattice import LatticeSpec, PerturbedLattice, generate_lattice, perturb
from .rng import stream, substream_seed

#: default ceiling on N * n_disorder * n_activation * n_times
DEFAULT_BUDGET = 2 * 10**10


@numba.njit(cache=True, nogil=True)
def _largest_component(edges_a, edges_b, active, n_nodes):  # pragma: no cover
    parent = np.arange(n_nodes, dtype=np.int32)
    size = np.ones(n_nodes, dtype=np.int32)
    best = np.int64(1)
    for k in range(edges_a.shape[0]):
        if not active[k]:
            continue
        ra = edges_a[k]
        while parent[ra] != ra:
            parent[ra] = parent[parent[ra]]
            ra = parent[ra]
        rb = edges_b[k]
        while parent[rb] != rb:
            parent[rb] = parent[parent[rb]]
            rb = parent[rb]
        if ra == rb:
            continue
        if size[ra] < size[rb]:
            ra, rb = rb, ra
        parent[rb] = ra
        size[ra] += size[rb]
        if size[ra] > best:
            best = np.int64(size[ra])
    return best


@numba.njit(cache=True, nogil=True)
def _component_labels(edges_a, edges_b, active, n_nodes):  # pragma: no cover
    parent = np.arange(n_nodes, dtype=np.int32)
    size = np.ones(n_nodes, dtype=np.int32)
    for k in range(edges_a.shape[0]):
        if not active[k]:
            continue
        ra = edges_a[k]
        while parent[ra] != ra:
            parent[ra] = parent[parent[ra]]
            ra = parent[ra]
        rb = edges_b[k]
        while parent[rb] != rb:
            parent[rb] = parent[parent[rb]]
            rb = parent[rb]
        if ra == rb:
            continue
        if size[ra] < size[rb]:
            ra, rb = rb, ra
        parent[rb] = ra
        size[ra] += size[rb]
    labels = np.empty(n_nodes, dtype=np.int32)
    for i in range(n_nodes):
        r = i
        while parent[r] != r:
            r = parent[r]
        labels[i] = r
    return labels


@dataclass(frozen=True)
class ActivationSample:
    """Outcome of one singlet-conversion attempt per edge at a fixed time."""

    active: np.ndarray  # (E,) bool
    time: float
    seed: int


@dataclass(frozen=True)
class TrajectoryRecord:
    """Disorder- and activation-averaged time series of (p_hat, P_hat)."""

    times: np.ndarray
    p_hat: np.ndarray
    P_hat: np.ndarray
    stderr_P: np.ndarray
    n_disorder: int
    n_activation: int


def sample_activation(lattice: PerturbedLattice, assignment: FrequencyAssignment,
                      t: float, seed: int) -> ActivationSample:
    """Activate each edge independently with probability 1 - |cos(omega_e t)|."""
    if assignment.n_edges != lattice.n_edges:
        raise ConfigurationError("assignment does not match lattice")
    phi = conversion_probability(assignment.omegas, t)
    active = stream(seed).random(lattice.n_edges) < phi
    return ActivationSample(active=active, time=float(t), seed=int(seed))


def largest_component_fraction(lattice: PerturbedLattice, sample: ActivationSample) -> float:
    """Size of the largest connected component over active edges, divided by N."""
    if sample.active.shape[0] != lattice.n_edges:
        raise ConfigurationError("sample does not match lattice")
    best = _largest_component(lattice.edges[:, 0], lattice.edges[:, 1],
                              sample.active, lattice.n_nodes)
    return float(best) / lattice.n_nodes


def component_sizes(lattice: PerturbedLattice, sample: ActivationSample) -> np.ndarray:
    """Sizes of all connected components (unsorted)."""
    labels = _component_labels(lattice.edges[:, 0], lattice.edges[:, 1],
                               sample.active, lattice.n_nodes)
    counts = np.bincount(labels, minlength=lattice.n_nodes)
    return counts[counts > 0]


def check_budget(cost: int, budget: Optional[int]) -> None:
    limit = DEFAULT_BUDGET if budget is None else int(budget)
    if cost > limit:
        raise BudgetError(f"run needs {cost} node-evaluations, budget is {limit}")


def _parallel_map(fn, n_tasks: int, threads: int) -> list:
    """Apply fn(0..n_tasks-1); results ordered by task index for determinism."""
    if threads <= 1 or n_tasks <= 1:
        return [fn(i) for i in range(n_tasks)]
    results = [None] * n_tasks
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = {pool.submit(fn, i): i for i in range(n_tasks)}
        for fut in futures:
            results[futures[fut]] = fut.result()
    return results


def run_trajectory(lattice_spec: LatticeSpec, sigma: float, model: FrequencyModel,
                   times: Sequence[float], n_disorder: int, n_activation: int,
                   seed: int, *, threads: int = 1, coupled: bool = False,
                   reshuffled: bool = False, budget: Optional[int] = None) -> TrajectoryRecord:
    """Average p_hat(t) and P_hat(t) over disorder and activation realizations.

    ``reshuffled`` applies the reshuffling control to every frequency
    assignment after it is drawn.  ``coupled`` reuses one uniform per edge
    per activation realization across the whole time grid (variance-reduced
    parametric curves); the default draws fresh randomness at every time.
    """
    times = np.asarray(times, dtype=float)
    if times.size == 0 or np.any(np.diff(times) < 0):
        raise ConfigurationError("times must be nonempty and sorted")
    if n_disorder < 1 or n_activation < 1:
        raise ConfigurationError("realization counts must be >= 1")
    n_times = times.size
    n_nodes = lattice_spec.n_nodes
    check_budget(n_nodes * n_disorder * n_activation * n_times, budget)

    base = generate_lattice(lattice_spec)
    p_acc = np.empty((n_disorder, n_times))
    s_mean = np.empty((n_disorder, n_times))
    s_m2 = np.empty((n_disorder, n_times))

    for d in range(n_disorder):
        lat = perturb(base, sigma, substream_seed(seed, 0, d))
        asg = assign(lat, model, substream_seed(seed, 1, d))
        if reshuffled:
            asg = reshuffle(asg, substream_seed(seed, 2, d))
        ea, eb = lat.edges[:, 0], lat.edges[:, 1]
        omegas = asg.omegas
        E = lat.n_edges

        if coupled:
            uniforms = [stream(seed, 4, d, j).random(E) for j in range(n_activation)]

            def task(i, _uniforms=uniforms, _omegas=omegas, _ea=ea, _eb=eb):
                phi = conversion_probability(_omegas, times[i])
                p_sum = 0.0
                s = np.empty(n_activation)
                for j in range(n_activation):
                    active = _uniforms[j] < phi
                    p_sum += active.mean()
                    s[j] = _largest_component(_ea, _eb, active, n_nodes) / n_nodes
                return p_sum / n_activation, s.mean(), s.var(ddof=0) * n_activation
        else:
            def task(i, _omegas=omegas, _ea=ea, _eb=eb, _d=d):
                phi = conversion_probability(_omegas, times[i])
                p_sum = 0.0
                s = np.empty(n_activation)
                for j in range(n_activation):
                    active = stream(seed, 3, _d, i, j).random(E) < phi
                    p_sum += active.mean()
                    s[j] = _largest_component(_ea, _eb, active, n_nodes) / n_nodes
                return p_sum / n_activation, s.mean(), s.var(ddof=0) * n_activation

        for i, (p_i, m_i, m2_i) in enumerate(_parallel_map(task, n_times, threads)):
            p_acc[d, i] = p_i
            s_mean[d, i] = m_i
            s_m2[d, i] = m2_i

    n_total = n_disorder * n_activation
    P_hat = s_mean.mean(axis=0)
    # pooled variance over all (d, j) samples, then standard error of the mean
    total_m2 = s_m2.sum(axis=0) + (n_activation * (s_mean - P_hat) ** 2).sum(axis=0)
    if n_total > 1:
        stderr = np.sqrt(total_m2 / (n_total - 1)) / np.sqrt(n_total)
    else:
        stderr = np.zeros(n_times)
    return TrajectoryRecord(times=times, p_hat=p_acc.mean(axis=0), P_hat=P_hat,
                            stderr_P=stderr, n_disorder=n_disorder,
                            n_activation=n_activation)


def parametric_Pp(record: TrajectoryRecord) -> np.ndarray:
    """(p_hat, P_hat) pairs in time order; multi-valued branches stay visible."""
    if record.times.size == 0:
        raise ConfigurationError("record is empty")
    return np.column_stack((record.p_hat, record.P_hat))


@dataclass(frozen=True)
class StaticCurve:
    """Reference order parameter of uniform bond percolation, P0(p)."""

    p: np.ndarray
    P0: np.ndarray
    stderr: np.ndarray
    n_samples: int


def static_percolation_curve(lattice_spec: LatticeSpec, p_grid: Sequence[float],
                             n_samples: int, seed: int, *, threads: int = 1,
                             budget: Optional[int] = None) -> StaticCurve:
    """Largest-component fraction under uniform activation probability p."""
    p_grid = np.asarray(p_grid, dtype=float)
    if np.any((p_grid < 0) | (p_grid > 1)):
        raise ConfigurationError("p values must lie in [0, 1]")
    lat = generate_lattice(lattice_spec)
    n_nodes = lat.n_nodes
    check_budget(n_nodes * n_samples * p_grid.size, budget)
    ea, eb = lat.edges[:, 0], lat.edges[:, 1]
    E = lat.n_edges

    def task(pi):
        s = np.empty(n_samples)
        for j in range(n_samples):
            active = stream(seed, 5, pi, j).random(E) < p_grid[pi]
            s[j] = _largest_component(ea, eb, active, n_nodes) / n_nodes
        return s.mean(), s.std(ddof=1) / np.sqrt(n_samples) if n_samples > 1 else 0.0

    res = _parallel_map(task, p_grid.size, threads)
    return StaticCurve(p=p_grid, P0=np.array([r[0] for r in res]),
                       stderr=np.array([r[1] for r in res]), n_samples=n_samples)
