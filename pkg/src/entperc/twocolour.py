"""Two-colour constrained bond percolation on the square lattice.

Half of the edges are colour 1, half colour 2.  In the constrained variant
colours strictly alternate along every row of horizontal edges and every
column of vertical edges, while the phases of different lines are
independent fair bits; adjacent orthogonal edges are therefore uncorrelated,
adjacent collinear edges perfectly anti-correlated.  The reshuffled variant
places the same colour multiset uniformly at random.

Colour-c edges are activated independently with probability phi_c, giving an
order parameter S(phi1, phi2).  Driving (phi1, phi2) along the curve
gamma(t) = (1 - |cos t|, 1 - |cos(ratio * t)|) produces the dynamical order
parameter P(t) = S(gamma(t)) whose parametric plot against
p = (phi1 + phi2)/2 develops coexisting branches in the constrained case.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .engine import (TrajectoryRecord, _largest_component, _parallel_map,
                     check_budget)
from .errors import ConfigurationError
from .lattice import LatticeSpec, PerturbedLattice, generate_lattice
from .rng import stream


@dataclass(frozen=True)
class ColouredLattice:
    """Square lattice plus a two-colouring of its edges."""

    lattice: PerturbedLattice
    colours: np.ndarray  # (E,) uint8 in {1, 2}
    constrained: bool
    seed: int

    @property
    def spec(self) -> LatticeSpec:
        return self.lattice.spec


def _constrained_colours(L: int, rng: np.random.Generator) -> np.ndarray:
    """Alternating colours with an independent fair phase bit per line.

    Canonical edge layout: horizontal block (edge (x,y)-(x+1,y) at index
    y*L + x) followed by the vertical block (edge (x,y)-(x,y+1) at index
    L^2 + y*L + x).
    """
    row_phase = rng.integers(0, 2, size=L)
    col_phase = rng.integers(0, 2, size=L)
    x = np.arange(L)
    y = np.arange(L)
    horiz = 1 + ((x[None, :] + row_phase[:, None]) & 1)
    vert = 1 + ((y[:, None] + col_phase[None, :]) & 1)
    return np.concatenate((horiz.ravel(), vert.ravel())).astype(np.uint8)


def generate_constrained(L: int, seed: int) -> ColouredLattice:
    """Constrained two-colouring of the periodic square lattice (L even)."""
    if L % 2 != 0:
        raise ConfigurationError("L must be even so alternation closes periodically")
    lat = generate_lattice(LatticeSpec("square", L, "periodic"))
    colours = _constrained_colours(L, stream(seed))
    colours.setflags(write=False)
    return ColouredLattice(lat, colours, constrained=True, seed=int(seed))


def generate_reshuffled(coloured: ColouredLattice, seed: int) -> ColouredLattice:
    """Random permutation of the colour multiset; spatial constraints destroyed."""
    perm = stream(seed).permutation(coloured.colours.shape[0])
    colours = coloured.colours[perm]
    colours.setflags(write=False)
    return ColouredLattice(coloured.lattice, colours, constrained=False, seed=int(seed))


def _activation_probs(colours: np.ndarray, phi1: float, phi2: float) -> np.ndarray:
    return np.where(colours == 1, phi1, phi2)


def giant_fraction(coloured: ColouredLattice, phi1: float, phi2: float,
                   n_samples: int, seed: int) -> tuple[float, float]:
    """Monte Carlo mean and standard error of the largest-component fraction."""
    if not (0.0 <= phi1 <= 1.0 and 0.0 <= phi2 <= 1.0):
        raise ConfigurationError("phi values must lie in [0, 1]")
    lat = coloured.lattice
    probs = _activation_probs(coloured.colours, phi1, phi2)
    ea, eb = lat.edges[:, 0], lat.edges[:, 1]
    s = np.empty(n_samples)
    for j in range(n_samples):
        active = stream(seed, j).random(lat.n_edges) < probs
        s[j] = _largest_component(ea, eb, active, lat.n_nodes) / lat.n_nodes
    err = s.std(ddof=1) / np.sqrt(n_samples) if n_samples > 1 else 0.0
    return float(s.mean()), float(err)


@dataclass(frozen=True)
class PhaseDiagram:
    """S(phi1, phi2) sampled on a regular grid."""

    phi1_grid: np.ndarray
    phi2_grid: np.ndarray
    S: np.ndarray        # (len(phi1_grid), len(phi2_grid))
    stderr: np.ndarray
    n_samples: int
    constrained: bool


def sweep_phase_diagram(L: int, grid_step: float, n_samples: int,
                        constrained: bool, seed: int, *, threads: int = 1,
                        budget: Optional[int] = None) -> PhaseDiagram:
    """Estimate S on the (phi1, phi2) grid with the given step.

    Every grid cell and sample uses an independent colouring realization
    (and, in the reshuffled variant, an independent permutation of it).
    """
    n_steps = round(1.0 / grid_step)
    if abs(n_steps * grid_step - 1.0) > 1e-9 or n_steps < 1:
        raise ConfigurationError("grid_step must divide 1")
    grid = np.linspace(0.0, 1.0, n_steps + 1)
    base = generate_constrained(L, seed)
    lat = base.lattice
    check_budget(lat.n_nodes * n_samples * grid.size**2, budget)
    ea, eb = lat.edges[:, 0], lat.edges[:, 1]
    E, N = lat.n_edges, lat.n_nodes
    n2 = grid.size

    def task(cell):
        i1, i2 = divmod(cell, n2)
        s = np.empty(n_samples)
        for j in range(n_samples):
            colours = _constrained_colours(L, stream(seed, i1, i2, j, 0))
            if not constrained:
                colours = colours[stream(seed, i1, i2, j, 1).permutation(E)]
            probs = _activation_probs(colours, grid[i1], grid[i2])
            active = stream(seed, i1, i2, j, 2).random(E) < probs
            s[j] = _largest_component(ea, eb, active, N) / N
        err = s.std(ddof=1) / np.sqrt(n_samples) if n_samples > 1 else 0.0
        return s.mean(), err

    res = _parallel_map(task, n2 * n2, threads)
    S = np.array([r[0] for r in res]).reshape(n2, n2)
    err = np.array([r[1] for r in res]).reshape(n2, n2)
    return PhaseDiagram(phi1_grid=grid, phi2_grid=grid, S=S, stderr=err,
                        n_samples=n_samples, constrained=constrained)


@dataclass(frozen=True)
class GammaPath:
    """The activation-probability curve gamma(t) with p(t) attached."""

    times: np.ndarray
    phi1: np.ndarray
    phi2: np.ndarray
    p: np.ndarray


def gamma_trajectory(omega_ratio: float, times: Sequence[float]) -> GammaPath:
    """phi1 = 1 - |cos t|, phi2 = 1 - |cos(ratio t)|, p = (phi1 + phi2)/2."""
    times = np.asarray(times, dtype=float)
    if np.any(np.diff(times) < 0):
        raise ConfigurationError("times must be sorted")
    phi1 = 1.0 - np.abs(np.cos(times))
    phi2 = 1.0 - np.abs(np.cos(omega_ratio * times))
    return GammaPath(times=times, phi1=phi1, phi2=phi2, p=0.5 * (phi1 + phi2))


def dynamic_two_colour(L: int, omega_ratio: float, times: Sequence[float],
                       n_samples: int, constrained: bool, seed: int, *,
                       threads: int = 1, budget: Optional[int] = None) -> TrajectoryRecord:
    """Activate along gamma(t) and record the trajectory (p_hat, P_hat).

    Each sample j holds one colouring realization fixed for the whole time
    evolution; activation attempts are fresh at every time point.
    """
    path = gamma_trajectory(omega_ratio, times)
    if path.times.size == 0:
        raise ConfigurationError("times must be nonempty")
    base = generate_constrained(L, seed)
    lat = base.lattice
    check_budget(lat.n_nodes * n_samples * path.times.size, budget)
    ea, eb = lat.edges[:, 0], lat.edges[:, 1]
    E, N = lat.n_edges, lat.n_nodes
    n_times = path.times.size

    def task(j):
        colours = _constrained_colours(L, stream(seed, 0, j))
        if not constrained:
            colours = colours[stream(seed, 2, j).permutation(E)]
        p_row = np.empty(n_times)
        s_row = np.empty(n_times)
        for i in range(n_times):
            probs = _activation_probs(colours, path.phi1[i], path.phi2[i])
            active = stream(seed, 1, i, j).random(E) < probs
            p_row[i] = active.mean()
            s_row[i] = _largest_component(ea, eb, active, N) / N
        return p_row, s_row

    res = _parallel_map(task, n_samples, threads)
    p_mat = np.stack([r[0] for r in res])
    s_mat = np.stack([r[1] for r in res])
    stderr = (s_mat.std(axis=0, ddof=1) / np.sqrt(n_samples)
              if n_samples > 1 else np.zeros(n_times))
    return TrajectoryRecord(times=path.times, p_hat=p_mat.mean(axis=0),
                            P_hat=s_mat.mean(axis=0), stderr_P=stderr,
                            n_disorder=n_samples, n_activation=1)
