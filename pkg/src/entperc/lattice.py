"""Square and triangular lattice substrates with Gaussian position disorder.

Nodes live on the unit grid (triangular: the 60-degree sheared embedding
``(i + j/2, j*sqrt(3)/2)``) and may be displaced by i.i.d. Gaussian noise.
Edge lengths are always measured against the stored unperturbed neighbour
offset, which is the minimum-image convention under periodic boundaries:
a wrap-around edge never picks up a spurious length of order L.

Canonical edge ordering (relied upon by the two-colour model and the
correlation estimators): edges are grouped by orientation block, and within
a block ordered by source-node index ``y*L + x``.  For the square lattice
block 0 holds the +x edges and block 1 the +y edges; the triangular lattice
appends a third block for the (+1, -1) diagonal.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigurationError
from .rng import stream

SQRT3_2 = np.sqrt(3.0) / 2.0

_STEPS = {
    "square": ((1, 0), (0, 1)),
    "triangular": ((1, 0), (0, 1), (1, -1)),
}


@dataclass(frozen=True)
class LatticeSpec:
    """Topology, linear size (nodes per side) and boundary condition."""

    topology: str
    side: int
    boundary: str = "periodic"

    def __post_init__(self) -> None:
        if self.topology not in _STEPS:
            raise ConfigurationError(f"unknown topology {self.topology!r}")
        if self.boundary not in ("periodic", "open"):
            raise ConfigurationError(f"unknown boundary {self.boundary!r}")
        if int(self.side) < 2:
            raise ConfigurationError("side must be an integer >= 2")

    @property
    def n_nodes(self) -> int:
        return self.side * self.side


@dataclass(frozen=True)
class PerturbedLattice:
    """A lattice with (possibly displaced) node positions.

    ``edges`` are index pairs with ``a < b``; ``offsets`` holds the
    unperturbed Cartesian offset vector of each edge, and ``lengths`` the
    Euclidean length after displacement.  The arrays are read-only.
    """

    spec: LatticeSpec
    positions: np.ndarray  # (N, 2) float64
    edges: np.ndarray      # (E, 2) int32, a < b
    offsets: np.ndarray    # (E, 2) float64, unperturbed neighbour offsets
    lengths: np.ndarray    # (E,) float64
    sigma: float
    seed: int

    @property
    def n_nodes(self) -> int:
        return self.positions.shape[0]

    @property
    def n_edges(self) -> int:
        return self.edges.shape[0]


def _freeze(*arrays: np.ndarray) -> None:
    for a in arrays:
        a.setflags(write=False)


def _embed(spec: LatticeSpec, i: np.ndarray, j: np.ndarray) -> np.ndarray:
    if spec.topology == "square":
        return np.column_stack((i.astype(float), j.astype(float)))
    return np.column_stack((i + 0.5 * j, SQRT3_2 * j))


def generate_lattice(spec: LatticeSpec) -> PerturbedLattice:
    """Build the unperturbed lattice: grid positions, edge list, unit lengths."""
    L = spec.side
    N = L * L
    idx = np.arange(N, dtype=np.int64)
    x = idx % L
    y = idx // L
    positions = _embed(spec, x, y)

    a_blocks, b_blocks, off_blocks = [], [], []
    for di, dj in _STEPS[spec.topology]:
        if spec.boundary == "periodic":
            keep = np.ones(N, dtype=bool)
            nx, ny = (x + di) % L, (y + dj) % L
        else:
            keep = (x + di >= 0) & (x + di < L) & (y + dj >= 0) & (y + dj < L)
            nx, ny = x + di, y + dj
        a_blocks.append(idx[keep])
        b_blocks.append((ny * L + nx)[keep])
        step = _embed(spec, np.array([di]), np.array([dj]))[0]
        off_blocks.append(np.tile(step, (int(keep.sum()), 1)))

    a = np.concatenate(a_blocks)
    b = np.concatenate(b_blocks)
    offsets = np.concatenate(off_blocks)

    swap = a > b
    a[swap], b[swap] = b[swap], a[swap]
    offsets[swap] *= -1.0

    edges = np.column_stack((a, b)).astype(np.int32)
    lengths = np.ones(edges.shape[0], dtype=float)  # exact unit lengths at sigma=0
    _freeze(positions, edges, offsets, lengths)
    return PerturbedLattice(spec, positions, edges, offsets, lengths, 0.0, 0)


def perturb(lattice: PerturbedLattice, sigma: float, seed: int) -> PerturbedLattice:
    """Displace every node by i.i.d. N(0, sigma^2) in x and y.

    The input must be unperturbed.  Edge lengths are recomputed as
    ``|offset + delta_b - delta_a|`` so wrap-around edges use the
    minimum-image neighbour offset.  Deterministic given ``seed``.
    """
    if sigma < 0:
        raise ConfigurationError("sigma must be nonnegative")
    if lattice.sigma != 0.0:
        raise ConfigurationError("perturb expects an unperturbed lattice")
    if sigma == 0.0:
        return replace(lattice, seed=int(seed))

    disp = stream(seed).normal(0.0, sigma, size=lattice.positions.shape)
    positions = lattice.positions + disp
    vec = lattice.offsets + disp[lattice.edges[:, 1]] - disp[lattice.edges[:, 0]]
    lengths = np.hypot(vec[:, 0], vec[:, 1])
    _freeze(positions, lengths)
    return replace(lattice, positions=positions, lengths=lengths,
                   sigma=float(sigma), seed=int(seed))


def edge_length_histogram(lattice: PerturbedLattice, bins: int):
    """Histogram of edge lengths; counts sum to the edge count."""
    if bins < 1:
        raise ConfigurationError("bins must be >= 1")
    return np.histogram(lattice.lengths, bins=bins)


def square_edge_ids(L: int):
    """Edge-id grids for the canonical periodic square layout.

    Returns ``(horizontal, vertical)`` arrays of shape (L, L) where
    ``horizontal[y, x]`` is the id of edge (x,y)-(x+1,y) and
    ``vertical[y, x]`` the id of (x,y)-(x,y+1).
    """
    ids = np.arange(L * L, dtype=np.int64).reshape(L, L)
    return ids, L * L + ids


def dump_csv(lattice: PerturbedLattice, nodes_path, edges_path) -> None:
    """Write `node,x,y` and `edge,a,b,length` CSV files."""
    with open(nodes_path, "w", encoding="ascii") as fh:
        fh.write("node,x,y\n")
        for n, (px, py) in enumerate(lattice.positions):
            fh.write(f"{n},{px:.17g},{py:.17g}\n")
    with open(edges_path, "w", encoding="ascii") as fh:
        fh.write("edge,a,b,length\n")
        for e in range(lattice.n_edges):
            a, b = lattice.edges[e]
            fh.write(f"{e},{a},{b},{lattice.lengths[e]:.17g}\n")
