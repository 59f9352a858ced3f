#!/usr/bin/env python3
"""Minimal end-to-end demo: correlated vs reshuffled threshold disorder.

Runs the two-frequency threshold model on a perturbed 128x128 lattice,
prints the largest branch gap at matched active fraction for the correlated
run and its reshuffled control, and writes both trajectories as CSV.
"""

import sys

import numpy as np

from entperc import LatticeSpec, ThresholdDistanceModel, run_trajectory
from entperc.manifest import write_csv


def branch_gap(rec, dp=0.005):
    best = 0.0
    for i in range(rec.times.size):
        for j in range(i + 1, rec.times.size):
            if abs(rec.p_hat[i] - rec.p_hat[j]) < dp:
                best = max(best, abs(rec.P_hat[i] - rec.P_hat[j]))
    return best


def main() -> int:
    spec = LatticeSpec("square", 128)
    model = ThresholdDistanceModel(omega1=1.0, omega2=2.0, threshold=1.0)
    times = np.linspace(0.0, np.pi, 161)
    for tag, reshuffled in (("correlated", False), ("reshuffled", True)):
        rec = run_trajectory(spec, 0.1, model, times, 4, 40, seed=1,
                             threads=8, coupled=True, reshuffled=reshuffled)
        write_csv(f"hysteresis_{tag}.csv", ("t", "p_hat", "P_hat", "stderr_P"),
                  zip(rec.times, rec.p_hat, rec.P_hat, rec.stderr_P))
        print(f"{tag}: max |dP| at matched p = {branch_gap(rec):.3f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
