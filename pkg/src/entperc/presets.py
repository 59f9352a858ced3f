"""Named experiment presets.

Each preset expands to a list of runs (flat config dictionaries) that the
CLI executes into ``<out>/<preset>/<run name>/``.  Desk scale finishes in
minutes on a laptop; ``full=True`` restores production scale (side 1000,
10 x 100 realizations, 10^6-sample correlation cells) at a matching budget.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError
from .rng import substream_seed

PRESET_NAMES = ("fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9")

_FULL_BUDGET = 10**13


@dataclass(frozen=True)
class PresetRun:
    name: str
    subcommand: str
    params: dict


def _times(stop: float, num: int) -> list:
    return [float(t) for t in np.linspace(0.0, stop, num)]


def _static_reference_times(n_p: int) -> list:
    # uniform frequencies visit activation probability p at t = arccos(1 - p),
    # so this time grid sweeps the static bond-percolation curve exactly
    p = np.linspace(0.0, 1.0, n_p)
    return [float(t) for t in np.arccos(1.0 - p)]


def preset(name: str, full: bool = False, master_seed: int = 0) -> tuple[str, list[PresetRun]]:
    """Resolve a preset to (description, runs)."""
    if name not in PRESET_NAMES:
        raise ConfigurationError(f"unknown preset {name!r}; known: {', '.join(PRESET_NAMES)}")
    L = 1000 if full else 256
    n_dis = 10 if full else 4
    n_act = 100 if full else 20
    nt_long = 601 if full else 151
    nt_period = 481 if full else 121
    n_samples = 100 if full else 20
    budget = _FULL_BUDGET if full else None
    runs: list[PresetRun] = []

    def seed(i: int) -> int:
        return substream_seed(master_seed, i)

    common = {"threads": None, "budget": budget}

    if name == "fig2":
        desc = ("square lattice, i.i.d. Gaussian frequencies (mean 1, std 0 to 0.3): "
                "p(t), P(t) trajectories plus a uniform-percolation reference sweep")
        for i, sw in enumerate((0.0, 0.1, 0.2, 0.3)):
            runs.append(PresetRun(f"gauss_sw{sw:g}", "simulate", {
                "topology": "square", "L": L, "sigma": 0.0,
                "model": "gaussian_iid", "omega": 1.0, "sigma_omega": sw,
                "times": _times(30.0, nt_long),
                "n_disorder": n_dis, "n_activation": n_act,
                "master_seed": seed(i), **common}))
        runs.append(PresetRun("static_reference", "simulate", {
            "topology": "square", "L": L, "sigma": 0.0,
            "model": "uniform", "omega": 1.0,
            "times": _static_reference_times(51),
            "n_disorder": 1, "n_activation": 4 * n_act,
            "master_seed": seed(9), **common}))
    elif name == "fig3":
        desc = ("perturbed square lattice, exponentially decaying frequencies "
                "(omega 2, decay length 2): correlated-disorder trajectories")
        for i, sg in enumerate((0.1, 0.2)):
            runs.append(PresetRun(f"exp_sigma{sg:g}", "simulate", {
                "topology": "square", "L": L, "sigma": sg,
                "model": "exponential_distance", "omega": 2.0, "lam": 2.0,
                "times": _times(30.0, nt_long),
                "n_disorder": n_dis, "n_activation": n_act,
                "master_seed": seed(i), **common}))
    elif name == "fig4":
        desc = ("perturbed square lattice, two-frequency threshold model at "
                "unit threshold: correlated vs reshuffled trajectories")
        cases = ((0.1, 2.0), (0.2, 2.5))
        i = 0
        for sg, ratio in cases:
            stop = 2.0 * np.pi
            for reshuffled in (False, True):
                tag = "reshuffled" if reshuffled else "correlated"
                runs.append(PresetRun(f"threshold_s{sg:g}_r{ratio:g}_{tag}", "simulate", {
                    "topology": "square", "L": L, "sigma": sg,
                    "model": "threshold_distance", "omega1": 1.0, "omega2": ratio,
                    "lam": 1.0, "reshuffle": reshuffled,
                    "times": _times(stop, nt_period),
                    "n_disorder": n_dis, "n_activation": n_act,
                    "master_seed": seed(i), **common}))
                i += 1
    elif name == "fig5":
        desc = ("two-colour bond percolation: constrained and reshuffled "
                "phase diagrams plus dynamical trajectories along gamma(t)")
        for i, constrained in enumerate((True, False)):
            tag = "constrained" if constrained else "reshuffled"
            runs.append(PresetRun(f"sweep_{tag}", "two-colour", {
                "mode": "sweep", "L": L, "grid_step": 0.02,
                "n_samples": n_samples, "constrained": constrained,
                "master_seed": seed(i), **common}))
        i = 2
        for ratio in (2.0, 2.5):
            for constrained in (True, False):
                tag = "constrained" if constrained else "reshuffled"
                runs.append(PresetRun(f"dynamic_r{ratio:g}_{tag}", "two-colour", {
                    "mode": "dynamic", "L": L, "omega_tilde": ratio,
                    "times": _times(2.0 * np.pi, nt_period),
                    "n_samples": n_samples, "constrained": constrained,
                    "master_seed": seed(i), **common}))
                i += 1
    elif name == "fig6":
        desc = ("threshold-model disorder statistics on the (sigma, lambda) "
                "grid: eta, joint shorts and Pearson coefficients")
        runs.append(PresetRun("correlations_grid", "correlations", {
            "sigma": [round(s, 2) for s in np.arange(0.05, 0.51, 0.05)],
            "lam": [round(l, 2) for l in np.arange(0.5, 1.51, 0.1)],
            "n_samples": 10**6 if full else 10**5,
            "master_seed": seed(0), **common}))
    elif name == "fig7":
        desc = "closed-form p(t) for Gaussian frequency mixtures"
        for i, sw in enumerate((0.1, 0.2, 0.3)):
            runs.append(PresetRun(f"analytic_gauss_sw{sw:g}", "analytic-p", {
                "kind": "gaussian", "omega": 1.0, "sigma_omega": sw,
                "times": _times(30.0, 601), "master_seed": seed(i), **common}))
    elif name == "fig8":
        desc = "closed-form p(t) for two-frequency mixtures, periodic and quasi-periodic"
        cases = ((0.25, 2.0), (0.5, 2.0), (0.5, 2.5), (0.5, float(np.pi)))
        for i, (eta_v, ratio) in enumerate(cases):
            runs.append(PresetRun(f"analytic_bernoulli_eta{eta_v:g}_r{ratio:g}", "analytic-p", {
                "kind": "bernoulli", "eta": eta_v, "omega1": 1.0, "omega2": ratio,
                "times": _times(4.0 * np.pi, 601), "master_seed": seed(i), **common}))
    else:  # fig9
        desc = ("mean-field theory of the two-colour model: S grid, critical "
                "line and dynamical trajectories")
        # the 0.02 grid contains exactly-critical cells (e.g. 0.2, 0.5) where
        # convergence is algebraic; they need ~2e6 iterations at tol 1e-12
        runs.append(PresetRun("meanfield_grid", "meanfield", {
            "mode": "grid", "grid_step": 0.02, "max_iter": 4 * 10**6,
            "master_seed": seed(0), **common}))
        runs.append(PresetRun("critical_line", "meanfield", {
            "mode": "critical-line", "n_points": 201, "master_seed": seed(1), **common}))
        for i, ratio in enumerate((2.0, 2.5)):
            runs.append(PresetRun(f"meanfield_dynamic_r{ratio:g}", "meanfield", {
                "mode": "dynamic", "omega_tilde": ratio,
                "times": _times(2.0 * np.pi, 241), "master_seed": seed(2 + i), **common}))

    return desc, runs
