"""Acceptance suite: one test per release criterion, desk scale.

Each test prints a `[acceptance] criterion N ...: PASS` line (visible with
pytest -s); a failing criterion fails its test.  All runs use fixed seeds
and finish on a laptop-class 8-core machine; the whole module takes roughly
twenty minutes.
"""

import hashlib
import json

import numpy as np
import pytest
from scipy import optimize

from entperc import (BernoulliIIDModel, GaussianIIDModel, LatticeSpec,
                     P_INFINITY, ThresholdDistanceModel, component_sizes,
                     jacobian_eigenvalue, critical_line_phi2, p_bernoulli,
                     p_gaussian, pearson, pearson_from_assignment,
                     run_trajectory, solve_fixed_point,
                     static_percolation_curve, uniform_reshuffled)
from entperc import ActivationSample, assign, beta, eta, generate_lattice, perturb
from entperc.cli import run_preset
from entperc.engine import _largest_component
from entperc.rng import stream
from entperc.twocolour import (_activation_probs, generate_constrained,
                               sweep_phase_diagram)

THREADS = 8


def report(number, name):
    print(f"\n[acceptance] criterion {number} ({name}): PASS")


def test_criterion_01_asymptotic_active_fraction():
    rec = run_trajectory(LatticeSpec("square", 300), 0.0,
                         GaussianIIDModel(1.0, 0.3), [20.0], 4, 20,
                         seed=1001, threads=THREADS)
    assert abs(rec.p_hat[0] - P_INFINITY) < 0.01
    report(1, "asymptotic active fraction 1 - 2/pi")


def test_criterion_02_analytic_montecarlo_agreement():
    spec = LatticeSpec("square", 300)
    times = np.linspace(0.0, 2 * np.pi, 100)
    cases = [
        (BernoulliIIDModel(0.5, 1.0, 2.0), p_bernoulli(times, 0.5, 1.0, 2.0)),
        (BernoulliIIDModel(0.5, 1.0, 2.5), p_bernoulli(times, 0.5, 1.0, 2.5)),
        (GaussianIIDModel(1.0, 0.2), p_gaussian(times, 1.0, 0.2, k_max=200)),
    ]
    for k, (model, closed_form) in enumerate(cases):
        rec = run_trajectory(spec, 0.0, model, times, 4, 20,
                             seed=2001 + k, threads=THREADS)
        assert np.max(np.abs(rec.p_hat - closed_form)) < 0.01
    report(2, "sampled p(t) matches closed forms within 0.01")


def estimate_crossing(p, d, level=0.01):
    """Zero of d(p) from its last upward crossing of -level.

    The difference of the two finite-size curves rises steeply through zero
    and then sits on a noisy plateau around zero; interpolating where it
    passes -level on the steep flank (then correcting by level/slope) is
    insensitive to the plateau noise.
    """
    assert d[0] < -level, "curves do not separate at the left edge"
    for i in range(p.size - 2, -1, -1):
        if d[i] < -level <= d[i + 1]:
            slope = (d[i + 1] - d[i]) / (p[i + 1] - p[i])
            root = p[i] + (-level - d[i]) / slope
            return root + level / slope
    raise AssertionError("no crossing of the level found")


def test_criterion_03_uniform_threshold_recovery():
    grid = np.arange(0.46, 0.5401, 0.005)
    small = static_percolation_curve(LatticeSpec("square", 256), grid, 300,
                                     seed=3001, threads=THREADS)
    large = static_percolation_curve(LatticeSpec("square", 512), grid, 150,
                                     seed=3002, threads=THREADS)
    crossing = estimate_crossing(grid, large.P0 - small.P0)
    assert 0.49 <= crossing <= 0.51

    tri = static_percolation_curve(LatticeSpec("triangular", 256),
                                   [P_INFINITY], 60, seed=3003, threads=THREADS)
    assert tri.P0[0] > 0.05
    report(3, f"square crossing at {crossing:.4f}; triangular supercritical")


def test_criterion_04_uncorrelated_collapse():
    spec = LatticeSpec("square", 256)
    p_grid = np.unique(np.clip(np.concatenate(
        [np.arange(0.0, 0.45, 0.06), np.arange(0.44, 0.72, 0.01),
         np.arange(0.72, 1.0, 0.04), [1.0]]), 0.0, 1.0))
    ref = static_percolation_curve(spec, p_grid, 1000, seed=4001,
                                   threads=THREADS)
    times = np.linspace(0.0, 3.5 * np.pi, 56)
    worst = 0.0
    for k, sw in enumerate((0.1, 0.2, 0.3)):
        rec = run_trajectory(spec, 0.0, GaussianIIDModel(1.0, sw), times,
                             6, 100, seed=4100 + k, threads=THREADS,
                             coupled=True)
        deviation = np.max(np.abs(rec.P_hat - np.interp(rec.p_hat, ref.p, ref.P0)))
        worst = max(worst, deviation)
    assert worst < 0.02
    report(4, f"collapse onto P0(p), max deviation {worst:.4f}")


def matched_time_pairs(eta_hat, levels):
    """Times (t_a, t_b) with equal expected active fraction per level.

    The expected fraction 1 - (1-eta)|cos t| - eta|cos 2t| rises on
    (0, pi/4) and falls past the peak, so each level is visited once on
    each side with a different (phi1, phi2) mix: the hysteresis pairing.
    """
    p_bar = lambda t: 1 - (1 - eta_hat) * abs(np.cos(t)) - eta_hat * abs(np.cos(2 * t))
    t_min = optimize.minimize_scalar(p_bar, bounds=(np.pi / 4, np.pi / 2),
                                     method="bounded").x
    pairs = []
    for level in levels:
        t_a = optimize.brentq(lambda t: p_bar(t) - level, 1e-9, np.pi / 4 - 1e-9)
        t_b = optimize.brentq(lambda t: p_bar(t) - level, np.pi / 4 + 1e-9, t_min)
        pairs.append((t_a, t_b))
    return pairs


def test_criterion_05_hysteresis_existence():
    spec = LatticeSpec("square", 256)
    model = ThresholdDistanceModel(1.0, 2.0, 1.0)
    seed = 5001
    # stage 1: measure the realized long-edge fraction; at t = pi/2 the
    # short edges are active surely and the long ones never, so
    # p_hat(pi/2) = 1 - eta exactly, with the same disorder streams as below
    probe = run_trajectory(spec, 0.1, model, [np.pi / 2], 4, 1, seed=seed)
    eta_hat = 1.0 - probe.p_hat[0]
    assert abs(eta_hat - 0.5) < 0.05

    pairs = matched_time_pairs(eta_hat, np.arange(0.48, 0.645, 0.015))
    times = np.array(sorted(t for pair in pairs for t in pair))
    index = {t: i for i, t in enumerate(times)}

    runs = {}
    for tag, reshuffled in (("correlated", False), ("reshuffled", True)):
        runs[tag] = run_trajectory(spec, 0.1, model, times, 4, 150, seed=seed,
                                   threads=THREADS, coupled=True,
                                   reshuffled=reshuffled)

    def gaps(rec):
        out = []
        for t_a, t_b in pairs:
            i, j = index[t_a], index[t_b]
            assert abs(rec.p_hat[i] - rec.p_hat[j]) < 0.005
            out.append(abs(rec.P_hat[i] - rec.P_hat[j]))
        return np.array(out)

    correlated_gap = gaps(runs["correlated"]).max()
    control_gap = gaps(runs["reshuffled"]).max()
    assert correlated_gap > 0.05
    assert control_gap < 0.02
    report(5, f"branch gap {correlated_gap:.3f} vs control {control_gap:.3f}")


def test_criterion_06_two_colour_constraint_effect():
    L, seed = 256, 6001
    base = generate_constrained(L, seed)
    lat = base.lattice
    ea, eb = lat.edges[:, 0], lat.edges[:, 1]
    E, N = lat.n_edges, lat.n_nodes
    template = base.colours

    grid = np.linspace(0.0, 1.0, 11)
    S_U = np.zeros((11, 11))
    contour_dev = np.zeros((11, 11))
    for i1, f1 in enumerate(grid):
        for i2, f2 in enumerate(grid):
            p_bar = 0.5 * (f1 + f2)
            gap = abs(p_bar - 0.5)
            n = 850 if gap < 0.026 else 220 if gap < 0.076 else 60 if gap < 0.126 else 40
            d = np.empty(n)
            s1_sum = 0.0
            for j in range(n):
                g = stream(seed, i1, i2, j)
                colours = template[g.permutation(E)]
                probs = _activation_probs(colours, f1, f2)
                u = g.random(E)
                s1 = _largest_component(ea, eb, u < probs, N) / N
                s2 = _largest_component(ea, eb, u < p_bar, N) / N
                s1_sum += s1
                d[j] = s1 - s2
            S_U[i1, i2] = s1_sum / n
            contour_dev[i1, i2] = d.mean()
    assert np.max(np.abs(contour_dev)) < 0.02

    constrained = sweep_phase_diagram(L, 0.1, 40, constrained=True, seed=seed + 1,
                                      threads=THREADS)
    signif = np.abs(S_U - constrained.S) - 3 * constrained.stderr
    assert signif.max() > 0.01
    report(6, f"contour dev {np.max(np.abs(contour_dev)):.4f}; "
              f"constraint region gap {signif.max():.3f}")


def emergence_onset():
    """Diagonal onset located purely from the nontrivial fixed point.

    Bisect p where the fixed-point magnitude reaches a small threshold
    theta, then extrapolate theta -> 0 quadratically; no stability formula
    is involved, making this independent of the Jacobian route.
    """
    def p_at(theta):
        lo, hi = 1 / 3 - 0.02, 0.45
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            m = solve_fixed_point(mid, mid, tol=1e-13, max_iter=2 * 10**6).m1
            if m > theta:
                hi = mid
            else:
                lo = mid
        return 0.5 * (lo + hi)

    thetas = np.array([1e-3, 5e-4, 2.5e-4])
    ps = np.array([p_at(t) for t in thetas])
    # Lagrange extrapolation to theta = 0
    p0 = 0.0
    for i in range(3):
        w = 1.0
        for j in range(3):
            if j != i:
                w *= thetas[j] / (thetas[j] - thetas[i])
        p0 += w * ps[i]
    return p0


def test_criterion_07_meanfield_exactness():
    onset_lambda = optimize.brentq(
        lambda p: jacobian_eigenvalue(p, p) - 1.0, 0.2, 0.5, xtol=1e-14)
    onset_fp = emergence_onset()
    assert abs(onset_lambda - 1 / 3) < 1e-6
    assert abs(onset_fp - 1 / 3) < 1e-6
    assert abs(onset_lambda - onset_fp) < 1e-6

    for p in np.linspace(0.0, 1.0, 41):
        pair = solve_fixed_point(p, p)
        uni = uniform_reshuffled(p)
        assert abs(pair.m1 - pair.m2) < 1e-10
        assert abs(pair.S - uni.P) < 1e-10
    assert abs(critical_line_phi2(0.0) - 1.0) < 1e-10
    assert abs(critical_line_phi2(1.0) - 0.0) < 1e-10
    report(7, f"onset {onset_fp:.9f} by both routes; diagonal matches uniform")


def test_criterion_08_correlation_structure():
    sigma, lam, seed = 0.1, 1.0, 8001
    eta_val = eta(sigma, lam)
    assert abs(eta_val - 0.5) < 0.05

    rho_par_motif = pearson(eta_val, beta(sigma, lam, "collinear", 10**6, seed))
    rho_perp_motif = pearson(eta_val, beta(sigma, lam, "perpendicular", 10**6, seed + 1))
    lat = perturb(generate_lattice(LatticeSpec("square", 500)), sigma, seed + 2)
    asg = assign(lat, ThresholdDistanceModel(1.0, 2.0, lam), seed + 3)
    rho_par_lattice = pearson_from_assignment(lat, asg, "collinear")
    rho_perp_lattice = pearson_from_assignment(lat, asg, "perpendicular")

    assert rho_par_motif < -0.3 and rho_par_lattice < -0.3
    assert abs(rho_perp_motif) < 0.05 and abs(rho_perp_lattice) < 0.05
    assert abs(rho_par_motif - rho_par_lattice) < 0.02
    assert abs(rho_perp_motif - rho_perp_lattice) < 0.02
    report(8, f"rho_par {rho_par_motif:.3f}/{rho_par_lattice:.3f}, "
              f"rho_perp {rho_perp_motif:.3f}/{rho_perp_lattice:.3f}")


def test_criterion_09_small_instance_oracle():
    from test_engine import bfs_component_sizes
    lat = generate_lattice(LatticeSpec("square", 20))
    rng = np.random.default_rng(9001)
    for _ in range(100):
        active = rng.random(lat.n_edges) < rng.random()
        sample = ActivationSample(active, 0.0, 0)
        assert (sorted(component_sizes(lat, sample))
                == bfs_component_sizes(lat.n_nodes, lat.edges, active))
    report(9, "union-find equals BFS on 100 random 20x20 activations")


def sha256(path):
    return hashlib.sha256(path.read_bytes()).hexdigest()


def test_criterion_10_preset_determinism(tmp_path):
    checksums = []
    for threads in (1, 7):
        out = tmp_path / f"threads{threads}"
        manifests = run_preset("fig3", out, full=False, master_seed=42,
                               threads=threads, budget=None)
        digest = {}
        for manifest_path in manifests:
            payload = json.loads(manifest_path.read_text())
            for name, meta in payload["outputs"].items():
                rel = manifest_path.parent.relative_to(out) / name
                digest[str(rel)] = meta["sha256"]
                assert sha256(manifest_path.parent / name) == meta["sha256"]
        checksums.append(digest)
    assert checksums[0] == checksums[1]
    report(10, "preset rerun byte-identical across thread counts")
