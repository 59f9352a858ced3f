import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate, optimize, special

from entperc import (ConfigurationError, DomainError, LatticeSpec,
                     ThresholdDistanceModel, assign, bessel_i0, bessel_i0e,
                     beta, correlation_stats, eta, generate_constrained,
                     generate_lattice, pearson, pearson_from_assignment,
                     perturb, reshuffle, rice_pdf)
from entperc.stats import motif_cell_probabilities


class TestBessel:
    def test_against_scipy_reference(self):
        xs = np.concatenate([np.linspace(0.0, 14.99, 400),
                             np.linspace(15.0, 700.0, 400)])
        ref = special.i0e(xs)
        assert np.max(np.abs(bessel_i0e(xs) - ref) / ref) < 1e-10
        small = np.linspace(0.0, 100.0, 300)
        ref0 = special.i0(small)
        assert np.max(np.abs(bessel_i0(small) - ref0) / ref0) < 1e-10

    def test_crossover_continuity(self):
        lo, hi = bessel_i0e(15.0 - 1e-9), bessel_i0e(15.0 + 1e-9)
        assert abs(lo - hi) / lo < 1e-9

    def test_at_zero(self):
        assert bessel_i0(0.0) == 1.0

    @given(st.floats(-300.0, 300.0))
    def test_even_and_bounded(self, x):
        v = bessel_i0e(x)
        assert 0.0 < v <= 1.0
        assert v == bessel_i0e(-x)


class TestRicePdf:
    def test_zero_at_origin(self):
        assert rice_pdf(0.0, 1.0, 0.1) == 0.0

    @pytest.mark.parametrize("sigma", [0.05, 0.1, 0.2, 0.5])
    def test_normalized(self, sigma):
        val, _ = integrate.quad(lambda x: rice_pdf(x, 1.0, sigma),
                                0.0, 1.0 + 16 * sigma, limit=200)
        assert abs(val - 1.0) < 1e-8

    def test_mode_near_one_for_small_noise(self):
        res = optimize.minimize_scalar(lambda x: -rice_pdf(x, 1.0, 0.1),
                                       bounds=(0.5, 1.5), method="bounded",
                                       options={"xatol": 1e-6})
        golden = optimize.golden(lambda x: -rice_pdf(x, 1.0, 0.1),
                                 brack=(0.7, 1.0, 1.3), tol=1e-8)
        assert abs(res.x - golden) < 1e-3
        assert abs(golden - 1.0) < 0.02

    def test_rejects_bad_sigma(self):
        with pytest.raises(DomainError):
            rice_pdf(1.0, 1.0, 0.0)

    def test_no_overflow_for_tiny_sigma(self):
        # I0 argument ~ 1/(2 sigma^2) = 5000; must stay finite
        v = rice_pdf(1.0, 1.0, 0.01)
        assert np.isfinite(v) and v > 0


class TestEta:
    def test_zero_threshold(self):
        assert eta(0.1, 0.0) == 1.0

    def test_large_threshold(self):
        assert eta(0.1, 50.0) == 0.0

    def test_half_at_unit_threshold_small_noise(self):
        # frozen quadrature value at (sigma, lam) = (0.1, 1)
        val = eta(0.1, 1.0)
        assert abs(val - 0.5282808133237272) < 1e-9
        assert abs(val - 0.5) < 0.05

    @pytest.mark.parametrize("sigma", [0.05, 0.15, 0.3, 0.5])
    @pytest.mark.parametrize("lam", [0.5, 1.0, 1.5])
    def test_quadrature_matches_montecarlo(self, sigma, lam):
        n = 10**5
        quad_val = eta(sigma, lam)
        mc_val = eta(sigma, lam, method="montecarlo", n_samples=n, seed=7)
        se = max(np.sqrt(mc_val * (1 - mc_val) / n), 1e-4)
        assert abs(quad_val - mc_val) < 3 * se

    def test_unknown_method(self):
        with pytest.raises(ConfigurationError):
            eta(0.1, 1.0, method="magic")


class TestBeta:
    def test_limits(self):
        assert beta(0.1, 100.0, "collinear", 10**4, seed=0) == 1.0
        assert beta(0.1, 0.0, "collinear", 10**4, seed=0) == 0.0

    def test_collinear_anticorrelated(self):
        sigma, lam, n = 0.1, 1.0, 10**6
        b_par = beta(sigma, lam, "collinear", n, seed=1)
        eta_val = eta(sigma, lam)
        indep = (1 - eta_val) ** 2
        se = np.sqrt(indep * (1 - indep) / n)
        assert b_par < indep - 5 * se

    def test_perpendicular_nearly_independent(self):
        sigma, lam, n = 0.1, 1.0, 10**6
        b_perp = beta(sigma, lam, "perpendicular", n, seed=2)
        eta_val = eta(sigma, lam)
        assert abs(b_perp - (1 - eta_val) ** 2) < 0.01

    def test_sample_floor(self):
        with pytest.raises(ConfigurationError):
            beta(0.1, 1.0, "collinear", 100, seed=0)

    def test_cell_bookkeeping(self):
        # cells must be consistent with the marginals and symmetric in the
        # off-diagonal entries
        sigma, lam, n = 0.15, 1.0, 10**6
        cells = motif_cell_probabilities(sigma, lam, "collinear", n, seed=3)
        total = sum(cells.values())
        assert abs(total - 1.0) < 1e-12
        se = 3 / np.sqrt(n)
        eta_val = eta(sigma, lam)
        assert abs((cells["ss"] + cells["sl"]) - (1 - eta_val)) < 4 * se
        assert abs((cells["ls"] + cells["ll"]) - eta_val) < 4 * se
        assert abs(cells["sl"] - cells["ls"]) < 4 * se
        # derived identity: P_ll = beta + 2 eta - 1 when P_sl = 1 - eta - beta
        assert abs(cells["ll"] - (cells["ss"] + 2 * eta_val - 1)) < 6 * se


class TestPearson:
    def test_independence_gives_zero(self):
        assert pearson(0.3, (1 - 0.3) ** 2) == 0.0

    def test_perfect_alternation(self):
        assert pearson(0.5, 0.0) == -1.0

    def test_perfect_agreement(self):
        assert pearson(0.5, 0.5) == 1.0

    def test_degenerate_marginal(self):
        with pytest.raises(DomainError):
            pearson(0.0, 0.1)
        with pytest.raises(DomainError):
            pearson(1.0, 0.1)

    def test_infeasible_joint(self):
        with pytest.raises(DomainError):
            pearson(0.5, 0.9)

    @given(st.floats(0.05, 0.95), st.floats(0.0, 1.0))
    def test_bounds_when_feasible(self, eta_val, frac):
        lo = max(0.0, 1.0 - 2 * eta_val)
        hi = 1.0 - eta_val
        b = lo + frac * (hi - lo)
        assert -1.0 <= pearson(eta_val, b) <= 1.0


class TestLatticeEstimator:
    def test_reshuffled_uncorrelated(self):
        lat = perturb(generate_lattice(LatticeSpec("square", 300)), 0.1, 4)
        asg = reshuffle(assign(lat, ThresholdDistanceModel(1.0, 2.0, 1.0), 5), 6)
        n_pairs = 2 * 300**2
        for orientation in ("collinear", "perpendicular"):
            rho = pearson_from_assignment(lat, asg, orientation)
            assert abs(rho) < 3 / np.sqrt(n_pairs) + 0.005

    def test_constrained_colouring_as_labels(self):
        col = generate_constrained(128, seed=7)
        rho_par = pearson_from_assignment(col.lattice, col.colours.astype(float),
                                          "collinear")
        assert rho_par == -1.0
        rho_perp = pearson_from_assignment(col.lattice, col.colours.astype(float),
                                           "perpendicular")
        assert abs(rho_perp) < 3 / np.sqrt(128**2) + 0.01

    def test_threshold_model_matches_motif_montecarlo(self):
        sigma, lam = 0.1, 1.0
        lat = perturb(generate_lattice(LatticeSpec("square", 500)), sigma, 8)
        asg = assign(lat, ThresholdDistanceModel(1.0, 2.0, lam), 9)
        rho_lattice = pearson_from_assignment(lat, asg, "collinear")
        eta_val = eta(sigma, lam)
        b_par = beta(sigma, lam, "collinear", 10**6, seed=10)
        rho_motif = pearson(eta_val, b_par)
        assert abs(rho_lattice - rho_motif) < 0.02

    def test_label_swap_invariance(self):
        lat = perturb(generate_lattice(LatticeSpec("square", 64)), 0.1, 11)
        asg = assign(lat, ThresholdDistanceModel(1.0, 2.0, 1.0), 12)
        rho = pearson_from_assignment(lat, asg.omegas, "collinear")
        swapped = np.where(asg.omegas == 1.0, 2.0, 1.0)
        rho_swapped = pearson_from_assignment(lat, swapped, "collinear")
        assert abs(rho - rho_swapped) < 1e-12

    def test_rejects_many_valued(self):
        lat = generate_lattice(LatticeSpec("square", 8))
        with pytest.raises(DomainError):
            pearson_from_assignment(lat, np.linspace(1, 2, lat.n_edges), "collinear")


class TestCorrelationStats:
    def test_summary_consistency(self):
        c = correlation_stats(0.1, 1.0, n_samples=10**5, seed=13)
        assert 0.0 <= c.eta <= 1.0
        assert c.rho_par == pearson(c.eta, c.beta_par)
        assert c.rho_par < 0.0
        assert abs(c.rho_perp) < 0.1
