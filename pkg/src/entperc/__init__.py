"""entperc: dynamical entanglement percolation on disordered lattices."""

from .dynamics import (AnalyticCurveSpec, P_INFINITY, TwoQubitState,
                       bernoulli_period, conversion_probability, edge_state,
                       evaluate_curve, p_asymptotic_gaussian, p_bernoulli,
                       p_gaussian, p_numeric, schmidt_lambda)
from .engine import (ActivationSample, StaticCurve, TrajectoryRecord,
                     component_sizes, largest_component_fraction,
                     parametric_Pp, run_trajectory, sample_activation,
                     static_percolation_curve)
from .errors import BudgetError, ConfigurationError, DomainError
from .frequencies import (BernoulliIIDModel, CustomNodeWeightModel,
                          ExponentialDistanceModel, FrequencyAssignment,
                          GaussianIIDModel, ThresholdDistanceModel,
                          UniformModel, assign, frequency_histogram, reshuffle)
from .lattice import (LatticeSpec, PerturbedLattice, edge_length_histogram,
                      generate_lattice, perturb)
from .meanfield import (MeanFieldSolution, critical_line_phi2,
                        jacobian_eigenvalue, meanfield_dynamic,
                        solve_fixed_point, uniform_reshuffled)
from .stats import (CorrelationStats, bessel_i0, bessel_i0e, beta,
                    correlation_stats, eta, pearson, pearson_from_assignment,
                    rice_pdf)
from .twocolour import (ColouredLattice, PhaseDiagram, dynamic_two_colour,
                        gamma_trajectory, generate_constrained,
                        generate_reshuffled, giant_fraction,
                        sweep_phase_diagram)

__version__ = "0.1.0"
