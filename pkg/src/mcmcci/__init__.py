"""CLT-free confidence intervals and bias bounds for MCMC estimators."""

from .bias import (BiasBound, OrderTooLowError, PolyErgodicityCert, bias_bound_t4,
                   fit_bias_rate, optimal_beta)
from .chains import (Functional, FunctionalTrace, MarkovKernel, UnknownTruthError,
                     exact_bias_sqrt_bias, make_ar1_kernel, make_kernel, make_sqrt_bias_kernel,
                     make_two_state_kernel, simulate_trace, step_sqrt_bias,
                     tail_probability_sqrt_bias)
from .coverage import CoverageReport, ExperimentPlan, compare_methods, run_coverage
from .estimators import (MomentBound, VarianceBound, batch_means_variance, first_moment_bound,
                         repeated_runs_variance, running_mean)
from .intervals import (ConfidenceInterval, clt_reference_interval, enlarge_t5, interval_c1,
                        interval_t1, interval_t2, interval_t3, width_ratio)

__version__ = "0.1.0"
