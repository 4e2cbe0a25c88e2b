"""Population size estimation for dual-record systems under model M_tb.

Closed-form estimators (M_t, M_b, Nour), the AB-Flat and AB-Con Gibbs
samplers with flat / conjugate priors on the behavioral-response effect phi,
posterior summaries, a multi-chain convergence diagnostic and a simulation
study harness.  The Gibbs sweeps run in a compiled kernel when it is built,
otherwise in a bitwise-identical pure-Python fallback (see ``kernels``).
"""

__version__ = "0.1.0"

from .core import (CLOSED_FORM, CellProbabilities, DrsData, MtbParams, PopulationSpec,
                   c_hat, cell_probabilities, closed_form_estimates, estimate_mb,
                   estimate_mt, estimate_nour, log_likelihood_mt, log_likelihood_mtb)
from .diagnostics import PsrfReport, burnin_scan, psrf, psrf_from_arrays
from .distributions import (RngStream, TruncatedScaledBeta, sample_beta, sample_multinomial,
                            sample_negative_binomial, sample_poisson,
                            sample_truncated_scaled_beta)
from .errors import (ChainFailure, ConfigurationError, DataParseError,
                     DegenerateDataError, DegenerateDiagnosticError, DomainError,
                     DualRecordError, EstimatorUndefined, NumericalUnderflowError, StudyError)
from .kernels import BACKEND
from .posterior import (ContinuousSummary, PosteriorSummary, pooled_draws, pooled_summary,
                        summarize, summarize_continuous)
from .samplers import (ChainConfig, ChainTrace, NPriorPolicy, PhiPriorPolicy,
                       ab_con_hyperparameters, resolve_lambda, resolve_phi_prior, run_ab_con,
                       run_ab_flat)
from .simstudy import (POPULATIONS, StudyDesign, StudyRow, builtin_population,
                       generate_dataset, run_study)
from .special import inverse_reg_incomplete_beta, log_beta, reg_incomplete_beta
