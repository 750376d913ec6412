"""stablekit: stable laws, exact samplers, a chaotic power-law generator,
and a seeded Monte Carlo harness that verifies superpositions of
non-identical heavy-tailed processes against their predicted stable limits.
"""

from .ensemble import (EnsembleSpec, ExperimentOutcome, SuperpositionResult,
                       apply_shifts, build_ensemble, centering, exact_centering,
                       limit_params, limit_params_mc, predicted_limit,
                       run_convergence_experiment, run_experiment, superpose)
from .errors import (AccuracyError, CenteringError, DegenerateDataError,
                     DegenerateOrbitError, DensityPoleError, ParameterError,
                     StableKitError)
from .gof import (TestReport, ad_two_sample, decide, ecdf_eval,
                  evaluate_two_sample, ks_two_sample)
from .powermap import (MapParams, ParameterLaw, TailCoefficients, Trajectory,
                       generate_trajectory, invariant_cdf, invariant_density,
                       invariant_inverse_cdf, invariant_mean, map_step,
                       stable_params_from_tails, tail_coefficients)
from .rng import GENERATOR_ID, RandomSource
from .sampling import (StandardStableDraw, draw_standard, empirical_cf,
                       sample_cauchy_std, sample_stable, sample_standard,
                       standard_from_angles)
from .stable import (StableParams, cf_eval, combine_stable, scale_shift_transform,
                     stable_cdf, stable_pdf)

__version__ = "0.1.0"
