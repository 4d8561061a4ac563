"""Inverse-scattering and long-time tools for the focusing nonlocal
Schrodinger flow with step-like boundary values (0 on the left, A on the
right).

The pieces fit together like this: `profiles` describes initial data,
`scattering` turns a profile into spectral data (Jost solutions,
scattering matrix, the exponent k1, norming constant), `asymptotics`
evaluates the long-time ray formulas from that data, `pde` runs the
direct finite-difference evolution for cross-checks, and `exact` holds
closed-form references.  `cli` wires everything into a command line.
"""

from .errors import (InputError, NnlstepError, QuadratureError,
                     SingularityError, ValidationError)
from .quadrature import (DEFAULT_SPEC, QuadratureSpec, cauchy_halfline,
                         cauchy_line, pv_cauchy, stieltjes_log_integral,
                         unwrap_arg)
from .special import complex_gamma, dilog
from .profiles import (InitialProfile, pure_step, resolve, smoothed_step,
                       soliton)
from .scattering import (SpectralData, case_epsilon, classify_case,
                         compute_k1, default_k_grid, gamma1_norming,
                         jost_solve, k1_from_root_search, load_spectral_data,
                         one_plus_r1r2, pure_step_spectral_data,
                         reflection_coeffs, scattering_data,
                         scattering_matrix, small_k_limit,
                         soliton_spectral_data, trace_eval,
                         write_sidecar, write_spectral_csv)
from .asymptotics import (AsymptoticResult, PhaseData, alpha_coeffs,
                          c_constants, delta_at, modulated_constant,
                          nu_of_xi, phase_data, q_asymptotic,
                          q_soliton_region, reset_phase_cache)
from .exact import (SolitonParams, one_soliton, pde_residual, pure_step_S,
                    singularity_times)
from .pde import (EvolveConfig, EvolveResult, FieldState, available_backends,
                  evolve, initial_state, mirror, ray_sample)

__version__ = "0.1.0"

__all__ = [
    "AsymptoticResult", "DEFAULT_SPEC", "EvolveConfig", "EvolveResult",
    "FieldState", "InitialProfile", "InputError", "NnlstepError",
    "PhaseData", "QuadratureError", "QuadratureSpec", "SingularityError",
    "SolitonParams", "SpectralData", "ValidationError", "alpha_coeffs",
    "available_backends", "c_constants", "case_epsilon", "cauchy_halfline",
    "cauchy_line", "classify_case", "complex_gamma", "compute_k1",
    "default_k_grid", "delta_at", "dilog", "evolve", "gamma1_norming",
    "initial_state", "jost_solve", "k1_from_root_search",
    "load_spectral_data", "mirror", "modulated_constant", "nu_of_xi",
    "one_plus_r1r2", "one_soliton", "pde_residual", "phase_data",
    "pure_step", "pure_step_S", "pure_step_spectral_data", "pv_cauchy",
    "q_asymptotic", "q_soliton_region", "ray_sample", "reflection_coeffs",
    "reset_phase_cache", "resolve", "scattering_data", "scattering_matrix",
    "singularity_times", "small_k_limit", "smoothed_step", "soliton",
    "soliton_spectral_data", "stieltjes_log_integral", "trace_eval",
    "unwrap_arg", "write_sidecar", "write_spectral_csv",
]
