"""Critical-line zero tables and discrete moment sums for the zeta function.

Layered layout:

    summation   deterministic compensated reductions, thread plumbing
    errors      exception hierarchy shared by library and CLI
    engine      Euler-Maclaurin evaluator, theta phase, contour cross-check
    batch       vectorized critical-line rows and local Taylor models
    zeros       scan / refine / verify pipeline, table file formats
    arith       sieve-backed arithmetic sums and limit constants
    moments     discrete sums over zeros, predictions, resummation chain
    pipeline    run configs, manifests, artifact layout
    cli         argparse front end (`shankslab ...`)
"""

from .errors import (
    ShanksLabError, DomainError, PoleError, AccuracyError, SieveLimitError,
    InsufficientDataError, MissedZeroError, TableFormatError,
    VerificationError, ConfigError,
)
from .engine import (
    EvalParams, DEFAULT_PARAMS, ACCURATE_PARAMS, PIPELINE_PARAMS,
    theta, theta_deriv, zeta_em, zeta_deriv_em, zeta_deriv_cauchy, hardy_z,
)
from .zeros import (
    Zero, ZeroTable, VerificationReport, count_zeros_rvm, gram_point,
    find_zeros, verify_table, import_zeros, export_zeros,
)
from .arith import (
    SieveTable, StieltjesConstants, build_sieve, default_sieve,
    von_mangoldt, chebyshev_C, weighted_sum, unweighted_sum, true_value_D,
    stieltjes, stieltjes_constants,
)
from .moments import (
    LGReport, ChainReport, ShanksVerdict, MomentCheckpoint, MomentSeries,
    discrete_sum, leading_term, fujii_prediction, landau_gonek,
    heuristic_chain, error_bound_diag, shanks_verdict, auto_checkpoints,
    moment_series, export_moment_csv, scatter_export,
)
from .pipeline import (
    RunConfig, RunManifest, build_config, parse_config_file, file_digest,
)

__version__ = "0.1.0"

__all__ = [
    "ShanksLabError", "DomainError", "PoleError", "AccuracyError",
    "SieveLimitError", "InsufficientDataError", "MissedZeroError",
    "TableFormatError", "VerificationError", "ConfigError",
    "EvalParams", "DEFAULT_PARAMS", "ACCURATE_PARAMS", "PIPELINE_PARAMS",
    "theta", "theta_deriv", "zeta_em", "zeta_deriv_em", "zeta_deriv_cauchy",
    "hardy_z",
    "Zero", "ZeroTable", "VerificationReport", "count_zeros_rvm",
    "gram_point", "find_zeros", "verify_table", "import_zeros",
    "export_zeros",
    "SieveTable", "StieltjesConstants", "build_sieve", "default_sieve",
    "von_mangoldt", "chebyshev_C", "weighted_sum", "unweighted_sum",
    "true_value_D", "stieltjes", "stieltjes_constants",
    "LGReport", "ChainReport", "ShanksVerdict", "MomentCheckpoint",
    "MomentSeries", "discrete_sum", "leading_term", "fujii_prediction",
    "landau_gonek", "heuristic_chain", "error_bound_diag", "shanks_verdict",
    "auto_checkpoints", "moment_series", "export_moment_csv",
    "scatter_export",
    "RunConfig", "RunManifest", "build_config", "parse_config_file",
    "file_digest", "__version__",
]
