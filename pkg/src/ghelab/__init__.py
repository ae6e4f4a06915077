"""Generalized Hurst exponent laboratory.

Measure multifractal scaling in time series and decompose its source by
comparing each series against shuffled replicas of its own returns:
scaling that survives shuffling comes from the return distribution,
scaling that does not comes from temporal structure.
"""

from .errors import (
    DegenerateSeries,
    DegenerateVariance,
    EmbeddingFailure,
    EmptySeries,
    GhelabError,
    InvalidParams,
    MissingEmpiricalData,
    MissingKey,
    MissingShuffledBlock,
    NonPositivePrice,
    NonPositiveStructureFunction,
    NonStationaryAR,
    ParseError,
    TauTooLarge,
    TooShort,
    UnknownKey,
)
from .series import (
    ReturnKind,
    ReturnSeries,
    SeriesPath,
    VariableKind,
    build_variable,
    demean,
    make_returns,
    shuffle,
)
from .ghe import (
    DriftEstimate,
    GheConfig,
    GheResult,
    detrend_linear,
    estimate_drift,
    fit_hurst,
    generalized_hurst,
    scaling_diagnostic,
    scaling_function,
    structure_function,
)
from .msm import MsmParams, MsmState, gmm_estimates, simulate_msm, step_state, transition_probs
from .generators import (
    STANDARD_SCALE,
    ArfimaParams,
    FbmParams,
    StableParams,
    fractional_ma_coeffs,
    sample_stable,
    simulate_arfima,
    simulate_fbm,
    stable_cf,
)
from .ensemble import (
    DeltaComparison,
    EmpiricalSeries,
    EnsembleReport,
    EnsembleSpec,
    IdentityTest,
    delta_h_comparison,
    identity_test,
    path_rng,
    run_ensemble,
    simulate_returns,
)
from .io import (
    RESULT_COLUMNS,
    PriceRecord,
    RunConfig,
    ensemble_spec_from_config,
    generator_from_config,
    load_price_csv,
    parse_config,
    prices_to_returns,
    report_rows,
    structure_function_rows,
    write_plot_data,
    write_result_csv,
    write_series_csv,
)
from .tables import TABLE_IDS, reproduce_table

__version__ = "0.1.0"

__all__ = [
    "ArfimaParams",
    "DegenerateSeries",
    "DegenerateVariance",
    "DeltaComparison",
    "DriftEstimate",
    "EmbeddingFailure",
    "EmpiricalSeries",
    "EmptySeries",
    "EnsembleReport",
    "EnsembleSpec",
    "FbmParams",
    "GheConfig",
    "GheResult",
    "GhelabError",
    "IdentityTest",
    "InvalidParams",
    "MissingEmpiricalData",
    "MissingKey",
    "MissingShuffledBlock",
    "MsmParams",
    "MsmState",
    "NonPositivePrice",
    "NonPositiveStructureFunction",
    "NonStationaryAR",
    "ParseError",
    "PriceRecord",
    "RESULT_COLUMNS",
    "ReturnKind",
    "ReturnSeries",
    "RunConfig",
    "STANDARD_SCALE",
    "SeriesPath",
    "StableParams",
    "TABLE_IDS",
    "TauTooLarge",
    "TooShort",
    "UnknownKey",
    "VariableKind",
    "build_variable",
    "delta_h_comparison",
    "demean",
    "detrend_linear",
    "ensemble_spec_from_config",
    "estimate_drift",
    "fit_hurst",
    "generator_from_config",
    "fractional_ma_coeffs",
    "generalized_hurst",
    "gmm_estimates",
    "identity_test",
    "load_price_csv",
    "make_returns",
    "parse_config",
    "path_rng",
    "prices_to_returns",
    "report_rows",
    "reproduce_table",
    "run_ensemble",
    "sample_stable",
    "scaling_diagnostic",
    "scaling_function",
    "shuffle",
    "simulate_arfima",
    "simulate_fbm",
    "simulate_msm",
    "simulate_returns",
    "stable_cf",
    "step_state",
    "structure_function",
    "structure_function_rows",
    "transition_probs",
    "write_plot_data",
    "write_result_csv",
    "write_series_csv",
]
