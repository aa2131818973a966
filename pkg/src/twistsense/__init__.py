"""Exact moments and phase sensitivities of dephased one-axis-twisted spin states.

A coherent spin state of N spin-1/2 particles, prepared at polar angle
theta and twisted by exp(-i phi Jz^2) while undergoing collective Jz
dephasing, keeps closed-form collective-spin moments.  This package
evaluates those moments stably up to J ~ 1e6, derives exact and
approximate phase sensitivities for Jx/Jy readouts, validates everything
against a brute-force Dicke-basis oracle, and locates optimal operating
phases and their scaling exponents.
"""

__version__ = "0.1.0"

from .moments import (
    DegenerateVarianceError,
    MomentSet,
    ProtocolParams,
    SpinEnsemble,
    TransverseStats,
    jplus,
    jplus_slope,
    jplus_squared,
    jz_moments,
    moment_set,
    transverse_stats,
)
from .optimizer import (
    OptimumReport,
    find_optimum,
    fringe_width,
    predicted_exponent,
    scaling_exponent,
    stationarity_roots,
    sweep,
)
from .sensitivity import (
    SensitivityPoint,
    ShortTimeParams,
    envelope,
    envelope_optimum,
    exact,
    short_time_params,
    short_time_variance_x,
    short_time_x,
    short_time_y,
)

__all__ = [
    "DegenerateVarianceError",
    "MomentSet",
    "OptimumReport",
    "ProtocolParams",
    "SensitivityPoint",
    "ShortTimeParams",
    "SpinEnsemble",
    "TransverseStats",
    "__version__",
    "envelope",
    "envelope_optimum",
    "exact",
    "find_optimum",
    "fringe_width",
    "jplus",
    "jplus_slope",
    "jplus_squared",
    "jz_moments",
    "moment_set",
    "predicted_exponent",
    "scaling_exponent",
    "short_time_params",
    "short_time_variance_x",
    "short_time_x",
    "short_time_y",
    "stationarity_roots",
    "sweep",
    "transverse_stats",
]
