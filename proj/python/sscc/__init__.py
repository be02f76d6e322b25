"""Coded matrix computation with adaptive work assignment.

Python face of the C++ core: MDS and polynomial coded matrix operations,
squeeze schedulers for heterogeneous workers, speed predictors, and a
deterministic cluster simulator driven by the same JSON configs as the
sscc-bench CLI.
"""

from ._sscc import (
    SsccError,
    apportion_speeds,
    ar1_fit,
    ar1_predict,
    basic_s2c2,
    chebyshev_points,
    config_defaults,
    gen_speed_trace,
    general_s2c2,
    hessian,
    lstm_predict_next,
    lstm_train,
    mape,
    mds_matvec,
    run_experiment,
)

__all__ = [
    "SsccError",
    "apportion_speeds",
    "ar1_fit",
    "ar1_predict",
    "basic_s2c2",
    "chebyshev_points",
    "config_defaults",
    "gen_speed_trace",
    "general_s2c2",
    "hessian",
    "lstm_predict_next",
    "lstm_train",
    "mape",
    "mds_matvec",
    "run_experiment",
]
