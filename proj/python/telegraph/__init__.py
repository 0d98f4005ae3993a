"""Qubit dynamics under random telegraph noise.

Thin wrapper over the C++ core. Times are dimensionless, nu = t / (2 tau),
unless a name says otherwise.
"""

from ._core import (
    CpVerdict,
    InvalidArgument,
    ModelParams,
    NotAState,
    NotCompletelyPositive,
    NumericalBlowup,
    UnsupportedKernel,
    apply_kraus,
    choi_eigenvalues,
    critical_flip_parameter,
    ensemble_average,
    is_cp,
    kraus_operators,
    lambdas,
    markov_cp_check,
    markov_rates,
    propagate,
    response,
    solve_volterra,
    sufficient_condition,
    sufficient_frequency_bound,
    xi,
)

__all__ = [
    "CpVerdict",
    "InvalidArgument",
    "ModelParams",
    "NotAState",
    "NotCompletelyPositive",
    "NumericalBlowup",
    "UnsupportedKernel",
    "apply_kraus",
    "choi_eigenvalues",
    "critical_flip_parameter",
    "ensemble_average",
    "is_cp",
    "kraus_operators",
    "lambdas",
    "markov_cp_check",
    "markov_rates",
    "propagate",
    "response",
    "solve_volterra",
    "sufficient_condition",
    "sufficient_frequency_bound",
    "xi",
]
