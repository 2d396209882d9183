"""Invariant iterative Hessian transformation (IHT).

Dimension reduction for the conditional mean: estimate the dimension of the
central mean subspace through sequential rank tests on the iterated-Hessian
matrix, recover the directions, and reproduce the reference simulation
studies.
"""

from .chi2mix import MixtureSpec, chisq_sf, mixture_quantile, mixture_sf, satterthwaite_sf
from .core import IhtFit, IhtSpectrum, NullBases, fit_iht, iht_spectrum, null_bases
from .dimension_tests import TestResult, XiSample, c2_hat, m_matrix, run_test, statistic, weights, xi_hat
from .errors import (
    AccuracyError,
    DataError,
    DegenerateScalingError,
    IhtError,
    NumericError,
    ParseError,
    SingularCovarianceError,
    ValidationError,
)
from .inference import DimensionEstimate, directions, estimate_dimension
from .simulation import SimConfig, generate, direction_accuracy, khat_study, level_study
from .standardize import Dataset, StandardizedSample, apply_log, inv_sqrt_spd, load_dataset, standardize

__version__ = "0.1.0"

__all__ = [
    "AccuracyError",
    "DataError",
    "Dataset",
    "DegenerateScalingError",
    "DimensionEstimate",
    "IhtError",
    "IhtFit",
    "IhtSpectrum",
    "MixtureSpec",
    "NullBases",
    "NumericError",
    "ParseError",
    "SimConfig",
    "SingularCovarianceError",
    "StandardizedSample",
    "TestResult",
    "ValidationError",
    "XiSample",
    "apply_log",
    "c2_hat",
    "chisq_sf",
    "direction_accuracy",
    "directions",
    "estimate_dimension",
    "fit_iht",
    "generate",
    "iht_spectrum",
    "inv_sqrt_spd",
    "khat_study",
    "level_study",
    "load_dataset",
    "m_matrix",
    "mixture_quantile",
    "mixture_sf",
    "null_bases",
    "run_test",
    "satterthwaite_sf",
    "standardize",
    "statistic",
    "weights",
    "xi_hat",
]
