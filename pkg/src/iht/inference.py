"""Sequential dimension estimation and direction recovery.

Starting at j = 0, the rank-j hypothesis is tested and j incremented on
rejection; the first non-rejection gives the dimension estimate k_hat.
Estimated directions are the leading eigenvectors of n * B_hat B_hat' in
the standardized scale, mapped back through the standardizing transform
for the original predictor scale.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import IhtSpectrum, fit_iht, iht_spectrum
from .dimension_tests import TestResult, run_test
from .errors import NumericError
from .standardize import Dataset, standardize

REFERENCES = ("chisq", "weighted")


@dataclass(frozen=True)
class DimensionEstimate:
    """Estimated dimension with the test trail and recovered directions.

    ``trail`` holds the TestResult for j = 0..stop; when k_hat < p its last
    entry is the first non-rejection. directions_z spans the estimate in the
    standardized scale (orthonormal columns); directions_x maps each column
    through the inverse-square-root transform, renormalized to unit length.
    """

    k_hat: int
    alpha: float
    reference: str
    trail: tuple[TestResult, ...]
    directions_z: np.ndarray
    directions_x: np.ndarray


def directions(spectrum: IhtSpectrum, k: int, sigma_inv_sqrt) -> tuple[np.ndarray, np.ndarray]:
    """First k directions in standardized and original predictor scales."""
    p = spectrum.p
    if not 1 <= k <= p:
        raise ValueError(f"k={k} out of range [1, {p}]")
    dz = spectrum.left_vectors[:, :k].copy()
    dx = np.asarray(sigma_inv_sqrt) @ dz
    dx = dx / np.linalg.norm(dx, axis=0)
    return dz, dx


def estimate_dimension(
    d: Dataset, alpha: float = 0.05, reference: str = "weighted"
) -> DimensionEstimate:
    """Sequential rank tests at constant level alpha.

    The decision at each step uses the chosen reference's p-value, though
    both p-values are computed and recorded. Stops at the first p-value
    above alpha; if every hypothesis through j = p - 1 is rejected the
    estimate is k_hat = p.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    if reference not in REFERENCES:
        raise ValueError(f"reference must be one of {REFERENCES}, got {reference!r}")
    s = standardize(d)
    fit = fit_iht(s)
    spectrum = iht_spectrum(fit)
    p = d.p
    trail: list[TestResult] = []
    k_hat = p
    for j in range(p):
        try:
            res = run_test(s, fit, spectrum, j, reference="both")
        except NumericError as exc:
            exc.trail = tuple(trail)
            raise
        trail.append(res)
        if res.p_value(reference) > alpha:
            k_hat = j
            break
    if k_hat > 0:
        dz, dx = directions(spectrum, k_hat, s.sigma_inv_sqrt)
    else:
        dz = np.empty((p, 0))
        dx = np.empty((p, 0))
    return DimensionEstimate(
        k_hat=k_hat,
        alpha=alpha,
        reference=reference,
        trail=tuple(trail),
        directions_z=dz,
        directions_x=dx,
    )
