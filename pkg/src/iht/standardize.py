"""Data ingestion and affine-invariant standardization.

The estimators downstream are built from the standardized sample
(Z_hat, Y_hat), where Z_hat has exact sample mean zero and sample
covariance I_p, and Y_hat has sample mean zero and sample variance one.
All moments here use divisor n, not n - 1.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import ParseError, SingularCovarianceError, ValidationError

DEFAULT_SING_TOL = 1e-12


@dataclass(frozen=True)
class Dataset:
    """Raw predictor matrix X (n x p), response y (n,), and column labels."""

    X: np.ndarray
    y: np.ndarray
    column_names: tuple[str, ...]
    response_name: str = "y"

    def __post_init__(self):
        X = np.asarray(self.X, dtype=float)
        y = np.asarray(self.y, dtype=float)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "column_names", tuple(self.column_names))
        if X.ndim != 2:
            raise ValidationError("predictor matrix must be 2-dimensional")
        n, p = X.shape
        if y.shape != (n,):
            raise ValidationError(
                f"response length {y.shape} does not match {n} predictor rows"
            )
        if len(self.column_names) != p:
            raise ValidationError(
                f"{len(self.column_names)} column names for {p} predictors"
            )
        if not np.isfinite(X).all() or not np.isfinite(y).all():
            raise ValidationError("non-finite value in dataset", constraint="finite")
        if n < p + 2:
            raise ValidationError(
                f"n < p + 2: need at least {p + 2} rows for {p} predictors, got {n}",
                constraint="n >= p + 2",
            )

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]


@dataclass(frozen=True)
class StandardizedSample:
    """Standardized predictors/response plus the transform that produced them.

    Z_hat = (X - x_mean) @ sigma_inv_sqrt and Y_hat = (y - y_mean) / y_sd,
    with sigma_inv_sqrt the symmetric inverse square root of the divisor-n
    sample covariance of X.
    """

    Z_hat: np.ndarray
    Y_hat: np.ndarray
    x_mean: np.ndarray
    sigma_inv_sqrt: np.ndarray
    y_mean: float
    y_sd: float

    @property
    def n(self) -> int:
        return self.Z_hat.shape[0]

    @property
    def p(self) -> int:
        return self.Z_hat.shape[1]


def load_dataset(path, response, delimiter=",") -> Dataset:
    """Read a delimited numeric table (first row = headers) into a Dataset.

    The named response column is extracted; all remaining columns become
    predictors in file order. Cell-level parse failures report the 1-based
    row and column of the offending entry.
    """
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise ParseError(f"cannot open {path}: {exc}") from exc
    with fh:
        reader = csv.reader(fh, delimiter=delimiter)
        rows = [row for row in reader if row and any(c.strip() for c in row)]
    if not rows:
        raise ParseError(f"{path}: empty file")
    header = [h.strip() for h in rows[0]]
    if response not in header:
        raise ValidationError(f"response column {response!r} not found in {header}")
    if header.count(response) > 1:
        raise ValidationError(f"duplicate response column {response!r}")
    if len(set(header)) != len(header):
        dupes = sorted({h for h in header if header.count(h) > 1})
        raise ValidationError(f"duplicate column names {dupes}")
    ridx = header.index(response)

    data = np.empty((len(rows) - 1, len(header)))
    for i, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise ParseError(
                f"row {i}: expected {len(header)} fields, got {len(row)}", row=i
            )
        for j, cell in enumerate(row):
            try:
                v = float(cell)
            except ValueError:
                raise ParseError(
                    f"row {i}, column {header[j]!r}: non-numeric cell {cell.strip()!r}",
                    row=i,
                    column=header[j],
                ) from None
            if not math.isfinite(v):
                raise ParseError(
                    f"row {i}, column {header[j]!r}: non-finite value {cell.strip()!r}",
                    row=i,
                    column=header[j],
                )
            data[i - 2, j] = v

    keep = [j for j in range(len(header)) if j != ridx]
    return Dataset(
        X=data[:, keep],
        y=data[:, ridx],
        column_names=tuple(header[j] for j in keep),
        response_name=response,
    )


def apply_log(d: Dataset, columns) -> Dataset:
    """Return a copy of ``d`` with natural logs applied to the named columns."""
    X = d.X.copy()
    for name in columns:
        if name not in d.column_names:
            raise ValidationError(f"log column {name!r} not among {d.column_names}")
        j = d.column_names.index(name)
        if np.any(X[:, j] <= 0):
            bad = int(np.argmax(X[:, j] <= 0)) + 2
            raise ValidationError(
                f"column {name!r} has non-positive entry at data row {bad}; "
                "cannot take log"
            )
        X[:, j] = np.log(X[:, j])
    return replace(d, X=X)


def inv_sqrt_spd(S, tol=DEFAULT_SING_TOL) -> np.ndarray:
    """Symmetric positive-definite inverse square root of a symmetric matrix.

    Returns the unique SPD matrix R with R @ S @ R = I, computed through a
    symmetric eigendecomposition. Eigenvalues at or below tol * max(eigenvalue)
    trigger SingularCovarianceError.
    """
    S = np.asarray(S, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {S.shape}")
    scale = np.abs(S).max()
    if scale > 0 and np.abs(S - S.T).max() > 1e-8 * scale:
        raise ValueError("matrix is not symmetric")
    vals, vecs = np.linalg.eigh((S + S.T) / 2.0)
    vmax = vals[-1]
    cut = tol * max(vmax, 0.0)
    if vmax <= 0 or vals[0] <= cut:
        i = int(np.argmin(vals))
        raise SingularCovarianceError(
            f"singular covariance: eigenvalue {vals[i]:.3e} at index {i} "
            f"(threshold {cut:.3e})",
            eigenvalue=float(vals[i]),
            index=i,
        )
    R = (vecs / np.sqrt(vals)) @ vecs.T
    return (R + R.T) / 2.0


def standardize(d: Dataset, tol=DEFAULT_SING_TOL) -> StandardizedSample:
    """Produce the standardized sample (Z_hat, Y_hat) from raw data.

    Z_hat has columns with exact zero mean and (1/n) Z_hat' Z_hat = I_p;
    Y_hat has zero mean and unit second moment. Divisor-n moments throughout.
    """
    X, y = d.X, d.y
    n = d.n
    col_sd = X.std(axis=0)
    col_scale = np.maximum(np.abs(X).max(axis=0), 1.0)
    for j, name in enumerate(d.column_names):
        if col_sd[j] <= 1e-14 * col_scale[j]:
            raise ValidationError(
                f"constant predictor column {name!r}", constraint="var(X_j) > 0"
            )
    y_mean = float(y.mean())
    y_var = float(np.mean((y - y_mean) ** 2))
    if y_var <= 1e-28 * max(1.0, abs(y_mean)) ** 2:
        raise ValidationError(
            f"zero response variance in column {d.response_name!r}",
            constraint="var(y) > 0",
        )
    y_sd = math.sqrt(y_var)

    x_mean = X.mean(axis=0)
    Xc = X - x_mean
    sigma = Xc.T @ Xc / n
    R = inv_sqrt_spd(sigma, tol=tol)
    return StandardizedSample(
        Z_hat=Xc @ R,
        Y_hat=(y - y_mean) / y_sd,
        x_mean=x_mean,
        sigma_inv_sqrt=R,
        y_mean=y_mean,
        y_sd=y_sd,
    )
