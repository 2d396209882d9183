"""Core IHT objects: regression seed, Hessian transform, iterated matrix.

From a standardized sample we form the regression vector beta_hat, the
residual-weighted second-moment matrix H_hat, and the p-column matrix
B_hat whose columns are beta_hat transformed repeatedly by H_hat. The
rank of B_hat is the dimension being tested; its singular structure
(spectrum plus left/right null bases) feeds the tests.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .standardize import StandardizedSample


@dataclass(frozen=True)
class IhtFit:
    """beta_hat, residuals, H_hat and the iterated-transform matrices.

    B_hat has columns (b_0, ..., b_{p-1}) with b_0 = beta_hat and
    b_{j+1} = H_hat @ b_j; B0_hat is its first p - 1 columns.
    """

    beta_hat: np.ndarray
    e_hat: np.ndarray
    H_hat: np.ndarray
    B_hat: np.ndarray
    B0_hat: np.ndarray
    n: int

    @property
    def p(self) -> int:
        return self.B_hat.shape[0]


@dataclass(frozen=True)
class IhtSpectrum:
    """Eigenvalues of n * B_hat B_hat' with the paired singular bases.

    lambdas are descending; left_vectors / right_vectors are the orthonormal
    eigenvector matrices of B_hat B_hat' and B_hat' B_hat in matching order.
    """

    lambdas: np.ndarray
    left_vectors: np.ndarray
    right_vectors: np.ndarray

    @property
    def p(self) -> int:
        return self.left_vectors.shape[0]


@dataclass(frozen=True)
class NullBases:
    """Trailing p - j columns of each singular basis, for hypothesized rank j."""

    j: int
    Gamma0: np.ndarray
    Psi0: np.ndarray


def fit_iht(s: StandardizedSample) -> IhtFit:
    """Fit the IHT objects from a standardized sample.

    beta_hat = (1/n) sum Y_i Z_i, e_i = Y_i - beta_hat' Z_i, and
    H_hat = (1/n) sum e_i Z_i Z_i', symmetrized to absorb rounding.
    Columns of B_hat come from iterated matrix-vector products, never
    explicit matrix powers.
    """
    Z, Y = s.Z_hat, s.Y_hat
    n, p = Z.shape
    beta = Z.T @ Y / n
    e = Y - Z @ beta
    H = (Z * e[:, None]).T @ Z / n
    H = (H + H.T) / 2.0
    B = np.empty((p, p))
    B[:, 0] = beta
    for j in range(1, p):
        B[:, j] = H @ B[:, j - 1]
    return IhtFit(
        beta_hat=beta,
        e_hat=e,
        H_hat=H,
        B_hat=B,
        B0_hat=B[:, : p - 1].copy(),
        n=n,
    )


def iht_spectrum(fit: IhtFit) -> IhtSpectrum:
    """Spectrum of n * B_hat B_hat' via the SVD of B_hat.

    Sign convention: each left singular vector has its largest-magnitude
    entry positive, with the right vector's sign slaved so that
    B_hat = sum sigma_i u_i v_i' still holds.
    """
    U, sv, Vt = np.linalg.svd(fit.B_hat)
    V = Vt.T
    for i in range(U.shape[1]):
        k = int(np.argmax(np.abs(U[:, i])))
        if U[k, i] < 0:
            U[:, i] = -U[:, i]
            V[:, i] = -V[:, i]
    return IhtSpectrum(
        lambdas=fit.n * sv**2,
        left_vectors=U,
        right_vectors=V,
    )


def null_bases(spectrum: IhtSpectrum, j: int) -> NullBases:
    """Bases of the estimated left/right null spaces under rank-j hypothesis.

    Takes the last p - j columns of each singular basis, preserving their
    descending-eigenvalue order.
    """
    p = spectrum.p
    if not 0 <= j <= p - 1:
        raise ValueError(f"hypothesized rank j={j} out of range [0, {p - 1}]")
    return NullBases(
        j=j,
        Gamma0=spectrum.left_vectors[:, j:].copy(),
        Psi0=spectrum.right_vectors[:, j:].copy(),
    )
