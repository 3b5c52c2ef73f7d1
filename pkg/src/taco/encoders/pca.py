"""Principal-component features for tactile images.

The basis is fit once on flattened training samples and frozen; encoders then
project mean-centered inputs onto the leading components. Fitting uses an SVD
of the centered data matrix, which matches the eigendecomposition of the
sample covariance but is better conditioned.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

DEFAULT_COMPONENTS = 64


class RankDeficientWarning(UserWarning):
    pass


@dataclass
class PCABasis:
    """Orthonormal principal axes with their explained variances."""

    mean: np.ndarray  # (dim,)
    components: np.ndarray  # (k, dim), rows orthonormal
    explained_variance: np.ndarray  # (k,), non-increasing

    def __post_init__(self):
        self.mean = np.asarray(self.mean, dtype=np.float64)
        self.components = np.asarray(self.components, dtype=np.float64)
        self.explained_variance = np.asarray(self.explained_variance, dtype=np.float64)
        if self.components.ndim != 2 or self.components.shape[1] != self.mean.shape[0]:
            raise ValueError("components must be (k, dim) matching mean")
        if np.any(np.diff(self.explained_variance) > 1e-12):
            raise ValueError("explained_variance must be non-increasing")
        gram = self.components @ self.components.T
        if not np.allclose(gram, np.eye(len(self.components)), atol=1e-6):
            raise ValueError("components must be orthonormal")

    @property
    def k(self) -> int:
        return self.components.shape[0]

    @property
    def dim(self) -> int:
        return self.mean.shape[0]

    def save(self, path) -> Path:
        path = Path(path)
        np.savez(
            path,
            mean=self.mean,
            components=self.components,
            explained_variance=self.explained_variance,
        )
        return path if path.suffix == ".npz" else path.with_suffix(path.suffix + ".npz")

    @classmethod
    def load(cls, path) -> "PCABasis":
        with np.load(path) as z:
            return cls(z["mean"], z["components"], z["explained_variance"])


def fit_pca(samples: np.ndarray, k: int) -> PCABasis:
    """Leading-k principal axes of (N, dim) samples by descending variance.

    Variances use the sample-covariance convention (divisor N-1), so they
    equal the eigenvalues of ``np.cov(samples.T)``. Requires N >= 2 and
    k <= min(N-1, dim). Warns when the data cannot fill k directions.
    """
    samples = np.asarray(samples, dtype=np.float64)
    if samples.ndim != 2:
        samples = samples.reshape(len(samples), -1)
    n, dim = samples.shape
    if n < 2:
        raise ValueError("fit_pca needs at least 2 samples")
    if k < 1 or k > min(n - 1, dim):
        raise ValueError(f"k={k} must be in [1, min(N-1, dim)] = [1, {min(n - 1, dim)}]")

    mean = samples.mean(axis=0)
    centered = samples - mean
    _, svals, vt = np.linalg.svd(centered, full_matrices=False)
    variance = (svals**2) / (n - 1)
    components = vt[:k]
    explained = variance[:k]

    # deterministic sign: largest-magnitude entry of each axis is positive
    flip = np.sign(components[np.arange(k), np.abs(components).argmax(axis=1)])
    flip[flip == 0] = 1.0
    components = components * flip[:, None]

    if np.any(explained <= 1e-12 * max(explained[0], 1e-300)):
        warnings.warn(
            "requested components exceed the data's effective rank; trailing "
            "explained variances are zero",
            RankDeficientWarning,
            stacklevel=2,
        )
    return PCABasis(mean=mean, components=components, explained_variance=explained)


def pca_coefficients(x: np.ndarray, basis: PCABasis) -> np.ndarray:
    """Projection coefficients of flattened input(s) onto the basis axes."""
    x = np.asarray(x, dtype=np.float64)
    flat = x.reshape(-1) if x.ndim == 1 else x.reshape(x.shape[0], -1)
    if flat.shape[-1] != basis.dim:
        raise ValueError(
            f"input flattens to {flat.shape[-1]} values, basis expects {basis.dim}"
        )
    return (flat - basis.mean) @ basis.components.T


def pca_reconstruct(coeffs: np.ndarray, basis: PCABasis) -> np.ndarray:
    """Inverse of pca_coefficients up to the truncation residual."""
    return np.asarray(coeffs) @ basis.components + basis.mean
