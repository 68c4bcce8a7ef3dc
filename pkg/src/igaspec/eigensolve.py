"""Dense symmetric-definite generalized eigensolver K U = lambda M U."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg


class NumericalError(RuntimeError):
    """Numerical failure (ill-posed mass matrix, broken factorization)."""


@dataclass
class Spectrum:
    """Ascending eigenvalues, optional M-orthonormal eigenvectors as columns.

    `modes` carries per-value multi-indices for tensorized spectra.
    """

    values: np.ndarray
    vectors: np.ndarray | None = None
    meta: dict = field(default_factory=dict)
    modes: np.ndarray | None = None

    def __len__(self) -> int:
        return self.values.size


def _check_symmetric(A: np.ndarray, name: str) -> None:
    scale = np.abs(A).max() or 1.0
    if np.abs(A - A.T).max() > 1e-12 * scale:
        raise ValueError(f"{name} is not symmetric")


def gevp(pair, want_vectors: bool = True) -> Spectrum:
    """Full ascending spectrum of K U = lambda M U for SPD M.

    Eigenvectors satisfy U^T M U = I and U^T K U = diag(values); the sign of
    each is fixed by making its largest-magnitude component positive.
    """
    K, M = pair.K, pair.M
    _check_symmetric(K, "stiffness")
    _check_symmetric(M, "mass")
    try:
        np.linalg.cholesky(M)
    except np.linalg.LinAlgError as exc:
        raise NumericalError("mass matrix is not positive definite") from exc
    try:
        if want_vectors:
            values, vectors = scipy.linalg.eigh(K, M)
        else:
            values = scipy.linalg.eigh(K, M, eigvals_only=True)
            vectors = None
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as exc:
        raise NumericalError(f"generalized eigensolve failed: {exc}") from exc
    if vectors is not None:
        lead = np.argmax(np.abs(vectors), axis=0)
        signs = np.sign(vectors[lead, np.arange(vectors.shape[1])])
        signs[signs == 0] = 1.0
        vectors = vectors * signs
    meta = {
        "kind": pair.kind,
        "degree": pair.degree,
        "elements": pair.elements,
        "corrected": pair.corrected,
    }
    return Spectrum(values, vectors, meta)


def rayleigh_residual(pair, lam: float, u: np.ndarray) -> float:
    """Scaled residual ||K u - lam M u|| / ((||K||_F + |lam| ||M||_F) ||u||)."""
    u = np.asarray(u, dtype=float)
    if u.shape != (pair.dim,):
        raise ValueError(f"vector length {u.shape} does not match dimension {pair.dim}")
    norm_u = np.linalg.norm(u)
    if norm_u == 0.0:
        raise ValueError("zero vector has no Rayleigh residual")
    scale = np.linalg.norm(pair.K, "fro") + abs(lam) * np.linalg.norm(pair.M, "fro")
    return float(np.linalg.norm(pair.K @ u - lam * (pair.M @ u)) / (scale * norm_u))
