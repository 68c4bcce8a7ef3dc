"""Toeplitz-plus-boundary eigenstructure and dispersion relations.

Uniform-grid stiffness/mass pairs here are banded Toeplitz matrices with a
modified corner block; for two families of corner modification the
generalized eigenpairs are known in closed form (sine eigenvectors for the
zero-boundary family, half-offset cosine eigenvectors for the reflecting
family). This module builds those matrices, evaluates the closed-form
eigenpairs, applies the infinite-penalty constraint reduction that produces
the explicit reduced cubic-Dirichlet and quadratic-Neumann pairs, and
evaluates the interior and boundary-row dispersion relations.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .assembly import MatrixPair, ProblemKind
from .eigensolve import NumericalError, Spectrum


class BoundaryCase(enum.Enum):
    """Corner-block family: SINE subtracts the block, COSINE adds it."""

    SINE = "sine"      # sin(j pi k h) eigenvectors, h = 1/(n+1)
    COSINE = "cosine"  # cos(j pi (k-1/2) h) eigenvectors, h = 1/n


@dataclass(frozen=True)
class ToeplitzBoundarySpec:
    """Symbol coefficients and corner rule for a Toeplitz-plus-boundary pencil."""

    mu: tuple[float, ...]
    nu: tuple[float, ...]
    m: int
    n: int
    case: BoundaryCase

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("half-bandwidth m must be >= 1")
        if len(self.mu) != self.m + 1 or len(self.nu) != self.m + 1:
            raise ValueError("coefficient lists must have length m + 1")
        if self.n <= 2 * self.m:
            raise ValueError("dimension n must exceed 2m")


def _banded_toeplitz(xi, n: int) -> np.ndarray:
    col = np.zeros(n)
    col[: len(xi)] = xi
    return scipy.linalg.toeplitz(col)


def _corner_block(xi, m: int, n: int, case: BoundaryCase) -> np.ndarray:
    """Corner modification H, persymmetrically mirrored to both ends."""
    H = np.zeros((n, n))
    if case is BoundaryCase.SINE:
        # 1-based rule: H[j, k] = xi[j + k], k = 1..m-j, j = 1..m-1
        for j in range(m - 1):
            for k in range(m - 1 - j):
                H[j, k] = xi[j + k + 2]
                H[n - 1 - j, n - 1 - k] = xi[j + k + 2]
    else:
        # 1-based rule: H[j, k] = xi[j + k - 1], k = 1..m-j+1, j = 1..m
        for j in range(m):
            for k in range(m - j):
                H[j, k] = xi[j + k + 1]
                H[n - 1 - j, n - 1 - k] = xi[j + k + 1]
    return H


def _toeplitz_plus_boundary(xi, m: int, n: int, case: BoundaryCase) -> np.ndarray:
    G = _banded_toeplitz(xi, n)
    H = _corner_block(xi, m, n, case)
    return G - H if case is BoundaryCase.SINE else G + H


def build_toeplitz_boundary(spec: ToeplitzBoundarySpec) -> tuple[np.ndarray, np.ndarray]:
    """Pencil matrices (A, B) from the symbol coefficients and corner rule."""
    A = _toeplitz_plus_boundary(spec.mu, spec.m, spec.n, spec.case)
    B = _toeplitz_plus_boundary(spec.nu, spec.m, spec.n, spec.case)
    return A, B


def _symbol(xi, theta):
    total = np.full_like(np.asarray(theta, dtype=float), xi[0])
    for l in range(1, len(xi)):
        total = total + 2.0 * xi[l] * np.cos(l * np.asarray(theta, dtype=float))
    return total


def _sign_fix(vectors: np.ndarray) -> np.ndarray:
    lead = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[lead, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


def analytical_eigenpairs(spec: ToeplitzBoundarySpec) -> Spectrum:
    """Closed-form eigenpairs of A X = lambda B X, ascending in lambda.

    Eigenvalues are the symbol ratio sampled at theta_j = j*pi*h, with sine
    eigenvectors (h = 1/(n+1), j = 1..n) or half-offset cosine eigenvectors
    (h = 1/n, j = 0..n-1). Vectors are normalized to unit Euclidean norm.
    """
    n, m = spec.n, spec.m
    if spec.case is BoundaryCase.SINE:
        h = 1.0 / (n + 1)
        j = np.arange(1, n + 1)
        k = np.arange(1, n + 1)
        vectors = np.sin(math.pi * h * np.outer(k, j))
    else:
        h = 1.0 / n
        j = np.arange(0, n)
        k = np.arange(1, n + 1)
        vectors = np.cos(math.pi * h * np.outer(k - 0.5, j))
    theta = j * math.pi * h
    num = _symbol(spec.mu, theta)
    den = _symbol(spec.nu, theta)
    scale = np.abs(den).max()
    if np.any(np.abs(den) <= 1e-14 * scale):
        raise NumericalError("denominator symbol vanishes: closed form does not apply")
    values = num / den
    vectors = vectors / np.linalg.norm(vectors, axis=0)
    order = np.argsort(values, kind="stable")
    return Spectrum(values[order], _sign_fix(vectors[:, order]),
                    {"case": spec.case.value, "m": m, "n": n})


# Interior symbol coefficients of the reduced uniform-grid pairs, as exact
# rationals: stiffness scaled by 1/h, mass by h.
CUBIC_DIRICHLET_STIFFNESS = (2 / 3, -1 / 8, -1 / 5, -1 / 120)
CUBIC_DIRICHLET_MASS = (151 / 315, 397 / 1680, 1 / 42, 1 / 5040)
QUADRATIC_NEUMANN_STIFFNESS = (1.0, -1 / 3, -1 / 6)
QUADRATIC_NEUMANN_MASS = (11 / 20, 13 / 60, 1 / 120)


def reduced_cubic_dirichlet(N: int) -> MatrixPair:
    """Explicit (N-1)x(N-1) infinite-penalty cubic Dirichlet pair, h = 1/N."""
    if N < 6:
        raise ValueError("reduced cubic pair needs N >= 6")
    n, h = N - 1, 1.0 / N
    K = _toeplitz_plus_boundary(CUBIC_DIRICHLET_STIFFNESS, 3, n, BoundaryCase.SINE) / h
    M = _toeplitz_plus_boundary(CUBIC_DIRICHLET_MASS, 3, n, BoundaryCase.SINE) * h
    return MatrixPair(K, M, ProblemKind.DIRICHLET, 3, N, corrected=True,
                      meta={"reduction": "infinite-penalty"})


def reduced_quadratic_neumann(N: int) -> MatrixPair:
    """Explicit NxN infinite-penalty quadratic Neumann pair, h = 1/N."""
    if N < 5:
        raise ValueError("reduced quadratic pair needs N >= 5")
    h = 1.0 / N
    K = _toeplitz_plus_boundary(QUADRATIC_NEUMANN_STIFFNESS, 2, N, BoundaryCase.COSINE) / h
    M = _toeplitz_plus_boundary(QUADRATIC_NEUMANN_MASS, 2, N, BoundaryCase.COSINE) * h
    return MatrixPair(K, M, ProblemKind.NEUMANN, 2, N, corrected=True,
                      meta={"reduction": "infinite-penalty"})


def infinite_penalty_constraints(kind: ProblemKind, p: int, dim: int) -> list[tuple[int, int, float]]:
    """Endpoint constraints (i, j, c) meaning c*U_i - U_j = 0 at infinite penalty.

    Only the two analyzed cases are available: cubic Dirichlet (second
    derivative vanishing at the ends gives 3*U_first = U_second) and
    quadratic Neumann (first derivative vanishing gives U_first = U_second).
    """
    if kind is ProblemKind.DIRICHLET and p == 3:
        return [(0, 1, 3.0), (dim - 1, dim - 2, 3.0)]
    if kind is ProblemKind.NEUMANN and p == 2:
        return [(0, 1, 1.0), (dim - 1, dim - 2, 1.0)]
    raise ValueError(
        f"infinite penalty reduction is only available for cubic {ProblemKind.DIRICHLET.value} "
        f"and quadratic {ProblemKind.NEUMANN.value}, not degree {p} {kind.value}"
    )


def constraint_reduce(pair: MatrixPair, constraints) -> MatrixPair:
    """Symmetric congruence elimination of endpoint constraints.

    Each constraint (i, j, c) encodes c*U_i - U_j = 0; column i scaled by 1/c
    is folded into column j, likewise for rows, then row/column i is removed.
    Implemented as P^T A P with the prolongation P that maps retained
    coefficients back to the full vector.
    """
    dim = pair.dim
    folds: dict[int, tuple[int, float]] = {}
    for i, j, c in constraints:
        if not (0 <= i < dim and 0 <= j < dim):
            raise ValueError(f"constraint index out of range: ({i}, {j})")
        if i == j:
            raise ValueError("constraint cannot tie an index to itself")
        if c == 0.0:
            raise ValueError("constraint coefficient must be nonzero")
        if i in folds:
            raise ValueError(f"index {i} constrained twice")
        folds[i] = (j, float(c))
    for i, (j, _) in folds.items():
        if j in folds:
            raise ValueError(f"conflicting constraints: target {j} is itself constrained")
    retained = [k for k in range(dim) if k not in folds]
    pos = {k: idx for idx, k in enumerate(retained)}
    P = np.zeros((dim, len(retained)))
    for k in retained:
        P[k, pos[k]] = 1.0
    for i, (j, c) in folds.items():
        P[i, pos[j]] = 1.0 / c
    return MatrixPair(P.T @ pair.K @ P, P.T @ pair.M @ P, pair.kind, pair.degree,
                      pair.elements, corrected=True,
                      meta={"reduction": "infinite-penalty"})


def _cubic_dirichlet_value(theta):
    c1, c2, c3 = np.cos(theta), np.cos(2 * theta), np.cos(3 * theta)
    return -42.0 + 1008.0 * (52.0 + 49.0 * c1 + 4.0 * c2) / (
        1208.0 + 1191.0 * c1 + 120.0 * c2 + c3)


def _quadratic_neumann_value(theta):
    c1, c2 = np.cos(theta), np.cos(2 * theta)
    return -20.0 + 240.0 * (3.0 + 2.0 * c1) / (33.0 + 26.0 * c1 + c2)


def analytical_spectrum_cubic_dirichlet(N: int) -> Spectrum:
    """Closed-form spectrum of the reduced cubic Dirichlet pair, j = 1..N-1."""
    if N < 2:
        raise ValueError("need N >= 2")
    h = 1.0 / N
    j = np.arange(1, N)
    values = N**2 * _cubic_dirichlet_value(j * math.pi * h)
    if np.any(np.diff(values) <= 0):
        raise NumericalError("closed-form cubic spectrum is not increasing in j")
    k = np.arange(1, N)
    vectors = np.sin(math.pi * h * np.outer(k, j))
    vectors = _sign_fix(vectors / np.linalg.norm(vectors, axis=0))
    return Spectrum(values, vectors,
                    {"kind": ProblemKind.DIRICHLET, "degree": 3, "elements": N,
                     "corrected": True, "closed_form": True})


def analytical_spectrum_quadratic_neumann(N: int) -> Spectrum:
    """Closed-form spectrum of the reduced quadratic Neumann pair, j = 0..N-1.

    The first eigenvalue (constant mode) is exactly zero.
    """
    if N < 2:
        raise ValueError("need N >= 2")
    h = 1.0 / N
    j = np.arange(0, N)
    values = N**2 * _quadratic_neumann_value(j * math.pi * h)
    if np.any(np.diff(values) <= 0):
        raise NumericalError("closed-form quadratic spectrum is not increasing in j")
    k = np.arange(1, N + 1)
    vectors = np.cos(math.pi * h * np.outer(k - 0.5, j))
    vectors = _sign_fix(vectors / np.linalg.norm(vectors, axis=0))
    return Spectrum(values, vectors,
                    {"kind": ProblemKind.NEUMANN, "degree": 2, "elements": N,
                     "corrected": True, "closed_form": True})


CUBIC_DIRICHLET = "cubic-dirichlet"
QUADRATIC_NEUMANN = "quadratic-neumann"
DISPERSION_CASES = (CUBIC_DIRICHLET, QUADRATIC_NEUMANN)

# Small-frequency behavior of the relations: interior error coefficients
# (on Lambda^4 resp. Lambda^3), boundary-row limits/coefficients.
CUBIC_INTERIOR_ERROR_COEFF = 1.0 / 30240.0
NEUMANN_INTERIOR_ERROR_COEFF = 1.0 / 720.0
CUBIC_BOUNDARY_LIMITS = (1302 / 1073, 518 / 1769, 42 / 941, 14 / 13439)
NEUMANN_BOUNDARY_ERROR_COEFFS = (1 / 60, -1 / 30)


def _check_omega(omega_h) -> np.ndarray:
    omega = np.asarray(omega_h, dtype=float)
    if np.any(omega <= 0.0) or np.any(omega > math.pi):
        raise ValueError("omega_h must lie in (0, pi]")
    return omega


def dispersion_interior(case: str, omega_h):
    """Interior-row dispersion value Lambda^h = h^2 lambda^h at frequency omega_h."""
    omega = _check_omega(omega_h)
    if case == CUBIC_DIRICHLET:
        out = _cubic_dirichlet_value(omega)
    elif case == QUADRATIC_NEUMANN:
        out = _quadratic_neumann_value(omega)
    else:
        raise ValueError(f"unknown dispersion case {case!r}; expected one of {DISPERSION_CASES}")
    return float(out) if np.isscalar(omega_h) else out


def dispersion_boundary_rows(case: str, omega_h) -> list:
    """Boundary-row dispersion values of the uncorrected uniform-grid pairs.

    Cubic Dirichlet has four distinct boundary rows; the first two carry
    their full relations, the last two only their zero-frequency limits
    (returned as constants). Quadratic Neumann has two boundary rows, both
    with full relations.
    """
    omega = _check_omega(omega_h)
    c1, c2 = np.cos(omega), np.cos(2 * omega)
    if case == CUBIC_DIRICHLET:
        c3, c4 = np.cos(3 * omega), np.cos(4 * omega)
        row1 = -42.0 + 2016.0 * (10.0 + 11.0 * c1 + 2.0 * c2) / (
            430.0 + 526.0 * c1 + 116.0 * c2 + c3)
        row2 = -42.0 + 4032.0 * (40.0 + 76.0 * c1 + 47.0 * c2 + 4.0 * c3) / (
            3841.0 + 7066.0 * c1 + 4532.0 * c2 + 478.0 * c3 + 4.0 * c4)
        row3 = np.full_like(omega, CUBIC_BOUNDARY_LIMITS[2])
        row4 = np.full_like(omega, CUBIC_BOUNDARY_LIMITS[3])
        rows = [row1, row2, row3, row4]
    elif case == QUADRATIC_NEUMANN:
        row1 = 40.0 * np.sin(omega) ** 2 / (15.0 + 24.0 * c1 + c2)
        row2 = -20.0 + 200.0 / (9.0 + c1)
        rows = [row1, row2]
    else:
        raise ValueError(f"unknown dispersion case {case!r}; expected one of {DISPERSION_CASES}")
    if np.isscalar(omega_h):
        return [float(r) for r in rows]
    return rows
