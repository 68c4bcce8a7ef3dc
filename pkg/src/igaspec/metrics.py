"""Exact continuum spectra, eigenvalue/eigenfunction errors, rates, condition numbers.

Discrete and exact eigenvalues are paired purely by ascending sorted order.
Relative eigenvalue errors are signed (no absolute value), so the positivity
guaranteed by the minimax principle for the uncorrected Galerkin method is
observable. Eigenfunction errors are 1D only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .assembly import ProblemKind
from .eigensolve import Spectrum
from .quadrature import QuadratureRule, gauss_legendre, map_to_element
from .splines import SplineSpace, eval_basis


@dataclass
class ExactSpectrum:
    """First eigenvalues of the continuum problem on [0,1]^dim, with multi-indices."""

    kind: ProblemKind
    dim: int
    values: np.ndarray
    indices: np.ndarray  # (count, dim) integer lattice indices

    def eigenfunction_1d(self, mode: int):
        """(u, u') callables for the 1D eigenfunction paired with `mode`.

        Unit L2 norm: sqrt(2) sin(j pi x) / sqrt(2) cos(j pi x), constant 1
        for the Neumann zero mode.
        """
        if self.dim != 1:
            raise ValueError("closed-form eigenfunctions are provided in 1D only")
        j = int(self.indices[mode, 0])
        w = j * math.pi
        if self.kind is ProblemKind.DIRICHLET:
            return (lambda x: math.sqrt(2.0) * np.sin(w * x),
                    lambda x: math.sqrt(2.0) * w * np.cos(w * x))
        if j == 0:
            return (lambda x: np.ones_like(np.asarray(x, dtype=float)),
                    lambda x: np.zeros_like(np.asarray(x, dtype=float)))
        return (lambda x: math.sqrt(2.0) * np.cos(w * x),
                lambda x: -math.sqrt(2.0) * w * np.sin(w * x))


def exact_spectrum(kind: ProblemKind, dim: int, count: int) -> ExactSpectrum:
    """Smallest `count` eigenvalues (j_1^2 + ... + j_d^2) pi^2, ascending.

    Index lattice starts at 1 per axis for Dirichlet, at 0 for Neumann. Ties
    are ordered lexicographically by multi-index.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if not 1 <= dim <= 3:
        raise ValueError("dim must be 1, 2, or 3")
    start = 1 if kind is ProblemKind.DIRICHLET else 0
    jmax = max(2, int(math.ceil((count * 2) ** (1.0 / dim))) + 1)
    while True:
        axis = np.arange(start, jmax + 1)
        grids = np.meshgrid(*([axis] * dim), indexing="ij")
        sq = sum(g.astype(float) ** 2 for g in grids)
        # a sum is certainly within the enumerated lattice if it cannot be
        # reached with any index above jmax
        cutoff = jmax**2 + (dim - 1) * start**2
        flat = sq.ravel()
        indices = np.stack([g.ravel() for g in grids], axis=1)
        keep = flat <= cutoff
        if np.count_nonzero(keep) >= count:
            flat, indices = flat[keep], indices[keep]
            break
        jmax *= 2
    order = np.lexsort(tuple(indices[:, d] for d in reversed(range(dim))) + (flat,))
    order = order[:count]
    return ExactSpectrum(kind, dim, math.pi**2 * flat[order], indices[order])


@dataclass
class ErrorReport:
    """Per-mode errors, aligned to the ascending sorted mode index."""

    rel: np.ndarray | None = None        # signed (lambda_h - lambda)/lambda
    flagged: np.ndarray | None = None    # modes where rel is an absolute error
    h1: np.ndarray | None = None         # |u - u_h|_1
    l2: np.ndarray | None = None         # ||u - u_h||_0
    h1_scaled: np.ndarray | None = None  # |u - u_h|_1 / lambda
    meta: dict = field(default_factory=dict)


def eigenvalue_errors(spec: Spectrum, exact: ExactSpectrum) -> ErrorReport:
    """Signed relative eigenvalue errors, paired by ascending order.

    A zero exact eigenvalue (Neumann constant mode) cannot carry a relative
    error; that entry holds the absolute discrete value and is flagged.
    """
    m = len(spec)
    if m > exact.values.size:
        raise ValueError(f"exact spectrum too short: {exact.values.size} < {m}")
    lam_ex = exact.values[:m]
    lam_h = spec.values
    flagged = lam_ex == 0.0
    rel = np.empty(m)
    rel[flagged] = lam_h[flagged]
    rel[~flagged] = (lam_h[~flagged] - lam_ex[~flagged]) / lam_ex[~flagged]
    return ErrorReport(rel=rel, flagged=flagged, meta=dict(spec.meta))


def _full_coefficients(space: SplineSpace, spec: Spectrum) -> np.ndarray:
    """Eigenvector columns padded back to the full basis (Dirichlet zeros)."""
    n = space.dim
    vec = spec.vectors
    if vec.shape[0] == n:
        return vec
    if vec.shape[0] == n - 2:
        full = np.zeros((n, vec.shape[1]))
        full[1:-1] = vec
        return full
    raise ValueError(f"eigenvectors of length {vec.shape[0]} do not fit a space of dimension {n}")


def eigenfunction_errors(space: SplineSpace, spec: Spectrum, exact: ExactSpectrum,
                         rule: QuadratureRule | None = None) -> ErrorReport:
    """H1-seminorm and L2 eigenfunction errors for every mode, 1D only.

    Each discrete eigenfunction is normalized to unit L2 norm and sign-aligned
    by a positive L2 inner product with its exact partner before the error
    quadrature. Near-zero inner products (sign ambiguity) are flagged.
    """
    if exact.dim != 1:
        raise ValueError("eigenfunction errors are reported in 1D only")
    if spec.vectors is None:
        raise ValueError("spectrum carries no eigenvectors")
    m = len(spec)
    if m > exact.values.size:
        raise ValueError(f"exact spectrum too short: {exact.values.size} < {m}")
    if rule is None:
        rule = gauss_legendre(min(16, space.degree + 10))
    coeff = _full_coefficients(space, spec)
    p = space.degree
    nodes = space.grid.nodes
    n_el = space.grid.n_elements

    xs_all, ws_all = [], []
    uh_all, duh_all = [], []
    for e in range(n_el):
        xs, ws = map_to_element(rule, nodes[e], nodes[e + 1])
        B0 = np.empty((xs.size, p + 1))
        B1 = np.empty((xs.size, p + 1))
        for g, x in enumerate(xs):
            _, B0[g] = eval_basis(space, float(x), 0)
            _, B1[g] = eval_basis(space, float(x), 1)
        c = coeff[e:e + p + 1]
        xs_all.append(xs)
        ws_all.append(ws)
        uh_all.append(B0 @ c)
        duh_all.append(B1 @ c)
    xs = np.concatenate(xs_all)
    ws = np.concatenate(ws_all)
    uh = np.vstack(uh_all)       # (points, modes)
    duh = np.vstack(duh_all)

    u_ex = np.empty_like(uh)
    du_ex = np.empty_like(uh)
    for j in range(m):
        u, du = exact.eigenfunction_1d(j)
        u_ex[:, j] = u(xs)
        du_ex[:, j] = du(xs)

    norm2 = ws @ uh**2
    cross = ws @ (u_ex * uh)
    sign_flag = np.abs(cross) < 1e-8 * np.sqrt(norm2)
    scale = np.where(cross >= 0.0, 1.0, -1.0) / np.sqrt(norm2)

    diff_u = u_ex - uh * scale
    diff_du = du_ex - duh * scale
    l2 = np.sqrt(ws @ diff_u**2)
    h1 = np.sqrt(ws @ diff_du**2)
    lam_ex = exact.values[:m]
    h1_scaled = np.full(m, np.nan)
    nz = lam_ex > 0.0
    h1_scaled[nz] = h1[nz] / lam_ex[nz]
    return ErrorReport(h1=h1, l2=l2, h1_scaled=h1_scaled, flagged=sign_flag,
                       meta=dict(spec.meta))


def convergence_rate(elements, errors) -> float:
    """Least-squares slope of log(error) against log(1/N) over mesh levels."""
    elements = np.asarray(elements, dtype=float)
    errors = np.asarray(errors, dtype=float)
    positive = errors > 0.0
    if np.count_nonzero(positive) < 2:
        raise ValueError("need at least two levels with positive errors")
    slope = np.polyfit(np.log(1.0 / elements[positive]), np.log(errors[positive]), 1)[0]
    return float(slope)


@dataclass
class ConditionReport:
    """Spectral condition numbers of the pencil before/after correction."""

    gamma: float        # lambda_max / lambda_min, uncorrected
    gamma_tilde: float  # corrected
    rho: float          # gamma / gamma_tilde
    varrho: float       # 100 * (1 - 1/rho), percent
    lam_min: float
    lam_max: float
    lam_min_dc: float
    lam_max_dc: float


def condition_report(spec_std: Spectrum, spec_dc: Spectrum) -> ConditionReport:
    """Condition-number reduction of the corrected pencil over the standard one."""
    lo, hi = float(spec_std.values[0]), float(spec_std.values[-1])
    lo_dc, hi_dc = float(spec_dc.values[0]), float(spec_dc.values[-1])
    if lo <= 0.0 or lo_dc <= 0.0:
        raise ValueError("condition numbers need strictly positive spectra (Dirichlet only)")
    gamma = hi / lo
    gamma_tilde = hi_dc / lo_dc
    rho = gamma / gamma_tilde
    return ConditionReport(gamma, gamma_tilde, rho, 100.0 * (1.0 - 1.0 / rho),
                           lo, hi, lo_dc, hi_dc)


def write_spectrum_csv(path, exact: ExactSpectrum, spec: Spectrum,
                       eig_report: ErrorReport, ef_report: ErrorReport | None = None,
                       header_meta: dict | None = None, max_modes: int | None = None) -> None:
    """Spectrum/error table: j, lambda_exact, lambda_h, rel_err[, h1_err, l2_err]."""
    m = len(spec)
    if max_modes is not None:
        m = min(m, max_modes)
    columns = "j,lambda_exact,lambda_h,rel_err"
    if ef_report is not None:
        columns += ",h1_err,l2_err"
    with open(path, "w") as fh:
        for key, value in (header_meta or {}).items():
            fh.write(f"# {key} = {value}\n")
        fh.write(f"# columns: {columns}\n")
        for j in range(m):
            row = [f"{j + 1}", f"{exact.values[j]:.17g}", f"{spec.values[j]:.17g}",
                   f"{eig_report.rel[j]:.17g}"]
            if ef_report is not None:
                row += [f"{ef_report.h1[j]:.17g}", f"{ef_report.l2[j]:.17g}"]
            fh.write(",".join(row) + "\n")
