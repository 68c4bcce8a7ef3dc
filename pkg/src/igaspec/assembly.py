"""1D Galerkin assembly for the Laplace eigenproblem.

Builds the stiffness/mass pair K, M for Dirichlet (strong removal of the two
endpoint basis functions) and Neumann (natural, full basis) problems, plus
the boundary-penalized pair: even endpoint derivatives are penalized for
Dirichlet, odd ones for Neumann, with mesh-dependent scalings chosen so the
extra terms vanish for smooth eigenfunctions.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .quadrature import QuadratureRule, default_rule, map_to_element
from .splines import SplineSpace, boundary_derivative_row, eval_basis


class ProblemKind(enum.Enum):
    DIRICHLET = "dirichlet"
    NEUMANN = "neumann"


def alpha_order(p: int) -> int:
    """Number of penalized even-derivative orders for the Dirichlet problem."""
    if p < 1:
        raise ValueError("degree must be >= 1")
    return (p - 1) // 2


def beta_order(p: int) -> int:
    """Number of penalized odd-derivative orders for the Neumann problem."""
    if p < 1:
        raise ValueError("degree must be >= 1")
    return p // 2


def penalty_count(kind: ProblemKind, p: int) -> int:
    return alpha_order(p) if kind is ProblemKind.DIRICHLET else beta_order(p)


@dataclass(frozen=True)
class PenaltyConfig:
    """Penalty coefficients, one per derivative order; all default to 1."""

    kind: ProblemKind
    eta_a: tuple[float, ...]
    eta_b: tuple[float, ...]
    infinite: bool = False

    @classmethod
    def default(cls, kind: ProblemKind, p: int, infinite: bool = False) -> "PenaltyConfig":
        count = penalty_count(kind, p)
        ones = (1.0,) * count
        return cls(kind, ones, ones, infinite)

    def validate_for_degree(self, p: int) -> None:
        count = penalty_count(self.kind, p)
        if len(self.eta_a) != count or len(self.eta_b) != count:
            raise ValueError(
                f"{self.kind.value} degree {p} needs {count} coefficient(s) per list, "
                f"got {len(self.eta_a)}/{len(self.eta_b)}"
            )


@dataclass
class MatrixPair:
    """Symmetric stiffness K (units 1/length) and SPD mass M (units length)."""

    K: np.ndarray
    M: np.ndarray
    kind: ProblemKind
    degree: int
    elements: int
    corrected: bool = False
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.K = np.asarray(self.K, dtype=float)
        self.M = np.asarray(self.M, dtype=float)
        if self.K.shape != self.M.shape or self.K.ndim != 2 or self.K.shape[0] != self.K.shape[1]:
            raise ValueError("K and M must be square matrices of equal shape")

    @property
    def dim(self) -> int:
        return self.K.shape[0]


def assemble_standard(space: SplineSpace, kind: ProblemKind,
                      rule: QuadratureRule | None = None) -> MatrixPair:
    """Assemble K_kl = (theta_k', theta_l') and M_kl = (theta_k, theta_l) on [0, 1].

    Dirichlet removes the first and last basis function (dim n-2); Neumann
    keeps all n. Element loop in index order for reproducible summation.
    """
    p = space.degree
    if p < 1:
        raise ValueError("assembly needs degree >= 1")
    if rule is None:
        rule = default_rule(p)
    n = space.dim
    K = np.zeros((n, n))
    M = np.zeros((n, n))
    nodes = space.grid.nodes
    for e in range(space.grid.n_elements):
        xs, ws = map_to_element(rule, nodes[e], nodes[e + 1])
        B0 = np.empty((xs.size, p + 1))
        B1 = np.empty((xs.size, p + 1))
        for g, x in enumerate(xs):
            first, vals = eval_basis(space, float(x), 0)
            assert first == e, "active window must match the element index"
            B0[g] = vals
            _, B1[g] = eval_basis(space, float(x), 1)
        sl = slice(e, e + p + 1)
        M[sl, sl] += B0.T @ (ws[:, None] * B0)
        K[sl, sl] += B1.T @ (ws[:, None] * B1)
    if kind is ProblemKind.DIRICHLET:
        K = K[1:-1, 1:-1].copy()
        M = M[1:-1, 1:-1].copy()
    return MatrixPair(K, M, kind, p, space.grid.n_elements, corrected=False)


def assemble_penalty(space: SplineSpace, kind: ProblemKind, ell: int) -> np.ndarray:
    """Rank-<=2 endpoint penalty matrix for the ell-th correction term.

    S = g0 g0^T + g1 g1^T with g0, g1 the endpoint derivative rows of order
    2*ell (Dirichlet, restricted to the retained basis functions) or
    2*ell - 1 (Neumann).
    """
    if ell < 1:
        raise ValueError("penalty index must be >= 1")
    if ell > penalty_count(kind, space.degree):
        raise ValueError(f"penalty index {ell} exceeds the order count for degree {space.degree}")
    order = 2 * ell if kind is ProblemKind.DIRICHLET else 2 * ell - 1
    if order > space.degree:
        raise ValueError(f"derivative order {order} exceeds degree {space.degree}")
    g0, g1 = boundary_derivative_row(space, order)
    if kind is ProblemKind.DIRICHLET:
        g0, g1 = g0[1:-1], g1[1:-1]
    return np.outer(g0, g0) + np.outer(g1, g1)


def assemble_dc(space: SplineSpace, cfg: PenaltyConfig,
                rule: QuadratureRule | None = None) -> MatrixPair:
    """Assemble the boundary-corrected pair K~, M~.

    Dirichlet adds eta_a[l] * pi^2 * h^(6l-3) * S_l to K and
    eta_b[l] * h^(6l-1) * S_l to M; Neumann uses h^(6l-5) and h^(6l-3).
    h is the global mesh parameter h_max. For degrees with no penalized
    orders the output equals the standard pair.
    """
    if cfg.infinite:
        raise ValueError("infinite penalty is handled by constraint reduction, not assembly")
    p = space.degree
    cfg.validate_for_degree(p)
    pair = assemble_standard(space, cfg.kind, rule)
    K, M = pair.K, pair.M
    h = space.grid.h_max
    dirichlet = cfg.kind is ProblemKind.DIRICHLET
    for ell in range(1, penalty_count(cfg.kind, p) + 1):
        S = assemble_penalty(space, cfg.kind, ell)
        if dirichlet:
            K += cfg.eta_a[ell - 1] * math.pi**2 * h ** (6 * ell - 3) * S
            M += cfg.eta_b[ell - 1] * h ** (6 * ell - 1) * S
        else:
            K += cfg.eta_a[ell - 1] * math.pi**2 * h ** (6 * ell - 5) * S
            M += cfg.eta_b[ell - 1] * h ** (6 * ell - 3) * S
    return MatrixPair(K, M, cfg.kind, p, space.grid.n_elements, corrected=True,
                      meta={"eta_a": cfg.eta_a, "eta_b": cfg.eta_b})


def write_matrix_csv(path, matrix: np.ndarray, kind: ProblemKind, degree, elements,
                     corrected) -> None:
    """Dense CSV dump: header '# rows cols kind degree elements corrected', 17 digits."""
    matrix = np.atleast_2d(matrix)
    rows, cols = matrix.shape

    def fmt(v):
        return ",".join(str(x) for x in v) if isinstance(v, (tuple, list)) else str(v)

    with open(path, "w") as fh:
        fh.write(f"# {rows} {cols} {kind.value} {fmt(degree)} {fmt(elements)} "
                 f"{str(corrected).lower()}\n")
        for row in matrix:
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")
