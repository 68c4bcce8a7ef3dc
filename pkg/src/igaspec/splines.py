"""Open-knot B-spline spaces on [0, 1] and pointwise basis evaluation.

Everything here is 1D: multidimensional spaces are handled downstream by
tensorization of per-axis data. Spaces have maximal smoothness (simple
interior knots, C^{p-1}).
"""

from __future__ import annotations

import importlib.resources
from dataclasses import dataclass
from pathlib import Path

import numpy as np


@dataclass(frozen=True)
class BreakpointGrid:
    """Strictly ascending breakpoints on [0, 1]; element e is [nodes[e], nodes[e+1]]."""

    nodes: np.ndarray

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        if nodes.ndim != 1 or nodes.size < 2:
            raise ValueError("grid needs at least two nodes")
        if nodes[0] != 0.0 or nodes[-1] != 1.0:
            raise ValueError("grid must start at 0 and end at 1")
        if not np.all(np.diff(nodes) > 0.0):
            raise ValueError("grid nodes must be strictly ascending")
        nodes.flags.writeable = False
        object.__setattr__(self, "nodes", nodes)

    @property
    def n_elements(self) -> int:
        return self.nodes.size - 1

    @property
    def h_max(self) -> float:
        return float(np.max(np.diff(self.nodes)))

    @classmethod
    def uniform(cls, n_elements: int) -> "BreakpointGrid":
        if n_elements < 1:
            raise ValueError("need at least one element")
        return cls(np.linspace(0.0, 1.0, n_elements + 1))


def open_knot_vector(p: int, grid: BreakpointGrid) -> np.ndarray:
    """Open knot vector: 0 and 1 repeated p+1 times, interior breakpoints once."""
    if p < 0:
        raise ValueError("degree must be non-negative")
    nodes = grid.nodes
    return np.concatenate([np.zeros(p), nodes, np.ones(p)])


@dataclass(frozen=True)
class SplineSpace:
    """B-spline space of degree p with maximal smoothness on a breakpoint grid.

    Dimension is n = N + p for N elements. Basis functions are indexed
    0..n-1 (printed stencils elsewhere are 1-based; subtract one).
    """

    degree: int
    grid: BreakpointGrid
    knots: np.ndarray = None  # derived

    def __post_init__(self):
        if self.degree < 0:
            raise ValueError("degree must be non-negative")
        knots = open_knot_vector(self.degree, self.grid)
        knots.flags.writeable = False
        object.__setattr__(self, "knots", knots)

    @property
    def dim(self) -> int:
        return self.grid.n_elements + self.degree


def _find_span(space: SplineSpace, x: float) -> int:
    """Index i with knots[i] <= x < knots[i+1]; the last element is right-closed."""
    p, n = space.degree, space.dim
    span = int(np.searchsorted(space.knots, x, side="right")) - 1
    return min(max(span, p), n - 1)


def _all_basis_ders(knots: np.ndarray, p: int, span: int, x: float, r: int) -> np.ndarray:
    """Active basis functions and derivatives up to order min(r, p) at x.

    Triangular-table evaluation of the two-term degree recursion, with
    derivatives by repeated knot-difference differencing. Returns an array of
    shape (min(r, p) + 1, p + 1).
    """
    ndu = np.empty((p + 1, p + 1))
    left = np.empty(p + 1)
    right = np.empty(p + 1)
    ndu[0, 0] = 1.0
    for j in range(1, p + 1):
        left[j] = x - knots[span + 1 - j]
        right[j] = knots[span + j] - x
        saved = 0.0
        for k in range(j):
            ndu[j, k] = right[k + 1] + left[j - k]
            temp = ndu[k, j - 1] / ndu[j, k]
            ndu[k, j] = saved + right[k + 1] * temp
            saved = left[j - k] * temp
        ndu[j, j] = saved

    nd = min(r, p)
    ders = np.zeros((nd + 1, p + 1))
    ders[0] = ndu[:, p]
    a = np.empty((2, p + 1))
    for k in range(p + 1):
        s1, s2 = 0, 1
        a[0, 0] = 1.0
        for d in range(1, nd + 1):
            val = 0.0
            rk, pk = k - d, p - d
            if k >= d:
                a[s2, 0] = a[s1, 0] / ndu[pk + 1, rk]
                val = a[s2, 0] * ndu[rk, pk]
            j1 = 1 if rk >= -1 else -rk
            j2 = d - 1 if k - 1 <= pk else p - k
            for j in range(j1, j2 + 1):
                a[s2, j] = (a[s1, j] - a[s1, j - 1]) / ndu[pk + 1, rk + j]
                val += a[s2, j] * ndu[rk + j, pk]
            if k <= pk:
                a[s2, d] = -a[s1, d - 1] / ndu[pk + 1, k]
                val += a[s2, d] * ndu[k, pk]
            ders[d, k] = val
            s1, s2 = s2, s1
    fac = float(p)
    for d in range(1, nd + 1):
        ders[d] *= fac
        fac *= p - d
    return ders


def eval_basis(space: SplineSpace, x: float, r: int = 0) -> tuple[int, np.ndarray]:
    """Evaluate the p+1 basis functions active at x, differentiated r times.

    Returns (first_active_index, values) where values[k] is the r-th
    derivative of basis function first_active_index + k at x. Orders r > p
    return zeros.
    """
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x = {x} outside [0, 1]")
    if r < 0:
        raise ValueError("derivative order must be non-negative")
    p = space.degree
    span = _find_span(space, x)
    if r > p:
        return span - p, np.zeros(p + 1)
    ders = _all_basis_ders(space.knots, p, span, x, r)
    return span - p, ders[r]


def boundary_derivative_row(space: SplineSpace, r: int) -> tuple[np.ndarray, np.ndarray]:
    """r-th derivatives of every basis function at x=0 and at x=1.

    Only the first r+1 entries of the left row and the last r+1 of the right
    row can be nonzero (the remaining functions vanish to order r at the
    endpoints of an open-knot space).
    """
    if not 1 <= r <= space.degree:
        raise ValueError(f"derivative order {r} outside 1..{space.degree}")
    n = space.dim
    row0 = np.zeros(n)
    row1 = np.zeros(n)
    first, vals = eval_basis(space, 0.0, r)
    row0[first:first + space.degree + 1] = vals
    first, vals = eval_basis(space, 1.0, r)
    row1[first:first + space.degree + 1] = vals
    return row0, row1


def read_mesh_file(path) -> BreakpointGrid:
    """Parse a mesh file: one breakpoint per line, '#' comments, ascending 0..1."""
    nodes = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        try:
            nodes.append(float(stripped))
        except ValueError:
            raise ValueError(f"{path}:{lineno}: not a number: {stripped!r}") from None
    try:
        return BreakpointGrid(np.array(nodes))
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}") from None


def bundled_mesh_path(name: str = "random_grid_1d.txt") -> Path:
    """Path of a mesh file shipped with the package."""
    return Path(str(importlib.resources.files("igaspec").joinpath("meshes", name)))
