"""Kronecker-sum assembly and separable spectra for 2D/3D tensor meshes.

The d-dimensional Laplacian on a tensor mesh is
K_x (x) M_y (x) ... + M_x (x) K_y (x) ... with mass M_x (x) M_y (x) ...,
so its generalized spectrum is exactly the set of sums of the per-axis 1D
generalized eigenvalues. Production path is the separable one; the explicit
Kronecker matrices exist for verification at small sizes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .assembly import MatrixPair
from .eigensolve import Spectrum

KRON_DIM_CAP = 4096


@dataclass(frozen=True)
class TensorSystem:
    """One 1D matrix pair per axis, d in {1, 2, 3}."""

    pairs: tuple[MatrixPair, ...]

    def __post_init__(self):
        pairs = tuple(self.pairs)
        if not 1 <= len(pairs) <= 3:
            raise ValueError("tensor systems support 1 to 3 axes")
        kinds = {p.kind for p in pairs}
        if len(kinds) != 1:
            raise ValueError("all axes must share the same problem kind")
        object.__setattr__(self, "pairs", pairs)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(p.dim for p in self.pairs)

    @property
    def total_dim(self) -> int:
        return math.prod(self.dims)


def kron_sum_matrices(sys: TensorSystem, cap: int = KRON_DIM_CAP) -> MatrixPair:
    """Explicit global (K, M): Kronecker sum of stiffnesses against masses.

    Verification-only path; total dimension above `cap` is rejected with a
    pointer to `separable_spectrum`.
    """
    if sys.total_dim > cap:
        raise ValueError(
            f"global dimension {sys.total_dim} exceeds cap {cap}; "
            "use separable_spectrum for large tensor systems"
        )
    Ks = [p.K for p in sys.pairs]
    Ms = [p.M for p in sys.pairs]
    d = len(sys.pairs)
    M_glob = reduce(np.kron, Ms)
    K_glob = np.zeros_like(M_glob)
    for axis in range(d):
        factors = [Ks[a] if a == axis else Ms[a] for a in range(d)]
        K_glob += reduce(np.kron, factors)
    first = sys.pairs[0]
    return MatrixPair(
        K_glob, M_glob, first.kind,
        degree=tuple(p.degree for p in sys.pairs),
        elements=tuple(p.elements for p in sys.pairs),
        corrected=any(p.corrected for p in sys.pairs),
    )


def separable_spectrum(sys: TensorSystem, spectra: list[Spectrum]) -> Spectrum:
    """Multidimensional spectrum as all sums of per-axis 1D eigenvalues.

    Requires complete 1D spectra. Values are ascending; ties are broken by
    the (j_x, j_y, j_z) multi-index in lexicographic order, recorded in
    `modes`. Eigenvectors are not materialized; see `tensor_eigenvector`.
    """
    if len(spectra) != len(sys.pairs):
        raise ValueError("need one 1D spectrum per axis")
    for spec, pair in zip(spectra, sys.pairs):
        if len(spec) != pair.dim:
            raise ValueError(
                f"incomplete 1D spectrum: {len(spec)} values for dimension {pair.dim}"
            )
    grids = np.meshgrid(*[s.values for s in spectra], indexing="ij")
    total = sum(grids).ravel()
    index_grids = np.meshgrid(*[np.arange(len(s)) for s in spectra], indexing="ij")
    indices = [g.ravel() for g in index_grids]
    order = np.lexsort(tuple(reversed(indices)) + (total,))
    modes = np.stack(indices, axis=1)[order]
    meta = dict(spectra[0].meta)
    meta["tensor_dims"] = sys.dims
    return Spectrum(total[order], None, meta, modes=modes)


def tensor_eigenvector(spectra: list[Spectrum], multi_index) -> np.ndarray:
    """Materialize one multidimensional eigenvector as a Kronecker product."""
    columns = []
    for spec, j in zip(spectra, multi_index):
        if spec.vectors is None:
            raise ValueError("1D spectra must carry eigenvectors")
        columns.append(spec.vectors[:, int(j)])
    return reduce(np.kron, columns)
