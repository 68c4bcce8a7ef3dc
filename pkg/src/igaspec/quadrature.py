"""Gauss-Legendre rules and affine element mapping.

A q-point rule is exact for polynomials up to degree 2q-1, so q = p+1
integrates both Galerkin bilinear forms (degree 2p integrands) exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class QuadratureRule:
    points: np.ndarray   # on the reference interval [-1, 1]
    weights: np.ndarray  # positive, summing to 2

    @property
    def n_points(self) -> int:
        return self.points.size


def gauss_legendre(q: int) -> QuadratureRule:
    """Standard q-point Gauss-Legendre rule on [-1, 1], 1 <= q <= 16."""
    if not 1 <= q <= 16:
        raise ValueError(f"point count {q} outside 1..16")
    points, weights = np.polynomial.legendre.leggauss(q)
    return QuadratureRule(points, weights)


def map_to_element(rule: QuadratureRule, a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
    """Affine image of the rule on [a, b]; weights scale by (b-a)/2."""
    if not b > a:
        raise ValueError(f"empty interval [{a}, {b}]")
    half = 0.5 * (b - a)
    return 0.5 * (a + b) + half * rule.points, half * rule.weights


def default_rule(p: int) -> QuadratureRule:
    """Rule used for assembly at degree p: exact for the degree-2p integrands."""
    return gauss_legendre(p + 1)
