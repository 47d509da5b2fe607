"""Condition numbers of the coefficient transforms, and magnitude diagnostics.

Two linear maps are compared: the Legendre-to-monomial matrix B_N, whose
condition number explodes super-exponentially, and the hierarchical
transform, which stays mild.  For the hierarchical side the reported number
is the spectral condition number of the full covering transform S_k (the
smallest level whose matrix covers degree N); degrees sharing a covering
level therefore share a value, which is the repeated-value pattern visible
in the reference tables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .chebyshev import (
    ChebExpansion,
    chebyshev_interpolate,
    legendre_power_matrix,
    legendre_project,
    legendre_to_monomial,
)
from .hierarchy import chebyshev_to_hierarchical, parent_level, section_transform_matrix_general


@dataclass(frozen=True)
class CondRow:
    s: int
    N: int
    kappa_B: float
    kappa_H: float

    def __post_init__(self):
        for v in (self.kappa_B, self.kappa_H):
            if not (v >= 1.0):
                raise ValueError("condition numbers of nonsingular matrices are >= 1")


def condition_number(matrix: np.ndarray) -> float:
    """Spectral (2-norm) condition number, sigma_max / sigma_min.

    Returns inf when the smallest singular value underflows relative to the
    largest (numerically singular matrix).
    """
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError("expected a square matrix")
    sv = np.linalg.svd(matrix, compute_uv=False)
    if sv[-1] <= 1e-300 * sv[0]:
        return math.inf
    return float(sv[0] / sv[-1])


def hierarchical_transform_condition(N: int, s: int = 2) -> float:
    """kappa of the transform covering degree N for section s."""
    if N < 1:
        raise ValueError("degree must be >= 1")
    k = parent_level(N, s)
    return condition_number(section_transform_matrix_general(s, k))


def legendre_power_condition(N: int) -> float:
    """kappa of the Legendre-to-monomial matrix B_N."""
    if N < 1:
        raise ValueError("degree must be >= 1")
    return condition_number(legendre_power_matrix(N))


def cond_table(s_values: Sequence[int], degrees: Sequence[int]) -> list:
    """One CondRow per (s, N) pair; rows are independent and pure."""
    rows = []
    b_cache = {}
    for s in s_values:
        if s < 2:
            raise ValueError("section must be >= 2")
        for N in degrees:
            if N not in b_cache:
                b_cache[N] = legendre_power_condition(N)
            rows.append(CondRow(s, N, b_cache[N], hierarchical_transform_condition(N, s)))
    return rows


def cond_table_s2(degrees: Sequence[int]) -> list:
    """The binary-section table: kappa(B_N) against kappa of the transform."""
    return cond_table([2], degrees)


@dataclass(frozen=True)
class CoefficientReport:
    """All four coefficient views of one function at one truncation degree."""

    degree: int
    legendre: np.ndarray
    monomial: np.ndarray
    chebyshev: np.ndarray
    hierarchical: np.ndarray


def coefficient_magnitudes(f: Callable, degree: int) -> CoefficientReport:
    """Legendre, monomial, Chebyshev and hierarchical coefficients of f.

    The monomial vector comes from the Legendre projection through B_N; the
    hierarchical vector from the Chebyshev interpolant through the
    hierarchical transform.  Comparing their magnitudes shows which route
    amplifies the coefficients.
    """
    leg = legendre_project(f, degree)
    mono = legendre_to_monomial(leg)
    cheb = chebyshev_interpolate(f, degree)
    hier = chebyshev_to_hierarchical(cheb, 2)
    return CoefficientReport(
        degree,
        np.asarray(leg.coeffs),
        np.asarray(mono.coeffs),
        np.asarray(cheb.coeffs),
        np.asarray(hier.coeffs),
    )
