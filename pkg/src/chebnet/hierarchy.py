"""Hierarchical Chebyshev basis and the coefficient transforms onto it.

The hierarchical basis H_j factors each T_j into a product of Chebyshev
polynomials whose degrees are powers of the section size s:

    H_j = T_{l * s**k} * H_{j mod s**k},   k = floor(log_s j),  l = j // s**k,

with H_j = T_j for j < s.  For s = 2 this is the product-of-T_{2^i} basis
(H_3 = T_2 T_1, H_5 = T_4 T_1, ...).  The linear map from standard
Chebyshev coefficients to hierarchical coefficients is assembled by a
level recursion; its entries are integers by construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .chebyshev import ChebExpansion, _as_readonly_vector, eval_chebyshev


@dataclass(frozen=True)
class HierarchicalChebExpansion:
    """p(x) = sum_j coeffs[j] * H_j(x) for the section-s hierarchical basis."""

    coeffs: np.ndarray
    section: int = 2

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _as_readonly_vector(self.coeffs))
        if self.section < 2:
            raise ValueError("section must be >= 2")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        return eval_hierarchical(self, x)


def hierarchical_basis_value(j: int, s: int, x):
    """Evaluate the hierarchical basis polynomial H_j for section s.

    Computed by the recursive product definition, with each Chebyshev factor
    evaluated by Clenshaw.
    """
    if j < 0:
        raise ValueError("basis index must be >= 0")
    if s < 2:
        raise ValueError("section must be >= 2")
    x = np.asarray(x, dtype=float)
    value = np.ones_like(x)
    while j >= s:
        k = 1
        while s ** (k + 1) <= j:
            k += 1
        lead = (j // s ** k) * s ** k
        c = np.zeros(lead + 1)
        c[lead] = 1.0
        value = value * eval_chebyshev(c, x)
        j -= lead
    if j > 0:
        c = np.zeros(j + 1)
        c[j] = 1.0
        value = value * eval_chebyshev(c, x)
    return value[()] if value.ndim == 0 else value


def eval_hierarchical(h: HierarchicalChebExpansion, x):
    """Evaluate sum_j coeffs[j] * H_j(x)."""
    x = np.asarray(x, dtype=float)
    total = np.zeros_like(x)
    for j, cj in enumerate(h.coeffs):
        if cj != 0.0:
            total = total + cj * hierarchical_basis_value(j, h.section, x)
    return total[()] if total.ndim == 0 else total


def _assert_integer_entries(M: np.ndarray) -> np.ndarray:
    rounded = np.round(M)
    drift = np.max(np.abs(M - rounded)) if M.size else 0.0
    if drift > 1e-9:
        raise AssertionError(f"transform entries drifted from integers by {drift:.3e}")
    return rounded


def _even(r: int) -> float:
    return 1.0 if r % 2 == 0 else 0.0


@lru_cache(maxsize=None)
def _section_matrix_cached(s: int, k: int) -> np.ndarray:
    if k == 0:
        S = np.eye(s)
    else:
        prev = _section_matrix_cached(s, k - 1)
        sk = s ** k
        size = s ** (k + 1)
        # Level matrix: row (l, j) collects the T_j coefficient of the l-th
        # residual polynomial in the split p = sum_l p_l(x) T_l(T_{s^k}(x)).
        R = np.zeros((size, size))
        for l in range(s):
            factor = 1.0 if l == 0 else 2.0
            R[l * sk, l * sk] = 1.0
            for j in range(1, sk):
                row = l * sk + j
                for r in range(l, s):
                    R[row, r * sk + j] += factor * _even(r - l)
                    R[row, (r + 1) * sk - j] -= factor * (1.0 - _even(r - l))
        S = np.kron(np.eye(s), prev) @ R
    S = _assert_integer_entries(S)
    S.flags.writeable = False
    return S


def section_transform_matrix(m: int) -> np.ndarray:
    """Transform matrix of order 2**(m+1) for the binary (s = 2) hierarchy.

    Built by the block recursion

        S_j = (I_2 kron S_{j-1}) @ [[I_{2^j+1}, A_j], [0, 2 I_{2^j-1}]],

    where A_j places a negated anti-diagonal unit block against the tail
    coefficients; S_0 = I_2.  Entries are asserted to be near-integers and
    rounded, which guards the recursion against assembly bugs.
    """
    if m < 0:
        raise ValueError("level must be >= 0")
    return section_transform_matrix_general(2, m)


def section_transform_matrix_general(s: int, k: int) -> np.ndarray:
    """Transform matrix of order s**(k+1) for the section-s hierarchy."""
    if s < 2:
        raise ValueError("section must be >= 2")
    if k < 0:
        raise ValueError("level must be >= 0")
    return _section_matrix_cached(s, k).copy()


def parent_level(degree: int, s: int = 2) -> int:
    """Smallest k with s**(k+1) > degree: the level whose transform covers it."""
    if degree < 0:
        raise ValueError("degree must be >= 0")
    k = 0
    while s ** (k + 1) <= degree:
        k += 1
    return k


def leading_transform_block(degree: int, s: int = 2) -> np.ndarray:
    """Leading (degree+1) x (degree+1) block of the covering transform.

    Because the transform never moves mass upward past the original degree,
    this block applied to an unpadded coefficient vector agrees with the full
    matrix applied to the zero-padded one.  Leading blocks are nested across
    levels, so the result does not depend on which parent they are cut from.
    """
    k = parent_level(degree, s)
    S = _section_matrix_cached(s, k)
    return S[: degree + 1, : degree + 1].copy()


def chebyshev_to_hierarchical(e: ChebExpansion, s: int = 2) -> HierarchicalChebExpansion:
    """Convert Chebyshev coefficients to section-s hierarchical coefficients.

    The output has the same length as the input.
    """
    if s < 2:
        raise ValueError("section must be >= 2")
    H = leading_transform_block(e.degree, s)
    return HierarchicalChebExpansion(H @ e.coeffs, section=s)
