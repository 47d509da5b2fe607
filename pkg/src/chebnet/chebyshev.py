"""Univariate polynomial expansions in Chebyshev, Legendre and monomial bases.

Coefficient vectors are stored lowest degree first.  A vector of length
n+1 represents a polynomial of degree at most n; trailing zeros are kept,
so the length is an upper bound on the degree, not the degree itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable

import numpy as np


def _as_readonly_vector(coeffs) -> np.ndarray:
    a = np.array(coeffs, dtype=float)
    if a.ndim != 1 or a.size < 1:
        raise ValueError("coefficient vector must be one-dimensional and non-empty")
    if not np.all(np.isfinite(a)):
        raise ValueError("coefficients must be finite")
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class ChebExpansion:
    """p(x) = sum_j coeffs[j] * T_j(x), with T_j the first-kind Chebyshev basis."""

    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _as_readonly_vector(self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        return eval_chebyshev(self, x)


@dataclass(frozen=True)
class LegendreExpansion:
    """f(x) = sum_j coeffs[j] * L_j(x) on [-1, 1]."""

    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _as_readonly_vector(self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        return eval_legendre(self, x)


@dataclass(frozen=True)
class MonomialExpansion:
    """p(x) = sum_j coeffs[j] * x**j."""

    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _as_readonly_vector(self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        return eval_monomial(self, x)


def eval_chebyshev(e: ChebExpansion | np.ndarray, x):
    """Evaluate a Chebyshev expansion by the Clenshaw recurrence.

    Valid for any real x (the three-term recurrence does not require
    x in [-1, 1]).  Accepts scalars or arrays.
    """
    c = e.coeffs if isinstance(e, ChebExpansion) else _as_readonly_vector(e)
    x = np.asarray(x, dtype=float)
    n = len(c)
    if n == 1:
        out = np.full_like(x, c[0], dtype=float)
        return out[()] if out.ndim == 0 else out
    b1 = np.zeros_like(x)
    b2 = np.zeros_like(x)
    for j in range(n - 1, 0, -1):
        b1, b2 = c[j] + 2.0 * x * b1 - b2, b1
    out = c[0] + x * b1 - b2
    return out[()] if out.ndim == 0 else out


def eval_monomial(e: MonomialExpansion | np.ndarray, x):
    """Evaluate a power series by Horner's scheme."""
    c = e.coeffs if isinstance(e, MonomialExpansion) else _as_readonly_vector(e)
    x = np.asarray(x, dtype=float)
    out = np.full_like(x, c[-1], dtype=float)
    for j in range(len(c) - 2, -1, -1):
        out = out * x + c[j]
    return out[()] if out.ndim == 0 else out


def eval_legendre(e: LegendreExpansion | np.ndarray, x):
    """Evaluate a Legendre expansion via the three-term recurrence."""
    c = e.coeffs if isinstance(e, LegendreExpansion) else _as_readonly_vector(e)
    x = np.asarray(x, dtype=float)
    out = np.full_like(x, c[0], dtype=float)
    if len(c) == 1:
        return out[()] if out.ndim == 0 else out
    p_prev = np.ones_like(x)
    p = x.copy()
    out = out + c[1] * p
    for j in range(1, len(c) - 1):
        p_prev, p = p, ((2 * j + 1) * x * p - j * p_prev) / (j + 1)
        out = out + c[j + 1] * p
    return out[()] if out.ndim == 0 else out


def chebyshev_interpolate(f: Callable, degree: int) -> ChebExpansion:
    """Interpolate f on the degree+1 Gauss-Lobatto points cos(k*pi/degree).

    The returned expansion reproduces any polynomial of degree <= ``degree``
    exactly.  Coefficients are computed by the discrete cosine sum with the
    endpoint terms halved; this is the direct O(N^2) form of the transform.
    """
    if degree < 0:
        raise ValueError("degree must be >= 0")
    if degree == 0:
        v = float(np.asarray(f(1.0), dtype=float))
        if not math.isfinite(v):
            raise ValueError("function value is not finite at the sample point")
        return ChebExpansion([v])
    N = degree
    k = np.arange(N + 1)
    nodes = np.cos(np.pi * k / N)
    values = np.asarray(f(nodes), dtype=float)
    if values.shape != nodes.shape:
        values = np.array([f(t) for t in nodes], dtype=float)
    if not np.all(np.isfinite(values)):
        raise ValueError("function returned a non-finite sample value")
    w = np.ones(N + 1)
    w[0] = w[N] = 0.5
    # c_j = (2/N) * sum_k'' f(x_k) cos(j k pi / N), halved at j = 0 and j = N
    angles = np.pi * np.outer(k, k) / N
    coeffs = (2.0 / N) * (np.cos(angles) @ (w * values))
    coeffs[0] *= 0.5
    coeffs[N] *= 0.5
    return ChebExpansion(coeffs)


def legendre_project(f: Callable, degree: int) -> LegendreExpansion:
    """L2 projection onto Legendre polynomials up to ``degree``.

    Uses Gauss-Legendre quadrature with 2*degree + 2 nodes, so the integrals
    a_j = (2j+1)/2 * int f L_j dx are exact whenever f is a polynomial of
    degree <= ``degree`` (and well resolved far beyond that).
    """
    if degree < 0:
        raise ValueError("degree must be >= 0")
    return legendre_project_quadrature(f, degree, 2 * degree + 2)


def legendre_project_quadrature(f: Callable, degree: int, nodes: int) -> LegendreExpansion:
    """Legendre projection with an explicit Gauss-Legendre node count."""
    if degree < 0:
        raise ValueError("degree must be >= 0")
    nodes = max(nodes, degree + 1, 1)
    x, w = np.polynomial.legendre.leggauss(nodes)
    values = np.asarray(f(x), dtype=float)
    if values.shape != x.shape:
        values = np.array([f(t) for t in x], dtype=float)
    # Rows of V are L_0..L_degree sampled at the quadrature nodes.
    V = np.polynomial.legendre.legvander(x, degree).T
    j = np.arange(degree + 1)
    coeffs = (2 * j + 1) / 2.0 * (V @ (w * values))
    return LegendreExpansion(coeffs)


@lru_cache(maxsize=None)
def _legendre_monomial_columns(degree: int) -> tuple:
    """Monomial coefficients of L_0..L_degree as exact rationals."""
    cols = [(Fraction(1),), (Fraction(0), Fraction(1))]
    for n in range(1, degree):
        # (n+1) L_{n+1} = (2n+1) x L_n - n L_{n-1}
        shifted = (Fraction(0),) + cols[n]
        prev = cols[n - 1] + (Fraction(0),) * (len(shifted) - len(cols[n - 1]))
        cols.append(tuple(
            (Fraction(2 * n + 1) * a - Fraction(n) * b) / Fraction(n + 1)
            for a, b in zip(shifted, prev)
        ))
    return tuple(cols[: degree + 1])


def legendre_power_matrix(degree: int) -> np.ndarray:
    """Matrix mapping Legendre coefficients to monomial coefficients.

    Column j holds the monomial coefficients of L_j.  Entries are built from
    the Legendre recurrence in exact rational arithmetic and converted to
    doubles at the end; they grow large quickly, which is the whole reason
    this transform is badly conditioned.
    """
    if degree < 0:
        raise ValueError("degree must be >= 0")
    cols = _legendre_monomial_columns(degree)
    B = np.zeros((degree + 1, degree + 1))
    for j, col in enumerate(cols):
        for i, v in enumerate(col):
            B[i, j] = float(v)
    return B


def legendre_to_monomial(e: LegendreExpansion) -> MonomialExpansion:
    """Re-express a Legendre expansion as a power series (same polynomial)."""
    B = legendre_power_matrix(e.degree)
    return MonomialExpansion(B @ e.coeffs)


def _unit_cheb(n: int) -> ChebExpansion:
    c = np.zeros(n + 1)
    c[n] = 1.0
    return ChebExpansion(c)


@dataclass(frozen=True)
class MultisectionIdentity:
    """Both sides of the product expansion of T_{r*s+k}.

    For section s >= 2, r >= 1 and 1 <= k <= s-1,

        T_{rs+k} = 2 * sum_{i=1}^{r} even(r-i) * [T_{is} T_k - T_{(i-1)s} T_{s-k}]
                   + odd(r) * T_{s-k} + even(r) * T_k,

    where even/odd are 0/1 parity indicators.  ``lhs`` is the single basis
    polynomial T_{rs+k}; ``rhs`` evaluates the right-hand side term by term,
    so comparing the two exercises the identity rather than restating it.
    """

    r: int
    s: int
    k: int
    lhs: ChebExpansion = field(init=False)

    def __post_init__(self):
        if self.s < 2 or self.r < 1 or not (1 <= self.k <= self.s - 1):
            raise ValueError("need s >= 2, r >= 1 and 1 <= k <= s-1")
        object.__setattr__(self, "lhs", _unit_cheb(self.r * self.s + self.k))

    def lhs_value(self, x):
        return eval_chebyshev(self.lhs, x)

    def rhs_value(self, x):
        r, s, k = self.r, self.s, self.k
        x = np.asarray(x, dtype=float)
        t = lambda n: eval_chebyshev(_unit_cheb(n), x)  # noqa: E731
        even = lambda m: 1.0 if m % 2 == 0 else 0.0  # noqa: E731
        odd = lambda m: 1.0 - even(m)  # noqa: E731
        total = odd(r) * t(s - k) + even(r) * t(k)
        for i in range(1, r + 1):
            total = total + 2.0 * even(r - i) * (t(i * s) * t(k) - t((i - 1) * s) * t(s - k))
        return total[()] if np.ndim(total) == 0 else total


def multisection_identity(r: int, s: int, k: int) -> MultisectionIdentity:
    """Build the T_{rs+k} product-expansion identity as an evaluable pair."""
    return MultisectionIdentity(r, s, k)
