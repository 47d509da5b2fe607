"""Multivariate Chebyshev expansions over downward-closed index sets."""

from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping

import numpy as np

from .chebyshev import eval_chebyshev
from .hierarchy import leading_transform_block
from .indexsets import IndexSet, validate_downward_closed


@dataclass(frozen=True)
class ChebExpansionND:
    """p(x) = sum_k coeffs[k] * prod_i T_{k_i}(x_i) over a multi-index set."""

    coeffs: Mapping
    index_set: IndexSet

    def __post_init__(self):
        clean = {}
        for key, value in dict(self.coeffs).items():
            key = tuple(int(v) for v in key)
            if key not in self.index_set:
                raise ValueError(f"coefficient key {key} is outside the index set")
            clean[key] = float(value)
        # every index carries a coefficient (possibly zero) so slices stay aligned
        for key in self.index_set:
            clean.setdefault(key, 0.0)
        object.__setattr__(self, "coeffs", MappingProxyType(clean))

    @property
    def dim(self) -> int:
        return self.index_set.dim

    def __call__(self, points):
        return eval_chebyshev_nd(self, points)


def _cheb_basis_1d(n: int, x: np.ndarray) -> np.ndarray:
    c = np.zeros(n + 1)
    c[n] = 1.0
    return eval_chebyshev(c, x)


def eval_chebyshev_nd(e: ChebExpansionND, points):
    """Direct tensor-product evaluation at one point (d,) or a batch (m, d)."""
    pts = np.asarray(points, dtype=float)
    single = pts.ndim == 1
    if single:
        pts = pts[None, :]
    if pts.shape[1] != e.dim:
        raise ValueError(f"points have dimension {pts.shape[1]}, expected {e.dim}")
    # Precompute T_0..T_max per axis, then sum products over the index set.
    basis = []
    for axis in range(e.dim):
        nmax = e.index_set.max_degree(axis)
        basis.append(np.stack([_cheb_basis_1d(n, pts[:, axis]) for n in range(nmax + 1)]))
    total = np.zeros(pts.shape[0])
    for key, c in e.coeffs.items():
        if c == 0.0:
            continue
        term = np.full(pts.shape[0], c)
        for axis, deg in enumerate(key):
            term = term * basis[axis][deg]
        total += term
    return total[0] if single else total


def hierarchical_coefficients_nd(e: ChebExpansionND, s: int = 2) -> dict:
    """Transform every axis of a downward-closed coefficient map.

    Each coordinate line of a downward-closed set is contiguous from zero,
    so the one-dimensional transform applies line by line; the per-axis maps
    commute, and no coefficient escapes the index set.
    """
    if not validate_downward_closed(e.index_set):
        raise ValueError("index set is not downward closed")
    coeffs = dict(e.coeffs)
    for axis in range(e.dim):
        lines = {}
        for key, value in coeffs.items():
            rest = key[:axis] + key[axis + 1 :]
            lines.setdefault(rest, {})[key[axis]] = value
        for rest, entries in lines.items():
            n = max(entries)
            vec = np.zeros(n + 1)
            for deg, value in entries.items():
                vec[deg] = value
            out = leading_transform_block(n, s) @ vec
            for deg in range(n + 1):
                key = rest[:axis] + (deg,) + rest[axis:]
                coeffs[key] = out[deg]
    return coeffs
