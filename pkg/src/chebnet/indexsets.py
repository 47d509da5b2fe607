"""Multi-index sets for multivariate expansions."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product


@dataclass(frozen=True)
class IndexSet:
    """A finite set of d-dimensional multi-indices with a generator tag."""

    indices: frozenset
    dim: int
    kind: str = "custom"

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dimension must be >= 1")
        if not self.indices:
            raise ValueError("index set must be non-empty")
        for k in self.indices:
            if len(k) != self.dim or any(int(v) != v or v < 0 for v in k):
                raise ValueError(f"bad multi-index {k!r} for dimension {self.dim}")

    def __len__(self) -> int:
        return len(self.indices)

    def __contains__(self, key) -> bool:
        return tuple(key) in self.indices

    def __iter__(self):
        return iter(sorted(self.indices))

    def max_degree(self, axis: int) -> int:
        return max(k[axis] for k in self.indices)


def tensor_index_set(max_degree: int, dim: int) -> IndexSet:
    """Full box {0..max_degree}^dim."""
    if max_degree < 0:
        raise ValueError("max_degree must be >= 0")
    idx = frozenset(product(range(max_degree + 1), repeat=dim))
    return IndexSet(idx, dim, kind=f"tensor({max_degree},{dim})")


def total_degree_index_set(total: int, dim: int) -> IndexSet:
    """Simplex {k : k_1 + ... + k_d <= total}."""
    if total < 0:
        raise ValueError("total degree must be >= 0")
    idx = frozenset(
        k for k in product(range(total + 1), repeat=dim) if sum(k) <= total
    )
    return IndexSet(idx, dim, kind=f"total_degree({total},{dim})")


def hyperbolic_cross_index_set(total: int, dim: int) -> IndexSet:
    """Hyperbolic cross {k : prod (k_i + 1) <= total + 1}."""
    if total < 0:
        raise ValueError("total must be >= 0")
    bound = total + 1
    idx = []
    for k in product(range(total + 1), repeat=dim):
        p = 1
        for v in k:
            p *= v + 1
        if p <= bound:
            idx.append(k)
    return IndexSet(frozenset(idx), dim, kind=f"hyperbolic_cross({total},{dim})")


def validate_downward_closed(index_set: IndexSet) -> bool:
    """True iff every componentwise-smaller multi-index is also present.

    It suffices to check single-step predecessors: any smaller index is
    reachable by decrementing one coordinate at a time.
    """
    members = index_set.indices
    for k in members:
        for axis in range(index_set.dim):
            if k[axis] > 0:
                pred = k[:axis] + (k[axis] - 1,) + k[axis + 1 :]
                if pred not in members:
                    return False
    return True
