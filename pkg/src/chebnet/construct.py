"""Compile polynomial expansions into exact RePU networks.

The compilers share one mechanism: coefficients are first rewritten in the
hierarchical basis, whose index structure is an s-ary tree, and the tree is
then evaluated bottom-up.  Each level combines s sibling values against the
running compressed variable tau_k = T_{s^k}(x) (or x^{s^k} for power
networks) using the one-layer gadgets, while a short chain advances tau.
Affine bookkeeping between levels is fused, so every level costs exactly
one hidden layer and zero blocks of coefficients cost nothing.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass

import numpy as np

from .chebyshev import ChebExpansion, MonomialExpansion
from .gadgets import ID_IN, ID_READ, ID_SHIFT, SQ_IN, SQ_READ, power_gadget, product_gadget
from .hierarchy import chebyshev_to_hierarchical
from .indexsets import IndexSet, validate_downward_closed
from .multivariate import ChebExpansionND, hierarchical_coefficients_nd
from .network import (
    ComplexityReport,
    Layer,
    RepuNetwork,
    complexity,
    concat,
    identity_carry,
    parallelize,
    prepend_input_map,
)


@dataclass(frozen=True)
class ConstructionReceipt:
    """A built network together with its predicted resource envelope."""

    network: RepuNetwork
    hidden_layer_bound: int
    activation_bound: int
    weight_bound: int
    source_fingerprint: str
    report: ComplexityReport

    def __post_init__(self):
        r = self.report
        if r.hidden_layers > self.hidden_layer_bound:
            raise AssertionError(
                f"built {r.hidden_layers} hidden layers, bound is {self.hidden_layer_bound}"
            )
        if r.activation_count > self.activation_bound:
            raise AssertionError(
                f"built {r.activation_count} activations, bound is {self.activation_bound}"
            )
        if r.nonzero_weights > self.weight_bound:
            raise AssertionError(
                f"built {r.nonzero_weights} nonzero weights, bound is {self.weight_bound}"
            )


def _fingerprint(kind: str, power: int, payload) -> str:
    doc = json.dumps({"kind": kind, "power": power, "coeffs": payload}, sort_keys=True)
    return hashlib.sha256(doc.encode()).hexdigest()[:16]


# --- staged assembly of fused layers ----------------------------------------


class _Value:
    """Either a compile-time constant or an affine read of the frontier."""

    __slots__ = ("weights", "bias")

    def __init__(self, weights, bias):
        self.weights = weights  # None for constants, else vector over reads
        self.bias = float(bias)

    @classmethod
    def const(cls, v):
        return cls(None, v)

    @property
    def is_const(self):
        return self.weights is None

    @property
    def is_zero(self):
        return self.weights is None and self.bias == 0.0


def _combine(parts, n_reads):
    """Affine combination sum_i coeff_i * value_i -> (row, bias)."""
    row = np.zeros(n_reads)
    bias = 0.0
    for coeff, value in parts:
        bias += coeff * value.bias
        if value.weights is not None:
            row += coeff * value.weights
    return row, bias


class _Assembler:
    """Accumulates hidden layers while fusing inter-stage affine maps.

    Live values are affine reads over the current frontier (the activations
    of the most recent hidden layer; initially the raw inputs).  A stage
    consumes reads, emits one hidden layer of units, and publishes new reads.
    """

    def __init__(self, input_dim: int):
        self.layers = []
        self.read_matrix = np.eye(input_dim)
        self.read_bias = np.zeros(input_dim)

    @property
    def n_reads(self) -> int:
        return self.read_matrix.shape[0]

    def input_value(self, coord: int) -> _Value:
        w = np.zeros(self.n_reads)
        w[coord] = 1.0
        return _Value(w, 0.0)

    def step(self, unit_rows, unit_biases, read_rows, read_biases):
        U = np.asarray(unit_rows, dtype=float)
        c = np.asarray(unit_biases, dtype=float)
        self.layers.append((U @ self.read_matrix, U @ self.read_bias + c))
        self.read_matrix = np.asarray(read_rows, dtype=float)
        self.read_bias = np.asarray(read_biases, dtype=float)

    def finalize(self, out: _Value, power: int) -> RepuNetwork:
        if out.is_const:
            row = np.zeros(self.n_reads)
            bias = out.bias
        else:
            row, bias = out.weights, out.bias
        A = row[None, :] @ self.read_matrix
        b = row[None, :] @ self.read_bias + bias
        layers = [Layer(w, v) for w, v in self.layers] + [Layer(A, b)]
        return RepuNetwork(tuple(layers), power=power)


class _StagePlan:
    """Unit/read accumulator for a single hidden layer."""

    def __init__(self, asm: _Assembler):
        self.asm = asm
        self.unit_rows = []
        self.unit_biases = []
        self.read_specs = []  # (row over units so far, bias) finalized later

    @property
    def n_units(self) -> int:
        return len(self.unit_rows)

    def add_units(self, rows, biases):
        start = self.n_units
        self.unit_rows.extend(rows)
        self.unit_biases.extend(biases)
        return start

    def reader(self, entries, bias=0.0) -> int:
        """Register a read: entries are (unit_index, weight) pairs."""
        self.read_specs.append((tuple(entries), float(bias)))
        return len(self.read_specs) - 1

    def commit(self):
        if not self.unit_rows:
            return None
        V = np.zeros((len(self.read_specs), self.n_units))
        d = np.zeros(len(self.read_specs))
        for i, (entries, bias) in enumerate(self.read_specs):
            d[i] = bias
            for j, w in entries:
                V[i, j] = w
        self.asm.step(self.unit_rows, self.unit_biases, V, d)
        values = []
        for i in range(len(self.read_specs)):
            w = np.zeros(len(self.read_specs))
            w[i] = 1.0
            values.append(_Value(w, 0.0))
        return values


# --- binary tree evaluation (s = 2) ------------------------------------------


def _gadget_rows(in_weights, shifts, x: _Value, y: _Value, n_reads):
    """Unit rows for sigma(in_weights * x + shifts * y) with affine x, y."""
    rows, biases = [], []
    for win, shift in zip(in_weights, shifts):
        row, bias = _combine([(win, x), (shift, y)], n_reads)
        rows.append(row)
        biases.append(bias)
    return rows, biases


_ONE = _Value.const(1.0)


def _identity_units(plan: _StagePlan, v: _Value):
    """Emit an identity gadget on v; returns its read entries."""
    rows, biases = _gadget_rows(ID_IN, ID_SHIFT, v, _ONE, plan.asm.n_reads)
    start = plan.add_units(rows, biases)
    return [(start + i, ID_READ[i]) for i in range(4)]


def _product_units(plan: _StagePlan, a: _Value, b: _Value):
    """Emit a product gadget computing a*b; returns its read entries."""
    rows, biases = _gadget_rows(ID_IN, ID_SHIFT, a, b, plan.asm.n_reads)
    start = plan.add_units(rows, biases)
    return [(start + i, ID_READ[i]) for i in range(4)]


def _plan_square_chain(plan: _StagePlan, t: _Value, shifted: bool) -> int:
    rows, biases = _gadget_rows(SQ_IN, np.zeros(2), t, _ONE, plan.asm.n_reads)
    start = plan.add_units(rows, biases)
    scale = 2.0 if shifted else 1.0
    return plan.reader([(start + i, scale * SQ_READ[i]) for i in range(2)],
                       bias=-1.0 if shifted else 0.0)


def _binary_tree(asm: _Assembler, leaves, x: _Value, chebyshev_chain: bool) -> _Value:
    """Evaluate sum_j leaves[j] * H_j(x) (or x^j for the power chain).

    ``leaves`` holds _Value entries, padded to a power of two.  Constants
    propagate without units; zero blocks are pruned; each surviving level is
    one hidden layer.
    """
    entries = list(leaves)
    levels = int(math.log2(len(entries)))  # entries length is 2**levels

    # which chain values t_k are consumed by levels above
    kinds = [["z" if e.is_zero else ("c" if e.is_const else "r") for e in entries]]
    for _ in range(levels):
        prev = kinds[-1]
        nxt = []
        for i in range(0, len(prev), 2):
            r, q = prev[i], prev[i + 1]
            nxt.append(r if q == "z" else "r")
        kinds.append(nxt)
    uses_t = [False] * (levels + 1)
    for lvl in range(1, levels + 1):
        uses_t[lvl] = any(kinds[lvl - 1][2 * i + 1] != "z" for i in range(len(kinds[lvl])))
    need_t = [False] * (levels + 1)
    for j in range(levels - 1, 0, -1):
        need_t[j] = uses_t[j + 1] or need_t[j + 1]

    t = x
    all_const_leaves = all(e.is_const for e in entries)
    for level in range(1, levels + 1):
        plan = _StagePlan(asm)
        results = []  # (index into plan reads | None, _Value for consts)
        if level == 1 and all_const_leaves:
            # one shared identity group serves every a + b*x read
            shared = None
            if any(entries[2 * i + 1].bias != 0.0 for i in range(len(entries) // 2)):
                rows, biases = _gadget_rows(ID_IN, ID_SHIFT, x, _ONE, asm.n_reads)
                shared = plan.add_units(rows, biases)
            for i in range(len(entries) // 2):
                a, b = entries[2 * i].bias, entries[2 * i + 1].bias
                if b == 0.0:
                    results.append((None, _Value.const(a)))
                else:
                    idx = plan.reader(
                        [(shared + j, b * ID_READ[j]) for j in range(4)], bias=a
                    )
                    results.append((idx, None))
        else:
            for i in range(len(entries) // 2):
                r, q = entries[2 * i], entries[2 * i + 1]
                if q.is_zero:
                    if r.is_const:
                        results.append((None, r))
                    else:
                        results.append((plan.reader(_identity_units(plan, r)), None))
                elif q.is_const:
                    # v = r + q * t is affine; materialize through an identity
                    row, bias = _combine([(1.0, r), (q.bias, t)], asm.n_reads)
                    entries_id = _identity_units(plan, _Value(row, bias))
                    results.append((plan.reader(entries_id), None))
                else:
                    spec = _product_units(plan, q, t)
                    bias = 0.0
                    if r.is_const:
                        bias = r.bias
                    else:
                        spec = spec + _identity_units(plan, r)
                    results.append((plan.reader(spec, bias=bias), None))
        t_next_idx = None
        if level <= levels - 1 and need_t[level]:
            t_next_idx = _plan_square_chain(plan, t, shifted=chebyshev_chain)
        values = plan.commit()
        if values is None:
            entries = [v for _, v in results]
            continue
        entries = [values[idx] if idx is not None else v for idx, v in results]
        t = values[t_next_idx] if t_next_idx is not None else None
    return entries[0]


def _pad_to_tree(values, branching: int):
    """Pad a list of _Value entries with zeros up to branching**levels."""
    size = branching
    while size < len(values):
        size *= branching
    return values + [_Value.const(0.0)] * (size - len(values))


def _univariate_network(coeffs: np.ndarray, chebyshev_chain: bool) -> RepuNetwork:
    """Network for sum c_j H_j(x) (hierarchical) or sum c_j x^j (power)."""
    asm = _Assembler(1)
    x = asm.input_value(0)
    n = len(coeffs) - 1
    if n == 0:
        return asm.finalize(_Value.const(coeffs[0]), power=2)
    if n <= 2:
        # single hidden layer: shared identity group, plus a square group at n=2
        plan = _StagePlan(asm)
        rows, biases = _gadget_rows(ID_IN, ID_SHIFT, x, _ONE, asm.n_reads)
        id_start = plan.add_units(rows, biases)
        entries = [(id_start + i, coeffs[1] * ID_READ[i]) for i in range(4)]
        bias = coeffs[0]
        if n == 2:
            rows, biases = _gadget_rows(SQ_IN, np.zeros(2), x, _ONE, asm.n_reads)
            sq_start = plan.add_units(rows, biases)
            scale = 2.0 if chebyshev_chain else 1.0
            entries += [(sq_start + i, coeffs[2] * scale * SQ_READ[i]) for i in range(2)]
            if chebyshev_chain:
                bias -= coeffs[2]
        out_idx = plan.reader(entries, bias=bias)
        values = plan.commit()
        return asm.finalize(values[out_idx], power=2)
    leaves = _pad_to_tree([_Value.const(c) for c in coeffs], 2)
    out = _binary_tree(asm, leaves, x, chebyshev_chain)
    return asm.finalize(out, power=2)


def _depth_bound_1d(n: int) -> int:
    return 0 if n == 0 else int(math.floor(math.log2(n))) + 1 if n >= 1 else 0


def _size_bounds_1d(n: int):
    m = max(1, n).bit_length()
    activations = 8 * (n + 1) + 10 * m + 16
    weights = 56 * (n + 1) + 24 * m + 48
    return activations, weights


def build_chebnet_1d(e: ChebExpansion) -> ConstructionReceipt:
    """Exact sigma_2 network for a univariate Chebyshev expansion.

    The coefficients are rewritten in the binary hierarchical basis and the
    product tree is assembled around the squaring chain
    T_{2^k} = 2 T_{2^{k-1}}^2 - 1.  The result agrees with Clenshaw
    evaluation to roundoff on all of R and has at most floor(log2 n) + 1
    hidden layers.
    """
    hier = chebyshev_to_hierarchical(e, 2)
    net = _univariate_network(np.asarray(hier.coeffs), chebyshev_chain=True)
    act, wt = _size_bounds_1d(e.degree)
    return ConstructionReceipt(
        net,
        _depth_bound_1d(e.degree),
        act,
        wt,
        _fingerprint("chebnet-1d", 2, list(map(float, e.coeffs))),
        complexity(net),
    )


def build_powernet_1d(e: MonomialExpansion) -> ConstructionReceipt:
    """Exact sigma_2 network for a power series; same skeleton as the
    Chebyshev build except the squaring chain x^{2^k} = (x^{2^{k-1}})^2
    carries no constant shift."""
    net = _univariate_network(np.asarray(e.coeffs), chebyshev_chain=False)
    act, wt = _size_bounds_1d(e.degree)
    return ConstructionReceipt(
        net,
        _depth_bound_1d(e.degree),
        act,
        wt,
        _fingerprint("powernet-1d", 2, list(map(float, e.coeffs))),
        complexity(net),
    )


# --- general section size ----------------------------------------------------


def _cheb_to_power_rows(s: int) -> np.ndarray:
    """theta[t] = monomial coefficients of T_t, t = 0..s-1 (padded to s)."""
    theta = np.zeros((s, s))
    for t in range(s):
        e = np.zeros(t + 1)
        e[t] = 1.0
        theta[t, : t + 1] = np.polynomial.chebyshev.cheb2poly(e)
    return theta


def _sary_tree(asm: _Assembler, leaves, x: _Value, s: int) -> _Value:
    """Evaluate sum_j leaves[j] * H_j(x) for the section-s hierarchy."""
    pg = power_gadget(s)
    prod = product_gadget(s)
    theta = _cheb_to_power_rows(s)
    t_s_coeffs = np.polynomial.chebyshev.cheb2poly(np.eye(s + 1)[s])

    entries = list(leaves)
    levels = round(math.log(len(entries), s))

    kinds = [["z" if e.is_zero else ("c" if e.is_const else "r") for e in entries]]
    for _ in range(levels):
        prev = kinds[-1]
        nxt = []
        for i in range(0, len(prev), s):
            group = prev[i : i + s]
            if all(k == "z" for k in group[1:]):
                nxt.append(group[0])
            else:
                nxt.append("r")
        kinds.append(nxt)
    uses_t = [False] * (levels + 1)
    for lvl in range(1, levels + 1):
        uses_t[lvl] = any(
            any(k != "z" for k in kinds[lvl - 1][s * i + 1 : s * i + s])
            for i in range(len(kinds[lvl]))
        )
    need_t = [False] * (levels + 1)
    for j in range(levels - 1, 0, -1):
        need_t[j] = uses_t[j + 1] or need_t[j + 1]

    t = x
    for level in range(1, levels + 1):
        plan = _StagePlan(asm)
        # shared power-gadget group on t serves const polynomials and the chain
        group_needed = (level <= levels - 1 and need_t[level])
        const_polys = []
        node_specs = []
        for i in range(len(entries) // s):
            group = entries[s * i : s * i + s]
            const_vec = np.array([g.bias if g.is_const else 0.0 for g in group])
            read_children = [(ti, g) for ti, g in enumerate(group) if not g.is_const]
            # polynomial in t contributed by the constant part
            gpoly = theta.T @ const_vec
            has_poly = np.any(gpoly[1:] != 0.0)
            if has_poly:
                group_needed = True
            node_specs.append((gpoly, has_poly, read_children))
        group_start = None
        if group_needed:
            rows, biases = [], []
            for win, shift in zip(pg.win, pg.bias):
                row, bias = _combine([(win, t)], asm.n_reads)
                rows.append(row)
                biases.append(bias + shift)
            group_start = plan.add_units(rows, biases)

        results = []
        for gpoly, has_poly, read_children in node_specs:
            if not read_children and not has_poly:
                results.append((None, _Value.const(gpoly[0])))
                continue
            read_entries = []
            bias = 0.0
            if has_poly:
                r = pg.read(gpoly)
                read_entries += [(group_start + j, r[j]) for j in range(pg.width)]
            else:
                bias += gpoly[0]
            for ti, child in read_children:
                if ti == 0:
                    rows, biases = [], []
                    for win, shift in zip(pg.win, pg.bias):
                        row, b = _combine([(win, child)], asm.n_reads)
                        rows.append(row)
                        biases.append(b + shift)
                    start = plan.add_units(rows, biases)
                    r = pg.read([0.0, 1.0])
                    read_entries += [(start + j, r[j]) for j in range(pg.width)]
                else:
                    rows, biases = [], []
                    for wx, wy, shift in zip(prod.win_x, prod.win_y, prod.bias):
                        row, b = _combine([(wx, t), (wy, child)], asm.n_reads)
                        rows.append(row)
                        biases.append(b + shift)
                    start = plan.add_units(rows, biases)
                    r = prod.read(theta[ti])
                    read_entries += [(start + j, r[j]) for j in range(prod.width)]
            results.append((plan.reader(read_entries, bias=bias), None))

        t_next_idx = None
        if level <= levels - 1 and need_t[level]:
            r = pg.read(t_s_coeffs)
            t_next_idx = plan.reader([(group_start + j, r[j]) for j in range(pg.width)])
        values = plan.commit()
        if values is None:
            entries = [v for _, v in results]
            continue
        entries = [values[idx] if idx is not None else v for idx, v in results]
        t = values[t_next_idx] if t_next_idx is not None else None
    return entries[0]


def build_chebnet_1d_general(e: ChebExpansion, s: int) -> ConstructionReceipt:
    """Exact sigma_s network for a univariate Chebyshev expansion.

    For s = 2 this delegates to :func:`build_chebnet_1d`.  Otherwise the
    expansion is rewritten in the section-s hierarchical basis and assembled
    as an s-ary tree with the compressed-variable chain
    T_{s^k} = T_s(T_{s^{k-1}}); depth is at most ceil(log_s n) + 1.
    """
    if s < 2:
        raise ValueError("activation power must be >= 2")
    if s == 2:
        return build_chebnet_1d(e)
    n = e.degree
    hier = chebyshev_to_hierarchical(e, s)
    asm = _Assembler(1)
    x = asm.input_value(0)
    if n == 0:
        net = asm.finalize(_Value.const(e.coeffs[0]), power=s)
    elif n <= s:
        # a single shared group realizes any polynomial of degree <= s
        pg = power_gadget(s)
        plan = _StagePlan(asm)
        rows = [win * np.eye(1)[0] for win in pg.win]
        start = plan.add_units(rows, list(pg.bias))
        mono = np.polynomial.chebyshev.cheb2poly(np.asarray(e.coeffs))
        r = pg.read(mono)
        out_idx = plan.reader([(start + j, r[j]) for j in range(pg.width)])
        values = plan.commit()
        net = asm.finalize(values[out_idx], power=s)
    else:
        leaves = _pad_to_tree([_Value.const(c) for c in hier.coeffs], s)
        out = _sary_tree(asm, leaves, x, s)
        net = asm.finalize(out, power=s)
    depth_bound = 1 if n <= s else int(math.ceil(math.log(n) / math.log(s))) + 1
    if n == 0:
        depth_bound = 0
    per_node = 2 * s * (s + 1) * (s - 1) + 4 * (s + 1)
    nodes = 0
    size = 1
    while size < n + 1:
        size *= s
        nodes += math.ceil((n + 1) / size)
    act = per_node * max(nodes, 1) + 2 * (s + 1) * (depth_bound + 1)
    wt = act * (2 * s * (s + 1) + 2 * (s + 1) + 8) + 4 * (s + 1)
    return ConstructionReceipt(
        net,
        depth_bound,
        act,
        wt,
        _fingerprint("chebnet-1d", s, list(map(float, e.coeffs))),
        complexity(net),
    )


# --- multivariate builders ---------------------------------------------------


def _nd_network(coeffs: dict, index_set: IndexSet) -> RepuNetwork:
    """Dimension-recursive assembly over hierarchical coefficients.

    The trailing variables are compiled into coefficient subnets; the leading
    variable is then assembled by the variable-coefficient product tree.
    Subnets are depth-equalized with identity carries, stacked in parallel
    with a carried copy of the leading variable, and concatenated with the
    assembly stage.
    """
    d = index_set.dim
    if d == 1:
        n = index_set.max_degree(0)
        vec = np.zeros(n + 1)
        for key, value in coeffs.items():
            vec[key[0]] = value
        return _univariate_network(vec, chebyshev_chain=True)

    lead_max = index_set.max_degree(0)
    slices = []
    for i in range(lead_max + 1):
        sub = {key[1:]: value for key, value in coeffs.items() if key[0] == i}
        sub_set = IndexSet(frozenset(sub.keys()), d - 1)
        slices.append(_nd_network(sub, sub_set))
    if lead_max == 0:
        drop_first = np.hstack([np.zeros((d - 1, 1)), np.eye(d - 1)])
        return prepend_input_map(slices[0], drop_first)

    depth = max(net.hidden_layers for net in slices)
    drop_first = np.hstack([np.zeros((d - 1, 1)), np.eye(d - 1)])
    first_only = np.eye(d)[:1]
    padded = []
    for net in slices:
        if net.hidden_layers < depth:
            net = concat(net, identity_carry(depth - net.hidden_layers, s=2, dim=1))
        padded.append(prepend_input_map(net, drop_first))
    padded.append(prepend_input_map(identity_carry(depth, s=2, dim=1), first_only))
    block = parallelize(padded)

    asm = _Assembler(lead_max + 2)
    leaves = [asm.input_value(i) for i in range(lead_max + 1)]
    x = asm.input_value(lead_max + 1)
    out = _binary_tree(asm, _pad_to_tree(leaves, 2), x, chebyshev_chain=True)
    assembly = asm.finalize(out, power=2)
    return concat(block, assembly)


def _axis_depth_bound(index_set: IndexSet) -> int:
    total = 0
    for axis in range(index_set.dim):
        n = index_set.max_degree(axis)
        if n >= 1:
            total += int(math.floor(math.log2(n))) + 1
    return total


def _nd_size_bounds(index_set: IndexSet):
    per_axis = _axis_depth_bound(index_set) + index_set.dim
    activations = 24 * len(index_set) * max(per_axis, 1) + 64
    weights = 128 * len(index_set) * max(per_axis, 1) + 128
    return activations, weights


def _nd_fingerprint(kind: str, e: ChebExpansionND) -> str:
    payload = [[list(k), e.coeffs[k]] for k in sorted(e.coeffs)]
    return _fingerprint(kind, 2, payload)


def _build_nd(e: ChebExpansionND, kind: str, depth_bound: int) -> ConstructionReceipt:
    if not validate_downward_closed(e.index_set):
        raise ValueError("index set is not downward closed")
    hier = hierarchical_coefficients_nd(e, 2)
    net = _nd_network(hier, e.index_set)
    act, wt = _nd_size_bounds(e.index_set)
    return ConstructionReceipt(
        net, depth_bound, act, wt, _nd_fingerprint(kind, e), complexity(net)
    )


def build_chebnet_tensor(e: ChebExpansionND) -> ConstructionReceipt:
    """Exact network over a full tensor-product index set.

    Depth is at most d*floor(log2 N) + d for per-axis degree N.
    """
    if not e.index_set.kind.startswith("tensor"):
        raise ValueError(f"expected a tensor index set, got {e.index_set.kind!r}")
    N = max(e.index_set.max_degree(a) for a in range(e.dim))
    bound = e.dim * (int(math.floor(math.log2(N))) if N >= 1 else 0) + e.dim
    return _build_nd(e, "chebnet-tensor", bound)


def build_chebnet_total_degree(e: ChebExpansionND) -> ConstructionReceipt:
    """Exact network over a total-degree simplex index set.

    Depth is at most d*floor(log2 n) + d for total degree n.
    """
    if not e.index_set.kind.startswith("total_degree"):
        raise ValueError(f"expected a total-degree index set, got {e.index_set.kind!r}")
    n = max(sum(k) for k in e.index_set)
    bound = e.dim * (int(math.floor(math.log2(n))) if n >= 1 else 0) + e.dim
    return _build_nd(e, "chebnet-total-degree", bound)


def build_chebnet_downward_closed(e: ChebExpansionND) -> ConstructionReceipt:
    """Exact network over any downward-closed index set.

    Depth is at most sum_i floor(log2 N_i) + d for per-axis maxima N_i.
    Rejects sets that are not downward closed.
    """
    bound = _axis_depth_bound(e.index_set) + e.dim
    return _build_nd(e, "chebnet-downward-closed", bound)
