"""Feedforward networks with rectified power unit activations.

A network is an ordered list of affine layers (A_k, b_k).  The activation
sigma_s(t) = t**s for t >= 0 (0 otherwise) is applied after every layer
except the last, which stays affine.  Networks are immutable values:
weights are stored read-only, so concurrent evaluation is safe and
training always works on a private copy.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np


def repu(s: int, x):
    """sigma_s(x): x**s on the non-negative half line, zero elsewhere."""
    if s < 0:
        raise ValueError("power must be >= 0")
    x = np.asarray(x, dtype=float)
    out = np.where(x >= 0, np.power(np.maximum(x, 0.0), s), 0.0)
    return out[()] if out.ndim == 0 else out


def repu_derivative(s: int, x):
    """d/dx sigma_s(x) = s * sigma_{s-1}(x); zero at the origin for s >= 2."""
    if s < 1:
        raise ValueError("sigma_0 is not differentiable")
    x = np.asarray(x, dtype=float)
    out = np.where(x > 0, s * np.power(np.maximum(x, 0.0), s - 1), 0.0)
    return out[()] if out.ndim == 0 else out


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class Layer:
    weight: np.ndarray  # (out, in)
    bias: np.ndarray    # (out,)

    def __post_init__(self):
        w = np.atleast_2d(np.asarray(self.weight, dtype=float))
        b = np.atleast_1d(np.asarray(self.bias, dtype=float))
        if w.shape[0] != b.shape[0]:
            raise ValueError(f"weight rows {w.shape[0]} != bias length {b.shape[0]}")
        object.__setattr__(self, "weight", _freeze(w))
        object.__setattr__(self, "bias", _freeze(b))


@dataclass(frozen=True)
class RepuNetwork:
    layers: tuple
    power: int = 2

    def __post_init__(self):
        layers = tuple(
            l if isinstance(l, Layer) else Layer(*l) for l in self.layers
        )
        if not layers:
            raise ValueError("a network needs at least one affine layer")
        if self.power < 2:
            raise ValueError("activation power must be >= 2")
        for k in range(1, len(layers)):
            need = layers[k - 1].weight.shape[0]
            got = layers[k].weight.shape[1]
            if need != got:
                raise ValueError(f"layer {k} expects {got} inputs, previous produces {need}")
        object.__setattr__(self, "layers", layers)

    @property
    def input_dim(self) -> int:
        return self.layers[0].weight.shape[1]

    @property
    def output_dim(self) -> int:
        return self.layers[-1].weight.shape[0]

    @property
    def hidden_layers(self) -> int:
        return len(self.layers) - 1

    def __call__(self, x):
        return forward(self, x)


@dataclass(frozen=True)
class ComplexityReport:
    hidden_layers: int
    activation_count: int
    nonzero_weights: int


def _prepare_input(net: RepuNetwork, x):
    x = np.asarray(x, dtype=float)
    if x.ndim == 0:
        if net.input_dim != 1:
            raise ValueError(f"scalar input for a network with input_dim {net.input_dim}")
        return x.reshape(1, 1), "scalar"
    if x.ndim == 1:
        if net.input_dim == 1:
            return x.reshape(-1, 1), "batch"      # batch of scalar points
        if x.shape[0] == net.input_dim:
            return x.reshape(1, -1), "point"      # one d-dimensional point
        raise ValueError(f"input of length {x.shape[0]} does not match input_dim {net.input_dim}")
    if x.ndim == 2:
        if x.shape[1] != net.input_dim:
            raise ValueError(f"input width {x.shape[1]} does not match input_dim {net.input_dim}")
        return x, "matrix"
    raise ValueError("input must be at most two-dimensional")


def _shape_output(y: np.ndarray, mode: str, out_dim: int):
    if mode in ("scalar", "point"):
        return float(y[0, 0]) if out_dim == 1 else y[0]
    return y[:, 0] if out_dim == 1 else y


def forward(net: RepuNetwork, x):
    """Evaluate the network; affine+activation per hidden layer, affine last.

    Accepts a scalar, a single point of length input_dim, a 1-D batch of
    scalar points, or an (m, input_dim) batch.
    """
    a, mode = _prepare_input(net, x)
    for layer in net.layers[:-1]:
        a = repu(net.power, a @ layer.weight.T + layer.bias)
    last = net.layers[-1]
    y = a @ last.weight.T + last.bias
    return _shape_output(y, mode, net.output_dim)


def forward_with_trace(net: RepuNetwork, x):
    """Forward pass returning (output, post-activations, pre-activations)."""
    a, mode = _prepare_input(net, x)
    posts = [a]
    pres = []
    for layer in net.layers[:-1]:
        z = a @ layer.weight.T + layer.bias
        pres.append(z)
        a = repu(net.power, z)
        posts.append(a)
    last = net.layers[-1]
    y = a @ last.weight.T + last.bias
    return _shape_output(y, mode, net.output_dim), posts, pres


def backward(net: RepuNetwork, x, upstream):
    """Exact reverse-mode gradients of the forward map.

    ``upstream`` carries d(loss)/d(output) with the same layout as the output
    of :func:`forward` for this input.  Returns ``(grads, input_grad)`` where
    ``grads[k] = (dA_k, db_k)``; for batched inputs the parameter gradients
    are summed over the batch.
    """
    if net.power < 2:
        raise ValueError("gradients need activation power >= 2")
    a, mode = _prepare_input(net, x)
    m = a.shape[0]
    up = np.asarray(upstream, dtype=float)
    if up.size != m * net.output_dim:
        raise ValueError(f"upstream size {up.size} does not match ({m}, {net.output_dim})")
    up = up.reshape(m, net.output_dim)

    posts = [a]
    pres = []
    for layer in net.layers[:-1]:
        z = posts[-1] @ layer.weight.T + layer.bias
        pres.append(z)
        posts.append(repu(net.power, z))

    grads = [None] * len(net.layers)
    delta = up
    grads[-1] = (delta.T @ posts[-1], delta.sum(axis=0))
    for k in range(len(net.layers) - 2, -1, -1):
        delta = (delta @ net.layers[k + 1].weight) * repu_derivative(net.power, pres[k])
        grads[k] = (delta.T @ posts[k], delta.sum(axis=0))
    input_grad = delta @ net.layers[0].weight
    if mode in ("scalar", "point"):
        input_grad = input_grad[0]
        if mode == "scalar":
            input_grad = float(input_grad[0])
    elif mode == "batch":
        input_grad = input_grad[:, 0]
    return grads, input_grad


def complexity(net: RepuNetwork) -> ComplexityReport:
    """Hidden-layer count, activation count and nonzero weight count."""
    activations = sum(l.weight.shape[0] for l in net.layers[:-1])
    nonzeros = sum(
        int(np.count_nonzero(l.weight)) + int(np.count_nonzero(l.bias))
        for l in net.layers
    )
    return ComplexityReport(net.hidden_layers, activations, nonzeros)


def concat(first: RepuNetwork, second: RepuNetwork) -> RepuNetwork:
    """Feed the output of ``first`` into ``second``.

    The final affine map of ``first`` is fused with the first affine map of
    ``second``, so depths add without an extra hidden layer at the seam.
    """
    if first.power != second.power:
        raise ValueError("activation powers differ")
    if first.output_dim != second.input_dim:
        raise ValueError(
            f"output dim {first.output_dim} does not match input dim {second.input_dim}"
        )
    tail = first.layers[-1]
    head = second.layers[0]
    fused = Layer(head.weight @ tail.weight, head.weight @ tail.bias + head.bias)
    return RepuNetwork(first.layers[:-1] + (fused,) + second.layers[1:], power=first.power)


def parallelize(nets: Sequence[RepuNetwork]) -> RepuNetwork:
    """Stack equal-depth networks over a shared input.

    The first layers are stacked vertically; deeper layers become block
    diagonal.  The output is the concatenation of the member outputs.
    Mismatched depths must be padded by the caller (identity_carry).
    """
    nets = list(nets)
    if not nets:
        raise ValueError("no networks to stack")
    depth = len(nets[0].layers)
    power = nets[0].power
    din = nets[0].input_dim
    for net in nets[1:]:
        if len(net.layers) != depth:
            raise ValueError("networks must have equal depth; pad with identity_carry")
        if net.power != power or net.input_dim != din:
            raise ValueError("networks must share activation power and input dimension")
    layers = []
    for k in range(depth):
        blocks = [net.layers[k] for net in nets]
        bias = np.concatenate([bl.bias for bl in blocks])
        if k == 0:
            weight = np.vstack([bl.weight for bl in blocks])
        else:
            rows = sum(bl.weight.shape[0] for bl in blocks)
            cols = sum(bl.weight.shape[1] for bl in blocks)
            weight = np.zeros((rows, cols))
            r = c = 0
            for bl in blocks:
                h, w = bl.weight.shape
                weight[r : r + h, c : c + w] = bl.weight
                r += h
                c += w
        layers.append(Layer(weight, bias))
    return RepuNetwork(tuple(layers), power=power)


def prepend_input_map(net: RepuNetwork, matrix: np.ndarray) -> RepuNetwork:
    """Pre-compose the network with a fixed linear map of its input."""
    matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
    if matrix.shape[0] != net.input_dim:
        raise ValueError("matrix rows must match the network input dimension")
    head = net.layers[0]
    fused = Layer(head.weight @ matrix, head.bias)
    return RepuNetwork((fused,) + net.layers[1:], power=net.power)


def identity_carry(depth: int, s: int = 2, dim: int = 1) -> RepuNetwork:
    """A depth-layer network computing x -> x exactly on all of R^dim.

    Used to equalize subnet depths before :func:`parallelize`.  Each layer
    spends one identity gadget per coordinate.
    """
    from .gadgets import identity_gadget_arrays

    if depth < 0:
        raise ValueError("depth must be >= 0")
    if depth == 0:
        return RepuNetwork((Layer(np.eye(dim), np.zeros(dim)),), power=s)
    win, bias, read = identity_gadget_arrays(s)
    g = len(win)
    layers = []
    for k in range(depth):
        if k == 0:
            weight = np.kron(np.eye(dim), win[:, None])
        else:
            weight = np.kron(np.eye(dim), np.outer(win, read))
        layers.append(Layer(weight, np.tile(bias, dim)))
    layers.append(Layer(np.kron(np.eye(dim), read[None, :]), np.zeros(dim)))
    return RepuNetwork(tuple(layers), power=s)


# --- serialization ---------------------------------------------------------

def network_to_dict(net: RepuNetwork) -> dict:
    return {
        "s": net.power,
        "input_dim": net.input_dim,
        "layers": [
            {"A": layer.weight.tolist(), "b": layer.bias.tolist()}
            for layer in net.layers
        ],
    }


def network_from_dict(doc: dict) -> RepuNetwork:
    try:
        power = int(doc["s"])
        layers = tuple(
            Layer(np.array(l["A"], dtype=float), np.array(l["b"], dtype=float))
            for l in doc["layers"]
        )
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed network document: {exc}") from exc
    net = RepuNetwork(layers, power=power)
    declared = int(doc.get("input_dim", net.input_dim))
    if declared != net.input_dim:
        raise ValueError(
            f"declared input_dim {declared} does not match layer shapes ({net.input_dim})"
        )
    return net


def save_network(net: RepuNetwork, path) -> None:
    # json serializes floats with repr, which round-trips doubles exactly
    with open(path, "w") as fh:
        json.dump(network_to_dict(net), fh)
        fh.write("\n")


def load_network(path) -> RepuNetwork:
    with open(path) as fh:
        return network_from_dict(json.load(fh))
