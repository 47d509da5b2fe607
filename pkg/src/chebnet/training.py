"""Fine-tuning of constructed networks: RMSProp on full-batch squared loss."""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .network import Layer, RepuNetwork, backward, forward


@dataclass(frozen=True)
class TrainConfig:
    gamma: float = 0.99          # squared-gradient decay
    eta: float = 1e-5            # learning rate
    epsilon: float = 1e-8        # denominator guard
    iterations: int = 2000
    full_batch: bool = True

    def __post_init__(self):
        if not (0.0 < self.gamma < 1.0):
            raise ValueError("gamma must lie in (0, 1)")
        if self.eta <= 0 or self.epsilon <= 0:
            raise ValueError("eta and epsilon must be positive")
        if self.iterations < 0:
            raise ValueError("iterations must be >= 0")
        if not self.full_batch:
            raise ValueError("only full-batch training is supported")


@dataclass(frozen=True)
class Dataset:
    inputs: np.ndarray   # (m,) scalar points or (m, d)
    targets: np.ndarray  # (m,) or (m, out)

    def __post_init__(self):
        x = np.asarray(self.inputs, dtype=float)
        y = np.asarray(self.targets, dtype=float)
        if len(x) == 0:
            raise ValueError("dataset must be non-empty")
        if len(x) != len(y):
            raise ValueError("inputs and targets must have equal length")
        x.flags.writeable = False
        y.flags.writeable = False
        object.__setattr__(self, "inputs", x)
        object.__setattr__(self, "targets", y)

    def __len__(self) -> int:
        return len(self.inputs)


@dataclass
class TrainTrace:
    losses: list = field(default_factory=list)
    diverged: bool = False
    final_fingerprint: str = ""


def uniform_grid_dataset(f: Callable, points: int = 200) -> Dataset:
    """Equispaced points on [-1, 1] with targets f(x); 200 by default."""
    if points < 1:
        raise ValueError("need at least one point")
    x = np.linspace(-1.0, 1.0, points)
    return Dataset(x, np.asarray(f(x), dtype=float))


def test_function(name: str) -> Callable:
    """The two reference targets: a Gaussian and a flat-at-zero bump."""
    if name == "f1":
        return lambda x: np.exp(-np.square(np.asarray(x, dtype=float)))
    if name == "f2":
        def f2(x):
            x = np.asarray(x, dtype=float)
            with np.errstate(divide="ignore"):
                inner = np.where(x == 0.0, np.inf, np.square(x))
                out = np.where(x == 0.0, 0.0, np.exp(-1.0 / inner))
            return out[()] if out.ndim == 0 else out
        return f2
    raise ValueError(f"unknown test function {name!r}; available: f1, f2")


def loss_mse(net: RepuNetwork, data: Dataset) -> float:
    """(1/m) * sum ||net(x_i) - y_i||^2."""
    pred = np.asarray(forward(net, data.inputs), dtype=float)
    resid = pred.reshape(len(data), -1) - data.targets.reshape(len(data), -1)
    return float(np.mean(np.sum(resid * resid, axis=1)))


def rmsprop_step(params, grads, state, cfg: TrainConfig):
    """v <- gamma*v + (1-gamma)*g^2;  theta <- theta - eta*g/sqrt(v+eps).

    ``state`` is the list of running v arrays (zeros on the first step).
    Returns updated (params, state); inputs are not mutated.
    """
    if state is None:
        state = [np.zeros_like(p) for p in params]
    new_params, new_state = [], []
    for p, g, v in zip(params, grads, state):
        v = cfg.gamma * v + (1.0 - cfg.gamma) * g * g
        new_params.append(p - cfg.eta * g / np.sqrt(v + cfg.epsilon))
        new_state.append(v)
    return new_params, new_state


def _params(net: RepuNetwork):
    out = []
    for layer in net.layers:
        out.append(layer.weight.copy())
        out.append(layer.bias.copy())
    return out


def _with_params(net: RepuNetwork, params) -> RepuNetwork:
    layers = tuple(
        Layer(params[2 * k], params[2 * k + 1]) for k in range(len(net.layers))
    )
    return RepuNetwork(layers, power=net.power)


def _fingerprint(params) -> str:
    h = hashlib.sha256()
    for p in params:
        h.update(np.ascontiguousarray(p).tobytes())
    return h.hexdigest()[:16]


def train(net: RepuNetwork, data: Dataset, cfg: TrainConfig = TrainConfig()):
    """Full-batch RMSProp descent on the mean squared loss.

    Deterministic: no sampling, no random state.  Training halts and flags
    the trace as diverged as soon as the loss or any parameter turns
    non-finite; the input network is never mutated and the trained copy is
    returned alongside the trace.
    """
    params = _params(net)
    state = None
    trace = TrainTrace()
    m = len(data)
    targets = data.targets.reshape(m, -1)
    current = net
    for _ in range(cfg.iterations):
        pred = np.asarray(forward(current, data.inputs), dtype=float).reshape(m, -1)
        loss = float(np.mean(np.sum((pred - targets) ** 2, axis=1)))
        if not math.isfinite(loss):
            trace.diverged = True
            break
        trace.losses.append(loss)
        upstream = 2.0 * (pred - targets) / m
        grads_pairs, _ = backward(current, data.inputs, upstream)
        grads = [g for pair in grads_pairs for g in pair]
        params, state = rmsprop_step(params, grads, state, cfg)
        if not all(np.all(np.isfinite(p)) for p in params):
            trace.diverged = True
            break
        current = _with_params(net, params)
    trace.final_fingerprint = _fingerprint(_params(current))
    return trace, current
