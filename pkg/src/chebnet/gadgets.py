"""Single-hidden-layer building blocks for RePU networks.

Everything here rests on the pairing identity

    sigma_s(t) + (-1)**s * sigma_s(-t) = t**s   for all real t,

which turns s-th powers of affine forms into exact one-layer subnets on the
whole real line.  For s = 2 the classical four-unit constants realize the
identity, the square and the product

    x  = ID_READ . sigma_2(ID_IN * x + ID_SHIFT)
    x^2 = SQ_READ . sigma_2(SQ_IN * x)
    x*y = ID_READ . sigma_2(ID_IN * x + ID_SHIFT * y)

For general s the coefficients are obtained by solving small Vandermonde
systems once per s and validating the resulting identities numerically.
"""

from __future__ import annotations

from functools import lru_cache
from math import comb, cos, pi

import numpy as np

# s = 2 gadget constants (four units for identity/product, two for squares)
ID_IN = np.array([1.0, -1.0, 1.0, -1.0])
ID_SHIFT = np.array([1.0, -1.0, -1.0, 1.0])
ID_READ = np.array([0.25, 0.25, -0.25, -0.25])
SQ_IN = np.array([1.0, -1.0])
SQ_READ = np.array([1.0, 1.0])

for _arr in (ID_IN, ID_SHIFT, ID_READ, SQ_IN, SQ_READ):
    _arr.flags.writeable = False


class PowerGadget:
    """One hidden layer evaluating any polynomial of degree <= s exactly.

    Units come in sign pairs sigma_s(+-(x + t_i)) over s+1 distinct nodes
    t_i; the pair sums are (x + t_i)**s, which span the degree-s space, so a
    polynomial with coefficient vector g is an affine read with weights
    solved from the expansion matrix.
    """

    def __init__(self, s: int):
        if s < 2:
            raise ValueError("power must be >= 2")
        self.s = s
        nodes = np.array([cos(i * pi / s) for i in range(s + 1)])
        self.nodes = nodes
        self.width = 2 * (s + 1)
        # in-weights/biases for the paired units
        self.win = np.empty(self.width)
        self.bias = np.empty(self.width)
        self.win[0::2] = 1.0
        self.win[1::2] = -1.0
        self.bias[0::2] = nodes
        self.bias[1::2] = -nodes
        # M[j, i] = coefficient of x^j in (x + t_i)^s
        M = np.empty((s + 1, s + 1))
        for j in range(s + 1):
            M[j] = comb(s, j) * nodes ** (s - j)
        self._solve = np.linalg.inv(M)
        self._pair_sign = (-1.0) ** s
        self._validate()

    def read(self, poly_coeffs) -> np.ndarray:
        """Read weights realizing sum_j poly_coeffs[j] * x**j (degree <= s)."""
        g = np.zeros(self.s + 1)
        coeffs = np.asarray(poly_coeffs, dtype=float)
        if len(coeffs) > self.s + 1:
            raise ValueError(f"degree {len(coeffs) - 1} exceeds gadget power {self.s}")
        g[: len(coeffs)] = coeffs
        mu = self._solve @ g
        r = np.empty(self.width)
        r[0::2] = mu
        r[1::2] = self._pair_sign * mu
        return r

    def _validate(self):
        rng = np.random.default_rng(12345)
        x = rng.uniform(-2.0, 2.0, 64)
        for _ in range(4):
            g = rng.uniform(-1.0, 1.0, self.s + 1)
            want = np.polynomial.polynomial.polyval(x, g)
            pre = np.outer(x, self.win) + self.bias
            got = np.where(pre >= 0, pre**self.s, 0.0) @ self.read(g)
            err = np.max(np.abs(got - want))
            if err > 1e-12 * max(1.0, np.max(np.abs(want))):
                raise AssertionError(f"power gadget failed self-check: err={err:.3e}")


class ProductGadget:
    """One hidden layer evaluating y * g(x) for any g of degree <= s-1.

    Units are sign pairs sigma_s(+-(x + b_k * y + c_r)).  Combining the b_k
    direction with Vandermonde weights isolates the part linear in y,
    leaving s * y * (x + c_r)**(s-1); combining the c_r direction then
    reproduces an arbitrary degree-(s-1) polynomial factor.
    """

    def __init__(self, s: int):
        if s < 2:
            raise ValueError("power must be >= 2")
        self.s = s
        b = np.array([cos(k * pi / s) for k in range(s + 1)])
        c = np.array([cos((2 * r + 1) * pi / (2 * s)) for r in range(s)])
        self.b_nodes = b
        self.c_nodes = c
        self.width = 2 * s * (s + 1)
        # unit ordering: (r, k, +-): index 2*(r*(s+1)+k) and +1
        nb = s + 1
        win_x = np.empty(self.width)
        win_y = np.empty(self.width)
        bias = np.empty(self.width)
        for r in range(s):
            for k in range(nb):
                base = 2 * (r * nb + k)
                win_x[base], win_x[base + 1] = 1.0, -1.0
                win_y[base], win_y[base + 1] = b[k], -b[k]
                bias[base], bias[base + 1] = c[r], -c[r]
        self.win_x, self.win_y, self.bias = win_x, win_y, bias
        # nu extracts the coefficient of b^1 from the s-th power expansion
        V = np.vander(b, s + 1, increasing=True).T
        self._nu = np.linalg.solve(V, np.eye(s + 1)[1])
        # P[j, r] = coefficient of x^j in (x + c_r)^(s-1)
        P = np.empty((s, s))
        for j in range(s):
            P[j] = comb(s - 1, j) * c ** (s - 1 - j)
        self._factor_solve = np.linalg.inv(P)
        self._pair_sign = (-1.0) ** s
        self._validate()

    def read(self, factor_coeffs) -> np.ndarray:
        """Read weights realizing y * sum_j factor_coeffs[j] * x**j."""
        g = np.zeros(self.s)
        coeffs = np.asarray(factor_coeffs, dtype=float)
        if len(coeffs) > self.s:
            raise ValueError(f"factor degree {len(coeffs) - 1} exceeds {self.s - 1}")
        g[: len(coeffs)] = coeffs
        w = self._factor_solve @ g
        mu = np.outer(w, self._nu) / self.s  # (r, k)
        r = np.empty(self.width)
        flat = mu.reshape(-1)
        r[0::2] = flat
        r[1::2] = self._pair_sign * flat
        return r

    def _validate(self):
        rng = np.random.default_rng(54321)
        x = rng.uniform(-2.0, 2.0, 64)
        y = rng.uniform(-2.0, 2.0, 64)
        for _ in range(4):
            g = rng.uniform(-1.0, 1.0, self.s)
            want = y * np.polynomial.polynomial.polyval(x, g)
            pre = np.outer(x, self.win_x) + np.outer(y, self.win_y) + self.bias
            got = np.where(pre >= 0, pre**self.s, 0.0) @ self.read(g)
            err = np.max(np.abs(got - want))
            if err > 1e-12 * max(1.0, np.max(np.abs(want))):
                raise AssertionError(f"product gadget failed self-check: err={err:.3e}")


@lru_cache(maxsize=None)
def power_gadget(s: int) -> PowerGadget:
    return PowerGadget(s)


@lru_cache(maxsize=None)
def product_gadget(s: int) -> ProductGadget:
    return ProductGadget(s)


def identity_gadget_arrays(s: int):
    """(in-weights, biases, read) of a one-layer exact identity subnet."""
    if s == 2:
        return ID_IN, ID_SHIFT, ID_READ
    gadget = power_gadget(s)
    return gadget.win, gadget.bias, gadget.read([0.0, 1.0])
