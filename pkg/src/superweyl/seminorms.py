"""Symbol-class seminorm diagnostics.

Grid-native finite-difference realizations of the weighted-derivative
seminorms used to classify symbols: second-order central differences with
step equal to the lattice spacing, weight ``<xi>^(-m - |a| delta + |alpha| rho)``
for ordinary symbols and the two-bracket analog with separate left/right
momentum orders for doubled symbols.
"""

from __future__ import annotations

from itertools import product

import numpy as np

from .grid import DoubledSymbol, GridSpec, PhaseSymbol

__all__ = ["hoermander_seminorm", "super_seminorm"]

MAX_ORDER = 4


def _central_diff(values: np.ndarray, axis: int, order: int, h: float) -> np.ndarray:
    out = values
    for _ in range(order):
        out = (np.roll(out, -1, axis=axis) - np.roll(out, 1, axis=axis)) / (2.0 * h)
    return out


def _multi_indices(n_axes: int, total: int):
    """All derivative multi-indices over ``n_axes`` axes with given total order."""
    if n_axes == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _multi_indices(n_axes - 1, total - first):
            yield (first, *rest)


def _bracket_weights(grid: GridSpec, exponent: float) -> np.ndarray:
    """``<xi>^exponent`` over the momentum axes, broadcast over position axes."""
    mesh = np.meshgrid(*([grid.xi_sites] * grid.d), indexing="ij")
    norm2 = sum(m**2 for m in mesh)
    w = (1.0 + norm2) ** (exponent / 2.0)
    return w.reshape((1,) * grid.d + (grid.n,) * grid.d)


def hoermander_seminorm(f: PhaseSymbol, m: float, rho: float = 1.0, delta: float = 0.0, N: int = 0) -> float:
    """``max over |a|+|alpha| <= N of sup <xi>^(-m - |a| delta + |alpha| rho) |d^a_x d^alpha_xi f|``."""
    if N > MAX_ORDER:
        raise ValueError(f"finite-difference seminorms support N <= {MAX_ORDER}")
    if delta > rho:
        raise ValueError("seminorm requires delta <= rho")
    grid = f.grid
    d = grid.d
    best = 0.0
    for total in range(N + 1):
        for idx in _multi_indices(2 * d, total):
            a, alpha = idx[:d], idx[d:]
            deriv = f.values
            for ax, order in enumerate(a):
                deriv = _central_diff(deriv, ax, order, grid.dx)
            for ax, order in enumerate(alpha):
                deriv = _central_diff(deriv, d + ax, order, grid.dxi)
            w = _bracket_weights(grid, -m - sum(a) * delta + sum(alpha) * rho)
            best = max(best, float(np.max(w * np.abs(deriv))))
    return best


def super_seminorm(
    F: DoubledSymbol, mL: float, mR: float, rho: float = 1.0, delta: float = 0.0, N: int = 0
) -> float:
    """Two-bracket analog for doubled symbols, left and right momenta weighted separately."""
    if N > MAX_ORDER:
        raise ValueError(f"finite-difference seminorms support N <= {MAX_ORDER}")
    if delta > rho:
        raise ValueError("seminorm requires delta <= rho")
    grid = F.grid
    d = grid.d
    wl_shape = (1,) * d + (grid.n,) * d + (1,) * (2 * d)
    wr_shape = (1,) * (3 * d) + (grid.n,) * d
    mesh = np.meshgrid(*([grid.xi_sites] * d), indexing="ij")
    norm2 = sum(v**2 for v in mesh)
    best = 0.0
    for total in range(N + 1):
        for idx in _multi_indices(4 * d, total):
            aL, alphaL, aR, alphaR = idx[:d], idx[d : 2 * d], idx[2 * d : 3 * d], idx[3 * d :]
            deriv = F.values
            for ax, order in enumerate(aL):
                deriv = _central_diff(deriv, ax, order, grid.dx)
            for ax, order in enumerate(alphaL):
                deriv = _central_diff(deriv, d + ax, order, grid.dxi)
            for ax, order in enumerate(aR):
                deriv = _central_diff(deriv, 2 * d + ax, order, grid.dx)
            for ax, order in enumerate(alphaR):
                deriv = _central_diff(deriv, 3 * d + ax, order, grid.dxi)
            eL = -mL + sum(alphaL) * rho - sum(aL) * delta
            eR = -mR + sum(alphaR) * rho - sum(aR) * delta
            wL = ((1.0 + norm2) ** (eL / 2.0)).reshape(wl_shape)
            wR = ((1.0 + norm2) ** (eR / 2.0)).reshape(wr_shape)
            best = max(best, float(np.max(wL * wR * np.abs(deriv))))
    return best
