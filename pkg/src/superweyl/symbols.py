"""Test-symbol factories.

Three families, matched to what different identity checks tolerate:

* spectral symbols: random trigonometric polynomials with a Gaussian
  envelope on the transform lattice.  Smooth and periodic, so their
  transforms are concentrated by construction; the natural notion of a
  wrap-safe Gaussian on the torus.  Used wherever identities are exact up to
  transform-tail terms (transforms, products, trace/duality).
* packet symbols: dequantized operators built from wave packets hard
  truncated to interior sites.  No displacement of such an operator ever
  wraps, which makes gauge-covariance chains exact on the lattice.
* resolved Gaussians: plain sampled Gaussians with balanced widths for
  derivative-based checks on fine grids (brackets, seminorms, expansions).
"""

from __future__ import annotations

import numpy as np

from .grid import DoubledSymbol, GridSpec, PhasePoint, PhaseSymbol, sfourier, sfourier_doubled
from .magnetics import VectorPotential
from .weyl import OperatorMatrix, _geometry, wigner

__all__ = [
    "spectral_symbol",
    "spectral_doubled",
    "packet_operator",
    "packet_symbol",
    "gaussian_symbol",
    "plane_wave",
    "lattice_point",
    "random_lattice_point",
]


def spectral_symbol(grid: GridSpec, rng: np.random.Generator, site_sigma: float, eps: float = 1.0, lam: float = 1.0) -> PhaseSymbol:
    """Random periodic symbol with transform envelope ``exp(-|m|^2 / 2 s^2)``."""
    shape = grid.symbol_shape()
    mesh = np.meshgrid(*([grid.site_indices] * (2 * grid.d)), indexing="ij")
    r2 = sum(m.astype(float) ** 2 for m in mesh)
    coeff = np.exp(-r2 / (2 * site_sigma**2)) * np.exp(2j * np.pi * rng.random(shape)) * (0.5 + rng.random(shape))
    return sfourier(PhaseSymbol(grid, coeff, eps, lam))


def spectral_doubled(grid: GridSpec, rng: np.random.Generator, site_sigma: float, eps: float = 1.0, lam: float = 1.0) -> DoubledSymbol:
    """Doubled-lattice analog of :func:`spectral_symbol`."""
    shape = grid.doubled_shape()
    mesh = np.meshgrid(*([grid.site_indices] * (4 * grid.d)), indexing="ij")
    r2 = sum(m.astype(float) ** 2 for m in mesh)
    coeff = np.exp(-r2 / (2 * site_sigma**2)) * np.exp(2j * np.pi * rng.random(shape)) * (0.5 + rng.random(shape))
    return sfourier_doubled(DoubledSymbol(grid, coeff, eps, lam))


def packet_operator(
    grid: GridSpec,
    rng: np.random.Generator,
    nterms: int = 3,
    support_radius: int | None = None,
    center_spread: float = 0.4,
    widths: tuple[float, float] = (0.6, 1.0),
) -> OperatorMatrix:
    """Random operator from Gaussian wave packets truncated to interior sites.

    The support radius defaults to ``(n - 1) // 4`` so that no matrix entry
    sits further than ``(n - 1) // 2`` sites off the diagonal; displacement
    decompositions of such operators never wrap.
    """
    K = (grid.n - 1) // 4 if support_radius is None else support_radius
    geom = _geometry(grid, 1.0)
    xv, sites = geom.x_vectors, geom.sites
    mask = np.abs(sites).max(axis=1) <= K
    T = np.zeros((grid.n_state, grid.n_state), dtype=complex)
    for _ in range(nterms):
        c1, c2 = rng.uniform(-center_spread, center_spread, (2, grid.d))
        k1, k2 = rng.uniform(-0.5, 0.5, (2, grid.d)) * (grid.half * grid.dxi)
        w = rng.uniform(*widths)
        phi = mask * np.exp(-np.sum((xv - c1) ** 2, axis=-1) / (2 * w**2) + 1j * (xv @ k1))
        psi = mask * np.exp(-np.sum((xv - c2) ** 2, axis=-1) / (2 * w**2) + 1j * (xv @ k2))
        T += (rng.standard_normal() + 1j * rng.standard_normal()) * np.outer(phi, psi.conj())
    return OperatorMatrix(grid, T / np.abs(T).max())


def packet_symbol(A: VectorPotential, grid: GridSpec, rng: np.random.Generator, eps: float = 1.0, lam: float = 1.0, **kw) -> PhaseSymbol:
    """Symbol of a random interior packet operator in the given gauge."""
    T = packet_operator(grid, rng, **kw)
    return wigner(A, OperatorMatrix(grid, T.entries, eps=eps, lam=lam))


def gaussian_symbol(
    grid: GridSpec,
    center_x,
    center_xi,
    sigma_x: float,
    sigma_xi: float,
    momentum_shift=None,
    eps: float = 1.0,
    lam: float = 1.0,
) -> PhaseSymbol:
    """Sampled Gaussian with optional plane-wave modulation."""
    axes = [grid.x_sites] * grid.d + [grid.xi_sites] * grid.d
    mesh = np.meshgrid(*axes, indexing="ij")
    X = np.stack(mesh[: grid.d], axis=-1)
    XI = np.stack(mesh[grid.d :], axis=-1)
    cx = np.broadcast_to(np.atleast_1d(np.asarray(center_x, dtype=float)), (grid.d,))
    cxi = np.broadcast_to(np.atleast_1d(np.asarray(center_xi, dtype=float)), (grid.d,))
    vals = np.exp(
        -np.sum((X - cx) ** 2, axis=-1) / (2 * sigma_x**2) - np.sum((XI - cxi) ** 2, axis=-1) / (2 * sigma_xi**2)
    ).astype(complex)
    if momentum_shift is not None:
        vals = vals * np.exp(1j * (X @ np.atleast_1d(np.asarray(momentum_shift, dtype=float))))
    return PhaseSymbol(grid, vals, eps, lam)


def plane_wave(grid: GridSpec, Y: PhasePoint, eps: float = 1.0, lam: float = 1.0) -> PhaseSymbol:
    """``exp(i sigma(X, Y))`` sampled on the lattice."""
    axes = [grid.x_sites] * grid.d + [grid.xi_sites] * grid.d
    mesh = np.meshgrid(*axes, indexing="ij")
    X = np.stack(mesh[: grid.d], axis=-1)
    XI = np.stack(mesh[grid.d :], axis=-1)
    vals = np.exp(1j * (XI @ Y.x - X @ Y.xi))
    return PhaseSymbol(grid, vals, eps, lam)


def lattice_point(grid: GridSpec, x_sites, xi_sites) -> PhasePoint:
    x = np.atleast_1d(np.asarray(x_sites, dtype=int)) * grid.dx
    xi = np.atleast_1d(np.asarray(xi_sites, dtype=int)) * grid.dxi
    return PhasePoint(x, xi)


def random_lattice_point(grid: GridSpec, rng: np.random.Generator, max_site: int | None = None) -> PhasePoint:
    k = grid.half if max_site is None else max_site
    return lattice_point(grid, rng.integers(-k, k + 1, grid.d), rng.integers(-k, k + 1, grid.d))
