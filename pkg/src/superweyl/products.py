"""Magnetic Weyl product, magnetic Poisson bracket, semiclassical defect.

Two independent routes compute the product of symbols:

* ``operator``: quantize both factors, multiply the matrices, dequantize.
* ``quadrature``: evaluate the double lattice sum over transformed factors
  with the symplectic and flux phases, organized as a twisted convolution
  (one momentum-kernel contraction per factor and output position, never a
  linear solve).  This route is the formula oracle and stays well
  conditioned at every ``eps``.

For zero or constant fields the flux phase has a closed form and the
quadrature route costs ``O(n^(2d+2))``; general polynomial fields need a
table of ``n^(3d)`` flux quadratures and are refused on large grids.
"""

from __future__ import annotations

import numpy as np

from .grid import GridSpec, PhaseSymbol, sfourier
from .magnetics import MagneticField, VectorPotential, exterior_derivative, scaled_triangle_flux
from .weyl import OperatorMatrix, quantize, wigner, _geometry

__all__ = [
    "moyal_product",
    "magnetic_poisson",
    "semiclassical_defect",
    "spectral_derivative",
]

GENERAL_FIELD_TRIPLE_CAP = 150_000


def _resolve_fields(field, need_potential: bool):
    """Accept either a potential or a field; derive what the route needs."""
    if isinstance(field, VectorPotential):
        return field, exterior_derivative(field)
    if isinstance(field, MagneticField):
        if need_potential:
            raise ValueError("operator route needs a vector potential with dA = B, not just the field")
        return None, field
    raise TypeError("expected a VectorPotential or MagneticField")


def _flux_table(B: MagneticField, grid: GridSpec, eps: float) -> np.ndarray:
    """Scaled triangle flux on all site triples (x, y, z); shape (ns, ns, ns)."""
    geom = _geometry(grid, eps)
    xv = geom.x_vectors
    ns = xv.shape[0]
    if B.family == "zero":
        return np.zeros((ns, ns, ns))
    if B.family == "constant":
        # gamma = (eps/2) sum_jk B_jk y_j z_k, independent of x
        yz = np.einsum("yj,jk,zk->yz", xv, B.b, xv)
        return np.broadcast_to(0.5 * eps * yz, (ns, ns, ns)).copy()
    if ns**3 > GENERAL_FIELD_TRIPLE_CAP:
        raise ValueError(
            f"quadrature route with a general field needs {ns**3} flux quadratures on this grid "
            f"(cap {GENERAL_FIELD_TRIPLE_CAP}); use a smaller grid or a constant field"
        )
    table = np.empty((ns, ns, ns))
    for a in range(ns):
        for y in range(ns):
            for z in range(ns):
                table[a, y, z] = scaled_triangle_flux(B, xv[a], xv[y], xv[z], eps)
    return table


def moyal_product(field, f: PhaseSymbol, g: PhaseSymbol, route: str = "operator") -> PhaseSymbol:
    """Magnetic Weyl product of two symbols on a shared grid.

    ``field`` is a :class:`VectorPotential` (operator route; the quadrature
    route then uses its exterior derivative) or a :class:`MagneticField`
    (quadrature route only).
    """
    if f.grid != g.grid or f.eps != g.eps or f.lam != g.lam:
        raise ValueError("factors must share grid and parameters")
    if route == "operator":
        A, _ = _resolve_fields(field, need_potential=True)
        return wigner(A, quantize(A, f) @ quantize(A, g))
    if route == "quadrature":
        _, B = _resolve_fields(field, need_potential=False)
        return _moyal_quadrature(B, f, g)
    raise ValueError(f"unknown route {route!r}")


def _moyal_quadrature(B: MagneticField, f: PhaseSymbol, g: PhaseSymbol) -> PhaseSymbol:
    grid, eps, lam = f.grid, f.eps, f.lam
    geom = _geometry(grid, eps)
    xv, kv = geom.x_vectors, geom.xi_vectors
    ns = grid.n_state
    G1 = sfourier(f).values.reshape(ns, ns)
    G2 = sfourier(g).values.reshape(ns, ns)
    flux = _flux_table(B, grid, eps)
    # exp(i (eps/2) eta . z) and exp(-i (eps/2) y . zeta) twist kernels
    twist = np.exp(1j * (eps / 2.0) * (kv @ xv.T))  # [momentum, position]
    phase_out = np.exp(-1j * (xv @ kv.T))  # [position site a, momentum index]
    out = np.empty((ns, ns), dtype=complex)
    for a in range(ns):
        # U1[y, z] = sum_eta G1[y, eta] e^{-i x_a . eta} e^{+i (eps/2) eta . z}
        U1 = (G1 * phase_out[a][None, :]) @ twist
        # U2[z, y] = sum_zeta G2[z, zeta] e^{-i x_a . zeta} e^{-i (eps/2) y . zeta}
        U2 = (G2 * phase_out[a][None, :]) @ twist.conj()
        W = U1 * U2.T * np.exp(-1j * lam * flux[a])
        # out[a, b] = sum_{y,z} e^{+i xi_b . (y + z)} W[y, z]
        E = np.exp(1j * (kv @ xv.T))  # [b, site]
        out[a] = np.einsum("by,bz,yz->b", E, E, W)
    out /= float(grid.n ** (2 * grid.d))
    return f.map_values(out.reshape(grid.symbol_shape()))


def spectral_derivative(values: np.ndarray, axis: int, site_values: np.ndarray, dual_values: np.ndarray) -> np.ndarray:
    """Fourier derivative along one lattice axis (exact on lattice modes)."""
    n = values.shape[axis]
    U = np.exp(-1j * np.outer(dual_values, site_values)) / np.sqrt(n)
    D = 1j * (U.conj().T @ (dual_values[:, None] * U))
    return np.moveaxis(np.tensordot(D, values, axes=([1], [axis])), 0, axis)


def _symbol_gradients(f: PhaseSymbol) -> tuple[list[np.ndarray], list[np.ndarray]]:
    grid = f.grid
    d = grid.d
    dx = [spectral_derivative(f.values, j, grid.x_sites, grid.xi_sites) for j in range(d)]
    dxi = [spectral_derivative(f.values, d + j, grid.xi_sites, grid.x_sites) for j in range(d)]
    return dx, dxi


def magnetic_poisson(B: MagneticField, f: PhaseSymbol, g: PhaseSymbol, lam: float | None = None) -> PhaseSymbol:
    """Magnetic Poisson bracket with spectral derivatives.

    ``{f, g} = grad_xi f . grad_x g - grad_x f . grad_xi g
    - lam * sum_jk B_jk(x) d_xi_j f d_xi_k g``.
    """
    if f.grid != g.grid:
        raise ValueError("bracket factors must share a grid")
    grid = f.grid
    lam = f.lam if lam is None else lam
    fx, fxi = _symbol_gradients(f)
    gx, gxi = _symbol_gradients(g)
    out = np.zeros(grid.symbol_shape(), dtype=complex)
    for j in range(grid.d):
        out += fxi[j] * gx[j] - fx[j] * gxi[j]
    if B.family != "zero":
        mesh = np.meshgrid(*([grid.x_sites] * grid.d), indexing="ij")
        pts = np.stack(mesh, axis=-1)
        shape_x = pts.shape[:-1] + (1,) * grid.d
        acc = np.zeros_like(out)
        for j in range(grid.d):
            for k in range(grid.d):
                if j != k:
                    acc += B.component(j, k, pts).reshape(shape_x) * fxi[j] * gxi[k]
        out -= lam * acc
    return f.map_values(out)


def semiclassical_defect(field, f: PhaseSymbol, g: PhaseSymbol, eps: float | None = None, route: str = "quadrature") -> float:
    """Max-abs of ``f * g  -  (pointwise product - i eps/2 bracket)`` remainder.

    The product is evaluated by the requested route at the symbols' ``eps``
    (overridden by the ``eps`` argument).  The quadrature route is the
    default for sweeps: the dequantization solve behind the operator route is
    numerically singular for small ``eps`` on a fixed lattice, while the
    twisted convolution is unconditionally stable and agrees with it wherever
    both are defined.
    """
    if eps is not None:
        f = PhaseSymbol(f.grid, f.values, eps, f.lam)
        g = PhaseSymbol(g.grid, g.values, eps, g.lam)
    _, B = _resolve_fields(field, need_potential=False) if not isinstance(field, VectorPotential) else (field, exterior_derivative(field))
    prod = moyal_product(field, f, g, route=route)
    bracket = magnetic_poisson(B, f, g)
    expansion = f.values * g.values - 1j * (f.eps / 2.0) * bracket.values
    return float(np.abs(prod.values - expansion).max())
