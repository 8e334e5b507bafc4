"""Super-operator calculus: quantization of doubled-phase-space symbols.

A doubled symbol ``F(X_L, X_R)`` quantizes to a linear map on operators,
``g -> (2 pi)^{-2d} mu^2 sum_Xb (transform F)(Xb) w(X_L) g w(X_R)``.  The
module provides that map in dense and apply-only form, the symbol-level
products it induces (the semi-super product against an ordinary symbol and
the super product of two doubled symbols), the integral-kernel picture with
its exact inverse (the super Wigner transform), the Liouville symbol, and
the transpose/duality utilities.

Route structure mirrors the ordinary product: operator/kernel routes are
exact lattice algebra (assembly, matrix products, structured solves), and
quadrature routes evaluate the displayed sums independently for
cross-checking.  Dense materialization is capped at state dimension
``DENSE_STATE_CAP``; the displacement-pair assembly and its inverse are the
workhorses behind every dense path.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .grid import (
    DoubledPoint,
    DoubledSymbol,
    GridSpec,
    PhaseSymbol,
    sfourier,
    sfourier_doubled,
    transpose_doubled,
)
from .magnetics import MagneticField, VectorPotential, exterior_derivative, quadrangle_flux
from .weyl import (
    OperatorMatrix,
    _context,
    _geometry,
    gauge_tag,
    quantize,
    quantize_matrix,
    weyl_system,
    wigner,
)

__all__ = [
    "SuperOperatorMap",
    "LiouvilleSpec",
    "super_weyl_system",
    "super_quantize",
    "super_dequantize",
    "liouville_symbol",
    "semi_super_product",
    "kernel_map",
    "integral_apply",
    "kernel_compose",
    "super_wigner",
    "super_product",
    "hs_adjoint",
    "hs_inner",
    "pairing_phase",
    "pairing_doubled",
    "super_norm_bound",
    "kernel_map_closed_form_probe",
    "super_wigner_closed_form_probe",
]

DENSE_STATE_CAP = 32
GENERAL_FIELD_QUADRUPLE_CAP = 100_000


@dataclass(frozen=True)
class SuperOperatorMap:
    """Linear map on operators, with optional dense (vectorized) form."""

    grid: GridSpec
    apply: Callable[[np.ndarray], np.ndarray]
    dense: np.ndarray | None = None
    gauge: str = ""
    eps: float = 1.0
    lam: float = 1.0

    def apply_op(self, g: OperatorMatrix) -> OperatorMatrix:
        if g.grid != self.grid:
            raise ValueError("operator grid does not match super map")
        return OperatorMatrix(self.grid, self.apply(g.entries), self.gauge, self.eps, self.lam)

    def compose(self, other: "SuperOperatorMap") -> "SuperOperatorMap":
        if self.dense is None or other.dense is None:
            raise ValueError("composition needs dense forms (state dimension too large)")
        dense = self.dense @ other.dense
        return SuperOperatorMap(self.grid, _dense_apply(self.grid, dense), dense, self.gauge, self.eps, self.lam)


@dataclass(frozen=True)
class LiouvilleSpec:
    """Hamiltonian symbol whose commutator map is a quantized doubled symbol."""

    h: PhaseSymbol


def _dense_apply(grid: GridSpec, dense: np.ndarray) -> Callable[[np.ndarray], np.ndarray]:
    ns = grid.n_state

    def apply(g: np.ndarray) -> np.ndarray:
        return (dense @ np.asarray(g, dtype=complex).reshape(-1)).reshape(ns, ns)

    return apply


def super_weyl_system(A: VectorPotential, grid: GridSpec, Xb: DoubledPoint, eps: float = 1.0, lam: float = 1.0) -> SuperOperatorMap:
    """Two-sided magnetic translation ``g -> w(X_L) g w(X_R)``."""
    wL = weyl_system(A, grid, Xb.left, eps, lam)
    wR = weyl_system(A, grid, Xb.right, eps, lam)

    def apply(g: np.ndarray) -> np.ndarray:
        return wL.entries @ np.asarray(g, dtype=complex) @ wR.entries

    dense = np.kron(wL.entries, wR.entries.T) if grid.n_state <= DENSE_STATE_CAP else None
    return SuperOperatorMap(grid, apply, dense, gauge_tag(A), eps, lam)


def _doubled_transform_blocks(F: DoubledSymbol) -> np.ndarray:
    """Transform of a doubled symbol, reshaped to [sL, etaL, sR, etaR] flats."""
    ns = F.grid.n_state
    return sfourier_doubled(F).values.reshape(ns, ns, ns, ns)


def super_quantize(A: VectorPotential, F: DoubledSymbol) -> SuperOperatorMap:
    """Quantize a doubled symbol to a super-operator map.

    Dense assembly runs displacement pair by displacement pair: the
    ``(eta_L, eta_R)`` block of the transformed symbol is contracted with the
    two momentum kernels, scaled by the circulation phases and scattered onto
    the generalized-diagonal support of the pair.
    """
    grid, eps, lam = F.grid, F.eps, F.lam
    if A.d != grid.d:
        raise ValueError("potential dimension does not match symbol grid")
    ns = grid.n_state
    if ns > DENSE_STATE_CAP:
        return _super_quantize_apply_only(A, F)
    ctx = _context(grid, A, eps, lam)
    geom = ctx.geom
    G = _doubled_transform_blocks(F)
    pref = 1.0 / float(grid.n ** (2 * grid.d))
    dense = np.zeros((ns * ns, ns * ns), dtype=complex)
    rows = geom.rows
    for sL in range(ns):
        VL = geom.V * geom.q[sL][None, :]
        cL = ctx.c[sL]
        pL = geom.perm[sL]
        for sR in range(ns):
            VR = geom.V * geom.q[sR][None, :]
            C = (VL @ G[sL, :, sR, :]) @ VR.T
            C = pref * cL[:, None] * ctx.c[sR][None, :] * C
            row_idx = rows[:, None] * ns + geom.perm[sR][None, :]
            col_idx = pL[:, None] * ns + rows[None, :]
            dense[row_idx, col_idx] += C
    return SuperOperatorMap(grid, _dense_apply(grid, dense), dense, gauge_tag(A), eps, lam)


def _super_quantize_apply_only(A: VectorPotential, F: DoubledSymbol) -> SuperOperatorMap:
    """Apply-only form for state dimensions past the dense cap (slow path)."""
    grid, eps, lam = F.grid, F.eps, F.lam
    ctx = _context(grid, A, eps, lam)
    geom = ctx.geom
    ns = grid.n_state
    G = _doubled_transform_blocks(F)
    pref = 1.0 / float(grid.n ** (2 * grid.d))

    def apply(g: np.ndarray) -> np.ndarray:
        g = np.asarray(g, dtype=complex)
        out = np.zeros((ns, ns), dtype=complex)
        for sL in range(ns):
            VL = geom.V * geom.q[sL][None, :]
            # left translation of g by displacement sL, with row phases pending
            for sR in range(ns):
                VR = geom.V * geom.q[sR][None, :]
                C = (VL @ G[sL, :, sR, :]) @ VR.T
                block = pref * ctx.c[sL][:, None] * ctx.c[sR][None, :] * C
                out[np.ix_(geom.rows, geom.perm[sR])] += block * g[np.ix_(geom.perm[sL], geom.rows)]
        return out

    return SuperOperatorMap(grid, apply, None, gauge_tag(A), eps, lam)


def super_dequantize(A: VectorPotential, dense: np.ndarray, grid: GridSpec, eps: float = 1.0, lam: float = 1.0) -> DoubledSymbol:
    """Exact inverse of the dense assembly in :func:`super_quantize`."""
    ctx = _context(grid, A, eps, lam)
    geom = ctx.geom
    ns = grid.n_state
    pref = 1.0 / float(grid.n ** (2 * grid.d))
    G = np.empty((ns, ns, ns, ns), dtype=complex)
    rows = geom.rows
    for sL in range(ns):
        VL = geom.V * geom.q[sL][None, :]
        pL = geom.perm[sL]
        for sR in range(ns):
            VR = geom.V * geom.q[sR][None, :]
            row_idx = rows[:, None] * ns + geom.perm[sR][None, :]
            col_idx = pL[:, None] * ns + rows[None, :]
            C = dense[row_idx, col_idx] / (pref * ctx.c[sL][:, None] * ctx.c[sR][None, :])
            B = np.linalg.solve(VR, np.linalg.solve(VL, C).T).T
            G[sL, :, sR, :] = B
    sym = DoubledSymbol(grid, G.reshape(grid.doubled_shape()), eps, lam)
    return sfourier_doubled(sym)


def liouville_symbol(h: PhaseSymbol) -> DoubledSymbol:
    """``-i (h(X_L) - h(X_R))``; quantizes to the commutator map with ``op(h)``."""
    grid = h.grid
    d2 = 2 * grid.d
    left = h.values.reshape(h.values.shape + (1,) * d2)
    right = h.values.reshape((1,) * d2 + h.values.shape)
    return DoubledSymbol(grid, -1j * (left - right), h.eps, h.lam)


# --------------------------------------------------------------------------
# semi-super product


def _resolve_potential(field) -> VectorPotential:
    if isinstance(field, VectorPotential):
        return field
    raise ValueError("this route needs a vector potential with dA = B, not just the field")


def _resolve_field(field) -> MagneticField:
    if isinstance(field, VectorPotential):
        return exterior_derivative(field)
    if isinstance(field, MagneticField):
        return field
    raise TypeError("expected a VectorPotential or MagneticField")


def semi_super_product(field, F: DoubledSymbol, g: PhaseSymbol, route: str = "operator") -> PhaseSymbol:
    """Symbol of a quantized doubled symbol applied to a quantized symbol.

    Routes: ``operator`` (quantize, apply, dequantize), ``fourier-quadrature``
    (lattice sum over transformed factors with the conjoined-triangle flux),
    ``direct-quadrature`` (lattice sum over untransformed factors; requires
    ``eps == 1`` so the half-step sample points land on the lattice after the
    doubling substitution of the displacement variables).
    """
    if F.grid != g.grid or F.eps != g.eps or F.lam != g.lam:
        raise ValueError("doubled symbol and symbol must share grid and parameters")
    if route == "operator":
        A = _resolve_potential(field)
        S = super_quantize(A, F)
        return wigner(A, S.apply_op(quantize(A, g)))
    if route == "fourier-quadrature":
        return _semi_super_fourier_quadrature(_resolve_field(field), F, g)
    if route == "direct-quadrature":
        return _semi_super_direct_quadrature(_resolve_field(field), F, g)
    raise ValueError(f"unknown route {route!r}")


def _quadrangle_table(B: MagneticField, grid: GridSpec, eps: float) -> np.ndarray:
    """Conjoined-triangle flux on site quadruples (x, yL, yR, z)."""
    geom = _geometry(grid, eps)
    xv = geom.x_vectors
    ns = xv.shape[0]
    if B.family == "zero":
        return np.zeros((ns, ns, ns, ns))
    if B.family == "constant":
        # gamma~ = (eps/2) [<yL, B z> + <yL + z, B yR>]; bilinear in the sites
        yz = 0.5 * eps * np.einsum("aj,jk,bk->ab", xv, B.b, xv)
        gamma = np.zeros((ns, ns, ns, ns))
        gamma += yz[None, :, None, :]  # <yL, B z> on axes (yL, z)
        gamma += yz[None, :, :, None]  # <yL, B yR> on axes (yL, yR)
        gamma += yz.T[None, None, :, :]  # <z, B yR> on axes (yR, z)
        return gamma
    if ns**4 > GENERAL_FIELD_QUADRUPLE_CAP:
        raise ValueError(
            f"quadrature route with a general field needs {ns**4} flux quadratures "
            f"(cap {GENERAL_FIELD_QUADRUPLE_CAP}); use a smaller grid or a constant field"
        )
    table = np.empty((ns, ns, ns, ns))
    for a in range(ns):
        for yl in range(ns):
            for yr in range(ns):
                for z in range(ns):
                    table[a, yl, yr, z] = quadrangle_flux(B, xv[a], xv[yl], xv[yr], xv[z], eps)
    return table


def _semi_super_fourier_quadrature(B: MagneticField, F: DoubledSymbol, g: PhaseSymbol) -> PhaseSymbol:
    grid, eps, lam = F.grid, F.eps, F.lam
    geom = _geometry(grid, eps)
    xv, kv = geom.x_vectors, geom.xi_vectors
    ns = grid.n_state
    GF = _doubled_transform_blocks(F).reshape(ns * ns, ns * ns)
    # flatten phase index P = (position site, momentum site)
    P = ns * ns
    pos = np.repeat(np.arange(ns), ns)
    mom = np.tile(np.arange(ns), ns)
    Gg = sfourier(g).values.reshape(P)
    flux = _quadrangle_table(B, grid, eps)
    # sigma(U, W) for flat phase indices
    sig = np.einsum("uk,wk->uw", kv[mom], xv[pos]) - np.einsum("uk,wk->uw", xv[pos], kv[mom])
    half = np.exp(1j * (eps / 2.0) * sig)
    out = np.empty((ns, ns), dtype=complex)
    for a in range(ns):
        for b in range(ns):
            # e^{i sigma(X, U)} for X = (x_a, xi_b) against each flat phase index
            ph = np.exp(1j * (kv[b] @ xv[pos].T - xv[a] @ kv[mom].T))
            PHI = np.exp(-1j * lam * flux[a][np.ix_(pos, pos, pos)])
            W1 = GF * ph[:, None] * ph[None, :] * half
            T = np.einsum("LZ,ZR,LRZ,Z,Z->LR", half, half, PHI, ph, Gg, optimize=True)
            out[a, b] = np.sum(W1 * T)
    out /= float(grid.n ** (3 * grid.d))
    return g.map_values(out.reshape(grid.symbol_shape()))


def _semi_super_direct_quadrature(B: MagneticField, F: DoubledSymbol, g: PhaseSymbol) -> PhaseSymbol:
    """Lattice sum of the untransformed semi-super integral.

    The displayed integrand samples the factors at half-step position
    offsets.  Lattice symbols are finite mode sums, so those values are
    defined exactly by spectral upsampling onto the half lattice; with that
    evaluation the sum reproduces the transform-form route mode by mode.
    Requires ``eps == 1`` so the offsets live on the half lattice.
    """
    grid, eps, lam = F.grid, F.eps, F.lam
    if eps != 1.0:
        raise ValueError("direct quadrature route requires eps = 1 for half-lattice sample points")
    _quadrature_cost_guard(grid)
    geom = _geometry(grid, eps)
    xv, kv = geom.x_vectors, geom.xi_vectors
    sites = geom.sites
    ns, n, half, d = grid.n_state, grid.n, grid.half, grid.d

    Fup = _upsample_positions_doubled(F)  # [p1(2n^d), k1(n^d), p2, k2]
    gup = _upsample_positions_single(g)  # [p(2n^d), k]

    def half_flat(half_sites: np.ndarray) -> np.ndarray:
        w = np.asarray(half_sites) % (2 * n)
        flat = np.zeros(w.shape[:-1], dtype=int)
        for ax in range(d):
            flat = flat * (2 * n) + w[..., ax]
        return flat

    def mom_flat(mom_sites: np.ndarray) -> np.ndarray:
        w = (np.asarray(mom_sites) + half) % n
        flat = np.zeros(w.shape[:-1], dtype=int)
        for ax in range(d):
            flat = flat * n + w[..., ax]
        return flat

    phase = np.exp(1j * (xv @ kv.T))  # e^{i y . eta} on site pairs
    out = np.empty((ns, ns), dtype=complex)
    for a in range(ns):
        sa2 = 2 * sites[a]
        p_left = half_flat(sa2[None, None, :] - (sites[:, None, :] + sites[None, :, :]))  # [yR, z]
        p_right = half_flat(sa2[None, None, :] + (sites[:, None, :] + sites[None, :, :]))  # [yL, z]
        p_g = half_flat(sa2[None, None, :] + (sites[:, None, :] - sites[None, :, :]))  # [yL, yR]
        if B.family == "zero":
            fluxphase = np.ones((ns, ns, ns))
        else:
            gam = np.empty((ns, ns, ns))
            if B.family == "constant":
                yz = 0.5 * eps * np.einsum("uj,jk,vk->uv", xv, B.b, xv)
                gam = yz[:, None, :] + yz[:, :, None] + yz.T[None, :, :]
            else:
                for yl in range(ns):
                    for yr in range(ns):
                        for z in range(ns):
                            gam[yl, yr, z] = quadrangle_flux(B, xv[a], xv[yl], xv[yr], xv[z], eps)
            fluxphase = np.exp(-1j * lam * gam)
        for b in range(ns):
            shift = mom_flat(sites[b][None, :] - sites)  # flat lattice index of xi_b - eta
            Fm = Fup[:, shift, :, :][:, :, :, shift]
            gm = gup[:, shift]
            acc = 0.0 + 0.0j
            for yL in range(ns):
                pL = phase[yL]
                for yR in range(ns):
                    pR = phase[yR]
                    blocks = Fm[p_left[yR], :, p_right[yL], :]  # [z, etaL, etaR]
                    eta_sums = np.einsum("e,vef,f->v", pL, blocks, pR)
                    zeta_sum = phase @ gm[p_g[yL, yR]]  # [z]
                    acc += np.sum(fluxphase[yL, yR] * eta_sums * zeta_sum)
            out[a, b] = acc
    out /= float(grid.n ** (3 * grid.d))
    return g.map_values(out.reshape(grid.symbol_shape()))


def _half_lattice_kernel(grid: GridSpec) -> np.ndarray:
    """Evaluation kernel ``e^{-i p . w_xi}`` onto the half-step position lattice."""
    n = grid.n
    halfpts = np.arange(2 * n) * (grid.dx / 2.0)  # representatives of the half lattice mod L
    return np.exp(-1j * np.outer(halfpts, grid.xi_sites))


def _mode_kernel(grid: GridSpec) -> np.ndarray:
    """Evaluation kernel ``e^{+i xi_k . w_x}`` back onto the momentum lattice."""
    return np.exp(1j * np.outer(grid.xi_sites, grid.x_sites))


def _upsample_positions_single(f: PhaseSymbol) -> np.ndarray:
    """Band-limited symbol values on the doubled position lattice.

    A lattice symbol is the finite mode sum
    ``f(X) = n^-d sum_W exp(i sigma(X, W)) G(W)`` with ``G`` its transform;
    evaluating the modes at half-step positions is exact and yields the array
    ``[half-position flat, momentum flat]``.
    """
    from .grid import _apply_kernel

    grid = f.grid
    d = grid.d
    G = sfourier(f).values  # axes [w_x ..., w_xi ...]
    Kmom = _mode_kernel(grid)
    Kpos = _half_lattice_kernel(grid)
    out = G
    for ax in range(d):  # w_x axes -> momentum output
        out = _apply_kernel(out, Kmom, ax)
    for ax in range(d, 2 * d):  # w_xi axes -> half-lattice position output
        out = _apply_kernel(out, Kpos, ax)
    out = np.transpose(out, tuple(range(d, 2 * d)) + tuple(range(d))) / float(grid.n**d)
    return out.reshape((2 * grid.n) ** d, grid.n**d)


def _upsample_positions_doubled(F: DoubledSymbol) -> np.ndarray:
    """As :func:`_upsample_positions_single` on both factors of a doubled symbol."""
    from .grid import _apply_kernel

    grid = F.grid
    d = grid.d
    G = sfourier_doubled(F).values
    Kmom = _mode_kernel(grid)
    Kpos = _half_lattice_kernel(grid)
    out = G
    for ax in list(range(d)) + list(range(2 * d, 3 * d)):
        out = _apply_kernel(out, Kmom, ax)
    for ax in list(range(d, 2 * d)) + list(range(3 * d, 4 * d)):
        out = _apply_kernel(out, Kpos, ax)
    perm = (
        tuple(range(d, 2 * d))
        + tuple(range(d))
        + tuple(range(3 * d, 4 * d))
        + tuple(range(2 * d, 3 * d))
    )
    out = np.transpose(out, perm) / float(grid.n ** (2 * d))
    m, ns = (2 * grid.n) ** d, grid.n**d
    return out.reshape(m, ns, m, ns)


def _quadrature_cost_guard(grid: GridSpec) -> None:
    terms = grid.n ** (6 * grid.d)
    if terms > 2_000_000:
        raise ValueError(
            f"quadrature route would sum ~{terms:.2e} phase terms per output point on this grid; "
            "restrict to n <= 5 (d=1) or n <= 3 (d=2), or use an exact route"
        )


# --------------------------------------------------------------------------
# integral-kernel picture

_qmatrix_cache: dict = {}


def _quantize_matrix_cached(A: VectorPotential, grid: GridSpec, eps: float, lam: float):
    from .weyl import _potential_key

    key = (grid, _potential_key(A), eps, lam)
    if key not in _qmatrix_cache:
        Q = quantize_matrix(A, grid, eps, lam)
        _qmatrix_cache[key] = (Q, np.linalg.inv(Q))
    return _qmatrix_cache[key]


def kernel_map(A: VectorPotential, F: DoubledSymbol) -> DoubledSymbol:
    """Integral kernel ``K`` with ``integral_apply(K, g) == F diamond g``.

    Built from the defining relation: the matrix of ``g -> F diamond g`` in
    the lattice delta basis is the quantization conjugate of the dense super
    map, and the kernel is that matrix divided by the quadrature weight.  The
    closed-form display is exercised separately by
    :func:`kernel_map_closed_form_probe`.
    """
    grid = F.grid
    if grid.n_state > DENSE_STATE_CAP:
        raise ValueError("kernel map needs the dense super form (state dimension too large)")
    Q, Qinv = _quantize_matrix_cached(A, grid, F.eps, F.lam)
    D = super_quantize(A, F).dense
    M = Qinv @ D @ Q
    return DoubledSymbol(grid, (M / grid.mu).reshape(grid.doubled_shape()), F.eps, F.lam)


def integral_apply(K: DoubledSymbol, g: PhaseSymbol) -> PhaseSymbol:
    """``(Int(K) g)(X) = mu * sum_Y K(X, Y) g(Y)``."""
    if K.grid != g.grid:
        raise ValueError("kernel and symbol grids differ")
    nph = K.grid.n_phase
    out = K.grid.mu * (K.values.reshape(nph, nph) @ g.values.reshape(nph))
    return g.map_values(out.reshape(K.grid.symbol_shape()))


def kernel_compose(K1: DoubledSymbol, K2: DoubledSymbol) -> DoubledSymbol:
    """``(K1 . K2)(X, Z) = mu * sum_Y K1(X, Y) K2(Y, Z)``; associative."""
    if K1.grid != K2.grid:
        raise ValueError("kernel grids differ")
    nph = K1.grid.n_phase
    out = K1.grid.mu * (K1.values.reshape(nph, nph) @ K2.values.reshape(nph, nph))
    return K1.map_values(out.reshape(K1.grid.doubled_shape()))


def super_wigner(A: VectorPotential, K: DoubledSymbol) -> DoubledSymbol:
    """Inverse of :func:`kernel_map` on the lattice (dequantize the integral map)."""
    grid = K.grid
    if grid.n_state > DENSE_STATE_CAP:
        raise ValueError("super Wigner transform needs the dense super form (state dimension too large)")
    Q, Qinv = _quantize_matrix_cached(A, grid, K.eps, K.lam)
    nph = grid.n_phase
    D = Q @ (grid.mu * K.values.reshape(nph, nph)) @ Qinv
    return super_dequantize(A, D, grid, K.eps, K.lam)


# --------------------------------------------------------------------------
# super product


def super_product(field, F: DoubledSymbol, G: DoubledSymbol, route: str = "kernel") -> DoubledSymbol:
    """Product of doubled symbols replicating composition of their super maps.

    Routes: ``kernel`` (compose integral kernels, invert the kernel map),
    ``superop`` (compose dense super maps, dequantize the assembly),
    ``quadrature`` (double lattice sum with the reflected half-phase and the
    two one-sided triangle fluxes).
    """
    if F.grid != G.grid or F.eps != G.eps or F.lam != G.lam:
        raise ValueError("factors must share grid and parameters")
    if route == "kernel":
        A = _resolve_potential(field)
        return super_wigner(A, kernel_compose(kernel_map(A, F), kernel_map(A, G)))
    if route == "superop":
        A = _resolve_potential(field)
        SF = super_quantize(A, F)
        SG = super_quantize(A, G)
        composed = SF.compose(SG)
        return super_dequantize(A, composed.dense, F.grid, F.eps, F.lam)
    if route == "quadrature":
        return _super_product_quadrature(_resolve_field(field), F, G)
    raise ValueError(f"unknown route {route!r}")


def _super_product_quadrature(B: MagneticField, F: DoubledSymbol, G: DoubledSymbol) -> DoubledSymbol:
    from .products import _flux_table

    grid, eps, lam = F.grid, F.eps, F.lam
    _quadrature_cost_guard(grid)
    geom = _geometry(grid, eps)
    xv, kv = geom.x_vectors, geom.xi_vectors
    ns = grid.n_state
    P = ns * ns
    pos = np.repeat(np.arange(ns), ns)
    mom = np.tile(np.arange(ns), ns)
    GF = _doubled_transform_blocks(F).reshape(P, P)  # [YL, YR]
    GG = _doubled_transform_blocks(G).reshape(P, P)  # [ZL, ZR]
    flux = _flux_table(B, grid, eps)
    sig = np.einsum("uk,wk->uw", kv[mom], xv[pos]) - np.einsum("uk,wk->uw", xv[pos], kv[mom])
    half = np.exp(1j * (eps / 2.0) * sig)
    # phase_out[w, u] = e^{i sigma(X_w, U_u)} = e^{-i sigma(U_u, X_w)} over flat phase points
    phase_out = np.exp(-1j * sig).T
    # left[aL, YL, ZL] and the analogous right factor carry the one-sided fluxes
    left = (
        phase_out[:, :, None]
        * phase_out[:, None, :]
        * half[None, :, :]
        * np.exp(-1j * lam * flux[np.ix_(pos, pos, pos)])
    )
    right = (
        phase_out[:, :, None]
        * phase_out[:, None, :]
        * half.conj()[None, :, :]
        * np.exp(-1j * lam * np.swapaxes(flux[np.ix_(pos, pos, pos)], 1, 2))
    )
    out = np.empty((P, P), dtype=complex)
    for aR in range(P):
        C = GF @ right[aR] @ GG.T  # [YL, ZL]
        out[:, aR] = np.einsum("aLM,LM->a", left, C, optimize=True)
    out /= float(grid.n ** (4 * grid.d))
    return F.map_values(out.reshape(grid.doubled_shape()))


# --------------------------------------------------------------------------
# adjoints, pairings, norm bound


def hs_adjoint(S: SuperOperatorMap) -> SuperOperatorMap:
    """Adjoint with respect to the Hilbert-Schmidt inner product on operators."""
    if S.dense is None:
        raise ValueError("adjoint needs the dense form")
    dense = S.dense.conj().T
    return SuperOperatorMap(S.grid, _dense_apply(S.grid, dense), dense, S.gauge, S.eps, S.lam)


def hs_inner(T1: OperatorMatrix, T2: OperatorMatrix) -> complex:
    """``<T1, T2> = Tr(T1* T2)``."""
    return complex(np.sum(T1.entries.conj() * T2.entries))


def pairing_phase(f: PhaseSymbol, g: PhaseSymbol) -> complex:
    """Bilinear quadrature pairing ``mu * sum f g`` on phase space."""
    return complex(f.grid.mu * np.sum(f.values * g.values))


def pairing_doubled(F: DoubledSymbol, G: DoubledSymbol) -> complex:
    """Bilinear quadrature pairing ``mu^2 * sum F G`` on the doubled lattice."""
    return complex(F.grid.mu**2 * np.sum(F.values * G.values))


def super_norm_bound(F: DoubledSymbol) -> float:
    """Transform-mass bound on the induced Frobenius operator norm."""
    G = sfourier_doubled(F).values
    return float(np.sum(np.abs(G)) / F.grid.n ** (2 * F.grid.d))


# --------------------------------------------------------------------------
# closed-form probes (reported comparisons, not assertions)


def _upsample_all_single(f: PhaseSymbol) -> np.ndarray:
    """Band-limited symbol values on the half-step lattice in every variable.

    Returns ``[position half-flat (2n)^d, momentum half-flat (2n)^d]``.
    """
    from .grid import _apply_kernel

    grid = f.grid
    d, n = grid.d, grid.n
    G = sfourier(f).values
    half_x = np.arange(2 * n) * (grid.dx / 2.0)
    half_xi = np.arange(2 * n) * (grid.dxi / 2.0)
    Kmom = np.exp(1j * np.outer(half_xi, grid.x_sites))  # e^{+i xi' . w_x}
    Kpos = np.exp(-1j * np.outer(half_x, grid.xi_sites))  # e^{-i x' . w_xi}
    out = G
    for ax in range(d):
        out = _apply_kernel(out, Kmom, ax)
    for ax in range(d, 2 * d):
        out = _apply_kernel(out, Kpos, ax)
    out = np.transpose(out, tuple(range(d, 2 * d)) + tuple(range(d))) / float(n**d)
    m = (2 * n) ** d
    return out.reshape(m, m)


def _upsample_all_doubled(F: DoubledSymbol) -> np.ndarray:
    """Half-step values of a doubled symbol, ``[p1, k1, p2, k2]`` half-flats."""
    from .grid import _apply_kernel

    grid = F.grid
    d, n = grid.d, grid.n
    G = sfourier_doubled(F).values
    half_x = np.arange(2 * n) * (grid.dx / 2.0)
    half_xi = np.arange(2 * n) * (grid.dxi / 2.0)
    Kmom = np.exp(1j * np.outer(half_xi, grid.x_sites))
    Kpos = np.exp(-1j * np.outer(half_x, grid.xi_sites))
    out = G
    for ax in list(range(d)) + list(range(2 * d, 3 * d)):
        out = _apply_kernel(out, Kmom, ax)
    for ax in list(range(d, 2 * d)) + list(range(3 * d, 4 * d)):
        out = _apply_kernel(out, Kpos, ax)
    perm = (
        tuple(range(d, 2 * d))
        + tuple(range(d))
        + tuple(range(3 * d, 4 * d))
        + tuple(range(2 * d, 3 * d))
    )
    out = np.transpose(out, perm) / float(n ** (2 * d))
    m = (2 * n) ** d
    return out.reshape(m, m, m, m)


def _half_flat(grid: GridSpec, half_units: np.ndarray) -> np.ndarray:
    """Flatten integer half-step coordinates (units of dx/2 or dxi/2) mod 2n."""
    w = np.asarray(half_units) % (2 * grid.n)
    flat = np.zeros(w.shape[:-1], dtype=int)
    for ax in range(grid.d):
        flat = flat * (2 * grid.n) + w[..., ax]
    return flat


@dataclass(frozen=True)
class GaussianDoubled:
    """Analytic Gaussian doubled symbol, evaluable at arbitrary real points.

    ``F(a, alpha, b, beta) = exp(-sum (slot - center)^2 / (2 width^2))`` with
    one center/width pair per slot (positions and momenta of both factors).
    """

    centers: tuple  # (cx1, ck1, cx2, ck2), scalars for d = 1
    widths: tuple  # (sx1, sk1, sx2, sk2)

    def __call__(self, a, alpha, b, beta):
        (c1, c2, c3, c4), (s1, s2, s3, s4) = self.centers, self.widths
        return np.exp(
            -((np.asarray(a) - c1) ** 2) / (2 * s1**2)
            - ((np.asarray(alpha) - c2) ** 2) / (2 * s2**2)
            - ((np.asarray(b) - c3) ** 2) / (2 * s3**2)
            - ((np.asarray(beta) - c4) ** 2) / (2 * s4**2)
        )

    def sample(self, grid: GridSpec, eps: float = 1.0, lam: float = 1.0) -> DoubledSymbol:
        if grid.d != 1:
            raise ValueError("analytic probe symbols are one-dimensional")
        xs, ks = grid.x_sites, grid.xi_sites
        vals = self(xs[:, None, None, None], ks[None, :, None, None], xs[None, None, :, None], ks[None, None, None, :])
        return DoubledSymbol(grid, vals.astype(complex), eps, lam)


def _kernel_display_collapsed(F: GaussianDoubled, X, Z, mesh: int = 160, span: float = 14.0):
    """Displayed kernel integral at ``eps = 1`` and zero field, free integral
    collapsed analytically; trapezoid quadrature over the Gaussian support."""
    (x, xi), (z, zeta) = X, Z
    y = np.linspace(-span, span, mesh)
    e = np.linspace(-span, span, mesh)
    dy = y[1] - y[0]
    de = e[1] - e[0]
    Y, E = np.meshgrid(y, e, indexing="ij")
    vals = F(Y, E, x + z - Y, xi + zeta - E)
    phase = np.exp(2j * Y * (zeta - xi)) * np.exp(-2j * (x - z) * (xi + zeta - E))
    integral = np.sum(vals * phase) * dy * de
    return np.pi ** (-2) * np.exp(2j * (x * xi - z * zeta)) * integral


def kernel_map_closed_form_probe(
    A: VectorPotential,
    grid: GridSpec,
    F: GaussianDoubled | None = None,
    n_probes: int = 5,
    rng: np.random.Generator | None = None,
) -> float:
    """Max-abs difference between :func:`kernel_map` on a sampled Gaussian and
    the displayed closed form evaluated analytically.

    Zero-field, ``eps = 1``, ``d = 1`` only: there the free integration
    variable of the display collapses exactly and the rest is a convergent
    Gaussian quadrature.  The number reported measures how faithfully the
    lattice quantization reproduces the continuum formula for this symbol;
    the defining relation stays the lattice ground truth.
    """
    if grid.d != 1:
        raise ValueError("closed-form probe implemented for d = 1")
    if exterior_derivative(A).family != "zero":
        raise ValueError("closed-form probe requires a zero magnetic field")
    rng = np.random.default_rng(0) if rng is None else rng
    if F is None:
        F = GaussianDoubled(centers=(0.2, -0.1, -0.2, 0.2), widths=(0.95, 1.1, 0.9, 1.05))
    K = kernel_map(A, F.sample(grid))
    ns = grid.n_state
    Kmat = K.values.reshape(grid.n_phase, grid.n_phase)
    worst = 0.0
    for _ in range(n_probes):
        a, bm, c, dm = (int(v) for v in rng.integers(0, ns, 4))
        want = _kernel_display_collapsed(
            F, (grid.x_sites[a], grid.xi_sites[bm]), (grid.x_sites[c], grid.xi_sites[dm])
        )
        got = Kmat[a * ns + bm, c * ns + dm]
        worst = max(worst, abs(want - got))
    return worst


def super_wigner_closed_form_probe(
    F: GaussianDoubled | None = None,
    n_probes: int = 3,
    mesh: int = 200,
    span: float = 16.0,
    rng: np.random.Generator | None = None,
) -> float:
    """Composition defect of the two displayed closed forms (continuum check).

    Applies the displayed dequantization to the displayed kernel of an
    analytic Gaussian and compares with the symbol itself at probe points
    with equal left and right positions (zero field, ``eps = 1``, ``d = 1``).
    A transcription error in either display, including the dequantization
    prefactor, would leave an O(1) defect here.  The kernel values for all
    outer quadrature nodes share one Gaussian integrand, so the double
    integral reduces to two oscillatory contractions.
    """
    rng = np.random.default_rng(1) if rng is None else rng
    if F is None:
        F = GaussianDoubled(centers=(0.1, 0.2, -0.15, -0.1), widths=(0.9, 1.0, 1.05, 0.95))
    worst = 0.0
    for _ in range(n_probes):
        x0 = float(rng.uniform(-0.5, 0.5))
        xiL = float(rng.uniform(-0.8, 0.8))
        xiR = float(rng.uniform(-0.8, 0.8))
        S = xiL + xiR
        y = np.linspace(-span / 2, span / 2, mesh)
        e = np.linspace(-span / 2, span / 2, mesh)
        dy, de = y[1] - y[0], e[1] - e[0]
        w = np.linspace(-span / 2, span / 2, mesh)
        v = np.linspace(-span / 2, span / 2, mesh)
        dw, dv = w[1] - w[0], v[1] - v[0]
        base = F(y[:, None], e[None, :], 2 * x0 - y[:, None], S - e[None, :])
        # inner kernel integral for every (w, v): phases e^{2iY(2v - S)} e^{4iw(S - E)}
        ky = np.exp(2j * np.outer(v * 2 - S, y))  # [v, Y]
        ke = np.exp(4j * np.outer(w, S - e))  # [w, E]
        inner = (ke @ (ky @ base).T).T * dy * de  # [v, w] -> transpose later
        inner = inner.T  # [w, v]
        outer_phase = np.exp(2j * ((x0 - w)[:, None] * (S - v)[None, :] - (x0 + w)[:, None] * v[None, :]))
        wig_phase = np.exp(2j * w * (xiL - xiR))[:, None]
        got = 4.0 * np.pi ** (-2) * np.sum(wig_phase * outer_phase * inner) * dw * dv
        want = F(x0, xiL, x0, xiR)
        worst = max(worst, abs(got - want))
    return worst
