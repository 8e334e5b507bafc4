"""Discrete magnetic Weyl calculus on the truncated state space.

States live on the raw position-site lattice; the position operator
multiplies by ``eps * site`` and vector potentials and gauge functions are
always evaluated at the physical position ``eps * site``.  This fixes the
argument convention so that translations implemented by the Weyl system
compose according to the magnetic law with the flux cocycle.

Shift operators wrap periodically.  At ``eps == 1`` the momentum phases are
insensitive to the wrap (``L * dxi == 2 * pi``), so all algebraic identities
of the calculus hold on the lattice to rounding error whenever the
circulation phases are themselves wrap-consistent (zero potential, or a
linear potential with commensurate field, or symbols concentrated away from
the box edge).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import GridSpec, PhasePoint, PhaseSymbol, sfourier
from .magnetics import GaugeFunction, VectorPotential, _gauss_01

__all__ = [
    "OperatorMatrix",
    "StateVector",
    "position_op",
    "momentum_op",
    "weyl_system",
    "quantize",
    "wigner",
    "quantize_matrix",
    "conjugate_by_gauge",
    "conjugate_by_unitary",
    "operator_norm_bound",
]


@dataclass(frozen=True)
class OperatorMatrix:
    """Dense operator on the discretized state space."""

    grid: GridSpec
    entries: np.ndarray
    gauge: str = ""
    eps: float = 1.0
    lam: float = 1.0

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=complex)
        ns = self.grid.n_state
        if m.shape != (ns, ns):
            raise ValueError(f"operator shape {m.shape} does not match state dimension {ns}")
        if not np.all(np.isfinite(m)):
            raise ValueError("operator entries must be finite")
        object.__setattr__(self, "entries", m)

    def map_entries(self, m: np.ndarray) -> "OperatorMatrix":
        return OperatorMatrix(self.grid, m, self.gauge, self.eps, self.lam)

    def __matmul__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        return self.map_entries(self.entries @ other.entries)

    def adjoint(self) -> "OperatorMatrix":
        return self.map_entries(self.entries.conj().T)


@dataclass(frozen=True)
class StateVector:
    """Complex state over position sites."""

    grid: GridSpec
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.shape != (self.grid.n_state,):
            raise ValueError("state length does not match grid")
        if not np.all(np.isfinite(v)):
            raise ValueError("state values must be finite")
        object.__setattr__(self, "values", v)


# --------------------------------------------------------------------------
# cached lattice geometry per (grid, potential, eps, lam)


class _LatticeGeometry:
    """Site tables, shift permutations and momentum-phase kernels for a grid."""

    def __init__(self, grid: GridSpec, eps: float):
        self.grid = grid
        self.eps = eps
        n, d = grid.n, grid.d
        idx = [grid.site_indices] * d
        mesh = np.meshgrid(*idx, indexing="ij")
        self.sites = np.stack([m.ravel() for m in mesh], axis=-1)  # integer site vectors (n^d, d)
        self.x_vectors = self.sites * grid.dx
        self.xi_vectors = self.sites * grid.dxi
        ns = grid.n_state
        # perm[s, i] = flattened index of site_i + site_s with periodic wrap
        shifted = self.sites[None, :, :] + self.sites[:, None, :]
        wrapped = (shifted + grid.half) % n - grid.half
        flat = np.zeros((ns, ns), dtype=int)
        for axis in range(d):
            flat = flat * n + (wrapped[..., axis] + grid.half)
        self.perm = flat
        # V[i, k] = exp(-i eps x_i . xi_k); well conditioned at eps = 1
        self.V = np.exp(-1j * eps * (self.x_vectors @ self.xi_vectors.T))
        # q[s, k] = exp(-i eps (y_s / 2) . xi_k)
        self.q = np.exp(-1j * (eps / 2.0) * (self.x_vectors @ self.xi_vectors.T))
        self.rows = np.arange(ns)


class _WeylContext:
    """Geometry plus the circulation phases of one vector potential."""

    def __init__(self, geom: _LatticeGeometry, A: VectorPotential, lam: float, nodes: int):
        self.geom = geom
        self.A = A
        self.lam = lam
        grid, eps = geom.grid, geom.eps
        ns = grid.n_state
        # circ[s, i] = integral of A along [eps x_i, eps (x_i + y_s)]
        t, w = _gauss_01(nodes)
        starts = eps * geom.x_vectors  # (ns, d)
        disp = eps * geom.x_vectors  # displacement vectors, same table
        pts = starts[None, :, None, :] + t[None, None, :, None] * disp[:, None, None, :]
        vals = A.evaluate(pts.reshape(-1, grid.d)).reshape(ns, ns, t.size, grid.d)
        circ = np.einsum("t,sitd,sd->si", w, vals, disp)
        self.c = np.exp(-1j * (lam / eps) * circ)


_geometry_cache: dict = {}
_context_cache: dict = {}

CIRCULATION_NODES = 8


def _geometry(grid: GridSpec, eps: float) -> _LatticeGeometry:
    key = (grid, eps)
    if key not in _geometry_cache:
        _geometry_cache[key] = _LatticeGeometry(grid, eps)
    return _geometry_cache[key]


def _context(grid: GridSpec, A: VectorPotential, eps: float, lam: float, nodes: int = CIRCULATION_NODES) -> _WeylContext:
    key = (grid, _potential_key(A), eps, lam, nodes)
    if key not in _context_cache:
        _context_cache[key] = _WeylContext(_geometry(grid, eps), A, lam, nodes)
    return _context_cache[key]


def _potential_key(A: VectorPotential) -> tuple:
    def freeze(v):
        if isinstance(v, np.ndarray):
            return ("nd", v.shape, tuple(v.ravel().tolist()))
        if isinstance(v, dict):
            return tuple(sorted((k, freeze(x)) for k, x in v.items()))
        if isinstance(v, list):
            return tuple(freeze(x) for x in v)
        return v

    return (A.d, A.family, freeze(A.m), A.b, freeze(A.tables))


def gauge_tag(A: VectorPotential) -> str:
    return f"{A.family}:{hash(_potential_key(A)) & 0xFFFFFFFF:08x}"


# --------------------------------------------------------------------------
# operators


def position_op(grid: GridSpec, j: int, eps: float = 1.0) -> OperatorMatrix:
    """Multiplication by the physical coordinate ``eps * x_j``; Hermitian."""
    if not 1 <= j <= grid.d:
        raise ValueError(f"component j={j} out of range for d={grid.d}")
    geom = _geometry(grid, eps)
    return OperatorMatrix(grid, np.diag(eps * geom.x_vectors[:, j - 1]).astype(complex), eps=eps)


def momentum_op(A: VectorPotential, grid: GridSpec, j: int, eps: float = 1.0, lam: float = 1.0) -> OperatorMatrix:
    """Kinetic momentum: spectral derivative minus ``lam * A_j`` at physical sites."""
    if not 1 <= j <= grid.d:
        raise ValueError(f"component j={j} out of range for d={grid.d}")
    n = grid.n
    x = grid.x_sites
    kappa = grid.xi_sites
    U = np.exp(-1j * np.outer(kappa, x)) / np.sqrt(n)
    d1 = U.conj().T @ (kappa[:, None] * U)  # one-axis spectral -i d/dx
    mats = [np.eye(n, dtype=complex)] * grid.d
    mats[j - 1] = d1
    deriv = mats[0]
    for m in mats[1:]:
        deriv = np.kron(deriv, m)
    geom = _geometry(grid, eps)
    avals = A.component(j - 1, eps * geom.x_vectors)
    return OperatorMatrix(grid, deriv - lam * np.diag(avals), gauge=gauge_tag(A), eps=eps, lam=lam)


def weyl_system(A: VectorPotential, grid: GridSpec, Y: PhasePoint, eps: float = 1.0, lam: float = 1.0) -> OperatorMatrix:
    """Magnetic translation by the lattice point ``Y = (y, eta)``.

    Row ``i`` carries ``exp(-i eps (x_i + y/2) . eta)`` times the circulation
    phase of the segment ``[eps x_i, eps (x_i + y)]``; the column is the
    periodically wrapped shift of ``i`` by ``y``.  Unitary by construction.
    """
    if A.d != Y.d or A.d != grid.d:
        raise ValueError("potential, grid and phase point dimensions must agree")
    ctx = _context(grid, A, eps, lam)
    geom = ctx.geom
    sy = grid.x_site_of(Y.x)
    grid.xi_site_of(Y.xi)
    s = _flat_site(grid, sy)
    ns = grid.n_state
    phase = np.exp(-1j * eps * ((geom.x_vectors + 0.5 * Y.x[None, :]) @ Y.xi)) * ctx.c[s]
    mat = np.zeros((ns, ns), dtype=complex)
    mat[geom.rows, geom.perm[s]] = phase
    return OperatorMatrix(grid, mat, gauge=gauge_tag(A), eps=eps, lam=lam)


def _flat_site(grid: GridSpec, site_vector: np.ndarray) -> int:
    flat = 0
    for m in site_vector:
        flat = flat * grid.n + (int(m) + grid.half)
    return flat


def quantize(A: VectorPotential, f: PhaseSymbol) -> OperatorMatrix:
    """Weyl quantization: transform-weighted sum of magnetic translations.

    Assembled displacement by displacement: for shift ``y`` the row phases
    come from a single momentum-kernel contraction of the transformed symbol,
    so the cost is one ``n^d x n^d`` matrix-vector product per displacement.
    """
    grid = f.grid
    if A.d != grid.d:
        raise ValueError("potential dimension does not match symbol grid")
    eps, lam = f.eps, f.lam
    ctx = _context(grid, A, eps, lam)
    geom = ctx.geom
    ns = grid.n_state
    G = sfourier(f).values.reshape(ns, ns)  # [displacement-site, momentum-site]
    pref = 1.0 / float(grid.n**grid.d)
    vals = geom.V @ (geom.q * G).T  # [row, displacement]
    mat = np.zeros((ns, ns), dtype=complex)
    for s in range(ns):
        mat[geom.rows, geom.perm[s]] = pref * ctx.c[s] * vals[:, s]
    return OperatorMatrix(grid, mat, gauge=gauge_tag(A), eps=eps, lam=lam)


def wigner(A: VectorPotential, T: OperatorMatrix) -> PhaseSymbol:
    """Dequantization: the exact inverse of :func:`quantize` on the lattice.

    Inverts the displacement assembly (unimodular row phases divided out, one
    linear solve against the momentum kernel shared by all displacements).
    The momentum kernel is perfectly conditioned at ``eps == 1`` and degrades
    as ``eps`` shrinks; a guard refuses solves past 1e8.
    """
    grid = T.grid
    if A.d != grid.d:
        raise ValueError("potential dimension does not match operator grid")
    eps, lam = T.eps, T.lam
    ctx = _context(grid, A, eps, lam)
    geom = ctx.geom
    ns = grid.n_state
    pref = 1.0 / float(grid.n**grid.d)
    R = np.empty((ns, ns), dtype=complex)
    for s in range(ns):
        R[:, s] = T.entries[geom.rows, geom.perm[s]] / (pref * ctx.c[s])
    cond = _kernel_condition(grid, eps)
    if cond > 1e8:
        raise ValueError(
            f"momentum kernel condition {cond:.2e} at eps={eps} makes dequantization "
            "numerically singular on this grid; use eps closer to 1 or the scaled product routes"
        )
    X = np.linalg.solve(geom.V, R)
    G = (X / geom.q.T).T
    g = PhaseSymbol(grid, G.reshape(grid.symbol_shape()), eps, lam)
    return sfourier(g)


_cond_cache: dict = {}


def _kernel_condition(grid: GridSpec, eps: float) -> float:
    key = (grid, eps)
    if key not in _cond_cache:
        V = _geometry(grid, eps).V
        _cond_cache[key] = float(np.linalg.cond(V))
    return _cond_cache[key]


def quantize_matrix(A: VectorPotential, grid: GridSpec, eps: float = 1.0, lam: float = 1.0) -> np.ndarray:
    """Dense matrix of ``vec(symbol) -> vec(operator)`` for this quantization.

    Only sensible for small state spaces; used to conjugate super-operator
    maps into integral-kernel form.
    """
    ns = grid.n_state
    nphase = grid.n_phase
    basis = np.eye(nphase, dtype=complex)
    Q = np.empty((nphase, nphase), dtype=complex)
    for col in range(nphase):
        f = PhaseSymbol(grid, basis[:, col].reshape(grid.symbol_shape()), eps, lam)
        Q[:, col] = quantize(A, f).entries.reshape(-1)
    return Q


def conjugate_by_gauge(T: OperatorMatrix, chi: GaugeFunction, eps: float | None = None, lam: float | None = None) -> OperatorMatrix:
    """``exp(+i lam chi(Q)) T exp(-i lam chi(Q))`` with ``chi`` at physical sites."""
    grid = T.grid
    eps = T.eps if eps is None else eps
    lam = T.lam if lam is None else lam
    geom = _geometry(grid, eps)
    phase = np.exp(1j * lam * chi(eps * geom.x_vectors))
    return T.map_entries(phase[:, None] * T.entries * phase.conj()[None, :])


def conjugate_by_unitary(T: OperatorMatrix, U: np.ndarray, tol: float = 1e-10) -> OperatorMatrix:
    """``U T U*`` for a unitary ``U`` (unitarity enforced to ``tol``)."""
    U = np.asarray(U, dtype=complex)
    ns = T.grid.n_state
    if U.shape != (ns, ns):
        raise ValueError("unitary has wrong shape")
    defect = np.abs(U @ U.conj().T - np.eye(ns)).max()
    if defect > tol:
        raise ValueError(f"matrix is not unitary to {tol} (defect {defect:.2e})")
    return T.map_entries(U @ T.entries @ U.conj().T)


def operator_norm_bound(f: PhaseSymbol) -> float:
    """Transform-mass bound ``(2 pi)^{-d} mu sum |F f|`` on the operator norm."""
    G = sfourier(f).values
    return float(np.sum(np.abs(G)) / f.grid.n**f.grid.d)
