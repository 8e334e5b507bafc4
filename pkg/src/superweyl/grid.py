"""Phase-space lattices, symplectic structure and symplectic Fourier transforms.

Configuration space is truncated to a box of side ``L`` sampled on ``n``
points per axis (``n`` odd), with the dual momentum lattice chosen so that
``dx * dxi * n == 2 * pi`` exactly.  A point of the phase-space lattice is a
pair ``X = (x, xi)``; the doubled lattice carries pairs ``(X_L, X_R)``.

All transforms in this module are plain linear contractions against
precomputed roots-of-unity kernels, one spatial axis at a time.  On the
centered odd lattice the symplectic Fourier transform is an exact involution,
which is the property everything downstream leans on.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

__all__ = [
    "GridSpec",
    "PhasePoint",
    "DoubledPoint",
    "PhaseSymbol",
    "DoubledSymbol",
    "make_grid",
    "symplectic_form",
    "doubled_symplectic_form",
    "sfourier",
    "sfourier_doubled",
    "japanese_bracket",
    "peetre_bound",
    "transpose_doubled",
    "reflect_right",
]

#: Relative tolerance used when snapping coordinates to lattice sites.
SITE_ATOL_FACTOR = 1e-9


@dataclass(frozen=True)
class GridSpec:
    """Discretization of configuration space and its dual momentum lattice.

    Parameters
    ----------
    d : int
        Spatial dimension, 1 or 2.
    n : int
        Points per spatial axis; must be odd so both lattices are symmetric
        about the origin and the symplectic Fourier transform is involutive.
    L : float
        Side length of the position box.

    Attributes
    ----------
    dx, dxi : float
        Lattice spacings; ``dx * dxi * n == 2 * pi`` exactly.
    x_sites, xi_sites : ndarray
        Centered site coordinates ``m * dx`` and ``m * dxi`` for integer
        ``m in [-(n-1)/2, (n-1)/2]``.
    mu : float
        Phase-space quadrature weight ``(dx * dxi) ** d``.
    """

    d: int
    n: int
    L: float

    def __post_init__(self):
        if self.d not in (1, 2):
            raise ValueError(f"unsupported dimension d={self.d}; only d=1 and d=2 are implemented")
        if self.n < 3 or self.n % 2 == 0:
            raise ValueError(
                f"n must be odd and >= 3, got n={self.n}; even n leaves an unpaired "
                "Nyquist mode and breaks the exact involutivity of the symplectic transform"
            )
        if not self.L > 0:
            raise ValueError(f"box length must be positive, got L={self.L}")

    @property
    def dx(self) -> float:
        return self.L / self.n

    @property
    def dxi(self) -> float:
        return 2.0 * np.pi / self.L

    @property
    def half(self) -> int:
        return (self.n - 1) // 2

    @property
    def site_indices(self) -> np.ndarray:
        """Integer site labels ``-(n-1)/2 .. (n-1)/2`` in increasing order."""
        return np.arange(-self.half, self.half + 1)

    @property
    def x_sites(self) -> np.ndarray:
        return self.site_indices * self.dx

    @property
    def xi_sites(self) -> np.ndarray:
        return self.site_indices * self.dxi

    @property
    def mu(self) -> float:
        return (self.dx * self.dxi) ** self.d

    @property
    def n_state(self) -> int:
        """Dimension of the discretized state space (number of position sites)."""
        return self.n**self.d

    @property
    def n_phase(self) -> int:
        """Number of phase-space lattice sites."""
        return self.n ** (2 * self.d)

    def symbol_shape(self) -> tuple[int, ...]:
        return (self.n,) * (2 * self.d)

    def doubled_shape(self) -> tuple[int, ...]:
        return (self.n,) * (4 * self.d)

    def site_of(self, value: float, spacing: float) -> int:
        """Snap a coordinate to its integer site label, or raise if off-grid."""
        m = round(float(value) / spacing)
        if abs(value - m * spacing) > SITE_ATOL_FACTOR * spacing or abs(m) > self.half:
            raise ValueError(f"coordinate {value} is not a lattice site (spacing {spacing})")
        return int(m)

    def x_site_of(self, x) -> np.ndarray:
        return np.array([self.site_of(v, self.dx) for v in np.atleast_1d(x)], dtype=int)

    def xi_site_of(self, xi) -> np.ndarray:
        return np.array([self.site_of(v, self.dxi) for v in np.atleast_1d(xi)], dtype=int)


def make_grid(d: int, n: int = 15, L: float = 12.0) -> GridSpec:
    """Build a :class:`GridSpec`; rejects even ``n`` and unsupported ``d``."""
    return GridSpec(d=d, n=n, L=L)


@dataclass(frozen=True)
class PhasePoint:
    """A point ``X = (x, xi)`` of phase space; need not lie on the lattice."""

    x: np.ndarray
    xi: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x", np.atleast_1d(np.asarray(self.x, dtype=float)))
        object.__setattr__(self, "xi", np.atleast_1d(np.asarray(self.xi, dtype=float)))
        if self.x.shape != self.xi.shape or self.x.ndim != 1:
            raise ValueError("x and xi must be vectors of equal dimension")

    @property
    def d(self) -> int:
        return self.x.size

    def on_grid(self, grid: GridSpec) -> bool:
        try:
            grid.x_site_of(self.x)
            grid.xi_site_of(self.xi)
        except ValueError:
            return False
        return True

    def __add__(self, other: "PhasePoint") -> "PhasePoint":
        return PhasePoint(self.x + other.x, self.xi + other.xi)

    def __neg__(self) -> "PhasePoint":
        return PhasePoint(-self.x, -self.xi)


@dataclass(frozen=True)
class DoubledPoint:
    """A point ``(X_L, X_R)`` of the doubled phase space."""

    left: PhasePoint
    right: PhasePoint

    def __post_init__(self):
        if self.left.d != self.right.d:
            raise ValueError("left and right components must share one dimension")

    @property
    def d(self) -> int:
        return self.left.d


@dataclass(frozen=True)
class PhaseSymbol:
    """A complex function sampled on the phase-space lattice.

    ``values`` is indexed ``[x-axes..., xi-axes...]``, one axis per spatial
    coordinate and one per momentum coordinate, each of length ``n`` in
    increasing site order.
    """

    grid: GridSpec
    values: np.ndarray
    eps: float = 1.0
    lam: float = 1.0

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        if vals.shape != self.grid.symbol_shape():
            raise ValueError(f"symbol shape {vals.shape} does not match grid {self.grid.symbol_shape()}")
        if not np.all(np.isfinite(vals)):
            raise ValueError("symbol values must be finite")
        _check_params(self.eps, self.lam)
        object.__setattr__(self, "values", vals)

    def map_values(self, arr: np.ndarray) -> "PhaseSymbol":
        return PhaseSymbol(self.grid, arr, self.eps, self.lam)


@dataclass(frozen=True)
class DoubledSymbol:
    """A complex function on the doubled lattice, indexed ``[X_L axes..., X_R axes...]``.

    The same container holds integral kernels ``K(X, Z)`` on two phase-space
    factors.
    """

    grid: GridSpec
    values: np.ndarray
    eps: float = 1.0
    lam: float = 1.0

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        if vals.shape != self.grid.doubled_shape():
            raise ValueError(f"doubled symbol shape {vals.shape} does not match grid {self.grid.doubled_shape()}")
        if not np.all(np.isfinite(vals)):
            raise ValueError("doubled symbol values must be finite")
        _check_params(self.eps, self.lam)
        object.__setattr__(self, "values", vals)

    def map_values(self, arr: np.ndarray) -> "DoubledSymbol":
        return DoubledSymbol(self.grid, arr, self.eps, self.lam)


def _check_params(eps: float, lam: float) -> None:
    if not (0.0 < eps <= 1.0):
        raise ValueError(f"eps must lie in (0, 1], got {eps}")
    if not (0.0 < lam <= 1.0):
        raise ValueError(f"lam must lie in (0, 1], got {lam}")


def symplectic_form(X: PhasePoint, Y: PhasePoint) -> float:
    """Canonical symplectic form ``sigma(X, Y) = xi . y - x . eta``."""
    if X.d != Y.d:
        raise ValueError("dimension mismatch in symplectic form")
    return float(X.xi @ Y.x - X.x @ Y.xi)


def doubled_symplectic_form(Xb: DoubledPoint, Yb: DoubledPoint) -> float:
    """``Sigma(Xb, Yb) = sigma(X_L, Y_L) + sigma(X_R, Y_R)``."""
    if Xb.d != Yb.d:
        raise ValueError("dimension mismatch in doubled symplectic form")
    return symplectic_form(Xb.left, Yb.left) + symplectic_form(Xb.right, Yb.right)


@lru_cache(maxsize=32)
def _phase_kernel(n: int) -> np.ndarray:
    """Roots-of-unity kernel ``K[p, q] = exp(2i pi m_p m_q / n)`` on centered labels."""
    m = np.arange(-(n - 1) // 2, (n - 1) // 2 + 1)
    return np.exp(2j * np.pi * np.outer(m, m) / n)


def _apply_kernel(arr: np.ndarray, K: np.ndarray, axis: int) -> np.ndarray:
    """Contract ``K[out, in]`` against one axis of ``arr`` (axis position kept)."""
    return np.moveaxis(np.tensordot(K, arr, axes=([1], [axis])), 0, axis)


def _sfourier_block(values: np.ndarray, d: int, x_axes: tuple[int, ...], xi_axes: tuple[int, ...]) -> np.ndarray:
    """One symplectic Fourier factor acting on the given (x, xi) axis block.

    Contracting the x'-axis with ``exp(+i xi x')`` turns it into the output xi
    axis, and the xi'-axis with ``exp(-i x xi')`` into the output x axis, so
    the two axes swap roles and are swapped back to keep the layout fixed.
    """
    n = values.shape[x_axes[0]]
    K = _phase_kernel(n)
    out = values
    for xa, ka in zip(x_axes, xi_axes):
        out = _apply_kernel(out, K, xa)
        out = _apply_kernel(out, K.conj(), ka)
        out = np.swapaxes(out, xa, ka)
    return out / float(n**d)


def sfourier(f: PhaseSymbol) -> PhaseSymbol:
    """Symplectic Fourier transform; its own inverse on the lattice.

    ``(F f)(X) = (2 pi)^{-d} mu * sum_X' exp(+i sigma(X, X')) f(X')``.
    """
    d = f.grid.d
    out = _sfourier_block(f.values, d, tuple(range(d)), tuple(range(d, 2 * d)))
    return f.map_values(out)


def sfourier_doubled(F: DoubledSymbol) -> DoubledSymbol:
    """Symplectic Fourier transform on the doubled lattice (involutive)."""
    d = F.grid.d
    out = _sfourier_block(F.values, d, tuple(range(d)), tuple(range(d, 2 * d)))
    out = _sfourier_block(out, d, tuple(range(2 * d, 3 * d)), tuple(range(3 * d, 4 * d)))
    return F.map_values(out)


def japanese_bracket(xi) -> float:
    """``<xi> = sqrt(1 + |xi|^2)``."""
    v = np.atleast_1d(np.asarray(xi, dtype=float))
    return float(np.sqrt(1.0 + v @ v))


def peetre_bound(xi, eta, m: float) -> tuple[float, float]:
    """Return ``(<xi - eta>^m, 2^{|m|/2} <xi>^m <eta>^{|m|})``.

    The first entry never exceeds the second; the pair is exposed so callers
    can assert the inequality on sampled data.
    """
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    eta = np.atleast_1d(np.asarray(eta, dtype=float))
    lhs = japanese_bracket(xi - eta) ** m
    rhs = 2.0 ** (abs(m) / 2.0) * japanese_bracket(xi) ** m * japanese_bracket(eta) ** abs(m)
    return lhs, rhs


def transpose_doubled(F: DoubledSymbol) -> DoubledSymbol:
    """Swap the two phase-space factors: ``F^t(X_L, X_R) = F(X_R, X_L)``."""
    d2 = 2 * F.grid.d
    perm = tuple(range(d2, 2 * d2)) + tuple(range(d2))
    return F.map_values(np.transpose(F.values, perm))


def reflect_right(Yb: DoubledPoint) -> DoubledPoint:
    """``r(Y_L, Y_R) = (Y_L, -Y_R)``; involutive."""
    return DoubledPoint(Yb.left, -Yb.right)
