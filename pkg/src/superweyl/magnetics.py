"""Magnetic fields, vector potentials, gauge transformations and flux phases.

Field and potential families form a closed, serializable enum (zero,
constant, linear/Landau, symmetric, polynomial, windowed polynomial); no
arbitrary callables.  All flux integrals are fixed-order Gauss-Legendre
quadratures, exact for the built-in polynomial families.

Conventions.  A magnetic field is the antisymmetric matrix of an exact
two-form ``B_jk = d_j A_k - d_k A_j``; the flux through the oriented triangle
``<q, x2, x3>`` of a constant field is ``(1/2) sum_jk B_jk u_j v_k`` with
``u = x2 - q`` and ``v = x3 - x2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

__all__ = [
    "MagneticField",
    "VectorPotential",
    "GaugeFunction",
    "circulation",
    "triangle_flux",
    "scaled_triangle_flux",
    "quadrangle_flux",
    "cocycle",
    "exterior_derivative",
    "gauge_shift",
    "flux_gradient_coefficients",
    "flux_gradient_reconstruction_error",
    "phase_factor_growth_fit",
]

# A polynomial in d variables is a list of (coefficient, exponent-tuple) terms.
PolyTable = list[tuple[float, tuple[int, ...]]]


def _eval_poly(table: PolyTable, pts: np.ndarray) -> np.ndarray:
    """Evaluate a coefficient table at points of shape (..., d)."""
    out = np.zeros(pts.shape[:-1])
    for coeff, exps in table:
        term = np.full(pts.shape[:-1], float(coeff))
        for axis, e in enumerate(exps):
            if e:
                term = term * pts[..., axis] ** e
        out = out + term
    return out


def _diff_poly(table: PolyTable, axis: int) -> PolyTable:
    out: PolyTable = []
    for coeff, exps in table:
        if exps[axis] > 0:
            new = list(exps)
            new[axis] -= 1
            out.append((coeff * exps[axis], tuple(new)))
    return out


def _poly_scale(table: PolyTable, s: float) -> PolyTable:
    return [(s * c, e) for c, e in table]


def _poly_add(a: PolyTable, b: PolyTable) -> PolyTable:
    acc: dict[tuple[int, ...], float] = {}
    for c, e in list(a) + list(b):
        acc[e] = acc.get(e, 0.0) + c
    return [(c, e) for e, c in sorted(acc.items()) if c != 0.0] or [(0.0, (0,) * len(next(iter(acc))))]


@dataclass(frozen=True)
class MagneticField:
    """Antisymmetric matrix-valued field ``B_jk(x)``.

    families
        ``zero`` | ``constant`` (parameter ``b``: antisymmetric d x d matrix)
        | ``polynomial`` (``tables[j][k]``: coefficient table for B_jk, j < k)
        | ``windowed`` (polynomial tables times the Gaussian window
        ``exp(-|x|^2 / (2 w^2))``, which keeps every derivative bounded).
    """

    d: int
    family: str
    b: np.ndarray | None = None
    tables: dict | None = None
    window: float = 1.0

    def __post_init__(self):
        if self.family not in ("zero", "constant", "polynomial", "windowed"):
            raise ValueError(f"unknown magnetic field family {self.family!r}")
        if self.family == "constant":
            b = np.asarray(self.b, dtype=float)
            if b.shape != (self.d, self.d) or not np.allclose(b, -b.T, atol=1e-14):
                raise ValueError("constant field needs an antisymmetric d x d matrix")
            object.__setattr__(self, "b", b)
        if self.family in ("polynomial", "windowed") and not self.tables:
            raise ValueError(f"{self.family} field needs coefficient tables")

    @property
    def is_bounded(self) -> bool:
        """True when every component has bounded derivatives of all orders."""
        return self.family in ("zero", "constant", "windowed")

    def component(self, j: int, k: int, pts: np.ndarray) -> np.ndarray:
        """Evaluate ``B_jk`` at points of shape (..., d)."""
        pts = np.asarray(pts, dtype=float)
        if j == k or self.family == "zero":
            return np.zeros(pts.shape[:-1])
        if self.family == "constant":
            return np.full(pts.shape[:-1], self.b[j, k])
        sign, lo, hi = (1.0, j, k) if j < k else (-1.0, k, j)
        table = (self.tables or {}).get((lo, hi))
        if table is None:
            return np.zeros(pts.shape[:-1])
        out = sign * _eval_poly(table, pts)
        if self.family == "windowed":
            out = out * np.exp(-np.sum(pts**2, axis=-1) / (2.0 * self.window**2))
        return out

    def matrix(self, pts: np.ndarray) -> np.ndarray:
        """Full antisymmetric matrix field, shape (..., d, d)."""
        pts = np.asarray(pts, dtype=float)
        out = np.zeros(pts.shape[:-1] + (self.d, self.d))
        for j in range(self.d):
            for k in range(self.d):
                out[..., j, k] = self.component(j, k, pts)
        return out

    @staticmethod
    def zero(d: int) -> "MagneticField":
        return MagneticField(d=d, family="zero")

    @staticmethod
    def constant(b) -> "MagneticField":
        b = np.asarray(b, dtype=float)
        return MagneticField(d=b.shape[0], family="constant", b=b)


@dataclass(frozen=True)
class VectorPotential:
    """Vector potential ``A_j(x)`` with ``dA = B``; analytic derivatives throughout.

    families
        ``zero`` | ``linear`` (``m``: d x d matrix, ``A_j = sum_k m_jk x_k``;
        the Landau gauge for a constant field is ``m = [[0, 0], [b, 0]]``)
        | ``symmetric`` (``b``: scalar, d=2, ``A = (-b x2 / 2, b x1 / 2)``)
        | ``polynomial`` (``tables[j]``: coefficient table per component).
    """

    d: int
    family: str
    m: np.ndarray | None = None
    b: float = 0.0
    tables: dict | None = None

    def __post_init__(self):
        if self.family not in ("zero", "linear", "symmetric", "polynomial"):
            raise ValueError(f"unknown vector potential family {self.family!r}")
        if self.family == "linear":
            m = np.asarray(self.m, dtype=float)
            if m.shape != (self.d, self.d):
                raise ValueError("linear potential needs a d x d matrix")
            object.__setattr__(self, "m", m)
        if self.family == "symmetric" and self.d != 2:
            raise ValueError("symmetric gauge requires d=2")
        if self.family == "polynomial" and not self.tables:
            raise ValueError("polynomial potential needs coefficient tables")

    def component(self, j: int, pts: np.ndarray) -> np.ndarray:
        pts = np.asarray(pts, dtype=float)
        if self.family == "zero":
            return np.zeros(pts.shape[:-1])
        if self.family == "linear":
            return pts @ self.m[j]
        if self.family == "symmetric":
            return -0.5 * self.b * pts[..., 1] if j == 0 else 0.5 * self.b * pts[..., 0]
        table = (self.tables or {}).get(j)
        return _eval_poly(table, pts) if table else np.zeros(pts.shape[:-1])

    def evaluate(self, pts: np.ndarray) -> np.ndarray:
        """All components at points of shape (..., d) -> (..., d)."""
        pts = np.asarray(pts, dtype=float)
        return np.stack([self.component(j, pts) for j in range(self.d)], axis=-1)

    def component_table(self, j: int) -> PolyTable:
        """Coefficient table of component ``j`` (all families are polynomial)."""
        zero_exp = (0,) * self.d
        if self.family == "zero":
            return [(0.0, zero_exp)]
        if self.family == "linear":
            return [(self.m[j, k], tuple(1 if i == k else 0 for i in range(self.d))) for k in range(self.d) if self.m[j, k] != 0.0] or [(0.0, zero_exp)]
        if self.family == "symmetric":
            coeff = -0.5 * self.b if j == 0 else 0.5 * self.b
            axis = 1 - j
            return [(coeff, tuple(1 if i == axis else 0 for i in range(self.d)))]
        return list((self.tables or {}).get(j, [(0.0, zero_exp)]))

    @staticmethod
    def zero(d: int) -> "VectorPotential":
        return VectorPotential(d=d, family="zero")

    @staticmethod
    def landau(b: float) -> "VectorPotential":
        return VectorPotential(d=2, family="linear", m=np.array([[0.0, 0.0], [b, 0.0]]))

    @staticmethod
    def symmetric_gauge(b: float) -> "VectorPotential":
        return VectorPotential(d=2, family="symmetric", b=b)


@dataclass(frozen=True)
class GaugeFunction:
    """Real polynomial gauge function ``chi(x)``."""

    d: int
    table: PolyTable

    def __call__(self, pts: np.ndarray) -> np.ndarray:
        return _eval_poly(self.table, np.asarray(pts, dtype=float))

    def gradient_table(self, j: int) -> PolyTable:
        return _diff_poly(self.table, j) or [(0.0, (0,) * self.d)]


@lru_cache(maxsize=16)
def _gauss_01(nodes: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre rule on [0, 1]."""
    t, w = np.polynomial.legendre.leggauss(nodes)
    return 0.5 * (t + 1.0), 0.5 * w


@lru_cache(maxsize=16)
def _gauss_sym(nodes: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre rule on [-1, 1]."""
    return np.polynomial.legendre.leggauss(nodes)


def circulation(A: VectorPotential, x, y, nodes: int = 8) -> float:
    """Line integral of ``A`` along the segment from ``x`` to ``y``.

    Gauss-Legendre with ``nodes`` points on the parametrized segment; exact
    for polynomial components of degree <= 2 * nodes - 1.
    """
    if nodes < 1:
        raise ValueError("nodes must be >= 1")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    t, w = _gauss_01(nodes)
    pts = x[None, :] + t[:, None] * (y - x)[None, :]
    return float(w @ (A.evaluate(pts) @ (y - x)))


def triangle_flux(B: MagneticField, q, x2, x3, nodes: int = 8) -> float:
    """Flux of ``B`` through the oriented triangle ``<q, x2, x3>``.

    Tensor-product Gauss quadrature on the parametrization
    ``p(s, t) = q + s u + t v`` (``u = x2 - q``, ``v = x3 - x2``,
    ``0 <= t <= s <= 1``), integrand ``sum_jk B_jk(p) u_j v_k``; swapping the
    last two corners flips the sign.
    """
    q = np.asarray(q, dtype=float)
    u = np.asarray(x2, dtype=float) - q
    v = np.asarray(x3, dtype=float) - np.asarray(x2, dtype=float)
    s, ws = _gauss_01(nodes)
    tau, wt = _gauss_01(nodes)
    # t = s * tau maps the unit square onto the triangle with Jacobian s.
    S = s[:, None]
    T = S * tau[None, :]
    pts = q[None, None, :] + S[..., None] * u + T[..., None] * v
    Bm = B.matrix(pts)
    integrand = np.einsum("stjk,j,k->st", Bm, u, v)
    return float(np.einsum("s,t,st->", ws * s, wt, integrand))


def scaled_triangle_flux(B: MagneticField, x, y, z, eps: float, nodes: int = 8) -> float:
    """``(1/eps)`` times the flux through the triangle with corners
    ``x - (eps/2)(y+z)``, ``x + (eps/2)(y-z)``, ``x + (eps/2)(y+z)``."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    z = np.asarray(z, dtype=float)
    c1 = x - 0.5 * eps * (y + z)
    c2 = x + 0.5 * eps * (y - z)
    c3 = x + 0.5 * eps * (y + z)
    return triangle_flux(B, c1, c2, c3, nodes=nodes) / eps


def quadrangle_flux(B: MagneticField, x, yL, yR, z, eps: float, nodes: int = 8) -> float:
    """Two conjoined scaled triangle fluxes:
    ``gamma(x, yL, z) + gamma(x, yL + z, yR)``."""
    yL = np.asarray(yL, dtype=float)
    z = np.asarray(z, dtype=float)
    return scaled_triangle_flux(B, x, yL, z, eps, nodes) + scaled_triangle_flux(B, x, yL + z, yR, eps, nodes)


def cocycle(B: MagneticField, q, x, y, eps: float, lam: float, nodes: int = 8) -> complex:
    """Unit-modulus phase ``exp(-i (lam/eps) * flux<q, q+eps*x, q+eps*x+eps*y>)``."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    q = np.asarray(q, dtype=float)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    flux = triangle_flux(B, q, q + eps * x, q + eps * x + eps * y, nodes=nodes)
    return complex(np.exp(-1j * (lam / eps) * flux))


def exterior_derivative(A: VectorPotential) -> MagneticField:
    """``B_jk = d_j A_k - d_k A_j`` computed from the analytic tables."""
    d = A.d
    if A.family == "zero":
        return MagneticField.zero(d)
    tables: dict = {}
    constant = True
    zero_exp = (0,) * d
    for j in range(d):
        for k in range(j + 1, d):
            tab = _poly_add(_diff_poly(A.component_table(k), j), _poly_scale(_diff_poly(A.component_table(j), k), -1.0))
            tables[(j, k)] = tab
            constant = constant and all(e == zero_exp for _, e in tab)
    if constant:
        b = np.zeros((d, d))
        for (j, k), tab in tables.items():
            b[j, k] = sum(c for c, _ in tab)
            b[k, j] = -b[j, k]
        if not b.any():
            return MagneticField.zero(d)
        return MagneticField.constant(b)
    return MagneticField(d=d, family="polynomial", tables=tables)


def gauge_shift(A: VectorPotential, chi: GaugeFunction, eps: float) -> VectorPotential:
    """Equivalent potential ``A' = A + eps * grad(chi)``; ``dA' = dA``."""
    tables = {j: _poly_add(A.component_table(j), _poly_scale(chi.gradient_table(j), eps)) for j in range(A.d)}
    return VectorPotential(d=A.d, family="polynomial", tables=tables)


def flux_gradient_coefficients(B: MagneticField, x, y, z, eps: float, nodes: int = 16) -> dict[str, np.ndarray]:
    """Edge-sampled coefficient matrices for the gradients of the scaled flux.

    Returns the six d x d matrices ``Dx, Ex, Dy, Ey, Dz, Ez`` (already
    evaluated at ``(x, eps*y, eps*z)``) for which

    ``d_x_j gamma = sum_k (Dx_jk y_k + Ex_jk z_k)``
    ``d_y_j gamma = sum_k (Dy_jk eps y_k + Ey_jk eps z_k)``
    ``d_z_j gamma = sum_k (Dz_jk eps y_k + Ez_jk eps z_k)``

    Each entry is a Gauss-Legendre integral over ``t in [-1, 1]`` of
    differences of ``B_jk`` sampled along the three triangle edges.  Requires
    a bounded-class field.
    """
    if not B.is_bounded:
        raise ValueError("flux gradient coefficients require a bounded-class magnetic field")
    if eps <= 0:
        raise ValueError("eps must be positive")
    x = np.asarray(x, dtype=float)
    sy = eps * np.asarray(y, dtype=float)
    sz = eps * np.asarray(z, dtype=float)
    t, w = _gauss_sym(nodes)

    # B_jk along the three edges of the flux triangle, in the scaled variables.
    p_first = x[None, :] + 0.5 * (t[:, None] * sy[None, :] - sz[None, :])  # edge through x + (t y - z)/2
    p_second = x[None, :] + 0.5 * (sy[None, :] + t[:, None] * sz[None, :])  # edge through x + (y + t z)/2
    p_diag = x[None, :] + 0.5 * t[:, None] * (sy + sz)[None, :]  # diagonal edge through x + t (y + z)/2
    d = B.d
    Bf = np.stack([[B.component(j, k, p_first) for k in range(d)] for j in range(d)])  # (d, d, t)
    Bs = np.stack([[B.component(j, k, p_second) for k in range(d)] for j in range(d)])
    Bd = np.stack([[B.component(j, k, p_diag) for k in range(d)] for j in range(d)])

    def integrate(values: np.ndarray, weight: np.ndarray) -> np.ndarray:
        return np.einsum("t,jkt->jk", w * weight, values)

    one = np.ones_like(t)
    out = {
        "Dx": 0.5 * integrate(Bf - Bd, one),
        "Ex": 0.5 * integrate(Bs - Bd, one),
        "Dy": 0.25 * integrate(Bf - Bd, t),
        "Ey": 0.25 * (integrate(Bs, one) - integrate(Bd, t)),
        # Derived by parts from the closedness of the field two-form; the
        # single-integral edge form for the z-gradient picks up the opposite
        # sign on the first-edge term relative to the y-gradient.
        "Dz": -0.25 * (integrate(Bf, one) + integrate(Bd, t)),
        "Ez": 0.25 * integrate(Bs - Bd, t),
    }
    return out


def flux_gradient_reconstruction_error(
    B: MagneticField, x, y, z, eps: float, nodes: int = 16, h: float = 1e-5
) -> float:
    """Max-abs mismatch between the coefficient reconstruction of the flux
    gradients and central finite differences of :func:`scaled_triangle_flux`."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    z = np.asarray(z, dtype=float)
    coeff = flux_gradient_coefficients(B, x, y, z, eps, nodes=nodes)
    d = B.d
    err = 0.0
    for j in range(d):
        e = np.zeros(d)
        e[j] = h
        fd_x = (scaled_triangle_flux(B, x + e, y, z, eps) - scaled_triangle_flux(B, x - e, y, z, eps)) / (2 * h)
        fd_y = (scaled_triangle_flux(B, x, y + e, z, eps) - scaled_triangle_flux(B, x, y - e, z, eps)) / (2 * h)
        fd_z = (scaled_triangle_flux(B, x, y, z + e, eps) - scaled_triangle_flux(B, x, y, z - e, eps)) / (2 * h)
        err = max(err, abs(fd_x - (coeff["Dx"][j] @ y + coeff["Ex"][j] @ z)))
        err = max(err, abs(fd_y - eps * (coeff["Dy"][j] @ y + coeff["Ey"][j] @ z)))
        err = max(err, abs(fd_z - eps * (coeff["Dz"][j] @ y + coeff["Ez"][j] @ z)))
    return err


def _phase(B: MagneticField, lam: float, eps: float, x, y, z) -> complex:
    return complex(np.exp(-1j * lam * scaled_triangle_flux(B, x, y, z, eps)))


def phase_factor_growth_fit(
    B: MagneticField, eps: float, lam: float, rng: np.random.Generator, samples: int = 40, h: float = 1e-3
) -> dict[tuple[int, int, int], float]:
    """Fitted constants for the growth of flux-phase derivatives.

    For every derivative order ``(a, b, c)`` with ``a + b + c <= 2`` (one
    coordinate direction each in x, y, z), samples central-difference
    derivatives of ``exp(-i lam gamma)`` and returns the largest observed
    ratio against ``(<y> + <z>) ** (a + b + c)``.
    """
    if not B.is_bounded:
        raise ValueError("growth-bound fits require a bounded-class magnetic field")
    d = B.d
    from .grid import japanese_bracket

    def deriv(order: tuple[int, int, int], x, y, z) -> complex:
        a, b, c = order

        def g(x_, y_, z_):
            return _phase(B, lam, eps, x_, y_, z_)

        e = np.zeros(d)
        e[0] = h
        if (a, b, c) == (0, 0, 0):
            return g(x, y, z)
        if a == 1 and b == 0 and c == 0:
            return (g(x + e, y, z) - g(x - e, y, z)) / (2 * h)
        if a == 0 and b == 1 and c == 0:
            return (g(x, y + e, z) - g(x, y - e, z)) / (2 * h)
        if a == 0 and b == 0 and c == 1:
            return (g(x, y, z + e) - g(x, y, z - e)) / (2 * h)
        if a == 2:
            return (g(x + e, y, z) - 2 * g(x, y, z) + g(x - e, y, z)) / h**2
        if b == 2:
            return (g(x, y + e, z) - 2 * g(x, y, z) + g(x, y - e, z)) / h**2
        if c == 2:
            return (g(x, y, z + e) - 2 * g(x, y, z) + g(x, y, z - e)) / h**2
        if a == 1 and b == 1:
            return (g(x + e, y + e, z) - g(x + e, y - e, z) - g(x - e, y + e, z) + g(x - e, y - e, z)) / (4 * h**2)
        if a == 1 and c == 1:
            return (g(x + e, y, z + e) - g(x + e, y, z - e) - g(x - e, y, z + e) + g(x - e, y, z - e)) / (4 * h**2)
        return (g(x, y + e, z + e) - g(x, y + e, z - e) - g(x, y - e, z + e) + g(x, y - e, z - e)) / (4 * h**2)

    orders = [(a, b, c) for a in range(3) for b in range(3) for c in range(3) if 0 < a + b + c <= 2]
    fits: dict[tuple[int, int, int], float] = {}
    pts = rng.uniform(-3.0, 3.0, size=(samples, 3, d))
    for order in orders:
        ratio = 0.0
        for x, y, z in pts:
            mag = abs(deriv(order, x, y, z))
            bound = (japanese_bracket(y) + japanese_bracket(z)) ** sum(order)
            ratio = max(ratio, mag / bound)
        fits[order] = ratio
    return fits
