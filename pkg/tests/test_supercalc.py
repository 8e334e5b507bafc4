import numpy as np
import pytest

from superweyl.grid import (
    DoubledPoint,
    DoubledSymbol,
    PhaseSymbol,
    make_grid,
    symplectic_form,
    transpose_doubled,
)
from superweyl.magnetics import GaugeFunction, MagneticField, VectorPotential, cocycle, gauge_shift
from superweyl.products import moyal_product
from superweyl.supercalc import (
    GaussianDoubled,
    hs_adjoint,
    hs_inner,
    integral_apply,
    kernel_compose,
    kernel_map,
    kernel_map_closed_form_probe,
    liouville_symbol,
    pairing_doubled,
    pairing_phase,
    semi_super_product,
    super_dequantize,
    super_norm_bound,
    super_product,
    super_quantize,
    super_weyl_system,
    super_wigner,
    super_wigner_closed_form_probe,
)
from superweyl.symbols import lattice_point, packet_symbol, spectral_doubled, spectral_symbol
from superweyl.weyl import OperatorMatrix, _geometry, quantize, weyl_system, wigner


@pytest.fixture
def rng():
    return np.random.default_rng(53)


@pytest.fixture
def grid():
    return make_grid(1, 15, 12.0)


A0 = VectorPotential.zero(1)


def random_operator(grid, rng):
    ns = grid.n_state
    return rng.standard_normal((ns, ns)) + 1j * rng.standard_normal((ns, ns))


class TestSuperWeylSystem:
    def test_identity_at_origin(self, grid, rng):
        Xb = DoubledPoint(lattice_point(grid, 0, 0), lattice_point(grid, 0, 0))
        S = super_weyl_system(A0, grid, Xb)
        T = random_operator(grid, rng)
        assert np.abs(S.apply(T) - T).max() <= 1e-13

    def test_identity_argument_gives_product(self, grid, rng):
        Xb = DoubledPoint(lattice_point(grid, 2, -1), lattice_point(grid, -1, 3))
        S = super_weyl_system(A0, grid, Xb)
        got = S.apply(np.eye(grid.n_state, dtype=complex))
        want = weyl_system(A0, grid, Xb.left).entries @ weyl_system(A0, grid, Xb.right).entries
        assert np.abs(got - want).max() <= 1e-13

    def test_frobenius_preserved(self, grid, rng):
        Xb = DoubledPoint(lattice_point(grid, 1, 2), lattice_point(grid, 3, -2))
        S = super_weyl_system(A0, grid, Xb)
        T = random_operator(grid, rng)
        assert np.linalg.norm(S.apply(T)) == pytest.approx(np.linalg.norm(T), abs=1e-12)

    def test_composition_with_ordinary_translation(self, grid, rng):
        B0 = MagneticField.zero(1)
        geom = _geometry(grid, 1.0)
        XL, XR, Y = lattice_point(grid, 1, 2), lattice_point(grid, -2, 1), lattice_point(grid, 2, -1)
        S = super_weyl_system(A0, grid, DoubledPoint(XL, XR))
        lhs = S.apply(weyl_system(A0, grid, Y).entries)
        from superweyl.grid import PhasePoint

        XLY = PhasePoint(XL.x + Y.x, XL.xi + Y.xi)
        XRY = PhasePoint(XR.x + Y.x, XR.xi + Y.xi)
        tot = PhasePoint(XL.x + XR.x + Y.x, XL.xi + XR.xi + Y.xi)
        om1 = np.array([cocycle(B0, q, XL.x, Y.x, 1.0, 1.0) for q in geom.x_vectors])
        om2 = np.array([cocycle(B0, q, XL.x + Y.x, XR.x, 1.0, 1.0) for q in geom.x_vectors])
        rhs = np.exp(0.5j * symplectic_form(XLY, XRY)) * (om1 * om2)[:, None] * weyl_system(A0, grid, tot).entries
        assert np.abs(lhs - rhs).max() <= 1e-9


class TestSuperQuantize:
    def test_constant_symbol_is_identity(self, grid):
        one = DoubledSymbol(grid, np.ones(grid.doubled_shape()))
        S = super_quantize(A0, one)
        assert np.abs(S.dense - np.eye(grid.n_state**2)).max() <= 1e-10

    def test_tensor_product_reduction(self, grid, rng):
        fL, fR = spectral_symbol(grid, rng, 1.3), spectral_symbol(grid, rng, 1.3)
        F = DoubledSymbol(grid, np.multiply.outer(fL.values, fR.values))
        S = super_quantize(A0, F)
        T = random_operator(grid, rng)
        want = quantize(A0, fL).entries @ T @ quantize(A0, fR).entries
        assert np.abs(S.apply(T) - want).max() <= 1e-9

    def test_adjoint_is_conjugate_symbol(self, grid, rng):
        F = spectral_doubled(grid, rng, 1.3)
        S = super_quantize(A0, F)
        Sc = super_quantize(A0, DoubledSymbol(grid, np.conj(F.values)))
        assert np.abs(hs_adjoint(S).dense - Sc.dense).max() <= 1e-10
        T1 = OperatorMatrix(grid, random_operator(grid, rng))
        T2 = OperatorMatrix(grid, random_operator(grid, rng))
        assert hs_inner(S.apply_op(T1), T2) == pytest.approx(hs_inner(T1, Sc.apply_op(T2)), abs=1e-9)

    def test_dequantize_roundtrip(self, grid, rng):
        F = spectral_doubled(grid, rng, 1.3)
        S = super_quantize(A0, F)
        back = super_dequantize(A0, S.dense, grid)
        assert np.abs(back.values - F.values).max() <= 1e-12

    def test_norm_bound(self, grid, rng):
        F = spectral_doubled(grid, rng, 1.3)
        S = super_quantize(A0, F)
        T = random_operator(grid, rng)
        assert np.linalg.norm(S.apply(T)) <= super_norm_bound(F) * np.linalg.norm(T) + 1e-12

    def test_apply_only_fallback_matches_dense(self, rng):
        g = make_grid(1, 5, 12.0)
        F = spectral_doubled(g, rng, 0.5)
        from superweyl.supercalc import _super_quantize_apply_only

        S_dense = super_quantize(A0, F)
        S_apply = _super_quantize_apply_only(A0, F)
        T = random_operator(g, rng)
        assert np.abs(S_dense.apply(T) - S_apply.apply(T)).max() <= 1e-12


class TestLiouville:
    def test_commutator_map(self, grid, rng):
        h = spectral_symbol(grid, rng, 1.3)
        S = super_quantize(A0, liouville_symbol(h))
        oph = quantize(A0, h).entries
        T = random_operator(grid, rng)
        assert np.abs(S.apply(T) - (-1j) * (oph @ T - T @ oph)).max() <= 1e-9

    def test_constant_hamiltonian_vanishes(self, grid):
        h = PhaseSymbol(grid, 2.5 * np.ones(grid.symbol_shape()))
        assert np.abs(liouville_symbol(h).values).max() == 0.0

    def test_transpose_antisymmetry(self, grid, rng):
        Lh = liouville_symbol(spectral_symbol(grid, rng, 1.3))
        assert np.abs(transpose_doubled(Lh).values + Lh.values).max() == 0.0


class TestSemiSuperProduct:
    def test_unit(self, grid, rng):
        one = DoubledSymbol(grid, np.ones(grid.doubled_shape()))
        h = spectral_symbol(grid, rng, 1.3)
        got = semi_super_product(A0, one, h, "operator")
        assert np.abs(got.values - h.values).max() <= 1e-10

    def test_three_routes(self, rng):
        g = make_grid(1, 5, 12.0)
        F = spectral_doubled(g, rng, 0.35)
        h = spectral_symbol(g, rng, 0.35)
        r_op = semi_super_product(A0, F, h, "operator").values
        r_fq = semi_super_product(A0, F, h, "fourier-quadrature").values
        r_dq = semi_super_product(A0, F, h, "direct-quadrature").values
        assert np.abs(r_op - r_fq).max() <= 1e-7
        assert np.abs(r_op - r_dq).max() <= 1e-7
        assert np.abs(r_fq - r_dq).max() <= 1e-12

    def test_product_symbol_reduction(self, grid, rng):
        fL, fR = spectral_symbol(grid, rng, 1.3), spectral_symbol(grid, rng, 1.3)
        h = spectral_symbol(grid, rng, 1.3)
        F = DoubledSymbol(grid, np.multiply.outer(fL.values, fR.values))
        got = semi_super_product(A0, F, h, "operator")
        want = moyal_product(A0, moyal_product(A0, fL, h), fR)
        assert np.abs(got.values - want.values).max() <= 1e-8

    def test_liouville_symbol_gives_commutator(self, grid, rng):
        h = spectral_symbol(grid, rng, 1.3)
        u = spectral_symbol(grid, rng, 1.3)
        got = semi_super_product(A0, liouville_symbol(h), u, "operator")
        oph, opu = quantize(A0, h).entries, quantize(A0, u).entries
        want = wigner(A0, OperatorMatrix(grid, -1j * (oph @ opu - opu @ oph)))
        assert np.abs(got.values - want.values).max() <= 1e-9

    def test_direct_route_needs_unit_eps(self, rng):
        g = make_grid(1, 5, 12.0)
        F = spectral_doubled(g, rng, 0.35, eps=0.5)
        h = spectral_symbol(g, rng, 0.35, eps=0.5)
        with pytest.raises(ValueError, match="eps"):
            semi_super_product(A0, F, h, "direct-quadrature")

    def test_duality(self, grid, rng):
        F = spectral_doubled(grid, rng, 1.25)
        u, v = spectral_symbol(grid, rng, 1.25), spectral_symbol(grid, rng, 1.25)
        lhs = pairing_phase(semi_super_product(A0, F, u, "operator"), v)
        rhs = pairing_phase(u, semi_super_product(A0, transpose_doubled(F), v, "operator"))
        assert lhs == pytest.approx(rhs, abs=1e-8)


class TestKernelMachinery:
    def test_defining_relation(self, grid, rng):
        F = spectral_doubled(grid, rng, 1.3)
        K = kernel_map(A0, F)
        h = spectral_symbol(grid, rng, 1.3)
        lhs = integral_apply(K, h).values
        rhs = semi_super_product(A0, F, h, "operator").values
        assert np.abs(lhs - rhs).max() <= 1e-9

    def test_trivial_kernel(self, grid):
        one = DoubledSymbol(grid, np.ones(grid.doubled_shape()))
        K = kernel_map(A0, one)
        assert np.abs(K.values.reshape(grid.n_phase, grid.n_phase) - np.eye(grid.n_phase) / grid.mu).max() <= 1e-10

    def test_linearity(self, grid, rng):
        F1, F2 = spectral_doubled(grid, rng, 1.3), spectral_doubled(grid, rng, 1.3)
        a = 0.7 - 0.3j
        got = kernel_map(A0, DoubledSymbol(grid, F1.values + a * F2.values)).values
        want = kernel_map(A0, F1).values + a * kernel_map(A0, F2).values
        assert np.abs(got - want).max() <= 1e-12

    def test_integral_apply_oracle(self, rng):
        g = make_grid(1, 5, 12.0)
        K = DoubledSymbol(g, rng.standard_normal(g.doubled_shape()) + 1j * rng.standard_normal(g.doubled_shape()))
        h = PhaseSymbol(g, rng.standard_normal(g.symbol_shape()) + 0j)
        got = integral_apply(K, h).values.reshape(-1)
        Km, hv = K.values.reshape(g.n_phase, g.n_phase), h.values.reshape(-1)
        naive = np.array([g.mu * sum(Km[i, j] * hv[j] for j in range(g.n_phase)) for i in range(g.n_phase)])
        assert np.abs(got - naive).max() <= 1e-12

    def test_compose_is_application_chain(self, rng):
        g = make_grid(1, 9, 12.0)
        K1 = DoubledSymbol(g, rng.standard_normal(g.doubled_shape()) + 1j * rng.standard_normal(g.doubled_shape()))
        K2 = DoubledSymbol(g, rng.standard_normal(g.doubled_shape()) + 1j * rng.standard_normal(g.doubled_shape()))
        h = PhaseSymbol(g, rng.standard_normal(g.symbol_shape()) + 0j)
        lhs = integral_apply(kernel_compose(K1, K2), h).values
        rhs = integral_apply(K1, integral_apply(K2, h)).values
        assert np.abs(lhs - rhs).max() <= 1e-10

    def test_super_wigner_inverts(self, grid, rng):
        F = spectral_doubled(grid, rng, 1.3)
        K = kernel_map(A0, F)
        assert np.abs(super_wigner(A0, K).values - F.values).max() <= 1e-8

    def test_super_wigner_trivial(self, grid):
        ident = DoubledSymbol(grid, (np.eye(grid.n_phase) / grid.mu).reshape(grid.doubled_shape()))
        assert np.abs(super_wigner(A0, ident).values - 1.0).max() <= 1e-10

    def test_super_wigner_linearity(self, grid, rng):
        K1 = kernel_map(A0, spectral_doubled(grid, rng, 1.3))
        K2 = kernel_map(A0, spectral_doubled(grid, rng, 1.3))
        a = 1.3 + 0.4j
        got = super_wigner(A0, DoubledSymbol(grid, K1.values + a * K2.values)).values
        want = super_wigner(A0, K1).values + a * super_wigner(A0, K2).values
        assert np.abs(got - want).max() <= 1e-12


class TestSuperProduct:
    def test_unit(self, rng):
        g = make_grid(1, 5, 12.0)
        one = DoubledSymbol(g, np.ones(g.doubled_shape()))
        G = spectral_doubled(g, rng, 0.35)
        assert np.abs(super_product(A0, one, G, "kernel").values - G.values).max() <= 1e-10

    def test_three_routes(self, rng):
        g = make_grid(1, 5, 12.0)
        F, G = spectral_doubled(g, rng, 0.35), spectral_doubled(g, rng, 0.35)
        pk = super_product(A0, F, G, "kernel").values
        ps = super_product(A0, F, G, "superop").values
        pq = super_product(A0, F, G, "quadrature").values
        assert np.abs(pk - ps).max() <= 1e-7
        assert np.abs(pk - pq).max() <= 1e-7

    def test_defining_relation_dense(self, rng):
        g = make_grid(1, 9, 12.0)
        F, G = spectral_doubled(g, rng, 0.8), spectral_doubled(g, rng, 0.8)
        P = super_product(A0, F, G, "kernel")
        lhs = super_quantize(A0, P).dense
        rhs = super_quantize(A0, F).dense @ super_quantize(A0, G).dense
        assert np.abs(lhs - rhs).max() <= 1e-8

    def test_reversed_right_order(self, grid, rng):
        fL, fR, gL, gR = (spectral_symbol(grid, rng, 1.3) for _ in range(4))
        F = DoubledSymbol(grid, np.multiply.outer(fL.values, fR.values))
        G = DoubledSymbol(grid, np.multiply.outer(gL.values, gR.values))
        P = super_product(A0, F, G, "kernel")
        T = random_operator(grid, rng)
        got = super_quantize(A0, P).apply(T)
        left = quantize(A0, moyal_product(A0, fL, gL)).entries
        right = quantize(A0, moyal_product(A0, gR, fR)).entries
        assert np.abs(got - left @ T @ right).max() <= 1e-8

    def test_trace_identity(self, grid, rng):
        F, G = spectral_doubled(grid, rng, 1.25), spectral_doubled(grid, rng, 1.25)
        P = super_product(A0, F, G, "kernel")
        lhs = grid.mu**2 * np.sum(P.values)
        rhs = grid.mu**2 * np.sum(F.values * G.values)
        assert abs(lhs - rhs) <= 1e-8

    def test_duality_cycle(self, grid, rng):
        F, G, H = (spectral_doubled(grid, rng, 1.25) for _ in range(3))
        d1 = pairing_doubled(super_product(A0, F, G, "kernel"), H)
        d2 = pairing_doubled(F, super_product(A0, G, H, "kernel"))
        d3 = pairing_doubled(super_product(A0, H, F, "kernel"), G)
        assert d1 == pytest.approx(d2, abs=1e-8)
        assert d1 == pytest.approx(d3, abs=1e-8)

    def test_associativity(self, rng):
        g = make_grid(1, 9, 12.0)
        F, G, H = (spectral_doubled(g, rng, 0.8) for _ in range(3))
        a = super_product(A0, super_product(A0, F, G, "kernel"), H, "kernel").values
        b = super_product(A0, F, super_product(A0, G, H, "kernel"), "kernel").values
        assert np.abs(a - b).max() <= 1e-8

    def test_gauge_independence(self, grid, rng):
        chi = GaugeFunction(d=1, table=[(0.3, (2,)), (-0.2, (3,))])
        A1 = gauge_shift(A0, chi, 1.0)
        fL, fR = packet_symbol(A0, grid, rng), packet_symbol(A0, grid, rng)
        F = DoubledSymbol(grid, np.multiply.outer(fL.values, fR.values))
        G = DoubledSymbol(grid, np.multiply.outer(fR.values, fL.values))
        a = super_product(A0, F, G, "kernel").values
        b = super_product(A1, F, G, "kernel").values
        assert np.abs(a - b).max() <= 1e-8

    def test_quadrature_cost_guard(self, rng):
        g = make_grid(1, 15, 12.0)
        F, G = spectral_doubled(g, rng, 1.0), spectral_doubled(g, rng, 1.0)
        with pytest.raises(ValueError, match="phase terms"):
            super_product(A0, F, G, "quadrature")


class TestClosedFormProbes:
    def test_display_composition_is_identity(self):
        assert super_wigner_closed_form_probe(n_probes=2) <= 1e-10

    def test_kernel_display_fidelity_report(self, grid):
        F = GaussianDoubled(centers=(0.2, -0.1, -0.2, 0.15), widths=(1.28, 0.78, 1.28, 0.78))
        value = kernel_map_closed_form_probe(A0, grid, F=F, n_probes=3)
        assert value <= 1e-3  # lattice-fidelity threshold, not a transcription flag
