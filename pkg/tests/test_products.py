import numpy as np
import pytest

from superweyl.grid import PhasePoint, PhaseSymbol, make_grid, symplectic_form
from superweyl.magnetics import GaugeFunction, MagneticField, VectorPotential, gauge_shift
from superweyl.products import magnetic_poisson, moyal_product, semiclassical_defect
from superweyl.symbols import gaussian_symbol, packet_symbol, plane_wave, spectral_symbol
from superweyl.weyl import conjugate_by_unitary, quantize, wigner


@pytest.fixture
def rng():
    return np.random.default_rng(41)


A0 = VectorPotential.zero(1)
B0 = MagneticField.zero(1)


class TestMoyalProduct:
    def test_unit(self, rng):
        g = make_grid(1, 7, 12.0)
        one = PhaseSymbol(g, np.ones(g.symbol_shape()))
        h = spectral_symbol(g, rng, 0.45)
        for route in ("operator", "quadrature"):
            assert np.abs(moyal_product(A0, one, h, route).values - h.values).max() <= 1e-10

    @pytest.mark.parametrize("n,ss", [(5, 0.35), (7, 0.45)])
    def test_route_agreement(self, n, ss, rng):
        g = make_grid(1, n, 12.0)
        f, h = spectral_symbol(g, rng, ss), spectral_symbol(g, rng, ss)
        a = moyal_product(A0, f, h, "operator").values
        b = moyal_product(A0, f, h, "quadrature").values
        assert np.abs(a - b).max() <= 1e-8

    def test_route_agreement_constant_field(self, rng):
        g = make_grid(2, 5, 12.0)
        A = VectorPotential.landau(2 * np.pi / (g.L * g.dx))
        f, h = spectral_symbol(g, rng, 0.35), spectral_symbol(g, rng, 0.35)
        a = moyal_product(A, f, h, "operator").values
        b = moyal_product(A, f, h, "quadrature").values
        assert np.abs(a - b).max() <= 1e-8

    def test_plane_wave_composition(self, rng):
        g = make_grid(1, 15, 12.0)
        Y = PhasePoint([2 * g.dx], [-1 * g.dxi])
        Z = PhasePoint([1 * g.dx], [3 * g.dxi])
        got = moyal_product(A0, plane_wave(g, Y), plane_wave(g, Z), "operator").values
        YZ = PhasePoint(Y.x + Z.x, Y.xi + Z.xi)
        want = np.exp(0.5j * symplectic_form(Y, Z)) * plane_wave(g, YZ).values
        assert np.abs(got - want).max() <= 1e-10

    def test_noncommutativity_witness(self, rng):
        g = make_grid(1, 15, 12.0)
        f, h = spectral_symbol(g, rng, 1.3), spectral_symbol(g, rng, 1.3)
        asym = moyal_product(A0, f, h).values - moyal_product(A0, h, f).values
        assert np.abs(asym).max() > 1e-3
        Tf, Th = quantize(A0, f), quantize(A0, h)
        comm = wigner(A0, Tf @ Th).values - wigner(A0, Th @ Tf).values
        assert np.abs(asym - comm).max() <= 1e-10

    def test_associativity(self, rng):
        g = make_grid(1, 15, 12.0)
        f, h, k = (spectral_symbol(g, rng, 1.3) for _ in range(3))
        lhs = moyal_product(A0, moyal_product(A0, f, h), k).values
        rhs = moyal_product(A0, f, moyal_product(A0, h, k)).values
        assert np.abs(lhs - rhs).max() <= 1e-9

    def test_conjugation_antihomomorphism(self, rng):
        g = make_grid(1, 15, 12.0)
        f, h = spectral_symbol(g, rng, 1.3), spectral_symbol(g, rng, 1.3)
        lhs = np.conj(moyal_product(A0, f, h).values)
        rhs = moyal_product(A0, PhaseSymbol(g, np.conj(h.values)), PhaseSymbol(g, np.conj(f.values))).values
        assert np.abs(lhs - rhs).max() <= 1e-9

    def test_gauge_independence(self, rng):
        g = make_grid(1, 15, 12.0)
        chi = GaugeFunction(d=1, table=[(0.25, (2,)), (-0.4, (1,))])
        A1 = gauge_shift(A0, chi, 1.0)
        f, h = packet_symbol(A0, g, rng), packet_symbol(A0, g, rng)
        a = moyal_product(A0, f, h).values
        b = moyal_product(A1, f, h).values
        assert np.abs(a - b).max() <= 1e-9

    def test_representation_independence(self, rng):
        g = make_grid(1, 15, 12.0)
        ns = g.n_state
        U = np.linalg.qr(rng.standard_normal((ns, ns)) + 1j * rng.standard_normal((ns, ns)))[0]
        f, h = spectral_symbol(g, rng, 1.3), spectral_symbol(g, rng, 1.3)
        base = moyal_product(A0, f, h).values
        Tf, Th = quantize(A0, f), quantize(A0, h)
        moved = wigner(A0, conjugate_by_unitary(conjugate_by_unitary(Tf, U) @ conjugate_by_unitary(Th, U), U.conj().T))
        assert np.abs(base - moved.values).max() <= 1e-9

    def test_quadrature_needs_field_operator_needs_potential(self, rng):
        g = make_grid(1, 5, 12.0)
        f = spectral_symbol(g, rng, 0.35)
        with pytest.raises(ValueError, match="potential"):
            moyal_product(B0, f, f, "operator")
        got = moyal_product(B0, f, f, "quadrature")
        want = moyal_product(A0, f, f, "quadrature")
        assert np.abs(got.values - want.values).max() == 0.0

    def test_general_field_cost_refusal(self, rng):
        g = make_grid(2, 9, 12.0)
        Bw = MagneticField(d=2, family="windowed", tables={(0, 1): [(0.5, (0, 0))]}, window=2.0)
        f = spectral_symbol(g, rng, 0.6)
        with pytest.raises(ValueError, match="quadratures"):
            moyal_product(Bw, f, f, "quadrature")


class TestPoissonBracket:
    def test_self_bracket_vanishes(self, rng):
        g = make_grid(1, 31, 12.0)
        f = gaussian_symbol(g, 0.3, 0.2, 0.86, 1.14)
        assert np.abs(magnetic_poisson(B0, f, f).values).max() <= 1e-11

    def test_antisymmetry(self, rng):
        g = make_grid(1, 31, 12.0)
        f = gaussian_symbol(g, 0.3, 0.2, 0.86, 1.14)
        h = gaussian_symbol(g, -0.3, -0.3, 0.86, 1.14)
        anti = magnetic_poisson(B0, f, h).values + magnetic_poisson(B0, h, f).values
        assert np.abs(anti).max() <= 1e-11

    def test_finite_difference_oracle(self):
        g = make_grid(1, 31, 12.0)

        def fa(x, xi):
            return np.exp(-((x - 0.3) ** 2) / (2 * 0.86**2) - (xi - 0.2) ** 2 / (2 * 1.14**2))

        def ha(x, xi):
            return np.exp(-((x + 0.3) ** 2) / (2 * 0.86**2) - (xi + 0.3) ** 2 / (2 * 1.14**2))

        X, XI = np.meshgrid(g.x_sites, g.xi_sites, indexing="ij")
        got = magnetic_poisson(B0, PhaseSymbol(g, fa(X, XI) + 0j), PhaseSymbol(g, ha(X, XI) + 0j)).values
        s = 1e-5
        fd = (
            (fa(X, XI + s) - fa(X, XI - s)) * (ha(X + s, XI) - ha(X - s, XI))
            - (fa(X + s, XI) - fa(X - s, XI)) * (ha(X, XI + s) - ha(X, XI - s))
        ) / (4 * s * s)
        assert np.abs(got - fd).max() <= 1e-6

    def test_field_term_active(self, rng):
        g = make_grid(2, 5, 12.0)
        Bc = MagneticField.constant([[0.0, 0.8], [-0.8, 0.0]])
        f, h = spectral_symbol(g, rng, 0.8), spectral_symbol(g, rng, 0.8)
        with_field = magnetic_poisson(Bc, f, h, lam=1.0).values
        without = magnetic_poisson(Bc, f, h, lam=0.0).values
        assert np.abs(with_field - without).max() > 1e-8


class TestSemiclassical:
    def test_richardson_order(self):
        g = make_grid(1, 31, 12.0)
        f = gaussian_symbol(g, 0.5, 0.3, 1.5, 1.5)
        h = gaussian_symbol(g, -0.4, -0.5, 1.5, 1.5, momentum_shift=0.3)
        defects = [semiclassical_defect(A0, f, h, eps=e) for e in (0.4, 0.2, 0.1, 0.05)]
        for a, b in zip(defects, defects[1:]):
            assert abs(a / b - 4.0) <= 0.4

    def test_constant_factor_degenerates(self):
        g = make_grid(1, 31, 12.0)
        c = PhaseSymbol(g, 1.7 * np.ones(g.symbol_shape()))
        h = gaussian_symbol(g, -0.4, -0.5, 1.5, 1.5)
        for eps in (1.0, 0.1):
            assert semiclassical_defect(A0, c, h, eps=eps) <= 1e-9

    def test_coupling_enters_through_field_only(self, rng):
        g = make_grid(1, 15, 12.0)
        f = spectral_symbol(g, rng, 1.2)
        h = spectral_symbol(g, rng, 1.2)
        a = semiclassical_defect(B0, PhaseSymbol(g, f.values, 0.3, 1.0), PhaseSymbol(g, h.values, 0.3, 1.0))
        b = semiclassical_defect(B0, PhaseSymbol(g, f.values, 0.3, 0.5), PhaseSymbol(g, h.values, 0.3, 0.5))
        assert abs(a - b) <= 1e-12
