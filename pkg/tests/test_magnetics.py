import numpy as np
import pytest

from superweyl.magnetics import (
    GaugeFunction,
    MagneticField,
    VectorPotential,
    circulation,
    cocycle,
    exterior_derivative,
    flux_gradient_coefficients,
    flux_gradient_reconstruction_error,
    gauge_shift,
    phase_factor_growth_fit,
    quadrangle_flux,
    scaled_triangle_flux,
    triangle_flux,
)


@pytest.fixture
def rng():
    return np.random.default_rng(7)


@pytest.fixture
def windowed_field():
    return MagneticField(
        d=2,
        family="windowed",
        tables={(0, 1): [(0.7, (0, 0)), (0.3, (1, 0)), (-0.4, (0, 1)), (0.2, (1, 1))]},
        window=2.5,
    )


class TestFieldsAndPotentials:
    def test_antisymmetry_on_probe_set(self, windowed_field, rng):
        pts = rng.uniform(-3, 3, (40, 2))
        M = windowed_field.matrix(pts)
        assert np.abs(M + np.swapaxes(M, -1, -2)).max() <= 1e-14

    def test_constant_requires_antisymmetric(self):
        with pytest.raises(ValueError, match="antisymmetric"):
            MagneticField.constant([[0.0, 1.0], [1.0, 0.0]])

    def test_bounded_flags(self, windowed_field):
        assert windowed_field.is_bounded
        assert MagneticField.constant([[0.0, 1.0], [-1.0, 0.0]]).is_bounded
        poly = MagneticField(d=2, family="polynomial", tables={(0, 1): [(1.0, (1, 0))]})
        assert not poly.is_bounded

    def test_symmetric_requires_d2(self):
        with pytest.raises(ValueError, match="d=2"):
            VectorPotential(d=1, family="symmetric", b=1.0)

    def test_landau_and_symmetric_derive_constant(self, rng):
        pts = rng.uniform(-2, 2, (10, 2))
        for A, b in ((VectorPotential.landau(0.8), 0.8), (VectorPotential.symmetric_gauge(1.1), 1.1)):
            B = exterior_derivative(A)
            assert B.family == "constant"
            assert np.allclose(B.component(0, 1, pts), b)

    def test_zero_derives_zero(self):
        assert exterior_derivative(VectorPotential.zero(2)).family == "zero"


class TestCirculation:
    def test_zero_potential(self):
        assert circulation(VectorPotential.zero(2), [0.0, 0.0], [1.0, 2.0]) == 0.0

    def test_degenerate_segment(self):
        A = VectorPotential.landau(1.0)
        assert circulation(A, [0.4, -0.2], [0.4, -0.2]) == pytest.approx(0.0, abs=1e-15)

    def test_landau_closed_form(self):
        # integral of t along the diagonal of the unit square
        assert circulation(VectorPotential.landau(1.0), [0.0, 0.0], [1.0, 1.0]) == pytest.approx(0.5)

    def test_node_validation(self):
        with pytest.raises(ValueError):
            circulation(VectorPotential.zero(2), [0.0, 0.0], [1.0, 1.0], nodes=0)


class TestFluxes:
    def test_zero_field(self, rng):
        B = MagneticField.zero(2)
        q, x2, x3 = rng.uniform(-2, 2, (3, 2))
        assert triangle_flux(B, q, x2, x3) == 0.0

    def test_degenerate_triangle(self, windowed_field):
        q = np.array([0.3, -0.2])
        u = np.array([1.0, 0.5])
        assert triangle_flux(windowed_field, q, q + u, q + 2 * u) == pytest.approx(0.0, abs=1e-14)

    def test_constant_closed_form(self, rng):
        b = 0.9
        B = MagneticField.constant([[0.0, b], [-b, 0.0]])
        q, u, v = rng.uniform(-1, 1, (3, 2))
        got = triangle_flux(B, q, q + u, q + u + v)
        assert got == pytest.approx(0.5 * b * (u[0] * v[1] - u[1] * v[0]), abs=1e-13)

    def test_monte_carlo_cross_check(self, windowed_field, rng):
        # uniform samples over the (s, t <= s) parametrization, region area 1/2
        q, u, v = rng.uniform(-1, 1, (3, 2))
        n_samples = 1_000_000
        s = np.sqrt(rng.uniform(0, 1, n_samples))  # density proportional to s
        t = rng.uniform(0, 1, n_samples) * s
        pts = q[None, :] + s[:, None] * u[None, :] + t[:, None] * v[None, :]
        integrand = np.einsum("pjk,j,k->p", windowed_field.matrix(pts), u, v)
        mc = 0.5 * integrand.mean()
        exact = triangle_flux(windowed_field, q, q + u, q + u + v, nodes=16)
        sem = 0.5 * integrand.std() / np.sqrt(n_samples)
        assert abs(mc - exact) <= 6 * sem + 1e-12

    def test_orientation_antisymmetry(self, windowed_field, rng):
        q, x2, x3 = rng.uniform(-2, 2, (3, 2))
        a = triangle_flux(windowed_field, q, x2, x3)
        b = triangle_flux(windowed_field, q, x3, x2)
        assert abs(a + b) <= 1e-12 * max(abs(a), 1.0)

    def test_stokes(self, rng):
        A = VectorPotential(d=2, family="polynomial", tables={0: [(0.2, (1, 1))], 1: [(0.4, (2, 0)), (-0.1, (0, 2))]})
        B = exterior_derivative(A)
        q, x2, x3 = rng.uniform(-1.5, 1.5, (3, 2))
        flux = triangle_flux(B, q, x2, x3, nodes=12)
        circ = circulation(A, q, x2) + circulation(A, x2, x3) + circulation(A, x3, q)
        assert flux == pytest.approx(circ, abs=1e-8)

    def test_scaled_flux_constant(self, rng):
        b = 0.7
        B = MagneticField.constant([[0.0, b], [-b, 0.0]])
        x, y, z = rng.uniform(-1.5, 1.5, (3, 2))
        for eps in (1.0, 0.5, 0.25, 0.125):
            got = scaled_triangle_flux(B, x, y, z, eps)
            assert got == pytest.approx(0.5 * eps * b * (y[0] * z[1] - y[1] * z[0]), abs=1e-13)

    def test_quadrangle_additivity(self, windowed_field, rng):
        x, yL, yR, z = rng.uniform(-1.5, 1.5, (4, 2))
        got = quadrangle_flux(windowed_field, x, yL, yR, z, 0.7)
        want = scaled_triangle_flux(windowed_field, x, yL, z, 0.7) + scaled_triangle_flux(
            windowed_field, x, yL + z, yR, 0.7
        )
        assert got == pytest.approx(want, abs=1e-12)
        reduced = quadrangle_flux(windowed_field, x, yL, np.zeros(2), z, 0.7)
        assert reduced == pytest.approx(scaled_triangle_flux(windowed_field, x, yL, z, 0.7), abs=1e-12)

    def test_eps_validation(self):
        B = MagneticField.zero(2)
        with pytest.raises(ValueError):
            scaled_triangle_flux(B, np.zeros(2), np.ones(2), np.ones(2), 0.0)


class TestCocycle:
    def test_zero_field_gives_one(self, rng):
        B = MagneticField.zero(2)
        q, x, y = rng.uniform(-2, 2, (3, 2))
        assert cocycle(B, q, x, y, 0.7, 0.9) == pytest.approx(1.0)

    def test_unimodular(self, windowed_field, rng):
        for _ in range(5):
            q, x, y = rng.uniform(-2, 2, (3, 2))
            assert abs(abs(cocycle(windowed_field, q, x, y, 0.6, 1.0)) - 1.0) <= 1e-14

    def test_degenerate_triangle_gives_one(self, windowed_field):
        q = np.array([0.2, 0.1])
        x = np.array([1.0, -0.5])
        assert cocycle(windowed_field, q, x, 3.0 * x, 0.8, 1.0) == pytest.approx(1.0, abs=1e-13)


class TestGauge:
    def test_constant_chi_no_change(self, rng):
        A = VectorPotential.landau(0.5)
        chi = GaugeFunction(d=2, table=[(4.2, (0, 0))])
        pts = rng.uniform(-2, 2, (10, 2))
        assert np.abs(gauge_shift(A, chi, 1.0).evaluate(pts) - A.evaluate(pts)).max() <= 1e-14

    def test_quadratic_chi(self, rng):
        chi = GaugeFunction(d=1, table=[(1.0, (2,))])
        A = gauge_shift(VectorPotential.zero(1), chi, 1.0)
        pts = rng.uniform(-2, 2, (10, 1))
        assert np.allclose(A.component(0, pts), 2 * pts[..., 0])

    def test_field_invariance(self, rng):
        A = VectorPotential(d=2, family="polynomial", tables={0: [(0.2, (1, 1))], 1: [(0.4, (2, 0))]})
        chi = GaugeFunction(d=2, table=[(0.3, (2, 0)), (-0.2, (1, 1)), (0.15, (0, 3))])
        B0 = exterior_derivative(A)
        B1 = exterior_derivative(gauge_shift(A, chi, 0.7))
        pts = rng.uniform(-2, 2, (30, 2))
        assert np.abs(B1.component(0, 1, pts) - B0.component(0, 1, pts)).max() <= 1e-8


class TestFluxGradients:
    def test_zero_field(self):
        coeff = flux_gradient_coefficients(MagneticField.zero(2), np.zeros(2), np.ones(2), np.ones(2), 0.5)
        assert all(np.abs(v).max() == 0.0 for v in coeff.values())

    def test_constant_field_x_coefficients_vanish(self, rng):
        B = MagneticField.constant([[0.0, 0.7], [-0.7, 0.0]])
        x, y, z = rng.uniform(-2, 2, (3, 2))
        coeff = flux_gradient_coefficients(B, x, y, z, 0.6)
        assert np.abs(coeff["Dx"]).max() <= 1e-14
        assert np.abs(coeff["Ex"]).max() <= 1e-14

    @pytest.mark.parametrize("field", ["constant", "windowed"])
    def test_reconstruction(self, field, windowed_field, rng):
        B = MagneticField.constant([[0.0, 0.7], [-0.7, 0.0]]) if field == "constant" else windowed_field
        worst = 0.0
        for _ in range(5):
            x, y, z = rng.uniform(-1.5, 1.5, (3, 2))
            eps = float(rng.uniform(0.25, 1.0))
            worst = max(worst, flux_gradient_reconstruction_error(B, x, y, z, eps, nodes=24))
        assert worst <= 1e-6

    def test_unbounded_refused(self):
        poly = MagneticField(d=2, family="polynomial", tables={(0, 1): [(1.0, (1, 0))]})
        with pytest.raises(ValueError, match="bounded"):
            flux_gradient_coefficients(poly, np.zeros(2), np.ones(2), np.ones(2), 0.5)

    def test_growth_fit_reports_finite_constants(self, windowed_field, rng):
        fits = phase_factor_growth_fit(windowed_field, 0.5, 1.0, rng, samples=10)
        assert len(fits) == 9
        assert all(np.isfinite(v) for v in fits.values())
