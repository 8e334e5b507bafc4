import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from superweyl.grid import (
    DoubledPoint,
    DoubledSymbol,
    PhasePoint,
    PhaseSymbol,
    doubled_symplectic_form,
    japanese_bracket,
    make_grid,
    peetre_bound,
    reflect_right,
    sfourier,
    sfourier_doubled,
    symplectic_form,
    transpose_doubled,
)


@pytest.fixture
def rng():
    return np.random.default_rng(101)


def random_symbol(grid, rng):
    shape = grid.symbol_shape()
    return PhaseSymbol(grid, rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


class TestGridSpec:
    def test_spacings(self):
        g = make_grid(1, 15, 10.0)
        assert g.dx == pytest.approx(2.0 / 3.0)
        assert g.dxi == pytest.approx(2 * np.pi / 10.0)
        assert g.dx * g.dxi * g.n == pytest.approx(2 * np.pi, abs=1e-14)

    def test_even_n_rejected(self):
        with pytest.raises(ValueError, match="odd"):
            make_grid(1, 14, 10.0)

    def test_unsupported_dimension(self):
        with pytest.raises(ValueError, match="dimension"):
            make_grid(3, 5, 10.0)

    def test_counting_d2(self):
        g = make_grid(2, 9, 8.0)
        assert g.n_state == 81
        assert g.n_phase == 6561

    def test_sites_symmetric(self):
        g = make_grid(1, 15, 12.0)
        assert np.allclose(g.x_sites, -g.x_sites[::-1])
        assert np.allclose(g.xi_sites, -g.xi_sites[::-1])

    def test_off_grid_rejected(self):
        g = make_grid(1, 15, 12.0)
        with pytest.raises(ValueError, match="lattice"):
            g.x_site_of([0.3 * g.dx])


class TestSymplecticTransform:
    @pytest.mark.parametrize("d,n", [(1, 5), (1, 15), (2, 5)])
    def test_involution(self, d, n, rng):
        g = make_grid(d, n, 11.0)
        f = random_symbol(g, rng)
        assert np.abs(sfourier(sfourier(f)).values - f.values).max() <= 1e-12

    def test_zero_maps_to_zero(self):
        g = make_grid(1, 7, 12.0)
        f = PhaseSymbol(g, np.zeros(g.symbol_shape()))
        assert np.abs(sfourier(f).values).max() == 0.0

    def test_plancherel(self, rng):
        g = make_grid(1, 15, 12.0)
        f = random_symbol(g, rng)
        a = np.sum(np.abs(sfourier(f).values) ** 2)
        b = np.sum(np.abs(f.values) ** 2)
        assert abs(a - b) / b <= 1e-10

    def test_doubled_tensor_factorization(self, rng):
        g = make_grid(1, 7, 12.0)
        fL, fR = random_symbol(g, rng), random_symbol(g, rng)
        F = DoubledSymbol(g, np.multiply.outer(fL.values, fR.values))
        want = np.multiply.outer(sfourier(fL).values, sfourier(fR).values)
        assert np.abs(sfourier_doubled(F).values - want).max() <= 1e-12

    def test_doubled_involution(self, rng):
        g = make_grid(1, 9, 12.0)
        F = DoubledSymbol(g, rng.standard_normal(g.doubled_shape()) + 1j * rng.standard_normal(g.doubled_shape()))
        assert np.abs(sfourier_doubled(sfourier_doubled(F)).values - F.values).max() <= 1e-12


class TestForms:
    def test_arithmetic_example(self):
        assert symplectic_form(PhasePoint([1.0], [2.0]), PhasePoint([3.0], [4.0])) == pytest.approx(2.0)

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=25, deadline=None)
    def test_antisymmetry(self, seed):
        r = np.random.default_rng(seed)
        X = PhasePoint(r.standard_normal(2), r.standard_normal(2))
        Y = PhasePoint(r.standard_normal(2), r.standard_normal(2))
        assert symplectic_form(X, Y) == pytest.approx(-symplectic_form(Y, X), abs=1e-12)
        assert symplectic_form(X, X) == pytest.approx(0.0, abs=1e-12)

    def test_doubled_split(self, rng):
        for _ in range(10):
            pts = [PhasePoint(rng.standard_normal(1), rng.standard_normal(1)) for _ in range(4)]
            Xb, Yb = DoubledPoint(pts[0], pts[1]), DoubledPoint(pts[2], pts[3])
            want = symplectic_form(pts[0], pts[2]) + symplectic_form(pts[1], pts[3])
            assert doubled_symplectic_form(Xb, Yb) == pytest.approx(want, abs=1e-12)
            refl = symplectic_form(pts[0], pts[2]) - symplectic_form(pts[1], pts[3])
            assert doubled_symplectic_form(reflect_right(Xb), Yb) == pytest.approx(refl, abs=1e-12)

    def test_right_zero_reduces(self, rng):
        X = PhasePoint(rng.standard_normal(1), rng.standard_normal(1))
        Y = PhasePoint(rng.standard_normal(1), rng.standard_normal(1))
        zero = PhasePoint([0.0], [0.0])
        got = doubled_symplectic_form(DoubledPoint(X, zero), DoubledPoint(Y, zero))
        assert got == pytest.approx(symplectic_form(X, Y), abs=1e-14)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            symplectic_form(PhasePoint([1.0], [0.0]), PhasePoint([1.0, 2.0], [0.0, 0.0]))


class TestScalarUtilities:
    def test_bracket_values(self):
        assert japanese_bracket([0.0]) == pytest.approx(1.0)
        assert japanese_bracket([3.0, 4.0]) == pytest.approx(np.sqrt(26.0))

    @given(st.floats(-50, 50), st.floats(-50, 50))
    @settings(max_examples=50, deadline=None)
    def test_bracket_monotone(self, a, b):
        lo, hi = sorted([abs(a), abs(b)])
        assert japanese_bracket([lo]) <= japanese_bracket([hi]) + 1e-12

    @given(st.floats(-20, 20), st.floats(-20, 20), st.floats(-5, 5))
    @settings(max_examples=200, deadline=None)
    def test_peetre(self, xi, eta, m):
        lhs, rhs = peetre_bound([xi], [eta], m)
        assert lhs <= rhs * (1 + 1e-12)

    def test_transpose(self, rng):
        g = make_grid(1, 5, 12.0)
        F = DoubledSymbol(g, rng.standard_normal(g.doubled_shape()) + 0j)
        assert np.array_equal(transpose_doubled(transpose_doubled(F)).values, F.values)
        sym = DoubledSymbol(g, F.values + transpose_doubled(F).values)
        assert np.abs(transpose_doubled(sym).values - sym.values).max() == 0.0

    def test_params_validated(self):
        g = make_grid(1, 5, 12.0)
        with pytest.raises(ValueError, match="eps"):
            PhaseSymbol(g, np.ones(g.symbol_shape()), eps=0.0)
        with pytest.raises(ValueError, match="finite"):
            vals = np.ones(g.symbol_shape(), dtype=complex)
            vals[0, 0] = np.nan
            PhaseSymbol(g, vals)
