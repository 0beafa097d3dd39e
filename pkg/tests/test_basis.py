"""Spectral basis checks: interpolation, modal maps, space-time tensors."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracsmc.basis import (
    ContractError,
    eval_interpolant,
    eval_jacobi_series,
    eval_st_interpolant,
    eval_st_modal,
    frac_diag_factor,
    frac_laplacian_modal,
    gjf_eval,
    interpolate,
    make_grid,
    make_time_grid,
    st_frac_laplacian,
    st_interpolate,
    st_time_derivative,
)

ALPHAS = [0.4, 1.0, 1.6, 2.0]


def u_poly(alpha):
    """(1-x^2)^(a/2) (x^2+x+1) and its smooth factor."""

    def u(x):
        x = np.asarray(x, dtype=float)
        return np.clip(1 - x * x, 0, None) ** (alpha / 2) * (x * x + x + 1)

    return u


class TestInterpolation:
    @pytest.mark.parametrize("alpha", ALPHAS)
    def test_reproduces_polynomial_solution(self, alpha):
        grid = make_grid(alpha, 2)
        u = u_poly(alpha)
        interp = interpolate(grid, u(grid.nodes))
        xs = np.linspace(-1, 1, 201)
        np.testing.assert_allclose(
            eval_interpolant(interp, xs), u(xs), rtol=0, atol=1e-12
        )

    def test_vanishes_at_endpoints(self):
        grid = make_grid(0.7, 3)
        interp = interpolate(grid, np.ones(4))
        assert eval_interpolant(interp, 1.0) == 0.0
        assert eval_interpolant(interp, -1.0) == 0.0

    def test_exact_at_nodes(self):
        grid = make_grid(1.3, 5)
        vals = np.sin(np.arange(6, dtype=float))
        interp = interpolate(grid, vals)
        np.testing.assert_allclose(
            eval_interpolant(interp, grid.nodes), vals, rtol=1e-12
        )

    def test_shape_mismatch_raises(self):
        grid = make_grid(0.5, 3)
        with pytest.raises(ContractError):
            interpolate(grid, np.zeros(5))

    @given(st.integers(0, 6))
    @settings(max_examples=10, deadline=None)
    def test_basis_function_interpolates_itself(self, n):
        alpha = 0.8
        grid = make_grid(alpha, 6)
        vals = gjf_eval(n, alpha, grid.nodes)
        interp = interpolate(grid, vals)
        xs = np.linspace(-0.97, 0.97, 33)
        np.testing.assert_allclose(
            eval_interpolant(interp, xs), gjf_eval(n, alpha, xs), atol=1e-11
        )


class TestModalMap:
    @pytest.mark.parametrize("alpha", [0.4, 1.2, 2.0])
    def test_diagonal_identity_on_basis(self, alpha):
        # the operator maps the n-th singular basis function to
        # Gamma(n+alpha+1)/n! times the plain Jacobi polynomial
        grid = make_grid(alpha, 5)
        for n in range(6):
            interp = interpolate(grid, gjf_eval(n, alpha, grid.nodes))
            coeffs = frac_laplacian_modal(interp)
            expected = np.zeros(6)
            expected[n] = frac_diag_factor(n, alpha)
            np.testing.assert_allclose(coeffs, expected, atol=1e-9 * expected[n])

    def test_alpha2_is_negative_second_derivative(self):
        alpha = 2.0
        grid = make_grid(alpha, 4)
        u = u_poly(alpha)
        interp = interpolate(grid, u(grid.nodes))
        coeffs = frac_laplacian_modal(interp)
        h = 1e-5
        for x in (-0.6, 0.1, 0.8):
            num = -(u(x + h) - 2 * u(x) + u(x - h)) / h**2
            assert eval_jacobi_series(coeffs, alpha, x) == pytest.approx(
                num, abs=1e-5
            )

    def test_series_eval_preserves_shape(self):
        coeffs = np.array([1.0, -0.5, 0.25])
        out = eval_jacobi_series(coeffs, 0.9, np.zeros((4, 7)))
        assert out.shape == (4, 7)


class TestSpaceTime:
    def test_tensor_reproduction(self):
        # cos is entire, so moderate Legendre degree is far below 1e-10
        alpha, T = 0.6, 0.5
        grid = make_grid(alpha, 2)
        tgrid = make_time_grid(T, 10)
        u = lambda x, t: u_poly(alpha)(x) * np.cos(t)
        X, TT = np.meshgrid(grid.nodes, tgrid.nodes, indexing="ij")
        interp = st_interpolate(grid, tgrid, u(X, TT))
        xs = np.linspace(-0.9, 0.9, 11)
        ts = np.linspace(0.01, T, 7)
        xx, tt = np.meshgrid(xs, ts, indexing="ij")
        np.testing.assert_allclose(
            eval_st_interpolant(interp, xx, tt), u(xx, tt), atol=1e-10
        )

    def test_time_derivative_of_cos(self):
        alpha, T = 0.6, 0.5
        grid = make_grid(alpha, 2)
        tgrid = make_time_grid(T, 10)
        u = lambda x, t: u_poly(alpha)(x) * np.cos(t)
        X, TT = np.meshgrid(grid.nodes, tgrid.nodes, indexing="ij")
        interp = st_interpolate(grid, tgrid, u(X, TT))
        dudt = st_time_derivative(interp)
        xs = np.array([-0.5, 0.2, 0.7])
        for t in (0.1, 0.3, 0.45):
            got = eval_st_modal(dudt, grid, tgrid, xs, t, spatial_basis="gjf")
            want = -u_poly(alpha)(xs) * np.sin(t)
            np.testing.assert_allclose(got, want, atol=1e-9)

    def test_st_frac_laplacian_diagonal(self):
        alpha, T = 1.2, 0.5
        grid = make_grid(alpha, 3)
        tgrid = make_time_grid(T, 4)
        X, TT = np.meshgrid(grid.nodes, tgrid.nodes, indexing="ij")
        u = lambda x, t: gjf_eval(2, alpha, x) * (1 + t)
        interp = st_interpolate(grid, tgrid, u(X, TT))
        flap = st_frac_laplacian(interp)
        xs = np.array([0.15, -0.4])
        from fracsmc.specfun import JacobiIndex, jacobi_eval

        for t in (0.1, 0.4):
            want = frac_diag_factor(2, alpha) * jacobi_eval(
                2, JacobiIndex(alpha / 2, alpha / 2), xs
            ) * (1 + t)
            got = eval_st_modal(flap, grid, tgrid, xs, t, spatial_basis="jacobi")
            np.testing.assert_allclose(got, want, rtol=1e-10)

    def test_time_derivative_requires_positive_degree(self):
        grid = make_grid(0.5, 1)
        tgrid = make_time_grid(1.0, 0)
        interp = st_interpolate(grid, tgrid, np.zeros((2, 1)))
        with pytest.raises(ContractError):
            st_time_derivative(interp)
