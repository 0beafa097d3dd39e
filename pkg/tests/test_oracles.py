"""Brute-force referee checks: singular integral, Galerkin, stable sampler.

The oracles are validated against closed forms and against each other so
the solver tests can lean on them as independent ground truth.
"""

import numpy as np
import pytest
from scipy.special import gamma as gamma_fn

from fracsmc.basis import gjf_eval
from fracsmc.oracles import (
    QuadratureFailure,
    error_metrics,
    euler_stable_exit,
    frac_laplacian_direct,
    galerkin_solve,
    gjf_identity_rhs,
    normalization_constant,
    sample_symmetric_stable,
)
from fracsmc.specfun import DomainError
from fracsmc.walks import zeta_closed


def zero_extended_basis(n, alpha):
    return lambda y: gjf_eval(n, alpha, np.clip(y, -1, 1)) * (np.abs(y) < 1)


class TestNormalization:
    def test_alpha_one_value(self):
        # 1D, alpha=1: C = Gamma(1)/ (pi^(1/2) * Gamma(1/2)) * 2^0 * 1 = 1/pi
        assert normalization_constant(1.0) == pytest.approx(1 / np.pi, rel=1e-13)

    def test_vanishes_at_alpha_two(self):
        # C_{1,alpha} ~ alpha(2-alpha)/4 near the endpoints; the divergence
        # of the hypersingular integral compensates at alpha -> 2
        assert 0 < normalization_constant(1.999) < 0.01


class TestDirectOperator:
    @pytest.mark.parametrize(
        "n,alpha,x",
        [(0, 0.6, 0.3), (2, 1.2, -0.5), (4, 1.6, 0.1), (6, 0.4, 0.7)],
    )
    def test_derivative_identity(self, n, alpha, x):
        # frozen oracle targets: the singular integral must reproduce the
        # closed-form image of the singular basis functions
        got = frac_laplacian_direct(zero_extended_basis(n, alpha), x, alpha)
        want = float(gjf_identity_rhs(n, alpha, x)[0])
        assert got == pytest.approx(want, rel=1e-6)

    def test_rejects_boundary_point(self):
        with pytest.raises(DomainError):
            frac_laplacian_direct(zero_extended_basis(0, 0.8), 1.0, 0.8)

    def test_rejects_alpha_two(self):
        with pytest.raises(DomainError):
            frac_laplacian_direct(zero_extended_basis(0, 0.8), 0.0, 2.0)


class TestGalerkin:
    @pytest.mark.parametrize("alpha", [0.4, 1.2, 2.0])
    def test_reproduces_polynomial_solution(self, alpha):
        # source built from the diagonal identity for (1-x^2)^(a/2)(x^2+x+1)
        from fracsmc.presets import poly_preset

        pre = poly_preset(alpha)
        sol = galerkin_solve(pre.source, alpha, 10)
        xs = np.linspace(-0.95, 0.95, 41)
        assert error_metrics(sol, pre.solution, xs) < 1e-10

    def test_sin_source_solution_decays_spectrally(self):
        alpha = 1.2
        sol_small = galerkin_solve(np.sin, alpha, 20)
        sol_big = galerkin_solve(np.sin, alpha, 100)
        xs = np.linspace(-0.99, 0.99, 101)
        assert error_metrics(sol_small, sol_big, xs) < 1e-12
        assert abs(sol_big.coefficients[-1]) < 1e-20


class TestStableSampler:
    @pytest.mark.parametrize("alpha", [0.6, 1.0, 1.4, 2.0])
    def test_characteristic_function(self, alpha):
        rng = np.random.default_rng(31)
        xs = sample_symmetric_stable(alpha, rng, 400_000)
        for xi in (0.5, 1.0, 2.0):
            vals = np.cos(xi * xs)
            se = vals.std() / np.sqrt(len(vals))
            assert vals.mean() == pytest.approx(
                np.exp(-abs(xi) ** alpha), abs=4 * se
            )

    def test_alpha2_is_gaussian_variance_two(self):
        rng = np.random.default_rng(32)
        xs = sample_symmetric_stable(2.0, rng, 200_000)
        assert xs.var() == pytest.approx(2.0, rel=0.02)


class TestEulerExit:
    @pytest.mark.parametrize("alpha", [0.6, 1.4])
    def test_mean_exit_time_matches_zeta(self, alpha):
        rng = np.random.default_rng(33)
        dt = 2e-4 * zeta_closed(0, 1, alpha)
        loc, steps, capped = euler_stable_exit(0.0, 1.0, alpha, dt, rng, 15_000)
        assert not capped.any()
        mean_t = (steps * dt).mean()
        assert mean_t == pytest.approx(zeta_closed(0, 1, alpha), rel=0.05)

    def test_exit_locations_outside(self):
        rng = np.random.default_rng(34)
        loc, steps, capped = euler_stable_exit(0.2, 0.5, 1.0, 1e-4, rng, 2_000)
        assert np.all(np.abs(loc[~capped] - 0.0) >= 0.5)
