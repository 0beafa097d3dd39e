"""Space-time iterated solver checks for the parabolic problem."""

import numpy as np
import pytest

from fracsmc.parabolic import ParabolicConfig, st_residual_source, stsmc_solve
from fracsmc.presets import parabolic_poly_preset, parabolic_sine_preset


class TestStsmcSolve:
    def test_converges_to_manufactured_polynomial(self):
        pre = parabolic_poly_preset(0.4)
        cfg = ParabolicConfig(
            alpha=0.4, n_x=2, n_t=4, final_time=1.0,
            n_walks=50, n_sub=64, seed=5, k_max=30,
        )
        sol = stsmc_solve(cfg, pre.source, pre.initial, reference=pre.solution)
        # the iteration floor is the subdivision bias of the trapezoid
        # path functional, O((t/n_sub)^2) ~ 3e-5 at these settings
        assert sol.history[-1].e_inf < 1e-4

    def test_error_decays_early(self):
        pre = parabolic_poly_preset(1.2)
        cfg = ParabolicConfig(
            alpha=1.2, n_x=2, n_t=4, final_time=1.0,
            n_walks=50, n_sub=64, seed=3, k_max=8,
        )
        sol = stsmc_solve(cfg, pre.source, pre.initial, reference=pre.solution)
        errs = [h.e_inf for h in sol.history[:4]]
        assert errs[-1] < errs[0]

    def test_deterministic_given_seed(self):
        pre = parabolic_poly_preset(0.8)
        cfg = ParabolicConfig(
            alpha=0.8, n_x=2, n_t=3, final_time=0.5,
            n_walks=20, n_sub=16, seed=11, k_max=3,
        )
        a = stsmc_solve(cfg, pre.source, pre.initial)
        b = stsmc_solve(cfg, pre.source, pre.initial)
        np.testing.assert_array_equal(a.node_values, b.node_values)

    def test_thread_count_does_not_change_result(self):
        pre = parabolic_poly_preset(0.8)
        base = dict(
            alpha=0.8, n_x=2, n_t=3, final_time=0.5,
            n_walks=20, n_sub=16, seed=11, k_max=3,
        )
        a = stsmc_solve(
            ParabolicConfig(**base, n_threads=1), pre.source, pre.initial
        )
        b = stsmc_solve(
            ParabolicConfig(**base, n_threads=4), pre.source, pre.initial
        )
        np.testing.assert_array_equal(a.node_values, b.node_values)

    def test_callable_evaluation(self):
        pre = parabolic_poly_preset(0.6)
        cfg = ParabolicConfig(
            alpha=0.6, n_x=2, n_t=4, final_time=1.0,
            n_walks=50, n_sub=64, seed=2, k_max=20,
        )
        sol = stsmc_solve(cfg, pre.source, pre.initial)
        xs = np.linspace(-0.9, 0.9, 5)
        ts = np.full_like(xs, 0.37)
        np.testing.assert_allclose(
            sol(xs, ts), pre.solution(xs, ts), atol=1e-4
        )

    def test_initial_condition_recovered(self):
        pre = parabolic_poly_preset(1.0)
        cfg = ParabolicConfig(
            alpha=1.0, n_x=2, n_t=4, final_time=1.0,
            n_walks=50, n_sub=64, seed=8, k_max=20,
        )
        sol = stsmc_solve(cfg, pre.source, pre.initial)
        xs = np.linspace(-0.9, 0.9, 5)
        np.testing.assert_allclose(
            sol(xs, np.zeros_like(xs)), pre.initial(xs), atol=1e-4
        )


class TestStResidual:
    def test_vanishes_for_exact_tensor_values(self):
        from fracsmc.basis import make_grid, make_time_grid, st_interpolate

        pre = parabolic_sine_preset(0.9)
        grid = make_grid(0.9, 10)
        tgrid = make_time_grid(1.0, 6)
        X, T = np.meshgrid(grid.nodes, tgrid.nodes, indexing="ij")
        interp = st_interpolate(grid, tgrid, pre.solution(X, T))
        resid = st_residual_source(interp, pre.source)
        xs = np.linspace(-0.9, 0.9, 9)
        ts = np.linspace(0.05, 0.95, 9)
        XX, TT = np.meshgrid(xs, ts, indexing="ij")
        assert np.max(np.abs(resid(XX.ravel(), TT.ravel()))) < 1e-6


class TestConfigValidation:
    def test_rejects_bad_alpha(self):
        with pytest.raises(ValueError):
            ParabolicConfig(
                alpha=2.5, n_x=2, n_t=2, final_time=1.0,
                n_walks=10, seed=0,
            ).validate()

    def test_rejects_nonpositive_horizon(self):
        with pytest.raises(ValueError):
            ParabolicConfig(
                alpha=1.0, n_x=2, n_t=2, final_time=0.0,
                n_walks=10, seed=0,
            ).validate()
