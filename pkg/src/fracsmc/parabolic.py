"""Space-time iterated solver for the fractional evolution problem.

Same contraction principle as the steady solver: walk estimates at the
tensor collocation nodes seed a space-time interpolant, and later sweeps
walk against the residual f - u_t - (-Delta)^(alpha/2) u_k with
homogeneous exterior and initial data.  Each node (x_i, t_j) gets its own
fixed-radius walk over [0, t_j] so the subdivision count, not the node,
fixes the time step.
"""

from __future__ import annotations

import time
import warnings
from dataclasses import dataclass, field

import numpy as np

from .basis import (
    GjfGrid,
    SpaceTimeInterpolant,
    TimeGrid,
    eval_st_interpolant,
    eval_st_modal,
    make_grid,
    make_time_grid,
    st_frac_laplacian,
    st_interpolate,
    st_time_derivative,
)
from .poisson import IterationReport
from .rng import RngStream
from .walks import DEFAULT_JUMP_LAW, PathFunctionalSpec, parabolic_walks


@dataclass(frozen=True)
class ParabolicConfig:
    """Parameters of one space-time solve."""

    alpha: float
    n_x: int
    n_t: int
    final_time: float
    n_walks: int
    n_sub: int = 64
    seed: int = 0
    k_max: int = 60
    tol: float = 1e-12
    jump_law: str = DEFAULT_JUMP_LAW
    n_threads: int = 1

    def validate(self) -> None:
        if not 0 < self.alpha <= 2:
            raise ValueError("alpha must lie in (0, 2]")
        if self.final_time <= 0:
            raise ValueError("final_time must be positive")
        if min(self.n_x, self.n_t, self.n_walks, self.n_sub, self.k_max) < 1:
            raise ValueError(
                "n_x, n_t, n_walks, n_sub and k_max must be positive"
            )
        if self.n_threads < 1:
            raise ValueError("n_threads must be positive")


@dataclass(frozen=True)
class ParabolicSolution:
    """Converged space-time iterate with its sweep history."""

    config: ParabolicConfig
    grid: GjfGrid = field(repr=False)
    tgrid: TimeGrid = field(repr=False)
    node_values: np.ndarray = field(repr=False)
    interpolant: SpaceTimeInterpolant = field(repr=False)
    history: tuple[IterationReport, ...]
    converged: bool

    def __call__(self, x, t):
        return eval_st_interpolant(self.interpolant, x, t)


def st_residual_source(interp: SpaceTimeInterpolant, source):
    """Residual f - u_t - (-Delta)^(alpha/2) u as a callable of (x, t)."""
    flap = st_frac_laplacian(interp)
    dudt = st_time_derivative(interp)
    grid, tgrid = interp.grid, interp.tgrid

    def resid(x, t):
        return (
            source(x, t)
            - eval_st_modal(dudt, grid, tgrid, x, t, spatial_basis="gjf")
            - eval_st_modal(flap, grid, tgrid, x, t, spatial_basis="jacobi")
        )

    return resid


def _st_node_estimates(grid, tgrid, spec, cfg, stream):
    """Walk means at every tensor node (x_i, t_j); deterministic per node."""
    nodes_x = grid.nodes
    nodes_t = tgrid.nodes
    pairs = [(i, j) for i in range(len(nodes_x)) for j in range(len(nodes_t))]

    def one(pair):
        i, j = pair
        return parabolic_walks(
            float(nodes_x[i]),
            float(nodes_t[j]),
            cfg.n_sub,
            spec,
            cfg.alpha,
            stream.child(i, j),
            cfg.n_walks,
            jump_law=cfg.jump_law,
        )

    if cfg.n_threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=cfg.n_threads) as pool:
            batches = list(pool.map(one, pairs))
    else:
        batches = [one(p) for p in pairs]
    vals = np.array([b.mean_score() for b in batches]).reshape(
        len(nodes_x), len(nodes_t)
    )
    return vals


_PROBE_X = np.linspace(-0.95, 0.95, 20)


def stsmc_solve(
    cfg: ParabolicConfig,
    source,
    initial,
    exterior=None,
    reference=None,
) -> ParabolicSolution:
    """Iterate walk sweeps over the space-time collocation tensor."""
    cfg.validate()
    if exterior is None:
        exterior = lambda x, t: np.zeros_like(np.asarray(x, dtype=float))
    grid = make_grid(cfg.alpha, cfg.n_x)
    tgrid = make_time_grid(cfg.final_time, cfg.n_t)
    root = RngStream(cfg.seed)

    zero_src = lambda x, t: np.zeros_like(np.asarray(x, dtype=float))
    probe_t = np.linspace(cfg.final_time / 40, cfg.final_time, 20)
    px, pt = np.meshgrid(_PROBE_X, probe_t, indexing="ij")

    u = np.zeros((cfg.n_x + 1, cfg.n_t + 1))
    interp = st_interpolate(grid, tgrid, u)
    history: list[IterationReport] = []
    converged = False
    for k in range(1, cfg.k_max + 1):
        t0 = time.perf_counter()
        if k == 1:
            spec = PathFunctionalSpec(
                source=source, exterior=exterior, initial=initial
            )
            new = _st_node_estimates(grid, tgrid, spec, cfg, root.child(k))
        else:
            # the iterate does not interpolate u0 (the time nodes are all
            # interior), so the residual problem keeps an initial-data term
            cur = interp
            spec = PathFunctionalSpec(
                source=st_residual_source(cur, source),
                exterior=None,
                initial=lambda x, cur=cur: initial(x)
                - eval_st_interpolant(cur, x, np.zeros_like(np.asarray(x))),
            )
            new = u + _st_node_estimates(grid, tgrid, spec, cfg, root.child(k))
        max_update = float(np.max(np.abs(new - u)))
        u = new
        interp = st_interpolate(grid, tgrid, u)
        if reference is not None:
            nx, nt = np.meshgrid(grid.nodes, tgrid.nodes, indexing="ij")
            xs = np.concatenate([nx.ravel(), px.ravel()])
            ts = np.concatenate([nt.ravel(), pt.ravel()])
            e_inf = float(
                np.max(
                    np.abs(eval_st_interpolant(interp, xs, ts) - reference(xs, ts))
                )
            )
        else:
            e_inf = float("nan")
        history.append(
            IterationReport(
                k=k,
                max_update=max_update,
                e_inf=e_inf,
                capped_rate=0.0,
                elapsed_ms=(time.perf_counter() - t0) * 1e3,
            )
        )
        if max_update < cfg.tol:
            converged = True
            break
    return ParabolicSolution(
        config=cfg,
        grid=grid,
        tgrid=tgrid,
        node_values=u,
        interpolant=interp,
        history=tuple(history),
        converged=converged,
    )
