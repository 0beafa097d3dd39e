"""Interpolation machinery on (-1,1) and (0,T).

Spatial interpolation uses the singular basis (1-x^2)^(alpha/2) P_n at
Jacobi-Gauss points of index (alpha/2, alpha/2); temporal interpolation
uses shifted Legendre polynomials at Legendre-Gauss points.  Both carry
exact modal maps: the fractional Laplacian acts diagonally on the spatial
basis, the time derivative triangularly on the Legendre basis.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import special as sp

from .specfun import (
    DomainError,
    JacobiIndex,
    QuadratureRule,
    gamma_norm,
    jacobi_eval_all,
    jacobi_gauss,
    legendre_gauss_shifted,
    shifted_legendre_eval,
)


class ContractError(ValueError):
    """Caller violated an interface contract (shape/length mismatch)."""


def gjf_eval(n: int, alpha: float, x):
    """Singular basis function (1-x^2)^(alpha/2) P_n^(alpha/2,alpha/2)(x).

    Vanishes at x = +-1 by construction (the weight is defined as 0 there).
    """
    if not 0 < alpha <= 2:
        raise DomainError(f"alpha must be in (0, 2], got {alpha}")
    x = np.asarray(x, dtype=float)
    w = np.where(np.abs(x) < 1, np.abs(1 - x * x) ** (alpha / 2), 0.0)
    out = w * jacobi_eval_all(n, JacobiIndex(alpha / 2, alpha / 2), x)[n]
    return float(out) if out.ndim == 0 else out


def frac_diag_factor(n, alpha: float):
    """Eigenvalue Gamma(n+alpha+1)/n! of the fractional Laplacian on the basis."""
    n = np.asarray(n, dtype=float)
    out = np.exp(sp.gammaln(n + alpha + 1) - sp.gammaln(n + 1))
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class GjfGrid:
    """Spatial collocation grid and nodal-to-modal map for a given alpha."""

    alpha: float
    N_x: int
    rule: QuadratureRule = field(repr=False)
    c_matrix: np.ndarray = field(repr=False)  # (N_x+1, N_x+1), c[n, j]

    @property
    def nodes(self) -> np.ndarray:
        return self.rule.nodes

    @property
    def weights(self) -> np.ndarray:
        return self.rule.weights


@lru_cache(maxsize=64)
def make_grid(alpha: float, N_x: int) -> GjfGrid:
    """Build (and cache) the spatial grid for the given order and degree."""
    if not 0 < alpha <= 2:
        raise DomainError(f"alpha must be in (0, 2], got {alpha}")
    if N_x < 0:
        raise DomainError("N_x must be >= 0")
    idx = JacobiIndex(alpha / 2, alpha / 2)
    rule = jacobi_gauss(N_x, idx)
    x = rule.nodes
    P = jacobi_eval_all(N_x, idx, x)  # (n, j)
    gam = np.array([gamma_norm(n, idx) for n in range(N_x + 1)])
    c = (P * (1 - x * x) ** (-alpha / 2) * rule.weights) / gam[:, None]
    return GjfGrid(alpha=alpha, N_x=N_x, rule=rule, c_matrix=c)


def _barycentric_weights(nodes: np.ndarray) -> np.ndarray:
    w = np.ones_like(nodes)
    for j in range(len(nodes)):
        w[j] = 1.0 / np.prod(nodes[j] - np.delete(nodes, j))
    return w


def lagrange_cardinal(nodes: np.ndarray, x) -> np.ndarray:
    """Polynomial Lagrange cardinal functions h_j(x); shape (len(nodes),) + x.shape.

    Barycentric form; exact cardinality at the nodes.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    bw = _barycentric_weights(nodes)
    diff = x[None, :] - nodes[:, None]  # (j, x)
    out = np.empty_like(diff)
    hit = np.abs(diff) < 1e-300
    anyhit = hit.any(axis=0)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = bw[:, None] / diff
        denom = terms.sum(axis=0)
        out = terms / denom
    if anyhit.any():
        out[:, anyhit] = hit[:, anyhit].astype(float)
    return out


@dataclass(frozen=True)
class Interpolant1D:
    """Nodal values plus cached modal coefficients on a GjfGrid."""

    grid: GjfGrid
    values: np.ndarray
    modal: np.ndarray = field(repr=False)  # coefficients of the singular basis

    def __call__(self, x):
        return eval_interpolant(self, x)


def interpolate(grid: GjfGrid, samples) -> Interpolant1D:
    """Interpolant through the nodal samples, in the singular-basis span."""
    samples = np.asarray(samples, dtype=float)
    if samples.shape != (grid.N_x + 1,):
        raise ContractError(
            f"expected {grid.N_x + 1} samples, got shape {samples.shape}"
        )
    modal = grid.c_matrix @ samples
    return Interpolant1D(grid=grid, values=samples, modal=modal)


def eval_interpolant(f: Interpolant1D, x):
    """Evaluate at x in [-1, 1]; returns 0 at the endpoints."""
    grid = f.grid
    x = np.atleast_1d(np.asarray(x, dtype=float))
    h = lagrange_cardinal(grid.nodes, x)  # (j, x)
    one_m = 1.0 - x * x
    ratio = np.where(
        one_m[None, :] > 0,
        (np.abs(one_m)[None, :] / (1.0 - grid.nodes[:, None] ** 2)) ** (grid.alpha / 2),
        0.0,
    )
    out = np.einsum("j,jx->x", f.values, ratio * h)
    return float(out[0]) if out.size == 1 and np.ndim(x) else (
        float(out) if out.ndim == 0 else out
    )


def frac_laplacian_modal(f: Interpolant1D) -> np.ndarray:
    """Coefficients of the exact fractional Laplacian in the Jacobi basis.

    The result expands (-Lap)^(alpha/2) f as sum_n c_n P_n^(a/2,a/2)(x).
    """
    n = np.arange(f.grid.N_x + 1)
    return f.modal * frac_diag_factor(n, f.grid.alpha)


def eval_jacobi_series(coeffs: np.ndarray, alpha: float, x):
    """Evaluate sum_n coeffs[n] P_n^(alpha/2,alpha/2)(x), any input shape."""
    x = np.asarray(x, dtype=float)
    flat = np.atleast_1d(x).ravel()
    P = jacobi_eval_all(len(coeffs) - 1, JacobiIndex(alpha / 2, alpha / 2), flat)
    out = np.einsum("n,nx->x", coeffs, P)
    return float(out[0]) if x.ndim == 0 else out.reshape(x.shape)


@dataclass(frozen=True)
class TimeGrid:
    """Temporal collocation grid on (0, T) with its nodal-to-modal map."""

    T: float
    N_t: int
    rule: QuadratureRule = field(repr=False)
    b_matrix: np.ndarray = field(repr=False)  # (N_t+1, N_t+1), b[q, j]

    @property
    def nodes(self) -> np.ndarray:
        return self.rule.nodes

    @property
    def weights(self) -> np.ndarray:
        return self.rule.weights


@lru_cache(maxsize=64)
def make_time_grid(T: float, N_t: int) -> TimeGrid:
    """Build (and cache) the shifted Legendre-Gauss grid on (0, T)."""
    if T <= 0:
        raise DomainError("T must be positive")
    if N_t < 0:
        raise DomainError("N_t must be >= 0")
    rule = legendre_gauss_shifted(N_t, T)
    t = rule.nodes
    L = np.stack([shifted_legendre_eval(q, t, T) for q in range(N_t + 1)])
    q = np.arange(N_t + 1)[:, None]
    b = (2 * q + 1) / T * L * rule.weights  # == (2q+1)/2 * L_q(t_j) * std weights
    return TimeGrid(T=T, N_t=N_t, rule=rule, b_matrix=b)


@dataclass(frozen=True)
class SpaceTimeInterpolant:
    """Tensor interpolant: singular basis in space x shifted Legendre in time."""

    grid: GjfGrid
    tgrid: TimeGrid
    values: np.ndarray  # (N_x+1, N_t+1)
    modal: np.ndarray = field(repr=False)  # (N_x+1, N_t+1), u_hat[p, q]

    def __call__(self, x, t):
        return eval_st_interpolant(self, x, t)


def st_interpolate(grid: GjfGrid, tgrid: TimeGrid, samples) -> SpaceTimeInterpolant:
    """Space-time interpolant through samples[i, j] = u(x_i, t_j)."""
    samples = np.asarray(samples, dtype=float)
    if samples.shape != (grid.N_x + 1, tgrid.N_t + 1):
        raise ContractError(
            f"expected shape {(grid.N_x + 1, tgrid.N_t + 1)}, got {samples.shape}"
        )
    modal = grid.c_matrix @ samples @ tgrid.b_matrix.T
    return SpaceTimeInterpolant(grid=grid, tgrid=tgrid, values=samples, modal=modal)


def _legendre_matrix(tgrid: TimeGrid, t, n_max: int | None = None) -> np.ndarray:
    t = np.atleast_1d(np.asarray(t, dtype=float))
    n = tgrid.N_t if n_max is None else n_max
    return np.stack([shifted_legendre_eval(q, t, tgrid.T) for q in range(n + 1)])


def eval_st_interpolant(f: SpaceTimeInterpolant, x, t):
    """Evaluate at points (x, t); x and t broadcast elementwise."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    t = np.atleast_1d(np.asarray(t, dtype=float))
    x, t = np.broadcast_arrays(x, t)
    shape = x.shape
    xf, tf = x.ravel(), t.ravel()
    alpha = f.grid.alpha
    one_m = 1.0 - xf * xf
    w = np.where(one_m > 0, np.abs(one_m) ** (alpha / 2), 0.0)
    P = jacobi_eval_all(f.grid.N_x, JacobiIndex(alpha / 2, alpha / 2), xf)
    L = _legendre_matrix(f.tgrid, tf)
    out = np.einsum("pq,pk,qk->k", f.modal, w * P, L)
    out = out.reshape(shape)
    return float(out.item()) if out.ndim == 0 else out


def st_frac_laplacian(f: SpaceTimeInterpolant) -> np.ndarray:
    """Modal matrix of the spatial fractional Laplacian (Jacobi x Legendre)."""
    p = np.arange(f.grid.N_x + 1)
    return f.modal * frac_diag_factor(p, f.grid.alpha)[:, None]


def st_time_derivative(f: SpaceTimeInterpolant) -> np.ndarray:
    """Modal matrix of the time derivative (singular basis x Legendre, degree N_t-1)."""
    N_t, T = f.tgrid.N_t, f.tgrid.T
    if N_t < 1:
        raise ContractError("time derivative requires N_t >= 1")
    out = np.zeros((f.grid.N_x + 1, N_t))
    for q in range(N_t):
        ns = np.arange(q + 1, N_t + 1, 2)
        out[:, q] = f.modal[:, ns].sum(axis=1) * (2 * (2 * q + 1) / T)
    return out


def eval_st_modal(
    coeffs: np.ndarray,
    grid: GjfGrid,
    tgrid: TimeGrid,
    x,
    t,
    spatial_basis: str,
):
    """Evaluate a modal matrix against Jacobi ('jacobi') or singular ('gjf') basis."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    t = np.atleast_1d(np.asarray(t, dtype=float))
    x, t = np.broadcast_arrays(x, t)
    shape = x.shape
    xf, tf = x.ravel(), t.ravel()
    alpha = grid.alpha
    P = jacobi_eval_all(coeffs.shape[0] - 1, JacobiIndex(alpha / 2, alpha / 2), xf)
    if spatial_basis == "gjf":
        one_m = 1.0 - xf * xf
        P = P * np.where(one_m > 0, np.abs(one_m) ** (alpha / 2), 0.0)
    elif spatial_basis != "jacobi":
        raise ValueError(f"unknown spatial basis {spatial_basis!r}")
    L = _legendre_matrix(tgrid, tf, n_max=coeffs.shape[1] - 1)
    out = np.einsum("pq,pk,qk->k", coeffs, P, L).reshape(shape)
    return float(out) if out.size == 1 else out
