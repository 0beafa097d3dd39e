"""Benchmark problems with known solutions.

Each preset bundles an exact solution with a source term that is
consistent with it through the diagonal modal map, so solver tests can
measure true errors.  The polynomial case is exact at low degree; the
sine case is represented by a high-degree modal expansion whose
truncation error sits far below every test tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .basis import eval_jacobi_series, frac_diag_factor
from .specfun import JacobiIndex, gamma_norm, jacobi_eval_all, jacobi_gauss


@dataclass(frozen=True)
class SteadyPreset:
    """Exact solution / source pair for the steady problem."""

    name: str
    alpha: float
    solution: Callable = field(repr=False)
    source: Callable = field(repr=False)


@dataclass(frozen=True)
class ParabolicPreset:
    """Exact solution, source, and initial data for the evolution problem."""

    name: str
    alpha: float
    final_time: float
    solution: Callable = field(repr=False)  # u(x, t)
    source: Callable = field(repr=False)  # f(x, t)
    initial: Callable = field(repr=False)  # u(x, 0)


def _modal_coefficients(alpha: float, smooth, degree: int) -> np.ndarray:
    """Jacobi coefficients of a smooth factor by Gauss quadrature."""
    idx = JacobiIndex(alpha / 2, alpha / 2)
    rule = jacobi_gauss(degree + 40, idx)
    P = jacobi_eval_all(degree, idx, rule.nodes)
    g = np.array([gamma_norm(n, idx) for n in range(degree + 1)])
    return (P @ (smooth(rule.nodes) * rule.weights)) / g


def _series_pair(alpha: float, smooth, degree: int):
    """Solution (1-x^2)^(a/2) * smooth and its matched source."""
    modal = _modal_coefficients(alpha, smooth, degree)
    lam = frac_diag_factor(np.arange(degree + 1), alpha)

    def u(x):
        x = np.asarray(x, dtype=float)
        body = np.clip(1.0 - x * x, 0.0, None) ** (alpha / 2)
        return body * eval_jacobi_series(modal, alpha, x)

    def f(x):
        return eval_jacobi_series(modal * lam, alpha, x)

    return u, f


def poly_preset(alpha: float) -> SteadyPreset:
    """(1 - x^2)^(alpha/2) (x^2 + x + 1) and its exact polynomial source."""
    u, f = _series_pair(alpha, lambda x: x * x + x + 1.0, 2)
    return SteadyPreset(name="poly", alpha=alpha, solution=u, source=f)


def sine_preset(alpha: float, degree: int = 50) -> SteadyPreset:
    """(1 - x^2)^(alpha/2) sin(x) via a high-degree modal expansion."""
    u, f = _series_pair(alpha, np.sin, degree)
    return SteadyPreset(name="sine", alpha=alpha, solution=u, source=f)


def sin_source_preset(alpha: float, reference_degree: int = 100) -> SteadyPreset:
    """Pure source f(x) = sin(x); the solution is the diagonal projection.

    Here the source is prescribed and the reference solution comes from
    dividing its modal coefficients by the eigenvalue factors.
    """
    modal_f = _modal_coefficients(alpha, np.sin, reference_degree)
    lam = frac_diag_factor(np.arange(reference_degree + 1), alpha)
    modal_u = modal_f / lam

    def u(x):
        x = np.asarray(x, dtype=float)
        body = np.clip(1.0 - x * x, 0.0, None) ** (alpha / 2)
        return body * eval_jacobi_series(modal_u, alpha, x)

    return SteadyPreset(
        name="sin-source", alpha=alpha, solution=u, source=lambda x: np.sin(x)
    )


def _parabolic_from_series(name, alpha, T, smooth, degree):
    """Separable solution u(x,t) = X(x) cos(t) with its matched source."""
    modal = _modal_coefficients(alpha, smooth, degree)
    lam = frac_diag_factor(np.arange(degree + 1), alpha)

    def space(x):
        x = np.asarray(x, dtype=float)
        body = np.clip(1.0 - x * x, 0.0, None) ** (alpha / 2)
        return body * eval_jacobi_series(modal, alpha, x)

    def flap(x):
        return eval_jacobi_series(modal * lam, alpha, x)

    def u(x, t):
        return space(x) * np.cos(t)

    def f(x, t):
        # time derivative -X sin(t) plus the fractional Laplacian term
        return -space(x) * np.sin(t) + flap(x) * np.cos(t)

    return ParabolicPreset(
        name=name,
        alpha=alpha,
        final_time=T,
        solution=u,
        source=f,
        initial=space,
    )


def parabolic_poly_preset(alpha: float, T: float = 0.5) -> ParabolicPreset:
    """(1-x^2)^(a/2) (x^2 + x + 1) cos(t)."""
    return _parabolic_from_series("poly-cos", alpha, T, lambda x: x * x + x + 1.0, 2)


def parabolic_sine_preset(
    alpha: float, T: float = 0.5, degree: int = 50
) -> ParabolicPreset:
    """(1-x^2)^(a/2) sin(x) cos(t)."""
    return _parabolic_from_series("sine-cos", alpha, T, np.sin, degree)
