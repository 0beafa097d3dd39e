"""Stochastic kernels on the interval (-1, 1).

Walk-on-spheres for the fractional Poisson problem (inscribed balls, exact
ball-exit jump law, occupation-weighted source sampling) and the
fixed-radius walk for the parabolic problem with a trapezoid source
functional along the path.

Jump law: the ball-exit distance of the symmetric stable process started
at the ball center has CDF 1 - (sin(pi a/2)/pi) B(r^2/J^2; a/2, 1-a/2),
which inverts to J = r / sqrt(1 - Binv(pi w / sin(pi a/2); 1-a/2, a/2)).
A "verbatim" variant replacing the 1 by the complete Beta ships alongside
it behind a validation gate (see oracles.jump_law_ks); it produces J < r
and fails the gate, so the exit law is the default.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy import integrate
from scipy import special as sp
from scipy.interpolate import PchipInterpolator

from .rng import RngStream
from .specfun import DomainError

JUMP_LAW_EXIT = "exit_law"
JUMP_LAW_VERBATIM = "verbatim"
DEFAULT_JUMP_LAW = JUMP_LAW_EXIT

POISSON_STEP_CAP = 100_000


class CappedWalkError(RuntimeError):
    """A walk exceeded the step cap; carries the partial score."""

    def __init__(self, partial_score: float, steps: int):
        super().__init__(f"walk hit the {steps}-step cap")
        self.partial_score = partial_score
        self.steps = steps


@dataclass(frozen=True)
class BallGeometry:
    """Ball inside (-1, 1): center plus radius."""

    center: float
    radius: float

    def __post_init__(self):
        if self.radius <= 0:
            raise DomainError("ball radius must be positive")


@dataclass
class WalkOutcome:
    """One simulated path: score plus diagnostics."""

    score: float
    steps: int
    exit_point: float
    exited: bool = True
    capped: bool = False


@dataclass
class WalkBatch:
    """Vectorized outcomes for a block of paths sharing one start point."""

    scores: np.ndarray
    steps: np.ndarray
    exit_points: np.ndarray
    exited: np.ndarray
    capped: np.ndarray

    @property
    def n_capped(self) -> int:
        return int(self.capped.sum())

    def mean_score(self) -> float:
        """Mean over non-capped paths."""
        ok = ~self.capped
        if not ok.any():
            raise CappedWalkError(float("nan"), POISSON_STEP_CAP)
        return float(self.scores[ok].mean())


@dataclass(frozen=True)
class PathFunctionalSpec:
    """Callbacks scored along a walk; all must be numpy-vectorized."""

    source: Callable = None
    exterior: Callable = None
    initial: Callable = None
    inner_samples: int = 32


def expected_exit_coeff(alpha: float, d: int = 1) -> float:
    """Constant relating ball radius to expected exit time: E[tau] = C r^alpha."""
    return float(
        sp.gamma(d / 2)
        / (2**alpha * sp.gamma(1 + alpha / 2) * sp.gamma((d + alpha) / 2))
    )


def fixed_radius(dt: float, alpha: float, d: int = 1) -> float:
    """Ball radius whose expected stable exit time equals dt."""
    if dt <= 0:
        raise DomainError("dt must be positive")
    return float((dt / expected_exit_coeff(alpha, d)) ** (1.0 / alpha))


def zeta_closed(offset, radius, alpha: float):
    """Expected exit time from a ball, started at |offset| from the center.

    Closed form (r^2 - offset^2)^(alpha/2) / Gamma(1+alpha); valid for the
    whole range alpha in (0, 2].
    """
    offset = np.asarray(offset, dtype=float)
    out = np.abs(radius**2 - offset**2) ** (alpha / 2) / sp.gamma(1 + alpha)
    return float(out) if out.ndim == 0 else out


def greens_q(x, y, r: float, alpha: float):
    """Occupation density Q(x, y) of the stable process in the ball |.| < r.

    Ball centered at the origin; vectorized in x, y.  For alpha = 2 this is
    the classical interval Green's function.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any(np.abs(x) >= r) or np.any(np.abs(y) >= r):
        raise DomainError("greens_q requires |x| < r and |y| < r")
    if np.any(x == y):
        raise DomainError("greens_q is singular at x = y")
    if alpha == 2:
        lo, hi = np.minimum(x, y), np.maximum(x, y)
        out = (r + lo) * (r - hi) / (2 * r)
    else:
        rho = (r * r - x * x) * (r * r - y * y) / (r * r * (y - x) ** 2)
        if alpha == 1:
            # hyp2f1(1/2, 1/2, 3/2, -rho) overflows in scipy for huge rho;
            # at alpha = 1 it reduces to arcsinh(sqrt(rho)) / sqrt(rho)
            out = np.arcsinh(np.sqrt(rho)) / np.pi
        else:
            coeff = 1.0 / (2**alpha * sp.gamma(alpha / 2) ** 2)
            inner = (2 / alpha) * rho ** (alpha / 2) * sp.hyp2f1(
                0.5, alpha / 2, 1 + alpha / 2, -rho
            )
            out = coeff * np.abs(y - x) ** (alpha - 1) * inner
    return float(out) if out.ndim == 0 else out


def occupation_zeta(x: float, geom: BallGeometry, alpha: float) -> float:
    """Integral of Q(x, .) over the ball, by adaptive quadrature.

    Equals the expected first-exit time from the ball started at x; the
    fast closed form zeta_closed is cross-checked against this in tests.
    """
    xi = x - geom.center
    r = geom.radius
    if abs(xi) >= r:
        raise DomainError("occupation_zeta requires x inside the ball")
    val, _ = integrate.quad(
        lambda y: greens_q(xi, y, r, alpha),
        -r,
        r,
        points=[xi],
        limit=300,
        epsabs=0.0,
        epsrel=1e-10,
    )
    return float(val)


def sample_jump_scaled(omega, alpha: float, law: str = DEFAULT_JUMP_LAW):
    """Ball-exit jump distance for unit radius, from uniforms omega in (0,1)."""
    if not 0 < alpha < 2:
        raise DomainError(f"jump sampling requires alpha in (0, 2), got {alpha}")
    omega = np.asarray(omega, dtype=float)
    if law == JUMP_LAW_EXIT:
        # Invert the complementary regularized incomplete beta so 1 - v is
        # held to full relative precision deep in the heavy tail, where
        # v itself would round to 1:  I_v(a, b) = 1 - I_{1-v}(b, a).
        one_minus_v = sp.betaincinv(
            alpha / 2, 1 - alpha / 2, np.maximum(1.0 - omega, 1e-300)
        )
        out = 1.0 / np.sqrt(np.maximum(one_minus_v, 5e-324))
    elif law == JUMP_LAW_VERBATIM:
        complete = np.pi / np.sin(np.pi * alpha / 2)
        v = sp.betaincinv(1 - alpha / 2, alpha / 2, omega)
        out = 1.0 / np.sqrt(complete - v)
    else:
        raise ValueError(f"unknown jump law {law!r}")
    return float(out) if out.ndim == 0 else out


def sample_jump(
    r: float, alpha: float, rng: np.random.Generator, law: str = DEFAULT_JUMP_LAW
) -> float:
    """One ball-exit jump distance for a ball of radius r."""
    if r <= 0:
        raise DomainError("radius must be positive")
    if alpha == 2:
        return r
    return r * float(sample_jump_scaled(rng.uniform(), alpha, law))


def sample_direction_1d(rng: np.random.Generator, size=None):
    """Symmetric sign: -1 or +1 with probability 1/2 each."""
    draw = rng.integers(0, 2, size=size)
    return 2.0 * draw - 1.0


# ---------------------------------------------------------------------------
# interior resampling from the normalized occupation density


@lru_cache(maxsize=256)
def _interior_table(alpha: float, xi: float) -> PchipInterpolator:
    """Inverse CDF of the occupation density on the unit ball, start at xi.

    Monotone interpolant of v(u) where u is the normalized CDF; built once
    per (alpha, relative start point) and cached.  The walk only needs
    xi = 0 (balls are centered at the current location).
    """
    # graded grid: clustered at the singular point xi and both endpoints
    span_l, span_r = xi + 1.0, 1.0 - xi
    tiny = 1e-10
    left = xi - span_l * (1 - tiny) * np.linspace(0, 1, 400) ** 2
    right = xi + span_r * (1 - tiny) * np.linspace(0, 1, 400) ** 2
    near = xi + np.concatenate(
        [-np.geomspace(1e-12, min(span_l, span_r) * 0.5, 120),
         np.geomspace(1e-12, min(span_l, span_r) * 0.5, 120)]
    )
    grid = np.unique(np.concatenate([left, right, near]))
    grid = grid[(grid > -1 + tiny / 2) & (grid < 1 - tiny / 2)]

    def dens(v):
        return greens_q(xi, v, 1.0, alpha)

    gl_nodes, gl_weights = np.polynomial.legendre.leggauss(12)
    masses = np.empty(len(grid) - 1)
    for k in range(len(grid) - 1):
        a, b = grid[k], grid[k + 1]
        vv = 0.5 * (b - a) * gl_nodes + 0.5 * (a + b)
        masses[k] = 0.5 * (b - a) * np.dot(gl_weights, dens(vv))
    cdf = np.concatenate([[0.0], np.cumsum(masses)])
    cdf /= cdf[-1]
    cdf, keep = np.unique(cdf, return_index=True)
    return PchipInterpolator(cdf, grid[keep])


def sample_interior(
    x: float,
    geom: BallGeometry,
    alpha: float,
    rng: np.random.Generator,
    size=None,
) -> np.ndarray | float:
    """Sample points inside the ball with the normalized occupation density."""
    xi = (x - geom.center) / geom.radius
    if abs(xi) >= 1:
        raise DomainError("sample_interior requires x inside the ball")
    table = _interior_table(alpha, round(xi, 12))
    u = rng.uniform(size=size)
    v = table(u)
    out = geom.center + geom.radius * v
    return float(out) if np.ndim(out) == 0 else out


# ---------------------------------------------------------------------------
# Poisson walk


def poisson_walks(
    x0: float,
    spec: PathFunctionalSpec,
    alpha: float,
    stream: RngStream,
    n_paths: int,
    shrink: float = 1.0,
    jump_law: str = DEFAULT_JUMP_LAW,
    step_cap: int = POISSON_STEP_CAP,
) -> WalkBatch:
    """Simulate n_paths walk-on-spheres paths from x0, vectorized per step.

    Score per path: g at the exit point plus the occupation-weighted inner
    averages of the source over the visited balls.
    """
    if not -1 < x0 < 1:
        raise DomainError("start point must lie in (-1, 1)")
    if not 0 < alpha <= 2:
        raise DomainError(f"alpha must be in (0, 2], got {alpha}")
    rng = stream.generator()
    m1 = spec.inner_samples
    f, g = spec.source, spec.exterior
    table = _interior_table(alpha, 0.0) if f is not None else None

    pos = np.full(n_paths, float(x0))
    scores = np.zeros(n_paths)
    steps = np.zeros(n_paths, dtype=np.int64)
    exit_points = np.full(n_paths, np.nan)
    active = np.ones(n_paths, dtype=bool)
    gamma1a = sp.gamma(1 + alpha)

    n_steps = 0
    while active.any() and n_steps < step_cap:
        n_steps += 1
        idx = np.nonzero(active)[0]
        x = pos[idx]
        r = shrink * (1.0 - np.abs(x))
        # source term: occupation weight times the inner sample mean
        if f is not None:
            u = rng.uniform(size=(len(idx), m1))
            y = x[:, None] + r[:, None] * np.asarray(table(u))
            scores[idx] += (r**alpha / gamma1a) * np.mean(f(y), axis=1)
        # ball exit
        if alpha == 2:
            jump = r
        else:
            jump = r * sample_jump_scaled(rng.uniform(size=len(idx)), alpha, jump_law)
        new = x + jump * sample_direction_1d(rng, size=len(idx))
        pos[idx] = new
        steps[idx] += 1
        out = np.abs(new) >= 1.0
        done = idx[out]
        exit_points[done] = new[out]
        if g is not None and len(done):
            scores[done] += g(new[out])
        active[done] = False

    capped = active.copy()
    return WalkBatch(
        scores=scores,
        steps=steps,
        exit_points=exit_points,
        exited=~capped,
        capped=capped,
    )


def poisson_walk(
    x0: float,
    spec: PathFunctionalSpec,
    alpha: float,
    stream: RngStream,
    shrink: float = 1.0,
    jump_law: str = DEFAULT_JUMP_LAW,
    step_cap: int = POISSON_STEP_CAP,
) -> WalkOutcome:
    """One walk-on-spheres path; raises CappedWalkError on a capped walk."""
    batch = poisson_walks(
        x0, spec, alpha, stream, 1, shrink=shrink, jump_law=jump_law, step_cap=step_cap
    )
    if batch.capped[0]:
        raise CappedWalkError(float(batch.scores[0]), int(batch.steps[0]))
    return WalkOutcome(
        score=float(batch.scores[0]),
        steps=int(batch.steps[0]),
        exit_point=float(batch.exit_points[0]),
    )


# ---------------------------------------------------------------------------
# parabolic fixed-radius walk


def parabolic_walks(
    x0: float,
    t_n: float,
    n_sub: int,
    spec: PathFunctionalSpec,
    alpha: float,
    stream: RngStream,
    n_paths: int,
    jump_law: str = DEFAULT_JUMP_LAW,
) -> WalkBatch:
    """Fixed-radius walks over the uniform subdivision of [0, t_n].

    Each path takes up to n_sub ball-exit jumps of the fixed radius whose
    expected exit time is dt = t_n / n_sub.  The trapezoid functional
    accumulates the source backward in time along the in-domain prefix.
    """
    if t_n <= 0 or n_sub < 1:
        raise DomainError("parabolic walk requires t_n > 0 and n_sub >= 1")
    if not 0 < alpha <= 2:
        raise DomainError(f"alpha must be in (0, 2], got {alpha}")
    rng = stream.generator()
    dt = t_n / n_sub
    r = fixed_radius(dt, alpha)

    posn = np.empty((n_paths, n_sub + 1))
    posn[:, 0] = x0
    for ell in range(1, n_sub + 1):
        if alpha == 2:
            jump = r
        else:
            jump = r * sample_jump_scaled(rng.uniform(size=n_paths), alpha, jump_law)
        posn[:, ell] = posn[:, ell - 1] + jump * sample_direction_1d(rng, size=n_paths)

    outside = np.abs(posn[:, 1:]) >= 1.0  # (paths, n_sub), step ell = col ell-1
    exited = outside.any(axis=1)
    first_out = np.where(exited, outside.argmax(axis=1) + 1, n_sub + 1)
    L = np.where(exited, first_out - 1, n_sub)  # last in-domain index

    scores = np.zeros(n_paths)
    if spec.source is not None:
        ell = np.arange(n_sub + 1)
        in_prefix = ell[None, :] <= L[:, None]
        # step ell of the backward walk sits at physical time t_n - ell dt;
        # positions past the prefix are masked before evaluation (they can
        # be outside the domain)
        targ = np.broadcast_to((n_sub - ell) * dt, (n_paths, n_sub + 1))
        pos_safe = np.where(in_prefix, posn, 0.0)
        fv = np.where(in_prefix, spec.source(pos_safe, np.maximum(targ, 0.0)), 0.0)
        weight = np.where(
            (ell[None, :] == 0) | (ell[None, :] == L[:, None]), 0.5, 1.0
        )
        q = dt * np.sum(np.where(in_prefix, weight * fv, 0.0), axis=1)
        scores += np.where(L >= 1, q, 0.0)
    rows = np.arange(n_paths)
    # stop point: first outside position for exited paths, else the final one
    stop = posn[rows, np.minimum(L + 1, n_sub)]
    if spec.initial is not None and (~exited).any():
        scores[~exited] += spec.initial(posn[rows[~exited], n_sub])
    if spec.exterior is not None and exited.any():
        scores[exited] += spec.exterior(
            stop[exited], t_n - (L[exited] + 1) * dt
        )

    return WalkBatch(
        scores=scores,
        steps=L.astype(np.int64),
        exit_points=stop,
        exited=exited,
        capped=np.zeros(n_paths, dtype=bool),
    )


def parabolic_walk(
    x0: float,
    t_n: float,
    n_sub: int,
    spec: PathFunctionalSpec,
    alpha: float,
    stream: RngStream,
    jump_law: str = DEFAULT_JUMP_LAW,
) -> WalkOutcome:
    """One fixed-radius parabolic path."""
    b = parabolic_walks(x0, t_n, n_sub, spec, alpha, stream, 1, jump_law=jump_law)
    return WalkOutcome(
        score=float(b.scores[0]),
        steps=int(b.steps[0]),
        exit_point=float(b.exit_points[0]),
        exited=bool(b.exited[0]),
    )
