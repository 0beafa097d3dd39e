"""Experiment front end: `run <config>` and `validate <suite>`.

Config files are line-oriented key=value text with '#' comments; unknown
keys are a hard error so typos cannot silently fall back to defaults.
Reports are CSV with one row per sweep, formatted to round-trip doubles
exactly.  Timing cells are left empty unless --timings is passed, so a
report is byte-identical for a given config regardless of thread count.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, fields

import numpy as np

from . import basis, oracles, presets, specfun, walks
from .parabolic import ParabolicConfig, stsmc_solve
from .poisson import PoissonConfig, smc_solve
from .rng import RngStream

THREADS_ENV = "FRACSMC_THREADS"

_POISSON_PRESETS = ("u1", "u2", "source_sin")
_PARABOLIC_PRESETS = ("u1_parabolic", "u2_parabolic")


class ConfigError(ValueError):
    """Invalid or unparseable experiment configuration."""


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment as described by a config file."""

    equation: str
    preset: str
    alpha: float
    n_x: int
    m: int
    n_t: int = 0
    t_final: float = 0.0
    n_sub: int = 64
    m1: int = 32
    k_max: int = 60
    tol: float = 1e-12
    seed: int = 0
    out: str = "report.csv"

    def validate(self) -> None:
        if self.equation not in ("poisson", "parabolic"):
            raise ConfigError(f"unknown equation {self.equation!r}")
        wanted = _POISSON_PRESETS if self.equation == "poisson" else _PARABOLIC_PRESETS
        if self.preset not in wanted:
            raise ConfigError(
                f"preset {self.preset!r} not valid for {self.equation}; "
                f"choose one of {wanted}"
            )
        if not 0 < self.alpha <= 2:
            raise ConfigError(f"alpha must be in (0, 2], got {self.alpha}")
        if self.n_x < 0 or self.m < 1 or self.k_max < 1 or self.m1 < 1:
            raise ConfigError("n_x, m, m1, k_max must be positive")
        if self.equation == "parabolic":
            if self.n_t < 1 or self.t_final <= 0 or self.n_sub < 1:
                raise ConfigError("parabolic runs need n_t >= 1, t_final > 0, n_sub >= 1")
        if self.tol <= 0:
            raise ConfigError("tol must be positive")


_FIELD_TYPES = {f.name: f.type for f in fields(ExperimentConfig)}


def parse_config(text: str) -> ExperimentConfig:
    """Parse key=value lines into a validated ExperimentConfig."""
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {raw!r}")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if key not in _FIELD_TYPES:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        kind = _FIELD_TYPES[key]
        try:
            if kind == "int":
                values[key] = int(val)
            elif kind == "float":
                values[key] = float(val)
            else:
                values[key] = val
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for {key}: {val!r}") from exc
    try:
        cfg = ExperimentConfig(**values)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc
    cfg.validate()
    return cfg


def config_echo(cfg: ExperimentConfig) -> str:
    """Single-line comment that reparses to an equal config."""
    parts = []
    for f in fields(ExperimentConfig):
        v = getattr(cfg, f.name)
        parts.append(f"{f.name}={fmt(v) if isinstance(v, float) else v}")
    return "# " + " ".join(parts)


def fmt(x: float) -> str:
    """17-significant-digit decimal that round-trips any double."""
    return f"{x:.17g}"


def write_report(path: str, cfg: ExperimentConfig, history, timings: bool) -> None:
    lines = [config_echo(cfg), "k,max_update,e_inf,capped_path_rate,elapsed_ms"]
    for h in history:
        e_inf = "" if np.isnan(h.e_inf) else fmt(h.e_inf)
        ms = fmt(h.elapsed_ms) if timings else ""
        lines.append(
            f"{h.k},{fmt(h.max_update)},{e_inf},{fmt(h.capped_rate)},{ms}"
        )
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def _resolve_threads(flag: int | None) -> int:
    if flag is not None:
        return flag
    env = os.environ.get(THREADS_ENV)
    if env:
        return int(env)
    return os.cpu_count() or 1


def run_experiment(cfg: ExperimentConfig, n_threads: int, timings: bool) -> int:
    if cfg.equation == "poisson":
        if cfg.preset == "u1":
            pre = presets.poly_preset(cfg.alpha)
        elif cfg.preset == "u2":
            pre = presets.sine_preset(cfg.alpha)
        else:
            pre = presets.sin_source_preset(cfg.alpha)
        pcfg = PoissonConfig(
            alpha=cfg.alpha,
            n_x=cfg.n_x,
            n_walks=cfg.m,
            seed=cfg.seed,
            k_max=cfg.k_max,
            tol=cfg.tol,
            inner_samples=cfg.m1,
            n_threads=n_threads,
        )
        sol = smc_solve(pcfg, pre.source, reference=pre.solution)
    else:
        if cfg.preset == "u1_parabolic":
            pre = presets.parabolic_poly_preset(cfg.alpha, T=cfg.t_final)
        else:
            pre = presets.parabolic_sine_preset(cfg.alpha, T=cfg.t_final)
        scfg = ParabolicConfig(
            alpha=cfg.alpha,
            n_x=cfg.n_x,
            n_t=cfg.n_t,
            final_time=cfg.t_final,
            n_walks=cfg.m,
            n_sub=cfg.n_sub,
            seed=cfg.seed,
            k_max=cfg.k_max,
            tol=cfg.tol,
            n_threads=n_threads,
        )
        sol = stsmc_solve(scfg, pre.source, pre.initial, reference=pre.solution)
    if not np.all(np.isfinite(sol.node_values)):
        print("error: solver produced non-finite node values", file=sys.stderr)
        return 3
    write_report(cfg.out, cfg, sol.history, timings)
    last = sol.history[-1]
    print(
        f"{cfg.equation}/{cfg.preset}: {len(sol.history)} sweeps, "
        f"final max_update={last.max_update:.3e}, e_inf={last.e_inf:.3e} "
        f"-> {cfg.out}"
    )
    return 0


# ---------------------------------------------------------------------------
# validation suites


def _check(name: str, ok: bool, detail: str, failures: list) -> None:
    tag = "PASS" if ok else "FAIL"
    print(f"{tag} {name}: {detail}")
    if not ok:
        failures.append(name)


def _suite_specfun(failures: list, seed: int) -> None:
    rng = np.random.default_rng(seed)
    for a, b in ((0.2, 0.2), (0.6, -0.2)):
        idx = specfun.JacobiIndex(a, b)
        rule = specfun.jacobi_gauss(12, idx)
        # Gauss rule must integrate x^(2N+1) against the weight exactly
        from scipy.integrate import quad

        exact, _ = quad(lambda x: x**25, -1, 1, weight="alg", wvar=(b, a))
        got = rule.integrate(rule.nodes**25)
        _check(
            f"gauss-exactness a={a} b={b}",
            abs(got - exact) < 1e-12,
            f"|err|={abs(got - exact):.2e}",
            failures,
        )
        xs = rng.uniform(-1, 1, 5)
        from scipy.special import eval_jacobi

        mine = specfun.jacobi_eval_all(8, idx, xs)[8]
        ref = eval_jacobi(8, a, b, xs)
        _check(
            f"jacobi-recurrence a={a} b={b}",
            np.max(np.abs(mine - ref)) < 1e-12,
            f"max|err|={np.max(np.abs(mine - ref)):.2e}",
            failures,
        )


def _suite_basis(failures: list, seed: int) -> None:
    rng = np.random.default_rng(seed)
    for alpha in (0.4, 1.2, 2.0):
        grid = basis.make_grid(alpha, 2)
        smooth = lambda x: x * x + x + 1.0
        u = lambda x: np.clip(1 - x * x, 0, None) ** (alpha / 2) * smooth(x)
        interp = basis.interpolate(grid, u(grid.nodes))
        xs = rng.uniform(-1, 1, 40)
        err = np.max(np.abs(basis.eval_interpolant(interp, xs) - u(xs)))
        _check(
            f"interpolation-reproduction alpha={alpha}",
            err < 1e-12,
            f"max|err|={err:.2e}",
            failures,
        )


def _suite_walk(failures: list, seed: int) -> None:
    from scipy.special import gamma as gamma_fn

    for alpha in (0.6, 1.4, 2.0):
        spec = walks.PathFunctionalSpec(
            source=lambda x: np.ones_like(x), exterior=lambda x: np.zeros_like(x)
        )
        batch = walks.poisson_walks(0.5, spec, alpha, RngStream(seed), 20000)
        want = (1 - 0.25) ** (alpha / 2) / gamma_fn(1 + alpha)
        m = batch.mean_score()
        se = batch.scores.std() / np.sqrt(len(batch.scores))
        z = (m - want) / se
        _check(
            f"feynman-kac-mean alpha={alpha}",
            abs(z) < 4,
            f"z={z:+.2f}",
            failures,
        )
    for alpha in (0.6, 1.4):
        geom = walks.BallGeometry(center=0.1, radius=0.7)
        quad = walks.occupation_zeta(0.3, geom, alpha)
        closed = walks.zeta_closed(0.2, 0.7, alpha)
        rel = abs(quad / closed - 1)
        _check(
            f"occupation-zeta alpha={alpha}", rel < 1e-6, f"rel={rel:.2e}", failures
        )
    ks = oracles.jump_law_ks(1.0, seed=seed, n_jump=200_000, n_euler=20_000)
    _check(
        "jump-law-ks alpha=1.0",
        ks[walks.JUMP_LAW_EXIT] < 0.02,
        f"active code path {walks.DEFAULT_JUMP_LAW!r}: "
        f"KS(exit_law)={ks[walks.JUMP_LAW_EXIT]:.4f} "
        f"KS(verbatim)={ks[walks.JUMP_LAW_VERBATIM]:.4f}",
        failures,
    )


def _suite_oracle(failures: list, seed: int) -> None:
    for n, alpha in ((0, 0.6), (2, 1.2)):
        u = lambda y: basis.gjf_eval(n, alpha, np.clip(y, -1, 1)) * (np.abs(y) < 1)
        got = oracles.frac_laplacian_direct(u, 0.3, alpha)
        want = float(oracles.gjf_identity_rhs(n, alpha, np.array([0.3]))[0])
        rel = abs(got / want - 1)
        _check(
            f"derivative-identity n={n} alpha={alpha}",
            rel < 1e-4,
            f"rel={rel:.2e}",
            failures,
        )
    rng = np.random.default_rng(seed)
    xs = oracles.sample_symmetric_stable(1.4, rng, 200_000)
    ecf = np.mean(np.cos(1.0 * xs))
    want = np.exp(-1.0)
    se = np.std(np.cos(1.0 * xs)) / np.sqrt(len(xs))
    z = (ecf - want) / se
    _check("cms-characteristic-function alpha=1.4", abs(z) < 4, f"z={z:+.2f}", failures)


_SUITES = {
    "specfun": _suite_specfun,
    "basis": _suite_basis,
    "walk": _suite_walk,
    "oracle": _suite_oracle,
}


def run_validate(suite: str, seed: int) -> int:
    if suite != "all" and suite not in _SUITES:
        print(f"error: unknown suite {suite!r}", file=sys.stderr)
        return 2
    failures: list = []
    chosen = _SUITES.values() if suite == "all" else [_SUITES[suite]]
    for fn in chosen:
        fn(failures, seed)
    if failures:
        print(f"{len(failures)} check(s) failed: {', '.join(failures)}")
        return 1
    print("all checks passed")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="fracsmc")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run an experiment config")
    p_run.add_argument("config", help="path to key=value config file")
    p_run.add_argument("--seed", type=int, default=None, help="override config seed")
    p_run.add_argument("--threads", type=int, default=None)
    p_run.add_argument("--out", default=None, help="override report path")
    p_run.add_argument(
        "--timings", action="store_true", help="fill the elapsed_ms column"
    )

    p_val = sub.add_parser("validate", help="run a validation suite")
    p_val.add_argument("suite", help="specfun | basis | walk | oracle | all")
    p_val.add_argument("--seed", type=int, default=0)
    p_val.add_argument("--threads", type=int, default=None)

    args = parser.parse_args(argv)
    if args.command == "validate":
        return run_validate(args.suite, args.seed)

    try:
        with open(args.config) as fh:
            cfg = parse_config(fh.read())
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 2
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.seed is not None:
        cfg = ExperimentConfig(**{**cfg.__dict__, "seed": args.seed})
    if args.out is not None:
        cfg = ExperimentConfig(**{**cfg.__dict__, "out": args.out})
    try:
        return run_experiment(cfg, _resolve_threads(args.threads), args.timings)
    except (specfun.DomainError, basis.ContractError) as exc:
        print(f"error: numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
