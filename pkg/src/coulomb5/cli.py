"""Command-line front end.

    coulomb5 verify         residual suites; exit 0 iff all pass
    coulomb5 radial-table   R_{k lam}(r) against its leading large-r form
    coulomb5 basis-check    PDE residuals of the hyperspherical (or --parabolic) basis
    coulomb5 xsec           amplitude and cross section on a theta grid
    coulomb5 scatter-field  scattering state on an (r, theta) grid with the asymptotic split

Exit codes: 0 pass, 1 check failure, 2 usage or configuration error.
Internal units hbar = mu = 1; a and k are the free knobs.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from . import hyperspherical, output, parabolic, scattering, suites
from .params import PhysParams

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
THREADS_ENV = "COULOMB5_THREADS"

EXTRA_TOLERANCES = {"pde_coord": 1e-6, "split": 3e-2}
ALL_TOLERANCES = {**suites.DEFAULT_TOLERANCES, **EXTRA_TOLERANCES}

DEFAULT_GRID_R = {
    "verify": (0.5, 8.0, 4),
    "radial-table": (10.0, 400.0, 40),
    "basis-check": (0.5, 8.0, 4),
    "xsec": (1.0, 1.0, 2),
    "scatter-field": (1.0, 50.0, 25),
}
DEFAULT_GRID_THETA = {"xsec": 36, "scatter-field": 13}
SPLIT_CHECK_KR = 400.0


class ConfigError(ValueError):
    """Invalid configuration; maps to exit code 2."""


@dataclass(frozen=True)
class RunConfig:
    command: str
    a: float = 1.0
    k: float = 1.0
    lam_max: int = 3
    r_min: float = 1.0
    r_max: float = 50.0
    n_r: int = 25
    n_theta: int = 13
    tol: dict = field(default_factory=dict)
    fmt: str = "csv"
    out: Path | None = None
    seed: int = 0
    parabolic: bool = False
    threads: int = 1

    def __post_init__(self):
        if not self.r_min > 0:
            raise ConfigError(f"r_min must be positive, got {self.r_min}")
        if self.r_max < self.r_min:
            raise ConfigError("r_max must not be below r_min")
        if self.n_r < 2:
            raise ConfigError(f"n_r must be at least 2, got {self.n_r}")
        if self.n_theta < 1:
            raise ConfigError(f"grid-theta must be positive, got {self.n_theta}")
        if self.lam_max < 0:
            raise ConfigError(f"lam-max must be non-negative, got {self.lam_max}")
        if self.fmt not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.fmt}")
        try:
            PhysParams(self.a, self.k)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    @property
    def params(self) -> PhysParams:
        return PhysParams(a=self.a, k=self.k)

    def tolerance(self, name: str) -> float:
        return self.tol.get(name, ALL_TOLERANCES[name])

    @property
    def r_grid(self) -> np.ndarray:
        return np.linspace(self.r_min, self.r_max, self.n_r)

    def meta(self) -> dict:
        """Config echo; output path and worker count do not affect results and are left out."""
        def clean(v):
            return repr(v) if isinstance(v, float) and not math.isfinite(v) else v

        return {"a": clean(self.a), "k": self.k, "hbar": 1.0, "mu": 1.0, "e2": clean(self.params.e2),
                "lam_max": self.lam_max, "grid_r": [self.r_min, self.r_max, self.n_r],
                "grid_theta": self.n_theta, "seed": self.seed, "parabolic": self.parabolic,
                "tol": {k: self.tolerance(k) for k in sorted(ALL_TOLERANCES)}}


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

def parse_grid_r(text: str) -> tuple[float, float, int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"--grid-r expects min:max:n, got {text!r}")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ConfigError(f"--grid-r: {exc}") from exc
    return lo, hi, n


def parse_tolerances(items: Sequence[str]) -> dict[str, float]:
    out = {}
    for item in items:
        name, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"--tol expects NAME=VALUE, got {item!r}")
        if name not in ALL_TOLERANCES:
            raise ConfigError(f"unknown tolerance {name!r}; known: {', '.join(sorted(ALL_TOLERANCES))}")
        try:
            out[name] = float(value)
        except ValueError as exc:
            raise ConfigError(f"--tol {name}: {exc}") from exc
        if not out[name] >= 0:
            raise ConfigError(f"--tol {name} must be non-negative")
    return out


def worker_count(env: dict | None = None) -> int:
    """Workers allowed by COULOMB5_THREADS (default 1, serial)."""
    raw = (os.environ if env is None else env).get(THREADS_ENV, "").strip()
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError as exc:
        raise ConfigError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from exc
    if n < 1:
        raise ConfigError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return min(n, os.cpu_count() or 1)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--a", type=float, default=1.0, help="Bohr radius a (default 1)")
    common.add_argument("--k", type=float, default=1.0, help="wavenumber k (default 1)")
    common.add_argument("--lam-max", type=int, default=3, help="largest lambda (or 2L) tabulated")
    common.add_argument("--grid-r", default=None, help="radial grid min:max:n")
    common.add_argument("--grid-theta", type=int, default=None, help="number of theta samples")
    common.add_argument("--format", choices=("csv", "json"), default="csv", dest="fmt")
    common.add_argument("--out", type=Path, default=None, help="output file; a PNG figure is written beside it")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized sample points")
    common.add_argument("--tol", action="append", default=[], metavar="NAME=VALUE",
                        help="override a tolerance (repeatable)")

    parser = argparse.ArgumentParser(prog="coulomb5", description="5D Coulomb continuum toolkit")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("verify", parents=[common], help="run the residual suites")
    sub.add_parser("radial-table", parents=[common], help="radial functions vs asymptotic form")
    bc = sub.add_parser("basis-check", parents=[common], help="PDE residuals of a basis")
    bc.add_argument("--parabolic", action="store_true", help="check the parabolic basis instead")
    sub.add_parser("xsec", parents=[common], help="amplitude and cross section table")
    sub.add_parser("scatter-field", parents=[common], help="scattering state on an (r, theta) grid")
    return parser


def config_from_args(args: argparse.Namespace, env: dict | None = None) -> RunConfig:
    cmd = args.command
    r_min, r_max, n_r = parse_grid_r(args.grid_r) if args.grid_r else DEFAULT_GRID_R[cmd]
    n_theta = args.grid_theta if args.grid_theta is not None else DEFAULT_GRID_THETA.get(cmd, 13)
    return RunConfig(command=cmd, a=args.a, k=args.k, lam_max=args.lam_max, r_min=r_min, r_max=r_max,
                     n_r=n_r, n_theta=n_theta, tol=parse_tolerances(args.tol), fmt=args.fmt, out=args.out,
                     seed=args.seed, parabolic=getattr(args, "parabolic", False), threads=worker_count(env))


# ---------------------------------------------------------------------------
# fan-out
# ---------------------------------------------------------------------------

def pmap(fn: Callable, items: Sequence, workers: int) -> list:
    """Order-preserving map, in a process pool when more than one worker is allowed."""
    if workers <= 1 or len(items) < 2:
        return [fn(it) for it in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * workers))))


# ---------------------------------------------------------------------------
# row builders (module level so they pickle)
# ---------------------------------------------------------------------------

RADIAL_COLUMNS = ("r", "lambda", "R", "R_asymptotic", "abs_diff", "delta_lambda")
XSEC_COLUMNS = ("theta", "amp_re", "amp_im", "abs_f_sq", "xsec_printed", "ratio")
FIELD_COLUMNS = ("r", "theta", "xi", "eta", "psi_re", "psi_im", "abs_psi_sq",
                 "inc_re", "inc_im", "sc_re", "sc_im", "split_rel_err")
HYPER_COLUMNS = ("lambda", "L", "m", "mp", "r", "theta", "alpha", "beta", "gamma",
                 "residual_cartesian", "residual_coordinate")
PARA_COLUMNS = ("Omega", "sigma", "L", "m", "mp", "xi", "eta", "alpha", "beta", "gamma",
                "residual_cartesian", "residual_coordinate", "ode_xi", "ode_eta")
VERIFY_COLUMNS = ("name", "max_residual", "tolerance", "n_samples", "passed")


def _radial_row(item, p: PhysParams) -> dict:
    lam, r = item
    R = hyperspherical.radial_continuum(p.k, lam, r, p).real
    Ra = hyperspherical.radial_asymptotic(p.k, lam, r, p)
    return {"r": r, "lambda": lam, "R": R, "R_asymptotic": Ra, "abs_diff": abs(R - Ra),
            "delta_lambda": hyperspherical.phase_shift(p.k, lam, p)}


def _hyper_row(item, p: PhysParams) -> dict:
    label, h = item
    return {"lambda": label.lam, "L": float(label.L), "m": float(label.m), "mp": float(label.mp),
            "r": h.r, "theta": h.theta, "alpha": h.alpha, "beta": h.beta, "gamma": h.gamma,
            "residual_cartesian": hyperspherical.pde_residual(p.k, label, h, p).relative,
            "residual_coordinate": hyperspherical.pde_residual_coordinate(p.k, label, h, p).relative}


def _para_row(item, p: PhysParams) -> dict:
    label, pt = item
    return {"Omega": float(label.Omega), "sigma": float(label.sigma(p.k, p).real), "L": float(label.L),
            "m": float(label.m), "mp": float(label.mp), "xi": pt.xi, "eta": pt.eta,
            "alpha": pt.alpha, "beta": pt.beta, "gamma": pt.gamma,
            "residual_cartesian": parabolic.pde_residual(p.k, label, pt, p).relative,
            "residual_coordinate": parabolic.pde_residual_coordinate(p.k, label, pt, p).relative,
            "ode_xi": parabolic.phi_ode_residual(p.k, label.Omega, label.L, pt.xi, p, 1).relative,
            "ode_eta": parabolic.phi_ode_residual(p.k, label.Omega, label.L, pt.eta, p, -1).relative}


def _field_row(item, p: PhysParams) -> dict:
    r, th = item
    return scattering.field_rows(p.k, [r], [th], p)[0]


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

@dataclass
class CommandResult:
    columns: Sequence[str]
    rows: list[dict]
    ok: bool
    summary: list[str]
    figure: Callable | None = None
    figure_key: str | None = None


def cmd_verify(cfg: RunConfig) -> tuple[suites.VerificationReport, CommandResult]:
    report = suites.run_verify(cfg.params, cfg.seed, {k: cfg.tolerance(k) for k in suites.DEFAULT_TOLERANCES})
    rows = [c.as_dict() for c in report.checks]
    summary = [f"{'PASS' if c.passed else 'FAIL'} {c.name}: max residual {c.max_residual:.3e} "
               f"(tol {c.tolerance:.1e}, {c.n_samples} samples)" for c in report.checks]
    summary.append(f"wall time {report.wall_time:.2f} s")
    res = CommandResult(VERIFY_COLUMNS, rows, report.passed, summary,
                        lambda rows, path: _verify_figure(rows, path))
    return report, res


def _verify_figure(rows, path):
    from . import plotting

    ratio = [{"residual/tol": r["max_residual"] / r["tolerance"] if r["tolerance"] else math.inf} for r in rows]
    return plotting.residual_figure(ratio, "residual/tol", path)


def cmd_radial_table(cfg: RunConfig) -> CommandResult:
    p = cfg.params
    items = [(lam, float(r)) for lam in range(cfg.lam_max + 1) for r in cfg.r_grid]
    rows = pmap(partial(_radial_row, p=p), items, cfg.threads)
    from . import plotting

    return CommandResult(RADIAL_COLUMNS, rows, True, [f"{len(rows)} rows, lambda <= {cfg.lam_max}"],
                         plotting.radial_figure)


def _hyper_labels(lam_max: int) -> list[hyperspherical.HyperLabel]:
    labels = []
    for lam in range(lam_max + 1):
        for L2 in range(lam + 1):
            L = Fraction(L2, 2)
            labels.append(hyperspherical.HyperLabel(lam, L, L, L))
    return labels


def _para_labels(lam_max: int, p: PhysParams) -> list[parabolic.ParaLabel]:
    labels = []
    for L2 in range(lam_max + 1):
        L = Fraction(L2, 2)
        for sigma in (-0.5, 0.0, 0.5):
            labels.append(parabolic.ParaLabel(parabolic.omega_from_sigma(sigma, p.k, p), L, L, L))
    return labels


def cmd_basis_check(cfg: RunConfig) -> CommandResult:
    p = cfg.params
    rng = np.random.default_rng(cfg.seed)
    if cfg.parabolic:
        items = [(lab, pt) for lab in _para_labels(cfg.lam_max, p)
                 for pt in suites._interior_para(rng, cfg.n_r, cfg.r_min, cfg.r_max)]
        rows = pmap(partial(_para_row, p=p), items, cfg.threads)
        checks = [("pde_para", "residual_cartesian"), ("pde_coord", "residual_coordinate"),
                  ("ode_phi", "ode_xi"), ("ode_phi", "ode_eta")]
        columns = PARA_COLUMNS
    else:
        items = [(lab, h) for lab in _hyper_labels(cfg.lam_max)
                 for h in suites._interior_hyper(rng, cfg.n_r, cfg.r_min, cfg.r_max)]
        rows = pmap(partial(_hyper_row, p=p), items, cfg.threads)
        checks = [("pde_hyper", "residual_cartesian"), ("pde_coord", "residual_coordinate")]
        columns = HYPER_COLUMNS
    ok, summary = True, []
    for tol_name, col in checks:
        worst = max(r[col] for r in rows)
        tol = cfg.tolerance(tol_name)
        ok &= worst <= tol
        summary.append(f"{'PASS' if worst <= tol else 'FAIL'} {col}: max {worst:.3e} (tol {tol:.1e})")
    from . import plotting

    return CommandResult(columns, rows, ok, summary, plotting.residual_figure, "residual_cartesian")


def theta_grid(n: int) -> np.ndarray:
    """n angles pi i/n, i = 1..n; theta = 0 is excluded."""
    return math.pi * np.arange(1, n + 1) / n


def cmd_xsec(cfg: RunConfig) -> CommandResult:
    p = cfg.params
    rows = scattering.xsec_rows(p.k, theta_grid(cfg.n_theta), p)
    from . import plotting

    back = rows[-1]
    return CommandResult(XSEC_COLUMNS, rows, True,
                         [f"{len(rows)} angles; theta=pi: xsec={back['xsec_printed']!r}, ratio={back['ratio']!r}"],
                         plotting.xsec_figure)


def cmd_scatter_field(cfg: RunConfig) -> CommandResult:
    p = cfg.params
    thetas = np.linspace(0.0, math.pi, cfg.n_theta)
    items = [(float(r), float(th)) for r in cfg.r_grid for th in thetas]
    rows = pmap(partial(_field_row, p=p), items, cfg.threads)
    tol = cfg.tolerance("split")
    checked = [r for r in rows if p.k * r["r"] >= SPLIT_CHECK_KR and math.isfinite(r["split_rel_err"])]
    worst = max((r["split_rel_err"] for r in checked), default=0.0)
    ok = worst <= tol
    summary = [f"{len(rows)} grid points, {sum(math.isfinite(r['split_rel_err']) for r in rows)} with split"]
    if checked:
        summary.append(f"{'PASS' if ok else 'FAIL'} split at kr >= {SPLIT_CHECK_KR:g}: max {worst:.3e} (tol {tol:.1e})")
    from . import plotting

    return CommandResult(FIELD_COLUMNS, rows, ok, summary, plotting.field_figure)


def figure_path(out: Path) -> Path:
    return out.with_suffix(".png")


def run(cfg: RunConfig, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    if cfg.command == "verify":
        report, res = cmd_verify(cfg)
    else:
        res = {"radial-table": cmd_radial_table, "basis-check": cmd_basis_check, "xsec": cmd_xsec,
               "scatter-field": cmd_scatter_field}[cfg.command](cfg)
    text = output.render(cfg.fmt, cfg.command, cfg.meta(), res.columns, res.rows)
    if cfg.out is None:
        stdout.write(text)
        log = stderr
    else:
        cfg.out.parent.mkdir(parents=True, exist_ok=True)
        cfg.out.write_text(text)
        fig = figure_path(cfg.out)
        if res.figure_key is None:
            res.figure(res.rows, fig)
        else:
            res.figure(res.rows, res.figure_key, fig)
        log = stdout
        print(f"wrote {cfg.out} and {fig}", file=log)
    for line in res.summary:
        print(line, file=log)
    return EXIT_OK if res.ok else EXIT_FAIL


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        cfg = config_from_args(args)
    except ConfigError as exc:
        print(f"coulomb5: configuration error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return run(cfg)
    except OSError as exc:
        print(f"coulomb5: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
