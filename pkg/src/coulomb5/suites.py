"""Verification suites run by ``coulomb5 verify`` and reused by the tests.

Each suite draws its sample points from a seeded generator and returns one
``CheckResult`` with the worst residual it saw.
"""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from . import hurwitz, hyperspherical, parabolic, scattering
from .params import PhysParams

DEFAULT_TOLERANCES = {
    "euler": 1e-12,
    "commutator": 1e-10,
    "laplacian": 1e-7,
    "duality": 1e-5,
    "phase": 1e-12,
    "pde_hyper": 1e-6,
    "ode_phi": 1e-7,
    "pde_para": 1e-6,
    "pde_scatter": 1e-6,
}


@dataclass(frozen=True)
class CheckResult:
    name: str
    max_residual: float
    tolerance: float
    n_samples: int

    @property
    def passed(self) -> bool:
        return bool(self.max_residual <= self.tolerance)

    def as_dict(self) -> dict:
        return {**asdict(self), "passed": self.passed}


@dataclass
class VerificationReport:
    suite: str
    checks: list[CheckResult] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def as_dict(self, include_time: bool = True) -> dict:
        out = {"suite": self.suite, "passed": self.passed, "checks": [c.as_dict() for c in self.checks]}
        if include_time:
            out["wall_time"] = self.wall_time
        return out


def _shell_points(rng: np.random.Generator, n: int, dim: int, rmin: float, rmax: float) -> np.ndarray:
    v = rng.standard_normal((n, dim))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    return v * rng.uniform(rmin, rmax, (n, 1))


def _interior_hyper(rng, n, rmin, rmax) -> list[hyperspherical.HyperPoint]:
    # keep away from the coordinate singularities so the stencils stay inside the chart
    return [hyperspherical.HyperPoint(float(rng.uniform(rmin, rmax)), float(rng.uniform(0.3, math.pi - 0.3)),
                                      float(rng.uniform(0, 2 * math.pi)), float(rng.uniform(0.3, math.pi - 0.3)),
                                      float(rng.uniform(0, 4 * math.pi))) for _ in range(n)]


def _interior_para(rng, n, rmin, rmax) -> list[parabolic.ParaPoint]:
    pts = []
    for _ in range(n):
        r = float(rng.uniform(rmin, rmax))
        x0 = float(rng.uniform(-0.8, 0.8)) * r
        pts.append(parabolic.ParaPoint(r + x0, r - x0, float(rng.uniform(0, 2 * math.pi)),
                                       float(rng.uniform(0.3, math.pi - 0.3)), float(rng.uniform(0, 4 * math.pi))))
    return pts


# ---------------------------------------------------------------------------
# individual suites
# ---------------------------------------------------------------------------

def euler_suite(rng, tol: float, n: int = 10_000) -> CheckResult:
    u = rng.uniform(-2.0, 2.0, (n, 8))
    res = hurwitz.euler_identity_residual(u)
    norm4 = np.maximum(1.0, np.sum(u * u, axis=1) ** 2)
    return CheckResult("euler", float(np.max(res / norm4)), tol, n)


def commutator_suite(rng, tol: float, n_points: int = 3) -> CheckResult:
    worst, count = 0.0, 0
    for u in rng.uniform(-1.0, 1.0, (n_points, 8)):
        for f in hurwitz.quadratic_monomials():
            for a in (1, 2, 3):
                for b in (1, 2, 3):
                    worst = max(worst, hurwitz.commutator_residual(a, b, f, u))
                    count += 1
    return CheckResult("commutator", worst, tol, count)


def laplacian_fields() -> dict[str, hurwitz.Field]:
    return {
        "x0": hurwitz.monomial(0, dim=5),
        "|x|^2": hurwitz.polynomial_field({(2, 0, 0, 0, 0): 1, (0, 2, 0, 0, 0): 1, (0, 0, 2, 0, 0): 1,
                                           (0, 0, 0, 2, 0): 1, (0, 0, 0, 0, 2): 1}, dim=5),
        "x1x2": hurwitz.monomial(1, 2, dim=5),
    }


def laplacian_suite(rng, tol: float, n: int = 20) -> CheckResult:
    worst = 0.0
    fields = laplacian_fields().values()
    for u in _shell_points(rng, n, 8, 0.5, 2.0):
        for f in fields:
            worst = max(worst, hurwitz.laplacian_identity_residual(f, u))
    return CheckResult("laplacian", worst, tol, n * 3)


def duality_suite(rng, p: PhysParams, tol: float, n: int = 5) -> CheckResult:
    psi5 = hyperspherical.basis_cartesian(p.k, hyperspherical.HyperLabel(0), p)
    dp = hurwitz.DualityParams.from_coulomb(p)
    worst = max(hurwitz.duality_residual(psi5, dp, u) for u in _shell_points(rng, n, 8, 0.6, 1.6))
    return CheckResult("duality", worst, tol, n)


def phase_suite(p: PhysParams, tol: float, lam_max: int = 10) -> CheckResult:
    worst = 0.0
    for lam in range(lam_max):
        d = hyperspherical.phase_shift(p.k, lam + 1, p) - hyperspherical.phase_shift(p.k, lam, p)
        expect = -math.atan(p.inv_ak / (lam + 2))
        worst = max(worst, abs(math.remainder(d - expect, 2 * math.pi)))
    return CheckResult("phase", worst, tol, lam_max)


HYPER_LABELS = (hyperspherical.HyperLabel(0, 0), hyperspherical.HyperLabel(1, 0),
                hyperspherical.HyperLabel(2, 1, 1, 0))


def hyper_pde_suite(rng, p: PhysParams, tol: float, n: int = 4, rmin: float = 0.5, rmax: float = 8.0) -> CheckResult:
    worst, count = 0.0, 0
    for label in HYPER_LABELS:
        for h in _interior_hyper(rng, n, rmin, rmax):
            worst = max(worst, hyperspherical.pde_residual(p.k, label, h, p).relative)
            count += 1
    return CheckResult("pde_hyper", worst, tol, count)


PARA_LABELS = ((0.4, 0, 0, 0), (-0.3, 1, 1, 0))


def parabolic_suites(rng, p: PhysParams, tol_ode: float, tol_pde: float, n: int = 3,
                     rmin: float = 0.5, rmax: float = 6.0) -> list[CheckResult]:
    ode, pde, n_ode, n_pde = 0.0, 0.0, 0, 0
    for sig, L, m, mp in PARA_LABELS:
        label = parabolic.ParaLabel(parabolic.omega_from_sigma(sig, p.k, p), L, m, mp)
        for pt in _interior_para(rng, n, rmin, rmax):
            for x in (pt.xi, pt.eta):
                for sign in (1, -1):
                    ode = max(ode, parabolic.phi_ode_residual(p.k, label.Omega, L, x, p, sign).relative)
                    n_ode += 1
            pde = max(pde, parabolic.pde_residual(p.k, label, pt, p).relative)
            n_pde += 1
    return [CheckResult("ode_phi", ode, tol_ode, n_ode), CheckResult("pde_para", pde, tol_pde, n_pde)]


def scatter_pde_suite(rng, p: PhysParams, tol: float, n: int = 4, rmin: float = 0.5,
                      rmax: float = 8.0) -> CheckResult:
    worst = 0.0
    for pt in _interior_para(rng, n, rmin, rmax):
        worst = max(worst, scattering.pde_residual(p.k, pt.xi, pt.eta, p,
                                                   (pt.alpha, pt.beta, pt.gamma)).relative)
    return CheckResult("pde_scatter", worst, tol, n)


def run_verify(p: PhysParams, seed: int = 0, tolerances: dict[str, float] | None = None,
               clock: Callable[[], float] = time.perf_counter) -> VerificationReport:
    """Every suite with its own child generator so adding one never shifts another."""
    tol = {**DEFAULT_TOLERANCES, **(tolerances or {})}
    rngs = iter(np.random.default_rng(seed).spawn(8))
    t0 = clock()
    checks = [
        euler_suite(next(rngs), tol["euler"]),
        commutator_suite(next(rngs), tol["commutator"]),
        laplacian_suite(next(rngs), tol["laplacian"]),
        duality_suite(next(rngs), p, tol["duality"]),
        phase_suite(p, tol["phase"]),
        hyper_pde_suite(next(rngs), p, tol["pde_hyper"]),
        *parabolic_suites(next(rngs), p, tol["ode_phi"], tol["pde_para"]),
        scatter_pde_suite(next(rngs), p, tol["pde_scatter"]),
    ]
    return VerificationReport("verify", checks, clock() - t0)
