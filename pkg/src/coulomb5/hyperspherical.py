"""
Hyperspherical continuum basis of the 5D Coulomb problem.

Coordinates (r, theta, alpha, beta, gamma):

    x0       = r cos(theta)
    x2 + ix1 = r sin(theta) sin(beta/2) exp(i(alpha - gamma)/2)
    x4 + ix3 = r sin(theta) cos(beta/2) exp(i(alpha + gamma)/2)

with alpha in [0, 2pi), gamma in [0, 4pi). The basis is

    psi = sqrt((2L+1)/(2 pi^2)) R_{k lam}(r) Z_{lam L}(theta) D^L_{m m'}(alpha, beta, gamma)

and every factorial/Gamma ratio is evaluated in log space.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import numdiff
from .operators import Residual, coulomb_residual, relative_residual
from .params import PhysParams
from .special_functions import (
    casimir_wigner_D, check_angular_labels, gamma_arg, gegenbauer, kummer, kummer_g_asymptotic,
    log_gamma, wigner_D,
)

TWO_PI = 2.0 * math.pi
FOUR_PI = 4.0 * math.pi
_AXIS_TOL = 1e-14


class SingularLocusError(ValueError):
    """Point lies where the Euler angles are undefined."""


@dataclass(frozen=True)
class HyperPoint:
    r: float
    theta: float
    alpha: float = 0.0
    beta: float = 0.0
    gamma: float = 0.0

    def __post_init__(self):
        if self.r < 0:
            raise ValueError("r must be non-negative")
        if not 0.0 <= self.theta <= math.pi:
            raise ValueError("theta must lie in [0, pi]")
        if not 0.0 <= self.beta <= math.pi:
            raise ValueError("beta must lie in [0, pi]")


@dataclass(frozen=True)
class HyperLabel:
    lam: int
    L: Fraction | int | float = 0
    m: Fraction | int | float = 0
    mp: Fraction | int | float = 0

    def __post_init__(self):
        L2, _, _ = check_angular_labels(self.L, self.m, self.mp)
        if self.lam != int(self.lam) or self.lam < L2:
            raise ValueError(f"lambda must be an integer >= 2L, got lambda={self.lam}, L={self.L}")


# ---------------------------------------------------------------------------
# coordinates
# ---------------------------------------------------------------------------

def from_hyperspherical(h: HyperPoint) -> np.ndarray:
    rho = h.r * math.sin(h.theta)
    w1 = rho * math.sin(0.5 * h.beta) * cmath.exp(0.5j * (h.alpha - h.gamma))
    w2 = rho * math.cos(0.5 * h.beta) * cmath.exp(0.5j * (h.alpha + h.gamma))
    return np.array([h.r * math.cos(h.theta), w1.imag, w1.real, w2.imag, w2.real])


def euler_angles(x) -> tuple[float, float, float]:
    """(alpha, beta, gamma) of the transverse part (x1..x4) of ``x``.

    The pair (alpha, gamma) is fixed by the two phases modulo
    (alpha, gamma) -> (alpha + 2pi, gamma - 2pi); alpha is reduced to
    [0, 2pi) and gamma to [0, 4pi). Where one transverse pair vanishes
    (beta = 0 or pi) its phase is taken as zero.
    """
    w1 = complex(x[2], x[1])
    w2 = complex(x[4], x[3])
    beta = 2.0 * math.atan2(abs(w1), abs(w2))
    phi1 = cmath.phase(w1) if w1 else 0.0
    phi2 = cmath.phase(w2) if w2 else 0.0
    alpha = phi1 + phi2
    gamma = phi2 - phi1
    turns = math.floor(alpha / TWO_PI)
    alpha -= turns * TWO_PI
    gamma = (gamma + turns * TWO_PI) % FOUR_PI
    return alpha, beta, gamma


def to_hyperspherical(x, on_axis: str = "raise") -> HyperPoint:
    """Cartesian -> hyperspherical.

    On the axis sin(theta) = 0 the Euler angles are undefined: ``on_axis``
    selects between raising ``SingularLocusError`` and returning zeros.
    """
    x = np.asarray(x, dtype=float)
    r = float(np.linalg.norm(x))
    if r == 0:
        raise SingularLocusError("origin has no hyperspherical angles")
    rho = float(np.linalg.norm(x[1:]))
    theta = math.atan2(rho, x[0])
    if rho <= _AXIS_TOL * r:
        if on_axis == "raise":
            raise SingularLocusError(f"theta={theta} on the x0 axis: Euler angles undefined")
        return HyperPoint(r, theta)
    return HyperPoint(r, theta, *euler_angles(x))


# ---------------------------------------------------------------------------
# angular part
# ---------------------------------------------------------------------------

def _z_log_norm(lam: int, L2: int) -> float:
    L = 0.5 * L2
    return ((L2 + 1) * math.log(2.0) + math.lgamma(L2 + 1.5)
            + 0.5 * (math.log(2 * lam + 3) + math.lgamma(lam - L2 + 1)
                     - math.log(TWO_PI) - math.lgamma(lam + 2 * L + 3)))


def z_function(lam: int, L, theta):
    """Z_{lam L}(theta), normalized against sin^3(theta) d theta on [0, pi].

    Z = 2^(2L+1) Gamma(2L+3/2) sqrt((2lam+3)(lam-2L)! / (2pi (lam+2L+2)!))
        sin^(2L)(theta) C^(2L+3/2)_(lam-2L)(cos theta)
    """
    L2 = int(round(2 * float(L)))
    if abs(2 * float(L) - L2) > 1e-12 or L2 < 0:
        raise ValueError(f"L={L} is not a non-negative half-integer")
    if lam < L2 or lam != int(lam):
        raise ValueError(f"Z_{{lam L}} needs integer lam >= 2L, got lam={lam}, L={L}")
    theta = np.asarray(theta, dtype=float)
    s = np.sin(theta)
    out = math.exp(_z_log_norm(int(lam), L2)) * s**L2 * gegenbauer(int(lam) - L2, L2 + 1.5, np.cos(theta))
    return out if np.ndim(out) else float(out)


# ---------------------------------------------------------------------------
# radial part
# ---------------------------------------------------------------------------

def _log_radial_prefactor(k: float, lam: int, p: PhysParams) -> float:
    # |C_{k lam}| (2k)^lam / (2 lam + 3)!; (-i)^lam (2i)^lam = 2^lam is real
    eta = 1.0 / (p.a * k)
    return (math.log(4.0 * k * k) + 0.5 * math.pi * eta + log_gamma(lam + 2 - 1j * eta).real
            + lam * math.log(2.0 * k) - math.lgamma(2 * lam + 4))


def normalization_constant(k: float, lam: int, p: PhysParams) -> complex:
    """C_{k lam} = (-i)^lam 4k^2 exp(pi/2ak) |Gamma(lam + 2 - i/ak)|."""
    eta = 1.0 / (p.a * k)
    mag = math.exp(math.log(4.0 * k * k) + 0.5 * math.pi * eta + log_gamma(lam + 2 - 1j * eta).real)
    return (-1j) ** (lam % 4) * mag


def radial_continuum(k: float, lam: int, r: float, p: PhysParams) -> complex:
    """R_{k lam}(r) = C (2ikr)^lam / (2lam+3)! e^{-ikr} F(lam+2+i/ak; 2lam+4; 2ikr).

    Real up to rounding; the complex value is returned unchanged so callers
    can inspect the imaginary part.
    """
    if r < 0:
        raise ValueError("r must be non-negative")
    if lam < 0 or lam != int(lam):
        raise ValueError("lambda must be a non-negative integer")
    lam = int(lam)
    eta = 1.0 / (p.a * k)
    if r == 0:
        return complex(math.exp(_log_radial_prefactor(k, 0, p))) if lam == 0 else 0j
    pref = math.exp(_log_radial_prefactor(k, lam, p) + lam * math.log(r))
    z = 2j * k * r
    return pref * cmath.exp(-1j * k * r) * kummer(lam + 2 + 1j * eta, 2 * lam + 4, z)


def phase_shift(k: float, lam: int, p: PhysParams) -> float:
    """Coulomb phase delta_lam = arg Gamma(lam + 2 - i/ak), principal value."""
    return gamma_arg(lam + 2 - 1j / (p.a * k))


def radial_asymptotic(k: float, lam: int, r: float, p: PhysParams) -> float:
    """Leading large-r form (2/r^2) sin(kr + ln(2kr)/ak - pi(lam+1)/2 + delta_lam)."""
    eta = 1.0 / (p.a * k)
    phase = k * r + eta * math.log(2.0 * k * r) - 0.5 * math.pi * (lam + 1) + phase_shift(k, lam, p)
    return 2.0 / r**2 * math.sin(phase)


def radial_asymptotic_series(k: float, lam: int, r: float, p: PhysParams, n_terms: int | None = None) -> float:
    """Large-r radial function with ``n_terms`` corrections of the G series.

    (2/r^2) |Gamma(b)| Re{ exp(-i[kr - pi(lam+2)/2 + ln(2kr)/ak]) / Gamma(b)
                           * G(lam+2+i/ak; i/ak-lam-1; -2ikr) },  b = lam+2-i/ak.

    ``n_terms=None`` truncates G optimally.
    """
    eta = 1.0 / (p.a * k)
    b = lam + 2 - 1j * eta
    phase = k * r - 0.5 * math.pi * (lam + 2) + eta * math.log(2.0 * k * r)
    g = kummer_g_asymptotic(lam + 2 + 1j * eta, 1j * eta - lam - 1, -2j * k * r, n_terms)
    lg = log_gamma(b)
    core = cmath.exp(-1j * phase - 1j * lg.imag) * g
    return 2.0 / r**2 * core.real


def radial_ode_residual(k: float, lam: int, r: float, p: PhysParams) -> Residual:
    """Residual of R'' + (4/r) R' + (k^2 + 2/(a r) - lam(lam+3)/r^2) R = 0."""
    h = numdiff.SECOND_STEP * min(1.0 / k, r)
    f0, d1, d2 = numdiff.first_and_second(lambda t: radial_continuum(k, lam, t, p), r, h)
    return relative_residual(d2, 4.0 / r * d1, (k * k + 2.0 * p.inv_a / r) * f0,
                             -lam * (lam + 3) / r**2 * f0)


# ---------------------------------------------------------------------------
# full basis
# ---------------------------------------------------------------------------

def angular_function(label: HyperLabel, h: HyperPoint) -> complex:
    """sqrt((2L+1)/2pi^2) Z_{lam L}(theta) D^L_{m m'}."""
    L = float(label.L)
    if label.L != 0 and math.sin(h.theta) <= _AXIS_TOL:
        raise SingularLocusError("Euler angles undefined at sin(theta) = 0 for L > 0")
    norm = math.sqrt((2 * L + 1) / (2 * math.pi**2))
    return norm * z_function(label.lam, label.L, h.theta) * wigner_D(label.L, label.m, label.mp,
                                                                   h.alpha, h.beta, h.gamma)


def basis_function(k: float, label: HyperLabel, h: HyperPoint, p: PhysParams) -> complex:
    """psi_{k lam L m m'} at a hyperspherical point."""
    return radial_continuum(k, label.lam, h.r, p) * angular_function(label, h)


def basis_cartesian(k: float, label: HyperLabel, p: PhysParams):
    """The basis function as a callable of Cartesian x in R^5."""
    on_axis = "zero" if label.L == 0 else "raise"

    def psi(x) -> complex:
        return basis_function(k, label, to_hyperspherical(x, on_axis=on_axis), p)

    return psi


def pde_residual(k: float, label: HyperLabel, h: HyperPoint, p: PhysParams) -> Residual:
    """Coulomb-equation residual of the basis at ``h`` via a Cartesian stencil."""
    pk = p.with_k(k)
    return coulomb_residual(basis_cartesian(k, label, pk), from_hyperspherical(h), pk)


def pde_residual_coordinate(k: float, label: HyperLabel, h: HyperPoint, p: PhysParams) -> Residual:
    """Same residual using the hyperspherical Laplacian

    Delta_5 = r^-4 d_r r^4 d_r + (r^2 sin^3)^-1 d_th sin^3 d_th - 4 L^2 / (r^2 sin^2),

    radial and polar derivatives by differences, L^2 analytically on D.
    """
    r, th = h.r, h.theta
    R0, R1, R2 = numdiff.first_and_second(lambda t: radial_continuum(k, label.lam, t, p), r,
                                          scale=min(1.0 / k, r))
    Z0, Z1, Z2 = numdiff.first_and_second(lambda t: z_function(label.lam, label.L, t), th,
                                          scale=min(1.0, math.sin(th)))
    norm = math.sqrt((2 * float(label.L) + 1) / (2 * math.pi**2))
    D = wigner_D(label.L, label.m, label.mp, h.alpha, h.beta, h.gamma)
    L2D = casimir_wigner_D(label.L, label.m, label.mp, h.alpha, h.beta, h.gamma)
    s, c = math.sin(th), math.cos(th)
    radial = (R2 + 4.0 / r * R1) * Z0 * D
    polar = R0 * (Z2 + 3.0 * c / s * Z1) * D / r**2
    fiber = -4.0 * R0 * Z0 * L2D / (r**2 * s**2)
    psi = R0 * Z0 * D
    terms = [norm * t for t in (radial, polar, fiber, (k * k + 2.0 * p.inv_a / r) * psi)]
    return relative_residual(*terms)


def angular_overlap(label1: HyperLabel, label2: HyperLabel, n_theta: int = 48, n_beta: int = 48,
                    n_alpha: int = 16, n_gamma: int = 32) -> complex:
    """Product-quadrature value of int conj(Y1) Y2 (1/8) sin^3(theta) sin(beta).

    Gauss-Legendre in cos(theta) and cos(beta), trapezoid on the periodic
    alpha in [0, 2pi) and gamma in [0, 4pi).
    """
    xt, wt = np.polynomial.legendre.leggauss(n_theta)
    xb, wb = np.polynomial.legendre.leggauss(n_beta)
    thetas = np.arccos(xt)
    betas = np.arccos(xb)
    alphas = np.arange(n_alpha) * (TWO_PI / n_alpha)
    gammas = np.arange(n_gamma) * (FOUR_PI / n_gamma)

    def polar(label):
        return np.asarray(z_function(label.lam, label.L, thetas))

    # sin^3 dtheta = (1 - x^2) dx
    theta_part = np.sum(wt * (1 - xt**2) * polar(label1) * polar(label2))
    fiber = 0j
    for a in alphas:
        for g in gammas:
            for b, w in zip(betas, wb):
                d1 = wigner_D(label1.L, label1.m, label1.mp, a, b, g)
                d2 = wigner_D(label2.L, label2.m, label2.mp, a, b, g)
                fiber += w * d1.conjugate() * d2
    fiber *= (TWO_PI / n_alpha) * (FOUR_PI / n_gamma)
    norm = math.sqrt((2 * float(label1.L) + 1) * (2 * float(label2.L) + 1)) / (2 * math.pi**2)
    return complex(norm * theta_part * fiber / 8.0)
