"""
Parabolic continuum basis of the 5D Coulomb problem.

    x0 = (xi - eta)/2,  x2 + ix1 = sqrt(xi eta) sin(beta/2) e^{i(alpha-gamma)/2},
                        x4 + ix3 = sqrt(xi eta) cos(beta/2) e^{i(alpha+gamma)/2}

so xi = r + x0 and eta = r - x0. Separating psi = Phi1(xi) Phi2(eta) D gives

    (1/x) d/dx(x^2 Phi') + [k^2 x/4 - L(L+1)/x +/- sqrt(mu) Omega/(2 hbar) + 1/(2a)] Phi = 0

(+ for xi, - for eta). The separation constant is carried through the
dimensionless combination sigma = sqrt(mu) Omega / (2 hbar k).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from . import numdiff
from .hyperspherical import SingularLocusError, euler_angles
from .operators import Residual, coulomb_residual, relative_residual
from .params import PhysParams
from .special_functions import (
    casimir_wigner_D, check_angular_labels, gamma_arg, kummer, log_gamma, wigner_D,
)

_AXIS_TOL = 1e-14


@dataclass(frozen=True)
class ParaPoint:
    xi: float
    eta: float
    alpha: float = 0.0
    beta: float = 0.0
    gamma: float = 0.0

    def __post_init__(self):
        if self.xi < 0 or self.eta < 0:
            raise ValueError("xi and eta must be non-negative")
        if not 0.0 <= self.beta <= math.pi:
            raise ValueError("beta must lie in [0, pi]")

    @property
    def r(self) -> float:
        return 0.5 * (self.xi + self.eta)


@dataclass(frozen=True)
class ParaLabel:
    Omega: complex
    L: Fraction | int | float = 0
    m: Fraction | int | float = 0
    mp: Fraction | int | float = 0

    def __post_init__(self):
        check_angular_labels(self.L, self.m, self.mp)

    def sigma(self, k: float, p: PhysParams) -> complex:
        return sigma_from_omega(self.Omega, k, p)


def sigma_from_omega(Omega: complex, k: float, p: PhysParams) -> complex:
    """sqrt(mu) Omega / (2 hbar k)."""
    return math.sqrt(p.mu) * Omega / (2.0 * p.hbar * k)


def omega_from_sigma(sigma: complex, k: float, p: PhysParams) -> complex:
    return 2.0 * p.hbar * k * sigma / math.sqrt(p.mu)


# ---------------------------------------------------------------------------
# coordinates
# ---------------------------------------------------------------------------

def to_parabolic(x, on_axis: str = "raise") -> ParaPoint:
    """Cartesian -> parabolic; ``on_axis`` as in ``to_hyperspherical``."""
    x = np.asarray(x, dtype=float)
    r = float(np.linalg.norm(x))
    rho2 = float(x[1:] @ x[1:])
    # xi * eta = rho^2; take the uncancelled one directly
    if x[0] >= 0:
        xi = r + x[0]
        eta = rho2 / xi if xi > 0 else 0.0
    else:
        eta = r - x[0]
        xi = rho2 / eta
    xi, eta = float(xi), float(eta)
    if rho2 <= (_AXIS_TOL * r) ** 2:
        if on_axis == "raise":
            raise SingularLocusError("xi * eta = 0: Euler angles undefined on the axis")
        return ParaPoint(xi, eta)
    return ParaPoint(xi, eta, *euler_angles(x))


def from_parabolic(pt: ParaPoint) -> np.ndarray:
    rho = math.sqrt(pt.xi * pt.eta)
    w1 = rho * math.sin(0.5 * pt.beta) * cmath.exp(0.5j * (pt.alpha - pt.gamma))
    w2 = rho * math.cos(0.5 * pt.beta) * cmath.exp(0.5j * (pt.alpha + pt.gamma))
    return np.array([0.5 * (pt.xi - pt.eta), w1.imag, w1.real, w2.imag, w2.real])


def volume_element(pt: ParaPoint) -> float:
    """(xi eta / 32)(xi + eta) sin(beta)."""
    return pt.xi * pt.eta / 32.0 * (pt.xi + pt.eta) * math.sin(pt.beta)


def jacobian_determinant(pt: ParaPoint) -> float:
    """|det d x / d(xi, eta, beta, alpha, gamma)| by central differences."""
    base = np.array([pt.xi, pt.eta, pt.alpha, pt.beta, pt.gamma])
    scale = np.array([min(pt.xi, pt.eta), min(pt.xi, pt.eta), 1.0, min(pt.beta, math.pi - pt.beta), 1.0])
    jac = np.empty((5, 5))
    for j in range(5):
        e = np.zeros(5)
        e[j] = 1.0

        def coord(t, e=e):
            xi, eta, al, be, ga = base + t * e
            return from_parabolic(ParaPoint(xi, eta, al, be, ga))

        jac[:, j] = numdiff.derivative(coord, 0.0, scale=scale[j])
    return abs(float(np.linalg.det(jac)))


# ---------------------------------------------------------------------------
# separated functions
# ---------------------------------------------------------------------------

def _kummer_a(k: float, sigma: complex, L, p: PhysParams) -> complex:
    return float(L) + 1 + 0.5j / (p.a * k) + 1j * sigma


def phi_function(k: float, Omega: complex, L, x: float, p: PhysParams) -> complex:
    """Phi_{k Omega L}(x) = (ikx)^L / (2L+1)! e^{-ikx/2} F(L+1+i/2ak+i sigma; 2L+2; ikx)."""
    if x < 0:
        raise ValueError("parabolic coordinate must be non-negative")
    L = float(L)
    sigma = sigma_from_omega(Omega, k, p)
    a = _kummer_a(k, sigma, L, p)
    if x == 0:
        return 1.0 + 0j if L == 0 else 0j
    pref = cmath.exp(L * cmath.log(1j * k * x) - math.lgamma(2 * L + 2) - 0.5j * k * x)
    return pref * kummer(a, 2 * L + 2, 1j * k * x)


def phi_asymptotic(k: float, Omega: float, L, x: float, p: PhysParams) -> complex:
    """Leading large-x form of Phi for real Omega:

    2 i^L e^{-pi nu/2} / (kx |Gamma(L+1-i nu)|) cos(kx/2 + nu ln kx - pi(L+1)/2 + arg Gamma(L+1-i nu)),
    nu = 1/(2ak) + sigma.
    """
    L = float(L)
    nu = 0.5 / (p.a * k) + sigma_from_omega(Omega, k, p).real
    b = L + 1 - 1j * nu
    amp = 2.0 * cmath.exp(0.5j * math.pi * L) * math.exp(-0.5 * math.pi * nu - log_gamma(b).real) / (k * x)
    return amp * math.cos(0.5 * k * x + nu * math.log(k * x) - 0.5 * math.pi * (L + 1) + gamma_arg(b))


def phi_envelope(k: float, Omega: float, L, x: float, p: PhysParams) -> float:
    """Amplitude 2 e^{-pi nu/2} / (kx |Gamma(L+1-i nu)|) of the asymptotic oscillation."""
    nu = 0.5 / (p.a * k) + sigma_from_omega(Omega, k, p).real
    return 2.0 * math.exp(-0.5 * math.pi * nu - log_gamma(float(L) + 1 - 1j * nu).real) / (k * x)


def separated_ode_residual(phi: Callable[[float], complex], k: float, Omega: complex, L, x: float,
                           p: PhysParams, sign: int = 1) -> Residual:
    """Residual of x Phi'' + 2 Phi' + [k^2 x/4 - L(L+1)/x + sign sqrt(mu) Omega/2hbar + 1/2a] Phi.

    ``sign=+1`` is the xi equation, ``-1`` the eta equation.
    """
    L = float(L)
    h = numdiff.SECOND_STEP * min(1.0 / k, x)
    f0, d1, d2 = numdiff.first_and_second(phi, x, h)
    shift = sign * math.sqrt(p.mu) * Omega / (2.0 * p.hbar) + 0.5 * p.inv_a
    return relative_residual(x * d2, 2.0 * d1, 0.25 * k * k * x * f0, -L * (L + 1) / x * f0, shift * f0)


def phi_ode_residual(k: float, Omega: complex, L, x: float, p: PhysParams, sign: int = 1) -> Residual:
    """ODE residual of Phi_{k, sign*Omega, L} in the equation selected by ``sign``."""
    return separated_ode_residual(lambda t: phi_function(k, sign * Omega, L, t, p), k, Omega, L, x, p, sign)


# ---------------------------------------------------------------------------
# basis
# ---------------------------------------------------------------------------

def normalization_constant(k: float, Omega: float, L, p: PhysParams) -> complex:
    """C_{k Omega L} = (-1)^L sqrt(hbar^2 k^3 / (2 pi mu)) e^{pi/2ak}
    |Gamma(L+1-i/2ak-i sigma) Gamma(L+1-i/2ak+i sigma)|.

    For half-integer L the sign factor is taken as e^{i pi L}.
    """
    L = float(L)
    sigma = sigma_from_omega(Omega, k, p)
    eta = 0.5 / (p.a * k)
    log_mag = (0.5 * math.log(p.hbar**2 * k**3 / (2.0 * math.pi * p.mu)) + 0.5 * math.pi / (p.a * k)
               + log_gamma(L + 1 - 1j * eta - 1j * sigma).real + log_gamma(L + 1 - 1j * eta + 1j * sigma).real)
    return cmath.exp(1j * math.pi * L) * math.exp(log_mag)


def parabolic_basis(k: float, label: ParaLabel, pt: ParaPoint, p: PhysParams) -> complex:
    """sqrt((2L+1)/2pi^2) C Phi_{k Omega L}(xi) Phi_{k,-Omega,L}(eta) D^L_{m m'}."""
    L = float(label.L)
    if L != 0 and pt.xi * pt.eta == 0:
        raise SingularLocusError("Euler angles undefined on the axis for L > 0")
    norm = math.sqrt((2 * L + 1) / (2 * math.pi**2))
    C = normalization_constant(k, label.Omega, label.L, p)
    phi1 = phi_function(k, label.Omega, label.L, pt.xi, p)
    phi2 = phi_function(k, -label.Omega, label.L, pt.eta, p)
    return norm * C * phi1 * phi2 * wigner_D(label.L, label.m, label.mp, pt.alpha, pt.beta, pt.gamma)


def parabolic_cartesian(k: float, label: ParaLabel, p: PhysParams):
    on_axis = "zero" if label.L == 0 else "raise"

    def psi(x) -> complex:
        return parabolic_basis(k, label, to_parabolic(x, on_axis=on_axis), p)

    return psi


def pde_residual(k: float, label: ParaLabel, pt: ParaPoint, p: PhysParams) -> Residual:
    """Coulomb-equation residual of the parabolic basis via a Cartesian stencil."""
    pk = p.with_k(k)
    return coulomb_residual(parabolic_cartesian(k, label, pk), from_parabolic(pt), pk)


def pde_residual_coordinate(k: float, label: ParaLabel, pt: ParaPoint, p: PhysParams) -> Residual:
    """Residual with the parabolic Laplacian

    Delta_5 = 4/(xi+eta) [xi^-1 d_xi xi^2 d_xi + eta^-1 d_eta eta^2 d_eta] - 4 L^2/(xi eta).
    """
    xi, eta = pt.xi, pt.eta
    f1 = lambda t: phi_function(k, label.Omega, label.L, t, p)
    f2 = lambda t: phi_function(k, -label.Omega, label.L, t, p)
    A0, A1, A2 = numdiff.first_and_second(f1, xi, scale=min(1.0 / k, xi))
    B0, B1, B2 = numdiff.first_and_second(f2, eta, scale=min(1.0 / k, eta))
    D = wigner_D(label.L, label.m, label.mp, pt.alpha, pt.beta, pt.gamma)
    L2D = casimir_wigner_D(label.L, label.m, label.mp, pt.alpha, pt.beta, pt.gamma)
    s = xi + eta
    t_xi = 4.0 / s * (xi * A2 + 2.0 * A1) * B0 * D
    t_eta = 4.0 / s * (eta * B2 + 2.0 * B1) * A0 * D
    t_ang = -4.0 / (xi * eta) * A0 * B0 * L2D
    t_pot = (k * k + 4.0 * p.inv_a / s) * A0 * B0 * D
    return relative_residual(t_xi, t_eta, t_ang, t_pot)


def separation_identity_gap(k: float, label: ParaLabel, pt: ParaPoint, p: PhysParams) -> float:
    """|PDE residual - 4/(xi+eta)(Phi2 D res_xi + Phi1 D res_eta)| relative to the PDE term scale."""
    xi, eta = pt.xi, pt.eta
    L = float(label.L)
    f1 = lambda t: phi_function(k, label.Omega, label.L, t, p)
    f2 = lambda t: phi_function(k, -label.Omega, label.L, t, p)
    A0, A1, A2 = numdiff.first_and_second(f1, xi, scale=min(1.0 / k, xi))
    B0, B1, B2 = numdiff.first_and_second(f2, eta, scale=min(1.0 / k, eta))
    D = wigner_D(label.L, label.m, label.mp, pt.alpha, pt.beta, pt.gamma)
    L2D = casimir_wigner_D(label.L, label.m, label.mp, pt.alpha, pt.beta, pt.gamma)
    s = xi + eta
    shift = math.sqrt(p.mu) * label.Omega / (2.0 * p.hbar) + 0.5 * p.inv_a
    shift_eta = -math.sqrt(p.mu) * label.Omega / (2.0 * p.hbar) + 0.5 * p.inv_a
    ode1 = xi * A2 + 2.0 * A1 + (0.25 * k * k * xi - L * (L + 1) / xi + shift) * A0
    ode2 = eta * B2 + 2.0 * B1 + (0.25 * k * k * eta - L * (L + 1) / eta + shift_eta) * B0
    terms = [4.0 / s * (xi * A2 + 2.0 * A1) * B0 * D, 4.0 / s * (eta * B2 + 2.0 * B1) * A0 * D,
             -4.0 / (xi * eta) * A0 * B0 * L2D, (k * k + 4.0 * p.inv_a / s) * A0 * B0 * D]
    pde = sum(terms)
    combined = 4.0 / s * (B0 * D * ode1 + A0 * D * ode2)
    return abs(pde - combined) / max(abs(t) for t in terms)
