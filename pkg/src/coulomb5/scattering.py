"""
L = 0 Coulomb scattering in five dimensions.

The state regular on the forward axis and tending to a distorted plane wave
along x0 is

    psi_k = C_k e^{ik(xi-eta)/2} F(i/ak; 2; ik eta),  C_k = e^{pi/2ak} Gamma(2 - i/ak),

obtained from the parabolic separation with the complex constant
Omega = -hbar/(a sqrt(mu)) - 2i hbar k / sqrt(mu). For large k eta it splits
into an incident wave of unit amplitude and an outgoing wave
f(theta)/r^2 exp(ikr + (i/ak) ln 2kr).

Two forms of the amplitude are exposed. ``amplitude`` follows the closed
form whose denominator carries sin^2(theta/2); ``amplitude_derived`` is the
coefficient actually produced by the large-eta expansion of F, with
sin^4(theta/2). Only the latter squares to ``cross_section``; the xsec
report prints the ratio of |amplitude|^2 to the cross section so the
difference stays visible.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import parabolic
from .operators import Residual, coulomb_residual, relative_residual
from .params import PhysParams
from .special_functions import kummer, kummer_g_asymptotic, log_gamma

DEFAULT_THRESHOLD = 50.0


class ForwardDivergenceError(ValueError):
    """Amplitude or cross section requested at theta = 0."""


class ThresholdError(ValueError):
    """k eta too small for the asymptotic decomposition."""


def _inv_ak(k: float, p: PhysParams) -> float:
    return p.inv_a / k


def separation_constant(k: float, p: PhysParams) -> complex:
    """Omega = -hbar/(a sqrt(mu)) - 2i hbar k/sqrt(mu)."""
    if k <= 0:
        raise ValueError("k must be positive")
    s = math.sqrt(p.mu)
    return complex(-p.hbar * p.inv_a / s, -2.0 * p.hbar * k / s)


def normalization(k: float, p: PhysParams) -> complex:
    """C_k = e^{pi/2ak} Gamma(2 - i/ak), in log space."""
    n = _inv_ak(k, p)
    return cmath.exp(0.5 * math.pi * n + log_gamma(2 - 1j * n))


@dataclass(frozen=True)
class ScatteringSolution:
    k: float
    a: float
    C_k: complex

    @classmethod
    def from_params(cls, k: float, p: PhysParams) -> "ScatteringSolution":
        return cls(k, p.a, normalization(k, p))


@dataclass(frozen=True)
class AsymptoticDecomposition:
    incident: complex
    scattered: complex
    f_theta: complex

    @property
    def total(self) -> complex:
        return self.incident + self.scattered


def scattering_state(k: float, xi: float, eta: float, p: PhysParams) -> complex:
    """psi_k = C_k e^{ik(xi-eta)/2} F(i/ak; 2; ik eta)."""
    if xi < 0 or eta < 0:
        raise ValueError("xi and eta must be non-negative")
    n = _inv_ak(k, p)
    phase = cmath.exp(0.5j * k * (xi - eta))
    if n == 0:
        return phase
    return normalization(k, p) * phase * kummer(1j * n, 2, 1j * k * eta)


def scattering_cartesian(k: float, p: PhysParams):
    def psi(x) -> complex:
        pt = parabolic.to_parabolic(x, on_axis="zero")
        return scattering_state(k, pt.xi, pt.eta, p)

    return psi


def pde_residual(k: float, xi: float, eta: float, p: PhysParams,
                 angles: tuple[float, float, float] = (0.3, 1.1, 0.7)) -> Residual:
    """Coulomb-equation residual at (xi, eta); the state does not depend on ``angles``."""
    pk = p.with_k(k)
    x = parabolic.from_parabolic(parabolic.ParaPoint(xi, eta, *angles))
    return coulomb_residual(scattering_cartesian(k, pk), x, pk)


def plane_wave_residual(k: float, xi: float, p: PhysParams, method: str = "analytic") -> Residual:
    """xi-equation residual of e^{ik xi/2} with the scattering separation constant.

    ``method="analytic"`` substitutes the exact derivatives (ik/2)^j e^{ik xi/2};
    ``"fd"`` uses the same difference stencil as the other ODE checks.
    """
    Omega = separation_constant(k, p)
    if method == "fd":
        return parabolic.separated_ode_residual(lambda t: cmath.exp(0.5j * k * t), k, Omega, 0, xi, p, sign=1)
    if method != "analytic":
        raise ValueError(f"unknown method {method!r}")
    f0 = cmath.exp(0.5j * k * xi)
    shift = math.sqrt(p.mu) * Omega / (2.0 * p.hbar) + 0.5 * p.inv_a
    return relative_residual(xi * (-0.25 * k * k) * f0, 2.0 * (0.5j * k) * f0, 0.25 * k * k * xi * f0, shift * f0)


def eta_factor_residual(k: float, eta: float, p: PhysParams) -> Residual:
    """eta-equation residual of e^{-ik eta/2} F(i/ak; 2; ik eta)."""
    n = _inv_ak(k, p)
    return parabolic.separated_ode_residual(lambda t: cmath.exp(-0.5j * k * t) * kummer(1j * n, 2, 1j * k * t),
                                            k, separation_constant(k, p), 0, eta, p, sign=-1)


# ---------------------------------------------------------------------------
# amplitude and cross section
# ---------------------------------------------------------------------------

def _check_angle(theta: float) -> float:
    if not 0.0 < theta <= math.pi:
        if theta == 0.0:
            raise ForwardDivergenceError("Coulomb amplitude diverges at theta = 0")
        raise ValueError(f"theta={theta} outside (0, pi]")
    return math.sin(0.5 * theta)


def gamma_ratio(k: float, p: PhysParams) -> complex:
    """Gamma(2 - i/ak) / Gamma(2 + i/ak); unimodular."""
    n = _inv_ak(k, p)
    lg = log_gamma(2 - 1j * n)
    return cmath.exp(2j * lg.imag)


def _amplitude(k: float, theta: float, p: PhysParams, power: int) -> complex:
    s = _check_angle(theta)
    n = _inv_ak(k, p)
    if n == 0:
        return 0j
    # (1 - iak)/(a^2 k^4) = n (n - i) / k^2
    pref = n * (n - 1j) / (4.0 * k * k * s**power)
    return pref * gamma_ratio(k, p) * cmath.exp(2j * n * math.log(s))


def amplitude(k: float, theta: float, p: PhysParams) -> complex:
    """(1-iak)/(4a^2k^4 sin^2(theta/2)) Gamma(2-i/ak)/Gamma(2+i/ak) exp((2i/ak) ln sin(theta/2))."""
    return _amplitude(k, theta, p, 2)


def amplitude_derived(k: float, theta: float, p: PhysParams) -> complex:
    """Coefficient of the outgoing wave from the large-eta expansion; sin^4 in the denominator."""
    return _amplitude(k, theta, p, 4)


def cross_section(k: float, theta: float, p: PhysParams) -> float:
    """(1 + a^2k^2) / (16 a^4 k^8 sin^8(theta/2))."""
    s = _check_angle(theta)
    n = _inv_ak(k, p)
    # (1 + a^2 k^2)/(a^4 k^8) = n^2 (n^2 + 1) / k^4
    return n * n * (n * n + 1.0) / (16.0 * k**4 * s**8)


def xsec_rows(k: float, thetas, p: PhysParams) -> list[dict]:
    """theta, amp_re, amp_im, abs_f_sq, xsec_printed, ratio for each angle."""
    rows = []
    for th in thetas:
        f = amplitude(k, float(th), p)
        xs = cross_section(k, float(th), p)
        af2 = abs(f) ** 2
        rows.append({"theta": float(th), "amp_re": f.real, "amp_im": f.imag, "abs_f_sq": af2,
                     "xsec_printed": xs, "ratio": af2 / xs if xs else math.nan})
    return rows


# ---------------------------------------------------------------------------
# asymptotic decomposition
# ---------------------------------------------------------------------------

def asymptotic_state(k: float, r: float, theta: float, p: PhysParams, n_terms: int = 1,
                     threshold: float = DEFAULT_THRESHOLD) -> AsymptoticDecomposition:
    """Incident + scattered split of psi_k at large k eta.

    incident  = exp(ik x0 - (i/ak) ln k eta) G(i/ak; i/ak - 1; -ik eta)
    scattered = f(theta)/r^2 exp(ikr + (i/ak) ln 2kr) G(2 - i/ak; 1 - i/ak; ik eta)

    ``n_terms`` counts the 1/eta corrections kept in the incident G series;
    the scattered series, already O(eta^-2) smaller, keeps one fewer.
    ``n_terms=1`` is the bracket [1 + (ak - i)/(2a^2k^3 r sin^2(theta/2))].
    """
    if n_terms < 0:
        raise ValueError("n_terms must be non-negative")
    s = _check_angle(theta)
    eta = 2.0 * r * s * s
    keta = k * eta
    if keta < threshold:
        raise ThresholdError(f"k eta = {keta:.4g} below the asymptotic threshold {threshold:g}")
    n = _inv_ak(k, p)
    x0 = r * math.cos(theta)
    g1 = kummer_g_asymptotic(1j * n, 1j * n - 1, -1j * keta, n_terms)
    incident = cmath.exp(1j * k * x0 - 1j * n * math.log(keta)) * g1
    f = amplitude_derived(k, theta, p)
    g2 = kummer_g_asymptotic(2 - 1j * n, 1 - 1j * n, 1j * keta, max(n_terms - 1, 0))
    scattered = f / r**2 * cmath.exp(1j * k * r + 1j * n * math.log(2.0 * k * r)) * g2
    return AsymptoticDecomposition(incident, scattered, f)


def decomposition_error(k: float, r: float, theta: float, p: PhysParams, n_terms: int = 1,
                        threshold: float = DEFAULT_THRESHOLD) -> float:
    """|psi - (incident + scattered)| / |psi|."""
    dec = asymptotic_state(k, r, theta, p, n_terms, threshold)
    s = math.sin(0.5 * theta)
    psi = scattering_state(k, 2.0 * r * math.cos(0.5 * theta) ** 2, 2.0 * r * s * s, p)
    return abs(psi - dec.total) / abs(psi)


def outgoing_coefficient(k: float, r: float, theta: float, p: PhysParams) -> complex:
    """Numerical estimate of f(theta): (psi - incident) r^2 exp(-ikr - (i/ak) ln 2kr).

    The incident wave uses the optimally truncated G series so the remainder
    is the outgoing wave up to O(1/k eta).
    """
    s = _check_angle(theta)
    n = _inv_ak(k, p)
    eta = 2.0 * r * s * s
    keta = k * eta
    psi = scattering_state(k, 2.0 * r * math.cos(0.5 * theta) ** 2, eta, p)
    g1 = kummer_g_asymptotic(1j * n, 1j * n - 1, -1j * keta, None)
    incident = cmath.exp(1j * k * r * math.cos(theta) - 1j * n * math.log(keta)) * g1
    return (psi - incident) * r**2 * cmath.exp(-1j * k * r - 1j * n * math.log(2.0 * k * r))


def field_rows(k: float, rs, thetas, p: PhysParams, threshold: float = DEFAULT_THRESHOLD) -> list[dict]:
    """psi on an (r, theta) grid with the asymptotic split where k eta >= threshold."""
    rows = []
    for r in rs:
        for th in thetas:
            r, th = float(r), float(th)
            s2 = math.sin(0.5 * th) ** 2
            xi, eta = 2.0 * r * (1.0 - s2), 2.0 * r * s2
            psi = scattering_state(k, xi, eta, p)
            row = {"r": r, "theta": th, "xi": xi, "eta": eta, "psi_re": psi.real, "psi_im": psi.imag,
                   "abs_psi_sq": abs(psi) ** 2}
            if th > 0 and k * eta >= threshold:
                dec = asymptotic_state(k, r, th, p, threshold=threshold)
                row.update(inc_re=dec.incident.real, inc_im=dec.incident.imag,
                           sc_re=dec.scattered.real, sc_im=dec.scattered.imag,
                           split_rel_err=abs(psi - dec.total) / abs(psi))
            elif eta == 0:
                # forward axis: F = 1, the state is the incident plane wave
                row.update(inc_re=psi.real, inc_im=psi.imag, sc_re=0.0, sc_im=0.0, split_rel_err=0.0)
            else:
                row.update(inc_re=np.nan, inc_im=np.nan, sc_re=np.nan, sc_im=np.nan, split_rel_err=np.nan)
            rows.append(row)
    return rows
