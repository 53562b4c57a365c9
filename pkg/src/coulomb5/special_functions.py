"""
Special functions for the 5D Coulomb continuum.

Everything here works in double precision on Python ``complex`` scalars:

* ``log_gamma``     principal-branch log Gamma (scipy backed)
* ``kummer_f``      confluent hypergeometric F(a; c; z) for complex a, c, z
* ``kummer_g_asymptotic``  the divergent series G(a; c; z) = sum (a)_n (c)_n / (n! z^n)
* ``gegenbauer``    C_n^lam(x) by three-term recurrence
* ``wigner_D``      SU(2) D-functions with half-integer L

Evaluation strategy for F
-------------------------
On the imaginary axis (where the radial and parabolic functions live) the
Maclaurin series of F cancels catastrophically once |z| exceeds a few units,
so three regimes are used:

``|z| <= 4``
    direct series, Neumaier-compensated, capped at ``TERM_CAP`` terms.
``4 < |z| < SWITCH_RADIUS``
    the series value at |z| = 4 is continued outward along the ray with
    local Taylor expansions of Kummer's equation z w'' + (c - z) w' - a w = 0.
``|z| >= SWITCH_RADIUS``
    the two-term asymptotic representation built from G with optimal
    truncation; if its error estimate misses the target the Taylor
    continuation is used instead.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import special as sp

EPS = float(np.finfo(float).eps)
SWITCH_RADIUS = 30.0
TERM_CAP = 500
DEFAULT_RTOL = 1e-11

_SERIES_RADIUS = 4.0
_MAX_STEP = 4.0
_POLE_TOL = 1e-14


class PoleError(ValueError):
    """Argument sits on a pole of Gamma (non-positive integer)."""


class ConvergenceError(ArithmeticError):
    """A series hit the term cap without meeting its error target."""


class DivergenceWarning(RuntimeWarning):
    """An asymptotic series started growing before reaching tolerance."""


@dataclass(frozen=True)
class AccuracyReport:
    value: complex
    est_abs_error: float
    terms_used: int
    method: str = "series"

    def __complex__(self) -> complex:
        return self.value


class _Neumaier:
    """Compensated complex accumulator."""

    __slots__ = ("s", "c")

    def __init__(self, start: complex = 0j):
        self.s = complex(start)
        self.c = 0j

    def add(self, x: complex) -> None:
        s = self.s + x
        # real and imaginary parts compensated independently
        cr = _two_sum_err(self.s.real, x.real, s.real)
        ci = _two_sum_err(self.s.imag, x.imag, s.imag)
        self.c += complex(cr, ci)
        self.s = s

    @property
    def value(self) -> complex:
        return self.s + self.c


def _two_sum_err(a: float, b: float, s: float) -> float:
    if abs(a) >= abs(b):
        return (a - s) + b
    return (b - s) + a


def _nonpositive_integer(z: complex) -> bool:
    z = complex(z)
    if abs(z.imag) > _POLE_TOL or z.real > _POLE_TOL:
        return False
    return abs(z.real - round(z.real)) <= _POLE_TOL


# ---------------------------------------------------------------------------
# Gamma
# ---------------------------------------------------------------------------

def log_gamma(z: complex) -> complex:
    """Principal branch of log Gamma(z).

    Raises
    ------
    PoleError
        If ``z`` is within 1e-14 of a non-positive integer.
    """
    z = complex(z)
    if _nonpositive_integer(z):
        raise PoleError(f"log_gamma pole at z={z}")
    return complex(sp.loggamma(z))


def gamma_arg(z: complex) -> float:
    """arg Gamma(z) reduced to (-pi, pi]."""
    phase = log_gamma(z).imag
    return math.remainder(phase, 2.0 * math.pi)


def rgamma(z: complex) -> complex:
    """1/Gamma(z); exactly zero on the poles."""
    if _nonpositive_integer(z):
        return 0j
    return cmath.exp(-log_gamma(z))


# ---------------------------------------------------------------------------
# Kummer's function
# ---------------------------------------------------------------------------

def _series(a: complex, c: complex, z: complex, cap: int) -> tuple[complex, complex, float, int]:
    """F and dF/dz from the Maclaurin series."""
    term = 1 + 0j
    f = _Neumaier(1.0)
    df = _Neumaier(0j)
    mag = 1.0
    n = 0
    converged = False
    while n < cap:
        term *= (a + n) / ((c + n) * (n + 1)) * z
        n += 1
        f.add(term)
        df.add(n * term)
        mag += abs(term)
        if term == 0 or (n > abs(z) and abs(term) <= 0.5 * EPS * abs(f.value)):
            converged = True
            break
    value = f.value
    err = 2.0 * EPS * mag + (0.0 if converged else abs(term))
    if not converged and abs(term) > DEFAULT_RTOL * max(abs(value), 1e-300):
        raise ConvergenceError(f"Kummer series did not converge in {cap} terms at z={z}")
    deriv = df.value / z if z != 0 else a / c
    return value, deriv, err, n


def _taylor_step(a: complex, c: complex, z0: complex, w0: complex, dw0: complex,
                 h: complex, cap: int) -> tuple[complex, complex, float, int]:
    """Advance (w, w') from z0 to z0 + h using the local Taylor recurrence.

    Scaled coefficients s_n = t_n h^n obey
    s_{n+2} = [(n + a) h^2 s_n - (n + 1)(n + c - z0) h s_{n+1}] / (z0 (n + 1)(n + 2)).
    """
    s_prev, s_cur = w0, dw0 * h
    w = _Neumaier(s_prev)
    w.add(s_cur)
    dwh = _Neumaier(s_cur)
    mag = abs(s_prev) + abs(s_cur)
    h2 = h * h
    n = 0
    while n < cap:
        s_next = ((n + a) * h2 * s_prev - (n + 1) * (n + c - z0) * h * s_cur) / (z0 * (n + 1) * (n + 2))
        w.add(s_next)
        dwh.add((n + 2) * s_next)
        mag += abs(s_next)
        n += 1
        scale = abs(w.value) + abs(dwh.value)
        if abs(s_next) + abs(s_cur) <= 0.25 * EPS * scale:
            break
        s_prev, s_cur = s_cur, s_next
    else:
        raise ConvergenceError(f"Taylor continuation did not converge in {cap} terms")
    return w.value, dwh.value / h, EPS * mag, n + 2


def _continued(a: complex, c: complex, z: complex, cap: int) -> AccuracyReport:
    rho = abs(z)
    direction = z / rho
    z0 = direction * _SERIES_RADIUS
    w, dw, err, used = _series(a, c, z0, cap)
    dist = _SERIES_RADIUS
    while dist < rho:
        step = min(0.5 * dist, _MAX_STEP, rho - dist)
        w_new, dw_new, step_err, n = _taylor_step(a, c, z0, w, dw, direction * step, cap)
        # local amplitude keeps the estimate sane through zeros of w
        growth = (abs(w_new) + abs(dw_new)) / (abs(w) + abs(dw))
        err = err * max(1.0, growth) + step_err
        used = max(used, n)
        w, dw = w_new, dw_new
        dist += step
        z0 = direction * dist
    return AccuracyReport(w, err, used, "taylor")


def _g_optimal(a: complex, c: complex, z: complex, cap: int) -> tuple[complex, float, int]:
    """G(a; c; z) truncated before its smallest term."""
    term = 1 + 0j
    g = _Neumaier(1.0)
    prev = math.inf
    n = 0
    while n < cap:
        nxt = term * (a + n) * (c + n) / ((n + 1) * z)
        if nxt == 0:
            return g.value, 0.0, n
        if abs(nxt) >= prev:
            return g.value, abs(term), n
        prev = abs(nxt)
        term = nxt
        g.add(term)
        n += 1
        if prev <= 0.5 * EPS * abs(g.value):
            break
    return g.value, abs(term), n


def kummer_g_asymptotic(a: complex, c: complex, z: complex, n_terms: int | None = None,
                        tol: float = EPS) -> complex:
    """Partial sum of G(a; c; z) = 1 + ac/(1! z) + a(a+1)c(c+1)/(2! z^2) + ...

    With ``n_terms`` given, exactly that many correction terms are added
    (``n_terms=0`` gives 1). With ``n_terms=None`` the series is cut at its
    smallest term; a ``DivergenceWarning`` is emitted if that smallest term
    is still above ``tol``.
    """
    a, c, z = complex(a), complex(c), complex(z)
    if n_terms is None:
        value, err, _ = _g_optimal(a, c, z, TERM_CAP)
        if err > tol:
            warnings.warn(f"G series diverges before reaching tol={tol:g} (smallest term {err:.3g})",
                          DivergenceWarning, stacklevel=2)
        return value
    if n_terms < 0:
        raise ValueError("n_terms must be non-negative")
    term = 1 + 0j
    g = _Neumaier(1.0)
    for n in range(n_terms):
        term = term * (a + n) * (c + n) / ((n + 1) * z)
        g.add(term)
    return g.value


def kummer_asymptotic(a: complex, c: complex, z: complex,
                      cap: int = TERM_CAP) -> tuple[AccuracyReport, float]:
    """Large-|z| representation of F through two optimally truncated G series.

    Returns the report together with the summed magnitude of the two
    contributions, which is the scale errors should be judged against
    near zeros of F.
    """
    a, c, z = complex(a), complex(c), complex(z)
    lg_c = log_gamma(c)
    log_mz = cmath.log(-z)
    log_z = cmath.log(z)
    parts = []
    err = 0.0
    envelope = 0.0
    used = 0
    if not _nonpositive_integer(c - a):
        pref = cmath.exp(lg_c - log_gamma(c - a) - a * log_mz)
        g, e, n = _g_optimal(a, a - c + 1, -z, cap)
        parts.append(pref * g)
        envelope += abs(pref)
        err += abs(pref) * (e + EPS * (abs(a * log_mz) + 10.0))
        used = max(used, n)
    if not _nonpositive_integer(a):
        pref = cmath.exp(lg_c - log_gamma(a) + z + (a - c) * log_z)
        g, e, n = _g_optimal(c - a, 1 - a, z, cap)
        parts.append(pref * g)
        envelope += abs(pref)
        err += abs(pref) * (e + EPS * (abs(z) + abs((a - c) * log_z) + 10.0))
        used = max(used, n)
    return AccuracyReport(sum(parts, 0j), err, used, "asymptotic"), envelope


def kummer_f(a: complex, c: complex, z: complex, rtol: float = DEFAULT_RTOL,
             cap: int = TERM_CAP) -> AccuracyReport:
    """Confluent hypergeometric function F(a; c; z) = 1F1(a; c; z).

    Parameters
    ----------
    a, c, z : complex
        ``c`` must not be a non-positive integer.
    rtol : float
        Relative target used to decide whether the asymptotic branch is
        accurate enough at |z| >= ``SWITCH_RADIUS``.

    Returns
    -------
    AccuracyReport
        Value, estimated absolute error, and the largest number of terms
        used by any single series.
    """
    a, c, z = complex(a), complex(c), complex(z)
    if _nonpositive_integer(c):
        raise PoleError(f"kummer_f: c={c} is a non-positive integer")
    if z == 0:
        return AccuracyReport(1 + 0j, 0.0, 0, "series")
    rho = abs(z)
    if rho >= SWITCH_RADIUS:
        rep, envelope = kummer_asymptotic(a, c, z, cap)
        if rep.est_abs_error <= rtol * envelope:
            return rep
    if rho <= _SERIES_RADIUS:
        value, _, err, used = _series(a, c, z, cap)
        return AccuracyReport(value, err, used, "series")
    return _continued(a, c, z, cap)


def kummer(a: complex, c: complex, z: complex) -> complex:
    """Shorthand for ``kummer_f(a, c, z).value``."""
    return kummer_f(a, c, z).value


# ---------------------------------------------------------------------------
# Gegenbauer
# ---------------------------------------------------------------------------

def gegenbauer(n: int, lam: float, x):
    """C_n^lam(x) by the three-term recurrence.

    Works elementwise on arrays.
    """
    if n < 0:
        raise ValueError("degree must be non-negative")
    x = np.asarray(x, dtype=float)
    c_prev = np.ones_like(x)
    if n == 0:
        return c_prev if c_prev.ndim else float(c_prev)
    c_cur = 2.0 * lam * x
    for j in range(2, n + 1):
        c_prev, c_cur = c_cur, (2.0 * x * (j + lam - 1.0) * c_cur - (j + 2.0 * lam - 2.0) * c_prev) / j
    return c_cur if c_cur.ndim else float(c_cur)


# ---------------------------------------------------------------------------
# Wigner D
# ---------------------------------------------------------------------------

def _twice(q) -> int:
    two_q = Fraction(q).limit_denominator(4) * 2
    if two_q.denominator != 1:
        raise ValueError(f"{q} is not an integer or half-integer")
    return int(two_q)


def check_angular_labels(L, m, mp) -> tuple[int, int, int]:
    """Validate (L, m, m') and return them doubled as integers."""
    L2, m2, mp2 = _twice(L), _twice(m), _twice(mp)
    if L2 < 0:
        raise ValueError("L must be non-negative")
    if abs(m2) > L2 or abs(mp2) > L2:
        raise ValueError(f"|m|, |m'| must not exceed L (L={L}, m={m}, m'={mp})")
    if (L2 - m2) % 2 or (L2 - mp2) % 2:
        raise ValueError(f"m={m}, m'={mp} not in the integrality class of L={L}")
    return L2, m2, mp2


def _little_d_terms(L2: int, m2: int, mp2: int) -> list[tuple[float, int, int]]:
    """Terms (coef, p, q) with d(beta) = sum coef cos^p(beta/2) sin^q(beta/2)."""
    jm, jmm = (L2 + m2) // 2, (L2 - m2) // 2
    jp, jpm = (L2 + mp2) // 2, (L2 - mp2) // 2
    dm = (m2 - mp2) // 2
    root = math.sqrt(math.factorial(jm) * math.factorial(jmm) * math.factorial(jp) * math.factorial(jpm))
    terms = []
    for s in range(max(0, -dm), min(jp, jmm) + 1):
        den = math.factorial(jp - s) * math.factorial(s) * math.factorial(dm + s) * math.factorial(jmm - s)
        sign = -1.0 if (dm + s) % 2 else 1.0
        terms.append((sign * root / den, L2 - dm - 2 * s, dm + 2 * s))
    return terms


def _differentiate(terms: list[tuple[float, int, int]]) -> list[tuple[float, int, int]]:
    # d/dbeta cos^p(b/2) sin^q(b/2) = (1/2)[q cos^{p+1} sin^{q-1} - p cos^{p-1} sin^{q+1}]
    out = []
    for coef, p, q in terms:
        if q:
            out.append((0.5 * coef * q, p + 1, q - 1))
        if p:
            out.append((-0.5 * coef * p, p - 1, q + 1))
    return out


def wigner_small_d(L, m, mp, beta: float, deriv: int = 0) -> float:
    """d^L_{m m'}(beta) or its first/second derivative in beta."""
    terms = _little_d_terms(*check_angular_labels(L, m, mp))
    for _ in range(deriv):
        terms = _differentiate(terms)
    cb, sb = math.cos(0.5 * beta), math.sin(0.5 * beta)
    return sum(coef * cb**p * sb**q for coef, p, q in terms)


def wigner_D(L, m, mp, alpha: float, beta: float, gamma: float) -> complex:
    """D^L_{m m'}(alpha, beta, gamma) = exp(-i m alpha) d^L_{m m'}(beta) exp(-i m' gamma).

    ``L``, ``m`` and ``mp`` may be half-integers (floats or Fractions).
    """
    d = wigner_small_d(L, m, mp, beta)
    return cmath.exp(-1j * (float(m) * alpha + float(mp) * gamma)) * d


def casimir_wigner_D(L, m, mp, alpha: float, beta: float, gamma: float) -> complex:
    """The Euler-angle Casimir operator L^2 applied to D^L_{m m'} analytically.

    L^2 = -[d_bb + cot(b) d_b + (d_aa - 2 cos(b) d_ag + d_gg) / sin(b)^2].
    """
    m, mp = float(m), float(mp)
    d0 = wigner_small_d(L, m, mp, beta)
    d1 = wigner_small_d(L, m, mp, beta, 1)
    d2 = wigner_small_d(L, m, mp, beta, 2)
    sb, cb = math.sin(beta), math.cos(beta)
    # alpha, gamma derivatives act as multiplication by -i m, -i m'
    angular = -(m * m) + 2.0 * cb * m * mp - mp * mp
    value = -(d2 + cb / sb * d1 + angular / sb**2 * d0)
    return cmath.exp(-1j * (m * alpha + mp * gamma)) * value
