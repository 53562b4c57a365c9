"""
Hurwitz map R^8 -> R^5 and the oscillator/Coulomb duality.

    x0      = u0^2 + u1^2 + u2^2 + u3^2 - u4^2 - u5^2 - u6^2 - u7^2
    x2 + ix1 = 2[(u0 + iu1)(u5 + iu4) + (u2 - iu3)(u7 - iu6)]
    x4 + ix3 = 2[(u0 + iu1)(u7 + iu6) - (u2 - iu3)(u5 - iu4)]

so |x| = |u|^2. The minus sign in the last line is required: with a plus
the cross terms of |x|^2 add instead of cancelling and neither |x| = |u|^2
nor J_a x = 0 holds. The fiber generators J_a = (i/2) u^T A_a grad annihilate any
function of x alone, and the Laplacians are related by

    Delta_8 = 4 r Delta_5 - (4/r) J^2.

Test fields are ``Field`` objects; when they carry analytic gradient and
Hessian those are used, otherwise Richardson central differences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Callable

import numpy as np

from . import numdiff
from .params import PhysParams


class SingularPointError(ValueError):
    """Evaluation requested at u = 0 where r = |u|^2 vanishes."""


def hurwitz_map(u) -> np.ndarray:
    """Map points of R^8 to R^5; works on arrays of shape (..., 8)."""
    u = np.asarray(u, dtype=float)
    if u.shape[-1] != 8:
        raise ValueError(f"expected 8 coordinates, got shape {u.shape}")
    u0, u1, u2, u3, u4, u5, u6, u7 = np.moveaxis(u, -1, 0)
    x0 = u0**2 + u1**2 + u2**2 + u3**2 - u4**2 - u5**2 - u6**2 - u7**2
    p = u0 + 1j * u1
    q = u2 - 1j * u3
    w1 = 2.0 * (p * (u5 + 1j * u4) + q * (u7 - 1j * u6))
    w2 = 2.0 * (p * (u7 + 1j * u6) - q * (u5 - 1j * u4))
    return np.stack([x0, w1.imag, w1.real, w2.imag, w2.real], axis=-1)


def euler_identity_residual(u) -> np.ndarray | float:
    """| |u|^4 - |x(u)|^2 |, elementwise over leading axes."""
    u = np.asarray(u, dtype=float)
    x = hurwitz_map(u)
    res = np.abs(np.sum(u * u, axis=-1) ** 2 - np.sum(x * x, axis=-1))
    return float(res) if res.ndim == 0 else res


def _quadratic_forms() -> np.ndarray:
    """Symmetric Q_a with x_a = u^T Q_a u, recovered by polarization."""
    eye = np.eye(8)
    diag = hurwitz_map(eye)
    forms = np.zeros((5, 8, 8))
    for i in range(8):
        forms[:, i, i] = diag[i]
        for j in range(i):
            both = hurwitz_map(eye[i] + eye[j])
            forms[:, i, j] = forms[:, j, i] = 0.5 * (both - diag[i] - diag[j])
    return forms


QUADRATIC_FORMS = _quadratic_forms()
QUADRATIC_FORMS.setflags(write=False)


def _generator(pairs) -> np.ndarray:
    # J = (i/2) sum_{ij} u_i A_ij d/du_j; pairs list (i, j, sign)
    m = np.zeros((8, 8))
    for i, j, s in pairs:
        m[i, j] = s
    m.setflags(write=False)
    return m


# rows read straight off the operator definitions: u_i d_j -> A[i, j]
J_MATRICES = (
    _generator([(1, 0, 1), (0, 1, -1), (3, 2, 1), (2, 3, -1),
                (5, 4, 1), (4, 5, -1), (7, 6, 1), (6, 7, -1)]),
    _generator([(2, 0, 1), (3, 1, -1), (0, 2, -1), (1, 3, 1),
                (6, 4, -1), (7, 5, 1), (4, 6, 1), (5, 7, -1)]),
    _generator([(3, 0, 1), (2, 1, 1), (1, 2, -1), (0, 3, -1),
                (7, 4, -1), (6, 5, -1), (5, 6, 1), (4, 7, 1)]),
)


# ---------------------------------------------------------------------------
# scalar fields
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Field:
    """Scalar field on R^dim with optional analytic gradient and Hessian."""

    value: Callable[[np.ndarray], complex]
    dim: int
    grad: Callable[[np.ndarray], np.ndarray] | None = None
    hess: Callable[[np.ndarray], np.ndarray] | None = None
    scale: float = 1.0

    def __call__(self, x) -> complex:
        return self.value(np.asarray(x, dtype=float))

    def gradient(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.grad is not None:
            return np.asarray(self.grad(x), dtype=complex)
        return numdiff.gradient(self.value, x, scale=self.scale)

    def hessian(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.hess is not None:
            return np.asarray(self.hess(x), dtype=complex)
        return numdiff.hessian(self.value, x, scale=self.scale)

    def laplacian(self, x) -> complex:
        x = np.asarray(x, dtype=float)
        if self.hess is not None:
            return complex(np.trace(self.hessian(x)))
        return numdiff.laplacian(self.value, x, scale=self.scale)[0]

    @property
    def analytic(self) -> bool:
        return self.grad is not None and self.hess is not None


def polynomial_field(terms: dict[tuple[int, ...], complex], dim: int = 8) -> Field:
    """Polynomial sum_k c_k prod_i x_i^{e_ki} with exact derivatives."""
    items = [(np.asarray(e, dtype=int), complex(c)) for e, c in terms.items()]
    for e, _ in items:
        if e.shape != (dim,) or (e < 0).any():
            raise ValueError(f"bad exponent tuple {tuple(e)} for dim={dim}")

    def mono(x, e):
        return np.prod(x**e)

    def value(x):
        return sum(c * mono(x, e) for e, c in items)

    def grad(x):
        g = np.zeros(dim, dtype=complex)
        for e, c in items:
            for i in np.flatnonzero(e):
                d = e.copy()
                d[i] -= 1
                g[i] += c * e[i] * mono(x, d)
        return g

    def hess(x):
        h = np.zeros((dim, dim), dtype=complex)
        for e, c in items:
            for i in np.flatnonzero(e):
                d = e.copy()
                d[i] -= 1
                for j in np.flatnonzero(d):
                    dd = d.copy()
                    dd[j] -= 1
                    h[i, j] += c * e[i] * d[j] * mono(x, dd)
        return h

    return Field(value, dim, grad, hess)


def monomial(*indices: int, dim: int = 8) -> Field:
    """Product of coordinates, e.g. ``monomial(0, 1)`` is u0 u1."""
    e = [0] * dim
    for i in indices:
        e[i] += 1
    return polynomial_field({tuple(e): 1.0}, dim)


def quadratic_monomials(dim: int = 8) -> list[Field]:
    return [monomial(i, j, dim=dim) for i, j in combinations_with_replacement(range(dim), 2)]


def constant_field(c: complex = 1.0, dim: int = 8) -> Field:
    return polynomial_field({(0,) * dim: c}, dim)


def pullback(f5: Field) -> Field:
    """f5 composed with the Hurwitz map, derivatives by the chain rule."""
    if f5.dim != 5:
        raise ValueError("pullback expects a field on R^5")

    def value(u):
        return f5(hurwitz_map(u))

    if not f5.analytic:
        return Field(value, 8, scale=math.sqrt(f5.scale))

    def grad(u):
        # d x_a / d u = 2 Q_a u
        jac = 2.0 * QUADRATIC_FORMS @ u
        return jac.T @ f5.gradient(hurwitz_map(u))

    def hess(u):
        x = hurwitz_map(u)
        g5, h5 = f5.gradient(x), f5.hessian(x)
        jac = 2.0 * QUADRATIC_FORMS @ u
        return jac.T @ h5 @ jac + 2.0 * np.tensordot(g5, QUADRATIC_FORMS, axes=1)

    return Field(value, 8, grad, hess)


# ---------------------------------------------------------------------------
# J operators
# ---------------------------------------------------------------------------

def _check_index(a: int) -> np.ndarray:
    if a not in (1, 2, 3):
        raise ValueError(f"J index must be 1, 2 or 3, got {a}")
    return J_MATRICES[a - 1]


def apply_J(a: int, f: Field, u) -> complex:
    """(J_a f)(u)."""
    A = _check_index(a)
    u = np.asarray(u, dtype=float)
    return complex(0.5j * (u @ A @ f.gradient(u)))


def apply_JJ(a: int, b: int, f: Field, u) -> complex:
    """(J_a J_b f)(u) from the gradient and Hessian of f.

    J_a J_b f = -(1/4)[u^T A_a A_b grad f + (A_a^T u)^T H (A_b^T u)].
    """
    A, B = _check_index(a), _check_index(b)
    u = np.asarray(u, dtype=float)
    g, h = f.gradient(u), f.hessian(u)
    return complex(-0.25 * (u @ A @ B @ g + (A.T @ u) @ h @ (B.T @ u)))


def apply_J_squared(f: Field, u) -> complex:
    return sum(apply_JJ(a, a, f, u) for a in (1, 2, 3))


def _levi_civita(a: int, b: int) -> tuple[int, int]:
    if a == b:
        return 0, 0
    c = 6 - a - b
    sign = 1 if (a, b, c) in ((1, 2, 3), (2, 3, 1), (3, 1, 2)) else -1
    return sign, c


def commutator_residual(a: int, b: int, f: Field, u) -> float:
    """|([J_a, J_b] - i eps_abc J_c) f (u)|."""
    comm = apply_JJ(a, b, f, u) - apply_JJ(b, a, f, u)
    sign, c = _levi_civita(a, b)
    rhs = 1j * sign * apply_J(c, f, u) if sign else 0j
    return abs(comm - rhs)


# ---------------------------------------------------------------------------
# Laplacian identity and duality
# ---------------------------------------------------------------------------

def _require_nonzero(u) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    if not np.any(u):
        raise SingularPointError("u = 0 maps to the Coulomb centre")
    return u


def laplacian_identity_terms(f5: Field, u, method: str = "fd") -> tuple[complex, complex]:
    """(Delta_8 (f5 o map)(u), 4 r Delta_5 f5 (x(u))).

    ``method="fd"`` differences the composed function in R^8 directly;
    ``method="analytic"`` uses the chain rule and needs analytic partials.
    """
    u = _require_nonzero(u)
    x = hurwitz_map(u)
    r = float(np.linalg.norm(x))
    if method == "analytic":
        if not f5.analytic:
            raise ValueError("analytic method needs f5 gradient and Hessian")
        lap8 = pullback(f5).laplacian(u)
    elif method == "fd":
        scale = float(np.linalg.norm(u))
        lap8 = numdiff.laplacian(lambda v: f5(hurwitz_map(v)), u, scale=scale)[0]
    else:
        raise ValueError(f"unknown method {method!r}")
    return complex(lap8), 4.0 * r * f5.laplacian(x)


def laplacian_identity_residual(f5: Field, u, method: str = "fd") -> float:
    """|Delta_8(f5 o map) - 4 r Delta_5 f5| at u; J^2 kills functions of x."""
    lap8, rhs = laplacian_identity_terms(f5, u, method)
    return abs(lap8 - rhs)


@dataclass(frozen=True)
class DualityParams:
    """Oscillator frequency and energy tied to the Coulomb eps and e^2.

    Built by ``from_oscillator`` or ``from_coulomb`` so that
    eps = mu omega^2 / 8 and E = 4 e^2 hold.
    """

    omega: float
    E: float
    eps: float
    e2: float
    mu: float = 1.0
    hbar: float = 1.0

    @classmethod
    def from_oscillator(cls, omega: float, E: float, mu: float = 1.0, hbar: float = 1.0) -> "DualityParams":
        return cls(omega=omega, E=E, eps=mu * omega**2 / 8.0, e2=E / 4.0, mu=mu, hbar=hbar)

    @classmethod
    def from_coulomb(cls, p: PhysParams) -> "DualityParams":
        omega = math.sqrt(8.0 * p.eps / p.mu)
        return cls(omega=omega, E=4.0 * p.e2, eps=p.eps, e2=p.e2, mu=p.mu, hbar=p.hbar)

    def coulomb_params(self) -> PhysParams:
        return PhysParams.from_coupling(self.e2, self.eps, self.mu, self.hbar)


def duality_terms(psi5: Callable[[np.ndarray], complex], p: DualityParams, u, J: float = 0.0) -> dict:
    """Pieces of the 8D repulsive-oscillator equation for psi(u) = psi5(x(u)).

    For ``J > 0`` the fiber factor is not available as a function, so J^2 is
    replaced by its eigenvalue J(J+1) and only the radial content is tested.
    """
    u = _require_nonzero(u)
    u2 = float(u @ u)
    r = u2
    scale = math.sqrt(u2)
    lap8, psi = numdiff.laplacian(lambda v: psi5(hurwitz_map(v)), u, scale=scale)
    if J:
        lap8 = lap8 - 4.0 / r * J * (J + 1) * psi
    kinetic = -(p.hbar**2) / (2.0 * p.mu) * lap8
    potential = -0.5 * p.mu * p.omega**2 * u2 * psi
    energy = p.E * psi
    return {"psi": psi, "kinetic": kinetic, "potential": potential, "energy": energy,
            "residual": abs(kinetic + potential - energy)}


def duality_residual(psi5: Callable[[np.ndarray], complex], p: DualityParams, u, J: float = 0.0) -> float:
    """Residual of (-hbar^2/2mu Delta_8 - mu omega^2 u^2 / 2 - E) psi, relative to the largest term.

    Returns 0 when psi vanishes identically at the stencil.
    """
    t = duality_terms(psi5, p, u, J)
    scale = max(abs(t["kinetic"]), abs(t["potential"]), abs(t["energy"]))
    return 0.0 if scale == 0 else t["residual"] / scale
