"""Central finite differences with one Richardson halving.

Second differences carry an O(h^2) error which one halving removes, leaving
O(h^4) truncation against O(eps/h^2) rounding; the balance point is
h ~ eps^(1/6) * scale, hence ``SECOND_STEP``. First differences balance at
eps^(1/5).
"""

from __future__ import annotations

from typing import Callable

import numpy as np

EPS = float(np.finfo(float).eps)
FIRST_STEP = EPS ** 0.2
SECOND_STEP = EPS ** (1.0 / 6.0)


def _richardson(coarse, fine):
    return (4.0 * fine - coarse) / 3.0


def derivative(f: Callable[[float], complex], x: float, h: float | None = None, scale: float = 1.0):
    """df/dx at ``x``."""
    h = FIRST_STEP * scale if h is None else h

    def central(step):
        return (f(x + step) - f(x - step)) / (2.0 * step)

    return _richardson(central(h), central(0.5 * h))


def second_derivative(f: Callable[[float], complex], x: float, h: float | None = None,
                      scale: float = 1.0, f0=None):
    """d^2f/dx^2 at ``x``."""
    h = SECOND_STEP * scale if h is None else h
    f0 = f(x) if f0 is None else f0

    def central(step):
        return (f(x + step) - 2.0 * f0 + f(x - step)) / (step * step)

    return _richardson(central(h), central(0.5 * h))


def first_and_second(f: Callable[[float], complex], x: float, h: float | None = None,
                     scale: float = 1.0):
    """(f, f', f'') at ``x`` from a shared five-point Richardson stencil."""
    h = SECOND_STEP * scale if h is None else h
    f0 = f(x)
    fp, fm = f(x + h), f(x - h)
    fp2, fm2 = f(x + 0.5 * h), f(x - 0.5 * h)
    d1 = _richardson((fp - fm) / (2.0 * h), (fp2 - fm2) / h)
    d2 = _richardson((fp - 2.0 * f0 + fm) / h**2, (fp2 - 2.0 * f0 + fm2) / (0.25 * h * h))
    return f0, d1, d2


def gradient(f: Callable[[np.ndarray], complex], x, h: float | None = None, scale: float = 1.0):
    x = np.asarray(x, dtype=float)
    h = FIRST_STEP * scale if h is None else h
    out = np.zeros(x.size, dtype=complex)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = 1.0
        out[i] = derivative(lambda t: f(x + t * e), 0.0, h)
    return out


def hessian(f: Callable[[np.ndarray], complex], x, h: float | None = None, scale: float = 1.0):
    """Full Hessian; off-diagonal entries from the four-corner stencil."""
    x = np.asarray(x, dtype=float)
    n = x.size
    h = SECOND_STEP * scale if h is None else h
    f0 = f(x)
    out = np.zeros((n, n), dtype=complex)
    eye = np.eye(n)
    for i in range(n):
        out[i, i] = second_derivative(lambda t: f(x + t * eye[i]), 0.0, h, f0=f0)
        for j in range(i):
            def mixed(step):
                ei, ej = step * eye[i], step * eye[j]
                return (f(x + ei + ej) - f(x + ei - ej) - f(x - ei + ej) + f(x - ei - ej)) / (4 * step * step)
            out[i, j] = out[j, i] = _richardson(mixed(h), mixed(0.5 * h))
    return out


def laplacian(f: Callable[[np.ndarray], complex], x, h: float | None = None, scale: float = 1.0):
    """Cartesian Laplacian, returned together with f(x)."""
    x = np.asarray(x, dtype=float)
    h = SECOND_STEP * scale if h is None else h
    f0 = f(x)
    total = 0j
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = 1.0
        total += second_derivative(lambda t: f(x + t * e), 0.0, h, f0=f0)
    return total, f0
