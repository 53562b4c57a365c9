"""Residuals of the 5D Coulomb Schrodinger equation.

In units fixed by ``PhysParams`` the equation reads

    Delta_5 psi + (k^2 + 2/(a r)) psi = 0.

Residuals are reported relative to the largest of the individual terms so
that a single tolerance works across nodes and amplitudes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import numdiff
from .params import PhysParams


@dataclass(frozen=True)
class Residual:
    absolute: float
    scale: float

    @property
    def relative(self) -> float:
        return 0.0 if self.scale == 0 else self.absolute / self.scale


def relative_residual(*terms: complex) -> Residual:
    """|sum(terms)| judged against max |term|."""
    total = sum(terms, 0j)
    return Residual(abs(total), max(abs(t) for t in terms))


def coulomb_residual(psi: Callable[[np.ndarray], complex], x, p: PhysParams,
                     h: float | None = None) -> Residual:
    """Residual of the Coulomb equation for a Cartesian wavefunction at ``x``.

    The Laplacian is a Richardson-extrapolated five-point Cartesian stencil,
    independent of any curvilinear coordinate formula.
    """
    x = np.asarray(x, dtype=float)
    r = float(np.linalg.norm(x))
    if h is None:
        h = numdiff.SECOND_STEP * min(1.0 / p.k, r)
    lap, psi0 = numdiff.laplacian(psi, x, h=h)
    return relative_residual(lap, p.k**2 * psi0, 2.0 * p.inv_a / r * psi0)
