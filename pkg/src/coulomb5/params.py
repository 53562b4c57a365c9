"""Physical parameter set shared by every module."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace


@dataclass(frozen=True)
class PhysParams:
    """Bohr radius ``a`` and wavenumber ``k``, with hbar and mu.

    The coupling and the energy are derived: e^2 = hbar^2 / (mu a) and
    eps = hbar^2 k^2 / (2 mu). ``a = inf`` is the free particle.
    Internal convention is hbar = mu = 1.
    """

    a: float = 1.0
    k: float = 1.0
    hbar: float = 1.0
    mu: float = 1.0

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError(f"Bohr radius must be positive, got a={self.a}")
        if not (self.k > 0 and math.isfinite(self.k)):
            raise ValueError(f"wavenumber must be positive and finite, got k={self.k}")
        if not (self.hbar > 0 and self.mu > 0):
            raise ValueError("hbar and mu must be positive")

    @classmethod
    def from_coupling(cls, e2: float, eps: float, mu: float = 1.0, hbar: float = 1.0) -> "PhysParams":
        a = math.inf if e2 == 0 else hbar**2 / (mu * e2)
        return cls(a=a, k=math.sqrt(2.0 * mu * eps) / hbar, hbar=hbar, mu=mu)

    @property
    def e2(self) -> float:
        return 0.0 if math.isinf(self.a) else self.hbar**2 / (self.mu * self.a)

    @property
    def eps(self) -> float:
        return (self.hbar * self.k) ** 2 / (2.0 * self.mu)

    @property
    def inv_ak(self) -> float:
        """Dimensionless Coulomb strength 1/(a k)."""
        return 1.0 / (self.a * self.k)

    @property
    def inv_a(self) -> float:
        return 1.0 / self.a

    def with_k(self, k: float) -> "PhysParams":
        return replace(self, k=k)

    def as_dict(self) -> dict:
        return {"a": self.a, "k": self.k, "hbar": self.hbar, "mu": self.mu,
                "e2": self.e2, "eps": self.eps}
