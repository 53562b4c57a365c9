"""Continuum states of the five-dimensional Coulomb problem.

Hurwitz map and oscillator duality, hyperspherical and parabolic continuum
bases, and L = 0 Coulomb scattering, with an in-house confluent
hypergeometric function for complex parameters.
"""

from .params import PhysParams

__all__ = ["PhysParams"]
__version__ = "0.1.0"
