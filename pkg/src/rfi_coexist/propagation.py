"""Physical constants and the path-loss reference distance.

Received power follows the free-space law with an excess exponent:

    p_rx = p_tx * (c / (4 pi f))^2 * x^-2 * (x / d0)^(2 - alpha)

For alpha = 2 the reference distance ``d0`` drops out. For alpha != 2 it
fixes the absolute level of the loss, so it is a physical parameter of the
model, not a unit choice. The shipped default d0 = 1 km is the convention
under which the reference SOP values are recovered (lengths in km, c in km/s);
d0 = 1 m corresponds to evaluating the same formulas in SI metres.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = ["BOLTZMANN", "Propagation", "DEFAULT_PROPAGATION"]

BOLTZMANN = 1.380649e-23   # J/K


@dataclass(frozen=True)
class Propagation:
    speed_of_light_m_s: float = 3.0e8
    reference_distance_m: float = 1000.0
    boltzmann_j_k: float = BOLTZMANN

    def __post_init__(self):
        if self.speed_of_light_m_s <= 0 or self.reference_distance_m <= 0:
            raise ValueError("speed of light and reference distance must be positive")
        if self.boltzmann_j_k <= 0:
            raise ValueError("Boltzmann constant must be positive")

    def wavelength_factor(self, freq_hz: float) -> float:
        """(c / (4 pi f))^2 in m^2."""
        return (self.speed_of_light_m_s / (4.0 * math.pi * freq_hz)) ** 2

    def excess_loss_scale(self, alpha: float) -> float:
        """d0^(alpha - 2): multiplies x^-alpha (metres) into the loss law."""
        return self.reference_distance_m ** (alpha - 2.0)


DEFAULT_PROPAGATION = Propagation()
