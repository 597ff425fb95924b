"""Spherical Earth / satellite geometry.

The Earth's centre is the origin and the satellite sits on the +z axis at
distance ``h`` from it. Lengths are carried in metres; the configuration
layer accepts kilometres and converts at the boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = ["Geometry", "cap_half_angle", "exposed_cap_area", "distance_bounds",
           "mainlobe_distance", "expected_mainlobe_clusters"]

KM = 1000.0


@dataclass(frozen=True)
class Geometry:
    """Earth radius, satellite radius and main-lobe footprint description.

    ``eq28_form`` selects which trigonometric function of the incidence
    angle enters the main-lobe range equation. ``"cos"`` reproduces the
    reference 865.5 km slant range; ``"sin"`` is kept for comparison.
    """

    earth_radius_m: float = 6371.0 * KM
    sat_center_distance_m: float = 7056.0 * KM
    incidence_deg: float = 40.0
    footprint_side_km: float = 40.0
    eq28_form: str = "cos"

    def __post_init__(self):
        if not self.earth_radius_m > 0:
            raise ValueError("earth_radius_m must be positive")
        if not self.sat_center_distance_m > self.earth_radius_m:
            raise ValueError("satellite must be above the Earth's surface")
        if not 0.0 <= self.incidence_deg < 90.0:
            raise ValueError("incidence_deg must lie in [0, 90)")
        if not self.footprint_side_km > 0:
            raise ValueError("footprint_side_km must be positive")
        if self.eq28_form not in ("cos", "sin"):
            raise ValueError("eq28_form must be 'cos' or 'sin'")


def cap_half_angle(g: Geometry) -> float:
    """Half-angle (radians, at the Earth's centre) of the visible cap."""
    return math.acos(g.earth_radius_m / g.sat_center_distance_m)


def exposed_cap_area(g: Geometry) -> float:
    """Area (m^2) of the spherical cap visible from the satellite."""
    re, h = g.earth_radius_m, g.sat_center_distance_m
    return 2.0 * math.pi * re * re * (1.0 - re / h)


def distance_bounds(g: Geometry) -> tuple[float, float]:
    """(nadir distance, horizon distance) from the satellite, in metres."""
    re, h = g.earth_radius_m, g.sat_center_distance_m
    return h - re, math.sqrt(h * h - re * re)


def mainlobe_distance(g: Geometry) -> float:
    """Slant range (m) from the satellite to the main-lobe footprint.

    Positive root of d^2 + 2 d r_e t(i) + r_e^2 - h^2 = 0 with t = cos or
    sin of the incidence angle, per ``g.eq28_form``.
    """
    re, h = g.earth_radius_m, g.sat_center_distance_m
    ang = math.radians(g.incidence_deg)
    t = math.cos(ang) if g.eq28_form == "cos" else math.sin(ang)
    bt = re * t
    # the root is written in cancellation-free form
    return (h * h - re * re) / (bt + math.sqrt(bt * bt + h * h - re * re))


def expected_mainlobe_clusters(g: Geometry, lambda_c_per_km2: float) -> float:
    """Mean number of cluster centres inside the square main-lobe footprint."""
    if lambda_c_per_km2 < 0:
        raise ValueError("cluster intensity must be non-negative")
    return g.footprint_side_km ** 2 * lambda_c_per_km2
