import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import quad

from rfi_coexist.geomodel import (Geometry, cap_half_angle, distance_bounds,
                                  expected_mainlobe_clusters, exposed_cap_area, mainlobe_distance)

KM = 1000.0


def test_cap_half_angle(geo):
    assert cap_half_angle(geo) == pytest.approx(math.acos(6371 / 7056), rel=1e-15)
    # 6371/7056 = 0.9029195; frozen arccos
    assert cap_half_angle(geo) == pytest.approx(0.4442820008, abs=1e-9)
    # cross-check against the horizon distance
    assert math.sin(cap_half_angle(geo)) * geo.sat_center_distance_m == pytest.approx(
        distance_bounds(geo)[1], rel=1e-12)


def test_cap_limits():
    re = 6371 * KM
    tight = Geometry(sat_center_distance_m=re * (1 + 1e-12))
    assert cap_half_angle(tight) < 2e-6
    assert exposed_cap_area(tight) < 1e-6 * 2 * math.pi * re ** 2
    far = Geometry(sat_center_distance_m=re * 1e9)
    assert cap_half_angle(far) == pytest.approx(math.pi / 2, abs=1e-8)
    assert exposed_cap_area(far) == pytest.approx(2 * math.pi * re ** 2, rel=1e-8)


def test_cap_area_and_cluster_count(geo):
    area = exposed_cap_area(geo)
    # frozen from 2 pi r_e^2 (1 - r_e/h) with the default radii
    assert area == pytest.approx(2.4758657e13, rel=1e-7)
    assert area / 1e6 * 1e-4 == pytest.approx(2475.866, abs=1e-3)


def test_cap_area_matches_spherical_integral(geo):
    re = geo.earth_radius_m
    th = cap_half_angle(geo)
    val, _ = quad(math.sin, 0.0, th, epsabs=0, epsrel=1e-13)
    assert exposed_cap_area(geo) == pytest.approx(2 * math.pi * re ** 2 * val, rel=1e-10)


def test_cap_area_by_rejection_sampling(geo):
    rng = np.random.default_rng(3)
    v = rng.normal(size=(400_000, 3))
    z = v[:, 2] / np.linalg.norm(v, axis=1)
    frac = np.mean(z >= geo.earth_radius_m / geo.sat_center_distance_m)
    sphere = 4 * math.pi * geo.earth_radius_m ** 2
    se = math.sqrt(frac * (1 - frac) / z.size)
    assert abs(frac - exposed_cap_area(geo) / sphere) < 4 * se


def test_distance_bounds(geo):
    d_min, d_max = distance_bounds(geo)
    assert d_min == pytest.approx(685 * KM)
    assert d_max == pytest.approx(3032.7 * KM, abs=0.05 * KM)
    assert (d_max ** 2 - d_min ** 2) / KM ** 2 == pytest.approx(8.728e6, rel=1e-4)
    g2 = Geometry(sat_center_distance_m=2 * geo.earth_radius_m)
    lo, hi = distance_bounds(g2)
    assert lo == pytest.approx(geo.earth_radius_m)
    assert hi == pytest.approx(geo.earth_radius_m * math.sqrt(3))


def test_mainlobe_distance_forms(geo):
    assert mainlobe_distance(geo) == pytest.approx(865.5 * KM, abs=0.1 * KM)
    sin_form = Geometry(eq28_form="sin")
    assert mainlobe_distance(sin_form) == pytest.approx(1000.7 * KM, abs=0.1 * KM)


def test_mainlobe_distance_limits(geo):
    d_min, d_max = distance_bounds(geo)
    assert mainlobe_distance(Geometry(incidence_deg=0.0)) == pytest.approx(d_min, rel=1e-12)
    # 90 degrees is excluded by the invariant; approach it
    assert mainlobe_distance(Geometry(incidence_deg=89.999999)) == pytest.approx(d_max, rel=1e-6)


@given(st.floats(0.5, 89.5), st.floats(6000.0, 7000.0), st.floats(1.001, 3.0))
def test_mainlobe_distance_properties(inc, re_km, ratio):
    g = Geometry(earth_radius_m=re_km * KM, sat_center_distance_m=re_km * KM * ratio,
                 incidence_deg=inc)
    d = mainlobe_distance(g)
    d_min, d_max = distance_bounds(g)
    assert d_min < d < d_max
    re, h = g.earth_radius_m, g.sat_center_distance_m
    # residual of the quadratic in km^2 units
    resid = (d * d + 2 * d * re * math.cos(math.radians(inc)) + re * re - h * h) / KM ** 2
    assert abs(resid) < 1e-3


def test_expected_mainlobe_clusters(geo):
    lam = expected_mainlobe_clusters(geo, 1e-4)
    assert lam == pytest.approx(0.16)
    assert [lam * b for b in (500, 800, 1200)] == pytest.approx([80, 128, 192])
    assert expected_mainlobe_clusters(geo, 0.0) == 0.0
    with pytest.raises(ValueError):
        expected_mainlobe_clusters(geo, -1.0)


@pytest.mark.parametrize("kwargs", [
    dict(earth_radius_m=0.0),
    dict(sat_center_distance_m=6371e3),
    dict(incidence_deg=90.0),
    dict(incidence_deg=-1.0),
    dict(footprint_side_km=0.0),
    dict(eq28_form="tan"),
])
def test_geometry_invariants(kwargs):
    with pytest.raises(ValueError):
        Geometry(**kwargs)
