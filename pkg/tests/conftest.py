import os

import pytest
from hypothesis import HealthCheck, settings

from rfi_coexist.channel import ChannelParams
from rfi_coexist.geomodel import Geometry
from rfi_coexist.propagation import Propagation
from rfi_coexist.rficumulants import NetworkParams, RadiometerParams

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=400, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

SOP_ALPHAS = (2.01, 2.042, 2.074, 2.106, 2.138, 2.170)
SOP_LAMBDAS = (1200.0, 800.0, 500.0)


@pytest.fixture
def geo():
    return Geometry()


@pytest.fixture
def rad():
    return RadiometerParams()


@pytest.fixture
def ch():
    return ChannelParams()


@pytest.fixture
def net():
    return NetworkParams()


@pytest.fixture
def metre_prop():
    """Reference distance of one metre: formulas evaluated in plain SI units."""
    return Propagation(reference_distance_m=1.0)
