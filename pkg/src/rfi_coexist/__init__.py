"""Aggregate terrestrial RFI at a spaceborne radiometer and intra-cluster downlink rates.

Modules
-------
geomodel      spherical Earth / satellite geometry
mathkernels   special functions and adaptive quadrature
channel       shadowed Rician fading
rficumulants  MGFs, cumulants and outage bounds of the RFI temperature
montecarlo    stochastic oracle for the RFI statistics
spectral      intra-cluster spectral efficiency and sum throughput
config, cli   scenario files and the command-line front end
"""

from .channel import ChannelParams
from .geomodel import Geometry
from .montecarlo import SimControls
from .propagation import Propagation
from .rficumulants import LobeCumulants, NetworkParams, RadiometerParams, lobe_stats, sop_upper_bound
from .spectral import IntraClusterParams

__all__ = ["ChannelParams", "Geometry", "SimControls", "Propagation", "LobeCumulants",
           "NetworkParams", "RadiometerParams", "lobe_stats", "sop_upper_bound",
           "IntraClusterParams"]

__version__ = "0.1.0"
