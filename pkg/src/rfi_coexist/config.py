"""Scenario files: INI sections that mirror the parameter dataclasses.

Grammar::

    # rfi-coexist scenario v1
    [geometry]            -> Geometry
    [radiometer]          -> RadiometerParams
    [network]             -> NetworkParams
    [channel]             -> ChannelParams
    [intra]               -> IntraClusterParams
    [propagation]         -> Propagation
    [sim]                 -> SimControls
    [sweep]               (optional) alpha_list, lambda_bs_list, tau_list

Keys are the dataclass field names, so units are carried in the names
(``_m``, ``_hz``, ``_w``, ``_per_km2``). Floats are written with ``repr``
so serialize -> parse -> serialize is byte-identical. Sweep lists are
comma separated.
"""

from __future__ import annotations

import configparser
import dataclasses
from dataclasses import dataclass, field
from importlib import resources

from .channel import ChannelParams
from .geomodel import Geometry
from .montecarlo import SimControls
from .propagation import Propagation
from .rficumulants import NetworkParams, RadiometerParams
from .spectral import IntraClusterParams

__all__ = ["ConfigError", "Sweep", "ScenarioConfig", "parse", "serialize", "load", "dump",
           "load_bundled", "HEADER"]

HEADER = "# rfi-coexist scenario v1"


class ConfigError(ValueError):
    """Invalid scenario; the message starts with the offending field path."""


@dataclass(frozen=True)
class Sweep:
    alpha_list: tuple[float, ...]
    lambda_bs_list: tuple[float, ...]
    tau_list: tuple[float, ...]

    def __post_init__(self):
        for name in ("alpha_list", "lambda_bs_list", "tau_list"):
            if not getattr(self, name):
                raise ConfigError(f"sweep.{name}: must be non-empty")
        if any(a <= 2.0 for a in self.alpha_list):
            raise ConfigError("sweep.alpha_list: exponents must exceed 2")
        if any(t <= 0 for t in self.tau_list):
            raise ConfigError("sweep.tau_list: thresholds must be positive")
        if any(l < 0 for l in self.lambda_bs_list):
            raise ConfigError("sweep.lambda_bs_list: intensities must be non-negative")


@dataclass(frozen=True)
class ScenarioConfig:
    geometry: Geometry = field(default_factory=Geometry)
    radiometer: RadiometerParams = field(default_factory=RadiometerParams)
    network: NetworkParams = field(default_factory=NetworkParams)
    channel: ChannelParams = field(default_factory=ChannelParams)
    intra: IntraClusterParams = field(default_factory=IntraClusterParams)
    propagation: Propagation = field(default_factory=Propagation)
    sim: SimControls = field(default_factory=SimControls)
    sweep: Sweep | None = None

    def grid(self) -> Sweep:
        """The sweep, or a single point at the configured defaults."""
        if self.sweep is not None:
            return self.sweep
        return Sweep((self.network.alpha,), (self.network.lambda_bs,), (0.8,))


_SECTIONS = {
    "geometry": Geometry,
    "radiometer": RadiometerParams,
    "network": NetworkParams,
    "channel": ChannelParams,
    "intra": IntraClusterParams,
    "propagation": Propagation,
    "sim": SimControls,
}


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _convert(path: str, kind: str, text: str):
    try:
        if kind == "float":
            return float(text)
        if kind == "int":
            return int(text)
        if kind == "bool":
            low = text.strip().lower()
            if low in ("true", "yes", "1", "on"):
                return True
            if low in ("false", "no", "0", "off"):
                return False
            raise ValueError(f"not a boolean: {text!r}")
        return text.strip()
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from None


def _float_list(path: str, text: str) -> tuple[float, ...]:
    items = [t for t in (s.strip() for s in text.split(",")) if t]
    return tuple(_convert(path, "float", t) for t in items)


def serialize(cfg: ScenarioConfig) -> str:
    lines = [HEADER]
    for name, cls in _SECTIONS.items():
        obj = getattr(cfg, name)
        lines.append(f"[{name}]")
        for f in dataclasses.fields(cls):
            lines.append(f"{f.name} = {_fmt(getattr(obj, f.name))}")
        lines.append("")
    if cfg.sweep is not None:
        lines.append("[sweep]")
        for f in dataclasses.fields(Sweep):
            lines.append(f"{f.name} = " + ", ".join(repr(float(v)) for v in getattr(cfg.sweep, f.name)))
        lines.append("")
    return "\n".join(lines)


def parse(text: str) -> ScenarioConfig:
    cp = configparser.ConfigParser(interpolation=None)
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"<file>: {exc}") from None
    unknown = set(cp.sections()) - set(_SECTIONS) - {"sweep"}
    if unknown:
        raise ConfigError(f"{sorted(unknown)[0]}: unknown section")
    parts = {}
    for name, cls in _SECTIONS.items():
        if not cp.has_section(name):
            parts[name] = cls()
            continue
        sec = cp[name]
        known = {f.name: f for f in dataclasses.fields(cls)}
        for key in sec:
            if key not in known:
                raise ConfigError(f"{name}.{key}: unknown key")
        kwargs = {k: _convert(f"{name}.{k}", known[k].type, sec[k]) for k in sec}
        try:
            parts[name] = cls(**kwargs)
        except ValueError as exc:
            raise ConfigError(f"{name}: {exc}") from None
    sweep = None
    if cp.has_section("sweep"):
        sec = cp["sweep"]
        names = [f.name for f in dataclasses.fields(Sweep)]
        for key in sec:
            if key not in names:
                raise ConfigError(f"sweep.{key}: unknown key")
        missing = [n for n in names if n not in sec]
        if missing:
            raise ConfigError(f"sweep.{missing[0]}: missing")
        sweep = Sweep(**{n: _float_list(f"sweep.{n}", sec[n]) for n in names})
    return ScenarioConfig(**parts, sweep=sweep)


def load(path) -> ScenarioConfig:
    with open(path) as fh:
        return parse(fh.read())


def dump(cfg: ScenarioConfig, path) -> None:
    with open(path, "w") as fh:
        fh.write(serialize(cfg))


def load_bundled(name: str = "table1.cfg") -> ScenarioConfig:
    """Bundled scenario with the reference simulation parameters."""
    text = resources.files("rfi_coexist").joinpath("data").joinpath(name).read_text()
    return parse(text)
