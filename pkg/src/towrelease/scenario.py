"""Scenario files: INI text -> SimConfig.

Sections and keys:

    [wave]      amplitude*, period*, gravity, phase (or phase_deg)
    [tow]       rho, cd, sigma, theta (or theta_deg), rated_load
    [asv]       start "x,y", speed (or speed_kn), waypoints, waypt_update
    [rm2]       deploy_position "lat,lon", deploy_trigger, delta_m,
                resend_on_trigger, trigger_time
    [actuator]  actuation_time, fault, force, stroke, mass
    [sim]       dt, duration*, origin* "lat,lon", auv_speed, tow_offset,
                capture_radius, slack_margin, magnet_delay

Starred keys are required, as are the [wave], [rm2] and [sim] sections.
Values are SI; a key suffixed _kn is knots and _deg degrees, converted
on load.  Waypoint lists use "x1,y1:x2,y2:...".  Problems are collected
field by field and raised together as one ConfigError.
"""

from __future__ import annotations

import configparser
import math
from pathlib import Path
from typing import Callable, Sequence

from .actuator import ActuatorSpec, Fault
from .controller import ReleaseParams
from .errors import ConfigError, ParseError
from .geodesy import parse_latlon, LocalPoint
from .physics import KNOT, TowConfig, WaveField
from .simulator import MAX_ASV_SPEED, SimConfig, parse_waypoint_list

_SECTIONS: dict[str, set[str]] = {
    "wave": {"amplitude", "period", "gravity", "phase"},
    "tow": {"rho", "cd", "sigma", "theta", "rated_load"},
    "asv": {"start", "speed", "waypoints", "waypt_update"},
    "rm2": {
        "deploy_position", "deploy_trigger", "delta_m",
        "resend_on_trigger", "trigger_time",
    },
    "actuator": {"actuation_time", "fault", "force", "stroke", "mass"},
    "sim": {
        "dt", "duration", "origin", "auv_speed", "tow_offset",
        "capture_radius", "slack_margin", "magnet_delay",
    },
}

# Keys that accept a unit-suffixed variant in the file.
_ANGLE_KEYS = {("wave", "phase"), ("tow", "theta")}
_SPEED_KEYS = {("asv", "speed")}

_BOOL_STATES = {
    "true": True, "yes": True, "on": True, "1": True,
    "false": False, "no": False, "off": False, "0": False,
}


def _parse_bool(raw: str) -> bool:
    try:
        return _BOOL_STATES[raw.strip().lower()]
    except KeyError:
        raise ValueError(f"not a boolean: {raw!r}") from None


def _parse_fault(raw: str) -> Fault:
    name = raw.strip().lower()
    for fault in Fault:
        if fault.value == name:
            return fault
    raise ValueError(
        f"unknown fault {raw!r}; choose from "
        + ", ".join(f.value for f in Fault)
    )


def _parse_point(raw: str) -> LocalPoint:
    parts = raw.split(",")
    if len(parts) != 2:
        raise ValueError(f"expected 'x,y', got {raw!r}")
    return LocalPoint(float(parts[0]), float(parts[1]))


# Range checks applied after unit conversion, so e.g. speed_kn values
# are validated in m/s.
def _positive(value: float) -> None:
    if value <= 0.0:
        raise ValueError(f"must be positive, got {value}")


def _non_negative(value: float) -> None:
    if value < 0.0:
        raise ValueError(f"must be >= 0, got {value}")


def _asv_speed_range(value: float) -> None:
    if not 0.0 <= value <= MAX_ASV_SPEED:
        raise ValueError(f"must lie in [0, {MAX_ASV_SPEED}] m/s, got {value}")


def _theta_range(value: float) -> None:
    if not 0.0 <= value < math.pi / 2.0:
        raise ValueError(f"must lie in [0, pi/2) rad, got {value}")


def apply_override(cp: configparser.ConfigParser, text: str) -> None:
    """Apply one "section.key=value" override onto parsed file content."""
    target, sep, value = text.partition("=")
    section, dot, key = target.strip().partition(".")
    if not sep or not dot or not section or not key.strip():
        raise ParseError(
            f"override {text!r}: expected section.key=value"
        )
    if not cp.has_section(section):
        cp.add_section(section)
    cp.set(section, key.strip(), value.strip())


class _Values:
    """Raw scenario values keyed by (section, base key), plus error log."""

    def __init__(self) -> None:
        self.raw: dict[tuple[str, str], tuple[str, Callable[[float], float] | None]] = {}
        self.errors: list[str] = []

    def collect(self, cp: configparser.ConfigParser) -> None:
        for section in cp.sections():
            if section not in _SECTIONS:
                self.errors.append(f"{section}: unknown section")
                continue
            for key, raw in cp.items(section):
                base, conv = key, None
                if key.endswith("_deg") and (section, key[:-4]) in _ANGLE_KEYS:
                    base, conv = key[:-4], math.radians
                elif key.endswith("_kn") and (section, key[:-3]) in _SPEED_KEYS:
                    base, conv = key[:-3], lambda kn: kn * KNOT
                if base not in _SECTIONS[section]:
                    self.errors.append(f"{section}.{key}: unknown key")
                    continue
                if (section, base) in self.raw:
                    self.errors.append(
                        f"{section}.{key}: duplicate of {section}.{base}"
                    )
                    continue
                self.raw[(section, base)] = (raw, conv)

    def take(self, section: str, key: str, parse, default=None, required=False,
             check=None):
        entry = self.raw.pop((section, key), None)
        if entry is None:
            if required:
                self.errors.append(f"{section}.{key}: required key is missing")
            return default
        raw, conv = entry
        try:
            value = parse(raw)
            if conv is not None:
                value = conv(value)
            if check is not None:
                check(value)
            return value
        except (ValueError, ParseError) as exc:
            self.errors.append(f"{section}.{key}: {exc}")
            return default

    def finish(self) -> None:
        for section, key in self.raw:
            self.errors.append(f"{section}.{key}: unhandled key")  # pragma: no cover


def load_scenario(path: str | Path, overrides: Sequence[str] = ()) -> SimConfig:
    """Read, convert and cross-validate one scenario file.

    Overrides are "section.key=value" strings applied before parsing,
    so they flow through the same conversion and validation.
    """
    path = Path(path)
    cp = configparser.ConfigParser(
        interpolation=None, inline_comment_prefixes=("#", ";")
    )
    try:
        with open(path, encoding="utf-8") as fh:
            cp.read_file(fh, source=str(path))
    except OSError as exc:
        raise ConfigError(f"cannot read scenario {path}: {exc}") from None
    except configparser.Error as exc:
        raise ConfigError(f"malformed scenario {path}: {exc}") from None
    for text in overrides:
        apply_override(cp, text)

    vals = _Values()
    vals.collect(cp)
    for required in ("wave", "rm2", "sim"):
        if not cp.has_section(required):
            vals.errors.append(f"{required}: required section is missing")

    take = vals.take
    amplitude = take("wave", "amplitude", float, required=cp.has_section("wave"),
                     check=_non_negative)
    period = take("wave", "period", float, required=cp.has_section("wave"),
                  check=_positive)
    gravity = take("wave", "gravity", float, check=_positive)
    phase = take("wave", "phase", float, default=0.0)

    rho = take("tow", "rho", float, check=_positive)
    c_d = take("tow", "cd", float, check=_positive)
    sigma = take("tow", "sigma", float, check=_positive)
    theta = take("tow", "theta", float, check=_theta_range)
    rated_load = take("tow", "rated_load", float, check=_positive)

    asv_start = take("asv", "start", _parse_point)
    asv_speed = take("asv", "speed", float, check=_asv_speed_range)
    asv_waypoints = take("asv", "waypoints", parse_waypoint_list)
    waypt_update = take("asv", "waypt_update", str)

    deploy_position = take("rm2", "deploy_position", parse_latlon)
    use_trigger = take("rm2", "deploy_trigger", _parse_bool, default=False)
    delta = take("rm2", "delta_m", float, check=_positive)
    resend = take("rm2", "resend_on_trigger", _parse_bool, default=False)
    trigger_time = take("rm2", "trigger_time", float, check=_non_negative)

    actuation_time = take("actuator", "actuation_time", float, check=_positive)
    fault = take("actuator", "fault", _parse_fault, default=Fault.NONE)
    force = take("actuator", "force", float, check=_positive)
    stroke = take("actuator", "stroke", float, check=_positive)
    mass = take("actuator", "mass", float, check=_positive)

    dt = take("sim", "dt", float, check=_positive)
    duration = take("sim", "duration", float, required=cp.has_section("sim"),
                    check=_non_negative)
    origin = take("sim", "origin", parse_latlon, required=cp.has_section("sim"))
    auv_speed = take("sim", "auv_speed", float, check=_non_negative)
    tow_offset = take("sim", "tow_offset", float, check=_non_negative)
    capture_radius = take("sim", "capture_radius", float, check=_positive)
    slack_margin = take("sim", "slack_margin", float, check=_non_negative)
    magnet_delay = take("sim", "magnet_delay", float, check=_non_negative)
    vals.finish()

    def build(label: str, factory, **kwargs):
        kwargs = {k: v for k, v in kwargs.items() if v is not None}
        try:
            return factory(**kwargs)
        except ValueError as exc:
            vals.errors.append(f"{label}: {exc}")
            return None

    wave = None
    if amplitude is not None and period is not None:
        wave = build("wave", WaveField, amplitude=amplitude, period=period,
                     gravity=gravity, phase=phase)
    tow = build("tow", TowConfig, rho=rho, c_d=c_d, sigma=sigma, theta=theta,
                rated_load=rated_load)
    release = build(
        "rm2", ReleaseParams, deploy_position=deploy_position, delta=delta,
        use_trigger=use_trigger, resend_on_trigger=resend,
    )
    spec = build("actuator", ActuatorSpec, force=force, stroke=stroke, mass=mass)

    if vals.errors or wave is None or tow is None or release is None or spec is None:
        raise ConfigError(
            f"invalid scenario {path}:\n  " + "\n  ".join(vals.errors)
        )

    kwargs = dict(
        wave=wave, tow=tow, release=release, origin=origin,
        waypt_update=waypt_update, trigger_time=trigger_time,
        actuator_spec=spec, fault=fault,
    )
    for name, value in (
        ("asv_start", asv_start), ("asv_speed", asv_speed),
        ("asv_waypoints", asv_waypoints), ("auv_speed", auv_speed),
        ("dt", dt), ("duration", duration),
        ("actuation_time", actuation_time), ("magnet_delay", magnet_delay),
        ("tow_offset", tow_offset), ("capture_radius", capture_radius),
        ("slack_margin", slack_margin),
    ):
        if value is not None:
            kwargs[name] = value
    config = SimConfig(**kwargs)
    problems = config.validate()
    if problems:
        raise ConfigError(
            f"invalid scenario {path}:\n  " + "\n  ".join(problems)
        )
    return config
