"""Deterministic simulator and control stack for releasing a towed
underwater vehicle from a surface tow, gated on wave-driven towline
tautness."""

from .actuator import (
    ActuatorSpec,
    DEPLOY_BYTE,
    Fault,
    MechState,
    ReleaseEvent,
    ReleaseMechanism,
    SerialChannel,
)
from .benchlab import (
    BenchGeometry,
    consistency_report,
    scale_to_bench,
    theta_crest,
    theta_experimental,
    theta_trough,
)
from .bus import (
    Message,
    MessageBus,
    Subscription,
    TOPIC_DEPLOY_EVENT,
    TOPIC_DEPLOY_TRIGGER,
    TOPIC_POSITION,
    TOPIC_WAYPT_UPDATE,
)
from .controller import DeployCommand, ReleaseNode, ReleaseParams, send_deploy
from .errors import (
    ChannelClosedError,
    ConfigError,
    FrameError,
    InfeasibleGeometryError,
    ParseError,
    RatedLoadExceededError,
    SimulationError,
    TowReleaseError,
)
from .geodesy import (
    EARTH_RADIUS,
    GeoPoint,
    LocalFrame,
    LocalPoint,
    local_distance,
    parse_latlon,
)
from .physics import (
    KNOT,
    TowConfig,
    WaveField,
    assured_release,
    drag_force,
    knots_to_mps,
    min_release_speed,
    mps_to_knots,
    surface_elevation,
    surge_velocity,
    tow_tension,
    velocity_potential,
)
from .scenario import load_scenario
from .simulator import (
    AuvMode,
    MissionSummary,
    SimConfig,
    SimResult,
    SimWorld,
    TELEMETRY_HEADER,
    TelemetryRow,
    parse_waypoint_list,
    run,
)

__version__ = "0.1.0"

__all__ = [
    "ActuatorSpec", "AuvMode", "BenchGeometry", "ChannelClosedError",
    "ConfigError", "DEPLOY_BYTE", "DeployCommand", "EARTH_RADIUS", "Fault",
    "FrameError", "GeoPoint", "InfeasibleGeometryError", "KNOT",
    "LocalFrame", "LocalPoint", "MechState", "Message", "MessageBus",
    "MissionSummary", "ParseError", "RatedLoadExceededError", "ReleaseEvent",
    "ReleaseMechanism", "ReleaseNode", "ReleaseParams", "SerialChannel",
    "SimConfig", "SimResult", "SimWorld", "SimulationError", "Subscription",
    "TELEMETRY_HEADER", "TOPIC_DEPLOY_EVENT", "TOPIC_DEPLOY_TRIGGER",
    "TOPIC_POSITION", "TOPIC_WAYPT_UPDATE", "TelemetryRow", "TowConfig",
    "TowReleaseError", "WaveField", "assured_release", "consistency_report",
    "drag_force", "knots_to_mps", "load_scenario", "local_distance",
    "min_release_speed", "mps_to_knots", "parse_latlon",
    "parse_waypoint_list", "run", "scale_to_bench", "send_deploy",
    "surface_elevation", "surge_velocity", "theta_crest",
    "theta_experimental", "theta_trough", "tow_tension",
    "velocity_potential",
]
