"""Exception hierarchy shared across the package.

Anything raised on purpose derives from TowReleaseError so callers can
catch one base.  ConfigError (and its ParseError subclass) means the
inputs were bad before the clock started; SimulationError means the run
itself failed.  The CLI maps the former to exit code 1 and the latter
to exit code 2.
"""


class TowReleaseError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(TowReleaseError):
    """Invalid configuration: bad value, missing key, unknown section."""


class ParseError(ConfigError, ValueError):
    """Malformed textual input (lat/lon pair, waypoint list, override)."""


class FrameError(TowReleaseError, ValueError):
    """Point too far from the local tangent-plane origin to be trusted."""


class InfeasibleGeometryError(TowReleaseError, ValueError):
    """Bench geometry asks arcsin for a ratio outside [-1, 1]."""


class ChannelClosedError(TowReleaseError, IOError):
    """Write attempted on a closed serial channel."""


class SimulationError(TowReleaseError):
    """Failure while a simulation is running."""


class RatedLoadExceededError(SimulationError):
    """Towline tension went past the mechanism's rated load."""
