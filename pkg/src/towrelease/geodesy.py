"""Local tangent-plane geodesy on a spherical Earth.

Converts between geodetic coordinates (latitude, longitude in degrees)
and a flat east/north frame anchored at a mission origin, using the
equirectangular approximation

    x = R cos(lat0) dlon,   y = R dlat        (dlat, dlon in radians)

with R the mean spherical Earth radius.  Good to well under a metre per
kilometre near the origin; refuses to convert points farther than
MAX_FRAME_RANGE because the flat-plane error is no longer negligible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import FrameError, ParseError

# Mean spherical Earth radius [m].
EARTH_RADIUS = 6_371_000.0

# Beyond this distance from the origin the flat frame is not trusted [m].
MAX_FRAME_RANGE = 100_000.0


@dataclass(frozen=True)
class GeoPoint:
    """Geodetic position, degrees.  lat in [-90, 90], lon in [-180, 180)."""

    lat: float
    lon: float

    def __post_init__(self) -> None:
        if not -90.0 <= self.lat <= 90.0:
            raise ValueError(f"latitude out of range [-90, 90]: {self.lat}")
        if not -180.0 <= self.lon < 180.0:
            raise ValueError(f"longitude out of range [-180, 180): {self.lon}")


@dataclass(frozen=True)
class LocalPoint:
    """Position in the local tangent plane: x east, y north [m]."""

    x: float
    y: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"coordinates must be finite: ({self.x}, {self.y})")


def _wrap_degrees(dlon: float) -> float:
    """Wrap a longitude difference into (-180, 180]."""
    wrapped = math.fmod(dlon, 360.0)
    if wrapped > 180.0:
        wrapped -= 360.0
    elif wrapped <= -180.0:
        wrapped += 360.0
    return wrapped


def _wrap_longitude(lon: float) -> float:
    """Wrap an absolute longitude into [-180, 180)."""
    wrapped = math.fmod(lon + 180.0, 360.0)
    if wrapped < 0.0:
        wrapped += 360.0
    return wrapped - 180.0


@dataclass(frozen=True)
class LocalFrame:
    """Tangent plane anchored at origin; all conversions go through it."""

    origin: GeoPoint
    earth_radius: float = EARTH_RADIUS

    def __post_init__(self) -> None:
        if self.earth_radius <= 0.0:
            raise ValueError(
                f"earth_radius must be positive, got {self.earth_radius}"
            )

    def to_local(self, point: GeoPoint) -> LocalPoint:
        """Geodetic -> tangent plane.  Raises FrameError when too far out."""
        dlat = math.radians(point.lat - self.origin.lat)
        dlon = math.radians(_wrap_degrees(point.lon - self.origin.lon))
        x = self.earth_radius * math.cos(math.radians(self.origin.lat)) * dlon
        y = self.earth_radius * dlat
        if math.hypot(x, y) > MAX_FRAME_RANGE:
            raise FrameError(
                f"point {point.lat}, {point.lon} is {math.hypot(x, y):.0f} m "
                f"from the frame origin (limit {MAX_FRAME_RANGE:.0f} m)"
            )
        return LocalPoint(x, y)

    def to_geo(self, point: LocalPoint) -> GeoPoint:
        """Tangent plane -> geodetic.  Inverse of to_local near the origin."""
        if math.hypot(point.x, point.y) > MAX_FRAME_RANGE:
            raise FrameError(
                f"point ({point.x:.0f}, {point.y:.0f}) is beyond the frame "
                f"range limit {MAX_FRAME_RANGE:.0f} m"
            )
        lat = self.origin.lat + math.degrees(point.y / self.earth_radius)
        coslat = math.cos(math.radians(self.origin.lat))
        if coslat < 1e-12:  # cos(90 deg) lands at ~6e-17, not 0
            raise FrameError(
                "frame origin at a pole: east offset has no longitude"
            )
        lon = self.origin.lon + math.degrees(point.x / (self.earth_radius * coslat))
        if lon >= 180.0 or lon < -180.0:
            lon = _wrap_longitude(lon)
        return GeoPoint(lat, lon)


def local_distance(a: LocalPoint, b: LocalPoint) -> float:
    """Euclidean distance between two tangent-plane points [m]."""
    return math.hypot(a.x - b.x, a.y - b.y)


def parse_latlon(text: str) -> GeoPoint:
    """Parse "lat,lon" (degrees, optional whitespace) into a GeoPoint."""
    parts = text.split(",")
    if len(parts) != 2:
        raise ParseError(
            f"expected 'lat,lon', got {text!r} ({len(parts)} comma-separated fields)"
        )
    try:
        lat = float(parts[0].strip())
        lon = float(parts[1].strip())
    except ValueError as exc:
        raise ParseError(f"non-numeric lat/lon in {text!r}: {exc}") from None
    try:
        return GeoPoint(lat, lon)
    except ValueError as exc:
        raise ParseError(str(exc)) from None
