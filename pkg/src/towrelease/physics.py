"""Towline force balance and plane progressive wave kinematics.

Two small models that decide when a towed vehicle can be let go:

* a static free-body balance for the towline, giving tension from drag
  on the towed body and the line angle at the tow point;
* a deep-water linear wave, giving the horizontal orbital velocity
  (surge) under the surface and from it the minimum tow speed at which
  the towline never goes slack.

All quantities are SI unless a name says otherwise.  Angles are radians
inside this module; degrees only appear at user-facing boundaries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

# One international knot in metres per second (exact by definition).
KNOT = 0.514444

# Default acceleration of gravity [m/s^2].
STANDARD_GRAVITY = 9.81


def knots_to_mps(speed_kn: float) -> float:
    return speed_kn * KNOT


def mps_to_knots(speed: float) -> float:
    return speed / KNOT


@dataclass(frozen=True)
class TowConfig:
    """Constants of the tow: fluid, towed body, line geometry.

    rho         fluid density [kg/m^3]
    c_d         drag coefficient of the towed body [-]
    sigma       reference cross-section area [m^2]
    theta       towline angle from horizontal at the tow point [rad]
    rated_load  load the release mechanism is rated for [N]
    """

    rho: float = 1020.0
    c_d: float = 0.42
    sigma: float = 0.057
    theta: float = math.radians(45.0)
    rated_load: float = 2000.0

    def __post_init__(self) -> None:
        if self.rho <= 0.0:
            raise ValueError(f"rho must be positive, got {self.rho}")
        if self.c_d <= 0.0:
            raise ValueError(f"c_d must be positive, got {self.c_d}")
        if self.sigma <= 0.0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if not 0.0 <= self.theta < math.pi / 2.0:
            raise ValueError(
                f"theta must lie in [0, pi/2), got {self.theta} rad"
            )
        if self.rated_load <= 0.0:
            raise ValueError(
                f"rated_load must be positive, got {self.rated_load}"
            )


def drag_force(cfg: TowConfig, speed: float) -> float:
    """Quadratic drag on the towed body: (rho/2) * c_d * sigma * v^2 [N]."""
    if speed < 0.0:
        raise ValueError(f"speed must be non-negative, got {speed}")
    return 0.5 * cfg.rho * cfg.c_d * cfg.sigma * speed * speed


def tow_tension(cfg: TowConfig, speed: float) -> float:
    """Towline tension balancing drag at line angle theta [N].

    From the horizontal force balance T*cos(theta) = drag:

        T = rho / (2 cos(theta)) * c_d * sigma * v^2
    """
    return drag_force(cfg, speed) / math.cos(cfg.theta)


@dataclass(frozen=True)
class WaveField:
    """Plane progressive wave on deep water.

    amplitude  surface amplitude A [m]
    period     wave period T [s]
    gravity    gravitational acceleration g [m/s^2]
    phase      phase offset added to (k x - omega t) [rad]

    The wavenumber follows the deep-water dispersion relation
    k = omega^2 / g; the field is defined for z <= 0 with z measured
    upward from the mean free surface.
    """

    amplitude: float
    period: float
    gravity: float = STANDARD_GRAVITY
    phase: float = 0.0

    def __post_init__(self) -> None:
        if self.amplitude < 0.0:
            raise ValueError(
                f"amplitude must be non-negative, got {self.amplitude}"
            )
        if self.period <= 0.0:
            raise ValueError(f"period must be positive, got {self.period}")
        if self.gravity <= 0.0:
            raise ValueError(f"gravity must be positive, got {self.gravity}")

    @property
    def angular_frequency(self) -> float:
        """omega = 2 pi / T [rad/s]."""
        return 2.0 * math.pi / self.period

    @property
    def wavenumber(self) -> float:
        """Deep-water wavenumber k = omega^2 / g [rad/m]."""
        w = self.angular_frequency
        return w * w / self.gravity


def _check_depth(z: float) -> None:
    if z > 0.0:
        raise ValueError(
            f"z must be at or below the mean free surface (z <= 0), got {z}"
        )


def velocity_potential(wave: WaveField, x: float, z: float, t: float) -> float:
    """phi(x, z, t) = (g A / omega) e^(k z) sin(k x - omega t + phase)."""
    _check_depth(z)
    w = wave.angular_frequency
    k = wave.wavenumber
    return (
        wave.gravity * wave.amplitude / w
        * math.exp(k * z)
        * math.sin(k * x - w * t + wave.phase)
    )


def surge_velocity(wave: WaveField, x: float, z: float, t: float) -> float:
    """Horizontal orbital velocity u = d(phi)/dx [m/s].

    u(x, z, t) = A omega e^(k z) cos(k x - omega t + phase)
    """
    _check_depth(z)
    w = wave.angular_frequency
    k = wave.wavenumber
    return (
        wave.amplitude * w
        * math.exp(k * z)
        * math.cos(k * x - w * t + wave.phase)
    )


def surface_elevation(wave: WaveField, x: float, t: float) -> float:
    """Free-surface elevation eta = A sin(k x - omega t + phase) [m]."""
    w = wave.angular_frequency
    return wave.amplitude * math.sin(wave.wavenumber * x - w * t + wave.phase)


def min_release_speed(wave: WaveField) -> float:
    """Smallest tow speed that keeps the towline taut in this wave [m/s].

    The surge amplitude at the surface (z = 0) is A*omega; towing at
    least that fast means the relative velocity along track never
    reverses, so the line cannot go slack.
    """
    return wave.amplitude * wave.angular_frequency


def assured_release(tow_speed: float, wave: WaveField) -> bool:
    """True when tow_speed is enough to guarantee a taut line (>= A*omega)."""
    if tow_speed < 0.0:
        raise ValueError(f"tow_speed must be non-negative, got {tow_speed}")
    return tow_speed >= min_release_speed(wave)
