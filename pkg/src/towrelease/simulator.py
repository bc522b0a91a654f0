"""Fixed-step deterministic simulator of the tow-and-release mission.

One surface vehicle tows one underwater vehicle through a plane
progressive wave field.  Each tick of dt runs, in order:

1. the tow vehicle advances along its waypoint plan (forward Euler); a
   STOWED vehicle is slaved to it 1 m back along track, an ACTIVE one
   follows its own waypoint list;
2. the wave clock advances; towline tautness and tension are evaluated
   at the towed vehicle's position on the surface;
3. the tow vehicle position is published on POSITION as geodetic
   coordinates (so the controller exercises the conversion path);
4. the release controller runs one step;
5. bytes it wrote to the serial link are delivered to the mechanism;
6. the mechanism advances dt gated by this step's tautness;
7. a ReleaseEvent flips the towed vehicle to RELEASED, then ACTIVE once
   the power-on delay has passed, adopting the latest WAYPT_UPDATE;
8. one telemetry row is appended, stamped t = i*dt (never accumulated,
   so repeated runs are byte-identical).

Command bytes delivered in step i take effect from the start of that
step's mechanism window, so release timestamps land within (t-dt, t].
Exceeding the mechanism's rated load halts the run.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .actuator import ActuatorSpec, Fault, ReleaseEvent, ReleaseMechanism, SerialChannel
from .bus import (
    MessageBus,
    TOPIC_DEPLOY_EVENT,
    TOPIC_DEPLOY_TRIGGER,
    TOPIC_POSITION,
    TOPIC_WAYPT_UPDATE,
)
from .controller import DeployCommand, ReleaseNode, ReleaseParams
from .errors import ConfigError, FrameError, ParseError, RatedLoadExceededError
from .geodesy import GeoPoint, LocalFrame, LocalPoint, MAX_FRAME_RANGE, local_distance
from .physics import TowConfig, WaveField, surge_velocity, tow_tension

# Hull speed cap of the tow vehicle, 11 kn [m/s].
MAX_ASV_SPEED = 5.66

# The towed vehicle rides in a housing on a short tether; its bobbing
# is clipped to this excursion [m].  Diagnostic only.
HEAVE_LIMIT = 0.660

TELEMETRY_HEADER = (
    "t,asv_x,asv_y,asv_speed,auv_x,auv_y,auv_mode,tension_N,taut,mech_state,deployed"
)


class AuvMode(enum.Enum):
    STOWED = "STOWED"
    RELEASED = "RELEASED"
    ACTIVE = "ACTIVE"


def parse_waypoint_list(text: str) -> list[LocalPoint]:
    """Parse "x1,y1:x2,y2:..." (metres, local frame) into points.

    Errors name the zero-based index of the offending token.
    """
    if not text.strip():
        raise ParseError("empty waypoint list")
    points: list[LocalPoint] = []
    for i, token in enumerate(text.strip().split(":")):
        parts = token.split(",")
        if len(parts) != 2:
            raise ParseError(
                f"waypoint {i}: expected 'x,y', got {token.strip()!r}"
            )
        try:
            points.append(LocalPoint(float(parts[0]), float(parts[1])))
        except ValueError:
            raise ParseError(
                f"waypoint {i}: non-numeric coordinates in {token.strip()!r}"
            ) from None
    return points


@dataclass
class AsvState:
    """Tow vehicle: position, commanded speed, plan progress."""

    position: LocalPoint
    speed: float  # commanded [m/s], rendered as 0 once the plan is done
    waypoints: list[LocalPoint] = field(default_factory=list)
    next_index: int = 0
    heading: tuple[float, float] = (1.0, 0.0)  # unit vector along track

    @property
    def underway(self) -> bool:
        return self.next_index < len(self.waypoints) and self.speed > 0.0


@dataclass
class AuvState:
    """Towed vehicle: slaved while STOWED, autonomous once ACTIVE."""

    position: LocalPoint
    mode: AuvMode = AuvMode.STOWED
    speed: float = 1.5  # [m/s] once ACTIVE
    waypoints: list[LocalPoint] = field(default_factory=list)
    next_index: int = 0
    heave: float = 0.0  # clipped vertical excursion while stowed [m]


@dataclass
class TowlineState:
    """Taut/slack latch with optional hysteresis margin [m/s]."""

    taut: bool = True
    tension: float = 0.0
    slack_margin: float = 0.0

    def update(self, asv_speed: float, surge: float) -> None:
        # With margin 0 this reduces exactly to: taut iff speed >= surge.
        if self.taut:
            if asv_speed < surge - self.slack_margin:
                self.taut = False
        else:
            if asv_speed >= surge + self.slack_margin:
                self.taut = True


@dataclass
class SimConfig:
    """Everything one deterministic run needs.

    Distances metres, speeds m/s, times seconds, angles radians; the
    scenario file loader converts suffixed keys (_kn, _deg) on the way
    in.  duration 0 is allowed and yields an empty run.
    """

    wave: WaveField
    tow: TowConfig
    release: ReleaseParams
    origin: GeoPoint
    asv_start: LocalPoint = field(default_factory=lambda: LocalPoint(0.0, 0.0))
    asv_speed: float = 2.5
    asv_waypoints: list[LocalPoint] = field(default_factory=list)
    waypt_update: str | None = None  # WAYPT_UPDATE payload for the AUV
    auv_speed: float = 1.5
    dt: float = 0.05
    duration: float = 60.0
    trigger_time: float | None = None  # when the sim publishes DEPLOY_TRIGGER
    actuator_spec: ActuatorSpec = field(default_factory=ActuatorSpec)
    actuation_time: float = 1.0
    fault: Fault = Fault.NONE
    magnet_delay: float = 0.0  # RELEASED -> ACTIVE power-on delay [s]
    tow_offset: float = 1.0    # stow offset behind the tow vehicle [m]
    capture_radius: float = 2.0  # AUV waypoint capture radius [m]
    slack_margin: float = 0.0

    def validate(self) -> list[str]:
        """Field-by-field problem list; empty means runnable."""
        errors: list[str] = []
        if self.dt <= 0.0:
            errors.append(f"sim.dt: must be positive, got {self.dt}")
        if self.duration < 0.0:
            errors.append(f"sim.duration: must be >= 0, got {self.duration}")
        if not 0.0 <= self.asv_speed <= MAX_ASV_SPEED:
            errors.append(
                f"asv.speed: must lie in [0, {MAX_ASV_SPEED}] m/s, got {self.asv_speed}"
            )
        if self.auv_speed < 0.0:
            errors.append(f"sim.auv_speed: must be >= 0, got {self.auv_speed}")
        if self.actuation_time <= 0.0:
            errors.append(
                f"actuator.actuation_time: must be positive, got {self.actuation_time}"
            )
        if self.magnet_delay < 0.0:
            errors.append(f"sim.magnet_delay: must be >= 0, got {self.magnet_delay}")
        if self.tow_offset < 0.0:
            errors.append(f"sim.tow_offset: must be >= 0, got {self.tow_offset}")
        if self.capture_radius <= 0.0:
            errors.append(
                f"sim.capture_radius: must be positive, got {self.capture_radius}"
            )
        if self.slack_margin < 0.0:
            errors.append(f"sim.slack_margin: must be >= 0, got {self.slack_margin}")
        if self.trigger_time is not None and self.trigger_time < 0.0:
            errors.append(f"rm2.trigger_time: must be >= 0, got {self.trigger_time}")
        if self.trigger_time is not None and not self.release.use_trigger:
            errors.append(
                "rm2.trigger_time: set but deploy_trigger is off; nothing listens"
            )
        for label, pt in (("asv.start", self.asv_start), *(
            (f"asv.waypoints[{i}]", p) for i, p in enumerate(self.asv_waypoints)
        )):
            if math.hypot(pt.x, pt.y) > MAX_FRAME_RANGE:
                errors.append(f"{label}: {pt.x:.0f},{pt.y:.0f} is outside the local frame")
        if self.release.deploy_position is not None:
            try:
                LocalFrame(self.origin).to_local(self.release.deploy_position)
            except FrameError as exc:
                errors.append(f"rm2.deploy_position: {exc}")
        if self.waypt_update is not None:
            try:
                parse_waypoint_list(self.waypt_update)
            except ParseError as exc:
                errors.append(f"asv.waypt_update: {exc}")
        return errors


@dataclass(frozen=True)
class TelemetryRow:
    """One line of the run log; column order matches TELEMETRY_HEADER."""

    t: float
    asv_x: float
    asv_y: float
    asv_speed: float
    auv_x: float
    auv_y: float
    auv_mode: str
    tension: float
    taut: bool
    mech_state: str
    deployed: bool

    def as_csv(self) -> str:
        return (
            f"{self.t:.6f},{self.asv_x:.6f},{self.asv_y:.6f},"
            f"{self.asv_speed:.6f},{self.auv_x:.6f},{self.auv_y:.6f},"
            f"{self.auv_mode},{self.tension:.6f},{int(self.taut)},"
            f"{self.mech_state},{int(self.deployed)}"
        )


@dataclass
class MissionSummary:
    steps: int
    duration: float
    deploy_time: float | None = None
    deploy_reason: str | None = None
    deploy_distance: float | None = None  # range to target at the command [m]
    release_time: float | None = None
    final_auv_mode: str = AuvMode.STOWED.value
    final_mech_state: str = "LOCKED"
    waypoints_total: int = 0
    waypoints_reached: int = 0
    max_tension: float = 0.0
    max_heave: float = 0.0
    note: str = ""

    @property
    def mission_success(self) -> bool:
        return (
            self.release_time is not None
            and self.waypoints_total > 0
            and self.waypoints_reached == self.waypoints_total
        )

    def lines(self) -> list[str]:
        def opt(value, unit=""):
            return "-" if value is None else f"{value:.3f}{unit}"

        out = [
            f"steps              = {self.steps}",
            f"duration           = {self.duration:.3f} s",
            f"deploy_time        = {opt(self.deploy_time, ' s')}",
            f"deploy_reason      = {self.deploy_reason or '-'}",
            f"deploy_distance    = {opt(self.deploy_distance, ' m')}",
            f"release_time       = {opt(self.release_time, ' s')}",
            f"final_auv_mode     = {self.final_auv_mode}",
            f"final_mech_state   = {self.final_mech_state}",
            f"waypoints_reached  = {self.waypoints_reached}/{self.waypoints_total}",
            f"max_tension        = {self.max_tension:.3f} N",
            f"max_heave          = {self.max_heave:.3f} m",
            f"mission_success    = {'yes' if self.mission_success else 'no'}",
        ]
        if self.note:
            out.append(f"note               = {self.note}")
        return out


def _walk_plan(
    position: LocalPoint,
    waypoints: list[LocalPoint],
    next_index: int,
    budget: float,
    capture: float,
) -> tuple[LocalPoint, int, tuple[float, float] | None]:
    """Move along a waypoint chain by at most `budget` metres.

    A waypoint counts as reached within `capture` metres (0 = exact).
    Returns the new position, next index and last heading, or None
    heading if nothing moved.
    """
    heading: tuple[float, float] | None = None
    while next_index < len(waypoints) and budget > 0.0:
        wp = waypoints[next_index]
        dx = wp.x - position.x
        dy = wp.y - position.y
        dist = math.hypot(dx, dy)
        if dist <= capture:
            next_index += 1
            continue
        step = min(budget, dist)
        heading = (dx / dist, dy / dist)
        position = LocalPoint(
            position.x + heading[0] * step, position.y + heading[1] * step
        )
        budget -= step
        if step == dist:
            next_index += 1
    return position, next_index, heading


class SimWorld:
    """Mutable state of one run; step() advances it one tick."""

    def __init__(self, config: SimConfig) -> None:
        problems = config.validate()
        if problems:
            raise ConfigError(
                "invalid configuration:\n  " + "\n  ".join(problems)
            )
        self.config = config
        self.frame = LocalFrame(config.origin)
        self.bus = MessageBus()
        self.channel = SerialChannel()
        self.mechanism = ReleaseMechanism(
            config.actuator_spec, config.actuation_time, config.fault
        )
        self.node = ReleaseNode(config.release, self.bus, self.channel, self.frame)
        self._waypt_sub = self.bus.subscribe(TOPIC_WAYPT_UPDATE)
        if config.waypt_update is not None:
            self.bus.publish(TOPIC_WAYPT_UPDATE, config.waypt_update, 0.0)

        self.asv = AsvState(
            position=config.asv_start,
            speed=config.asv_speed,
            waypoints=list(config.asv_waypoints),
        )
        if self.asv.waypoints:
            first = self.asv.waypoints[0]
            dx = first.x - self.asv.position.x
            dy = first.y - self.asv.position.y
            d = math.hypot(dx, dy)
            if d > 0.0:
                self.asv.heading = (dx / d, dy / d)
        self.auv = AuvState(
            position=self._stow_position(), speed=config.auv_speed
        )
        self.towline = TowlineState(slack_margin=config.slack_margin)
        self._auv_plan: list[LocalPoint] = []
        self._trigger_sent = False
        self.deploy_command: DeployCommand | None = None
        self.release_event: ReleaseEvent | None = None
        self.release_time: float | None = None
        self.step_count = 0
        self.t = 0.0
        self.summary = MissionSummary(steps=0, duration=0.0, note="no steps")

    def _stow_position(self) -> LocalPoint:
        hx, hy = self.asv.heading
        off = self.config.tow_offset
        return LocalPoint(
            self.asv.position.x - hx * off, self.asv.position.y - hy * off
        )

    def step(self) -> TelemetryRow:
        """Advance one tick of dt; returns the telemetry row."""
        cfg = self.config
        dt = cfg.dt
        self.step_count += 1
        t = self.step_count * dt
        self.t = t

        # (1) kinematics
        asv_moving = self.asv.underway
        if asv_moving:
            pos, idx, heading = _walk_plan(
                self.asv.position, self.asv.waypoints, self.asv.next_index,
                self.asv.speed * dt, 0.0,
            )
            self.asv.position = pos
            self.asv.next_index = idx
            if heading is not None:
                self.asv.heading = heading
        asv_speed_now = self.asv.speed if self.asv.underway else 0.0

        for msg in self._waypt_sub.drain():
            self._auv_plan = parse_waypoint_list(msg.payload)
            if self.auv.mode is AuvMode.ACTIVE:
                self.auv.waypoints = list(self._auv_plan)
                self.auv.next_index = 0

        if self.auv.mode is AuvMode.STOWED:
            self.auv.position = self._stow_position()
        elif self.auv.mode is AuvMode.ACTIVE:
            pos, idx, _ = _walk_plan(
                self.auv.position, self.auv.waypoints, self.auv.next_index,
                self.auv.speed * dt, cfg.capture_radius,
            )
            self.auv.position = pos
            self.auv.next_index = idx

        # (2) wave, tautness, tension
        attached = self.auv.mode is AuvMode.STOWED
        surge = surge_velocity(cfg.wave, self.auv.position.x, 0.0, t)
        self.towline.update(asv_speed_now, surge)
        if attached and self.towline.taut:
            tension = tow_tension(cfg.tow, asv_speed_now)
            if tension > cfg.tow.rated_load:
                raise RatedLoadExceededError(
                    f"tension {tension:.1f} N exceeds rated load "
                    f"{cfg.tow.rated_load:.1f} N at t={t:.2f} s"
                )
        else:
            tension = 0.0
        self.towline.tension = tension
        if attached:
            self.auv.heave = max(
                -HEAVE_LIMIT,
                min(
                    HEAVE_LIMIT,
                    cfg.wave.amplitude
                    * math.sin(cfg.wave.angular_frequency * t + cfg.wave.phase),
                ),
            )
            self.summary.max_heave = max(self.summary.max_heave, abs(self.auv.heave))

        # (3) position out, plus the scheduled external trigger if due
        self.bus.publish(TOPIC_POSITION, self.frame.to_geo(self.asv.position), t)
        if (
            cfg.trigger_time is not None
            and not self._trigger_sent
            and t >= cfg.trigger_time
        ):
            self.bus.publish(TOPIC_DEPLOY_TRIGGER, True, t)
            self._trigger_sent = True

        # (4) controller
        command = self.node.step(t)
        if command is not None and self.deploy_command is None:
            self.deploy_command = command
            self.summary.deploy_time = command.time
            self.summary.deploy_reason = command.reason
            self.summary.deploy_distance = command.distance

        # (5) serial delivery, (6) mechanism
        for b in self.channel.read_all():
            self.mechanism.handle_byte(b)
        event = self.mechanism.advance(dt, self.towline.taut)

        # (7) release bookkeeping
        if event is not None:
            self.release_event = event
            self.release_time = event.time
            self.summary.release_time = event.time
            self.auv.mode = AuvMode.RELEASED
            self.bus.publish(TOPIC_DEPLOY_EVENT, f"{event.time:.6f}", t)
        if (
            self.auv.mode is AuvMode.RELEASED
            and self.release_time is not None
            and t >= self.release_time + cfg.magnet_delay
        ):
            self.auv.mode = AuvMode.ACTIVE
            self.auv.waypoints = list(self._auv_plan)
            self.auv.next_index = 0

        # (8) telemetry
        self.summary.max_tension = max(self.summary.max_tension, tension)
        row = TelemetryRow(
            t=t,
            asv_x=self.asv.position.x,
            asv_y=self.asv.position.y,
            asv_speed=asv_speed_now,
            auv_x=self.auv.position.x,
            auv_y=self.auv.position.y,
            auv_mode=self.auv.mode.value,
            tension=tension,
            taut=self.towline.taut,
            mech_state=self.mechanism.state.name,
            deployed=self.node.deployed,
        )
        self._refresh_summary()
        return row

    def _refresh_summary(self) -> None:
        s = self.summary
        s.steps = self.step_count
        s.duration = self.step_count * self.config.dt
        s.final_auv_mode = self.auv.mode.value
        s.final_mech_state = self.mechanism.state.name
        s.waypoints_total = len(self.auv.waypoints) if self.auv.waypoints else (
            len(self._auv_plan)
        )
        s.waypoints_reached = self.auv.next_index
        s.note = "" if self.step_count else "no steps"


@dataclass
class SimResult:
    rows: list[TelemetryRow]
    summary: MissionSummary
    config: SimConfig

    def telemetry_csv(self) -> str:
        lines = [TELEMETRY_HEADER]
        lines.extend(row.as_csv() for row in self.rows)
        return "\n".join(lines) + "\n"


def run(config: SimConfig) -> SimResult:
    """Run a configured mission start to finish.

    Raises ConfigError before the first step for bad configuration and
    SimulationError (e.g. rated load exceeded) from within the run.
    """
    world = SimWorld(config)
    steps = int(round(config.duration / config.dt)) if config.duration > 0 else 0
    rows = [world.step() for _ in range(steps)]
    return SimResult(rows, world.summary, config)
