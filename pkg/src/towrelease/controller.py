"""Deployment decision node: when to send the release byte.

Level-triggered controller polled once per control step.  Each step it
drains its position and trigger subscriptions keeping only the newest
of each, then fires when either condition holds:

* distance from the vehicle to the deploy position is strictly less
  than delta, or
* the latest external trigger message is true.

Firing writes exactly one byte, 0x44 ('D'), to the serial link.  The
first byte that is actually written latches the node: later steps stay
quiet even if the conditions still hold (resend_on_trigger=True drops
the latch for hardware that tolerates repeats).  A failed serial write
does not latch, so the command is retried on the next matching step.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .bus import MessageBus, Subscription, TOPIC_DEPLOY_TRIGGER, TOPIC_POSITION
from .errors import ChannelClosedError, ConfigError
from .geodesy import GeoPoint, LocalFrame, LocalPoint, local_distance

log = logging.getLogger(__name__)

DEPLOY_COMMAND = b"D"  # 0x44, the whole wire protocol


@dataclass(frozen=True)
class ReleaseParams:
    """Configuration of the deployment decision.

    deploy_position  geodetic point to fire near, or None
    delta            fire radius around deploy_position [m], strictly <
    use_trigger      also listen on the external boolean trigger topic
    resend_on_trigger  resend the byte on every matching step instead of
                       latching after the first successful write
    """

    deploy_position: GeoPoint | None = None
    delta: float = 5.0
    use_trigger: bool = True
    resend_on_trigger: bool = False

    def __post_init__(self) -> None:
        if self.delta <= 0.0:
            raise ValueError(f"delta must be positive, got {self.delta}")
        if self.deploy_position is None and not self.use_trigger:
            raise ValueError(
                "need a deploy_position, the trigger topic, or both"
            )


@dataclass(frozen=True)
class DeployCommand:
    """Record of one release byte going out."""

    time: float
    reason: str  # "position" or "trigger"
    distance: float | None  # range to target when position-triggered [m]


def should_fire(
    position: LocalPoint | None,
    target: LocalPoint | None,
    trigger: bool,
    delta: float,
) -> str | None:
    """Core firing predicate; returns the reason or None.

    Position wins when both conditions hold at once.  The comparison is
    strict: distance exactly equal to delta does not fire.
    """
    if position is not None and target is not None:
        if local_distance(position, target) < delta:
            return "position"
    if trigger:
        return "trigger"
    return None


def send_deploy(link) -> None:
    """Write the single release byte to anything with .write(bytes)."""
    link.write(DEPLOY_COMMAND)


class ReleaseNode:
    """Polled deployment controller; see module docstring."""

    def __init__(
        self,
        params: ReleaseParams,
        bus: MessageBus,
        link,
        frame: LocalFrame | None = None,
        position_topic: str = TOPIC_POSITION,
        trigger_topic: str = TOPIC_DEPLOY_TRIGGER,
    ) -> None:
        if params.deploy_position is not None and frame is None:
            raise ConfigError(
                "a deploy_position needs a LocalFrame to measure distance in"
            )
        self.params = params
        self.frame = frame
        self.link = link
        self.deployed = False
        self.last_position: LocalPoint | None = None
        self.last_trigger = False
        self._target: LocalPoint | None = (
            frame.to_local(params.deploy_position)
            if params.deploy_position is not None and frame is not None
            else None
        )
        self._position_sub: Subscription = bus.subscribe(position_topic)
        self._trigger_sub: Subscription | None = (
            bus.subscribe(trigger_topic) if params.use_trigger else None
        )

    def step(self, now: float) -> DeployCommand | None:
        """One control cycle at time `now`; returns the command if sent."""
        position_msgs = self._position_sub.drain()
        if position_msgs and self.frame is not None:
            self.last_position = self.frame.to_local(position_msgs[-1].payload)
        if self._trigger_sub is not None:
            trigger_msgs = self._trigger_sub.drain()
            if trigger_msgs:
                self.last_trigger = bool(trigger_msgs[-1].payload)

        if self.deployed and not self.params.resend_on_trigger:
            return None
        reason = should_fire(
            self.last_position, self._target, self.last_trigger, self.params.delta
        )
        if reason is None:
            return None
        try:
            send_deploy(self.link)
        except (ChannelClosedError, OSError) as exc:
            log.warning("release byte not sent (%s); will retry", exc)
            return None
        self.deployed = True
        distance = (
            local_distance(self.last_position, self._target)
            if reason == "position"
            else None
        )
        return DeployCommand(now, reason, distance)
