"""Release mechanism emulator and the serial byte channel that feeds it.

The mechanism is a three-event chain driven by a linear actuator:

    LOCKED -> PIN_RETRACTING -> HOOK_FALLING -> TETHER_FREE

A single command byte 0x44 ('D') starts the pin retraction.  Each
powered phase takes `actuation_time` seconds; the final pull-through of
the tether is instantaneous but only happens while the towline is taut,
so with a slack line the mechanism hangs in HOOK_FALLING with the hook
open.  Transitions only ever move forward.

Two injectable faults mirror bench failures: STUCK_CONTROLLER swallows
the command byte (state stays LOCKED), STUCK_PIN freezes pin travel so
the mechanism never leaves PIN_RETRACTING.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field

from .errors import ChannelClosedError

log = logging.getLogger(__name__)

# The single-byte release command, ASCII 'D'.
DEPLOY_BYTE = 0x44


class MechState(enum.Enum):
    LOCKED = "LOCKED"
    PIN_RETRACTING = "PIN_RETRACTING"
    HOOK_FALLING = "HOOK_FALLING"
    TETHER_FREE = "TETHER_FREE"


class Fault(enum.Enum):
    NONE = "none"
    STUCK_CONTROLLER = "stuck_controller"
    STUCK_PIN = "stuck_pin"


@dataclass(frozen=True)
class ActuatorSpec:
    """Rated numbers of the linear actuator driving the pin.

    force   rated force [N]
    stroke  full pin stroke [m]
    mass    actuator mass [kg]
    """

    force: float = 1468.0
    stroke: float = 0.0508
    mass: float = 3.95

    def __post_init__(self) -> None:
        if self.force <= 0.0:
            raise ValueError(f"force must be positive, got {self.force}")
        if self.stroke <= 0.0:
            raise ValueError(f"stroke must be positive, got {self.stroke}")
        if self.mass <= 0.0:
            raise ValueError(f"mass must be positive, got {self.mass}")


@dataclass(frozen=True)
class ReleaseEvent:
    """Tether left the hook at this mechanism-clock time [s]."""

    time: float


class SerialChannel:
    """In-memory stand-in for the one-way serial link to the mechanism."""

    def __init__(self) -> None:
        self._buffer = bytearray()
        self._closed = False

    @property
    def closed(self) -> bool:
        return self._closed

    def write(self, data: bytes) -> int:
        if self._closed:
            raise ChannelClosedError("write on closed serial channel")
        self._buffer.extend(data)
        return len(data)

    def read_all(self) -> bytes:
        out = bytes(self._buffer)
        self._buffer.clear()
        return out

    def close(self) -> None:
        self._closed = True


class ReleaseMechanism:
    """State machine of the release hardware; see module docstring.

    Keeps its own clock (advanced by `advance`) so a ReleaseEvent is
    stamped with the instant the tether actually came free, not the end
    of the step that contained it.
    """

    def __init__(
        self,
        spec: ActuatorSpec | None = None,
        actuation_time: float = 1.0,
        fault: Fault = Fault.NONE,
    ) -> None:
        if actuation_time <= 0.0:
            raise ValueError(
                f"actuation_time must be positive, got {actuation_time}"
            )
        self.spec = spec if spec is not None else ActuatorSpec()
        self.actuation_time = actuation_time
        self.fault = fault
        self.state = MechState.LOCKED
        self.stroke_progress = 0.0  # pin travel so far [m], <= spec.stroke
        self._phase_elapsed = 0.0   # powered time inside the current phase [s]
        self._clock = 0.0

    @property
    def clock(self) -> float:
        return self._clock

    def handle_byte(self, b: int | bytes) -> None:
        """Consume one command byte; anything but 0x44 is logged and dropped."""
        if isinstance(b, (bytes, bytearray)):
            if len(b) != 1:
                raise ValueError(f"expected a single byte, got {len(b)}")
            b = b[0]
        if not 0 <= b <= 255:
            raise ValueError(f"not a byte value: {b}")
        if b != DEPLOY_BYTE:
            log.warning("unknown command byte 0x%02X ignored", b)
            return
        if self.state is not MechState.LOCKED:
            log.debug("release command repeated in %s, ignored", self.state.name)
            return
        if self.fault is Fault.STUCK_CONTROLLER:
            log.info("release command lost: actuator controller fault")
            return
        self.state = MechState.PIN_RETRACTING
        self._phase_elapsed = 0.0

    def advance(self, dt: float, line_taut: bool) -> ReleaseEvent | None:
        """Run the mechanism for dt seconds with the given line state.

        The time budget flows across phase boundaries, so one call may
        finish the pin travel and eat into the hook drop.  Returns the
        ReleaseEvent if the tether came free during this window.
        """
        if dt <= 0.0:
            raise ValueError(f"dt must be positive, got {dt}")
        t0 = self._clock
        consumed = 0.0
        remaining = dt
        event: ReleaseEvent | None = None

        while remaining > 0.0 and event is None:
            if self.state is MechState.PIN_RETRACTING:
                if self.fault is Fault.STUCK_PIN:
                    break  # time passes, pin never moves
                need = self.actuation_time - self._phase_elapsed
                if remaining >= need:
                    consumed += need
                    remaining -= need
                    self.stroke_progress = self.spec.stroke
                    self.state = MechState.HOOK_FALLING
                    self._phase_elapsed = 0.0
                    continue
                self._phase_elapsed += remaining
                consumed += remaining
                remaining = 0.0
                self.stroke_progress = (
                    self.spec.stroke * self._phase_elapsed / self.actuation_time
                )
            elif self.state is MechState.HOOK_FALLING:
                if self._phase_elapsed >= self.actuation_time:
                    # hook already open, only the taut line is missing
                    if line_taut:
                        self.state = MechState.TETHER_FREE
                        event = ReleaseEvent(t0 + consumed)
                    break
                need = self.actuation_time - self._phase_elapsed
                if remaining >= need:
                    consumed += need
                    remaining -= need
                    self._phase_elapsed = self.actuation_time
                    if line_taut:
                        self.state = MechState.TETHER_FREE
                        event = ReleaseEvent(t0 + consumed)
                    break
                self._phase_elapsed += remaining
                consumed += remaining
                remaining = 0.0
            else:
                break  # LOCKED or TETHER_FREE: nothing moves on its own

        self._clock = t0 + dt
        return event
