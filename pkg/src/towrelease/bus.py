"""In-process latched publish/subscribe bus.

Single-process message passing between the simulator, the release
controller and anything else that wants to listen.  Semantics:

* per-topic FIFO with monotonically increasing sequence numbers (from 1);
* the last message on a topic is latched: a late subscriber receives it
  as its first delivery;
* subscribers pull with Subscription.drain(); nothing is pushed;
* a topic is pinned to the exact payload type of its first publish;
* per-topic timestamps must be non-decreasing.

Queues are unbounded; crossing the high-water mark logs a warning per
subscription rather than dropping anything.  A single lock makes the
bus safe to share between threads, though the simulator itself is
single-threaded.
"""

from __future__ import annotations

import logging
import threading
from collections import deque
from dataclasses import dataclass
from typing import Any

log = logging.getLogger(__name__)

# Topics that make up the public contract between simulator and controller.
TOPIC_POSITION = "POSITION"
TOPIC_DEPLOY_TRIGGER = "DEPLOY_TRIGGER"
TOPIC_WAYPT_UPDATE = "WAYPT_UPDATE"
TOPIC_DEPLOY_EVENT = "DEPLOY_EVENT"


@dataclass(frozen=True)
class Message:
    topic: str
    payload: Any
    timestamp: float
    seq: int


class Subscription:
    """Pull-side of one topic subscription.  Create via MessageBus.subscribe."""

    def __init__(self, bus: "MessageBus", topic: str) -> None:
        self._bus = bus
        self.topic = topic
        self._queue: deque[Message] = deque()
        self._warned = False

    def drain(self) -> list[Message]:
        """Return and clear all queued messages, oldest first."""
        with self._bus._lock:
            out = list(self._queue)
            self._queue.clear()
            self._warned = False
        return out

    def pending(self) -> int:
        with self._bus._lock:
            return len(self._queue)


class _Topic:
    __slots__ = ("payload_type", "last_message", "next_seq", "subscriptions")

    def __init__(self) -> None:
        self.payload_type: type | None = None
        self.last_message: Message | None = None
        self.next_seq = 1
        self.subscriptions: list[Subscription] = []


class MessageBus:
    """Topic registry plus delivery queues; see module docstring."""

    def __init__(self, high_water: int = 10_000) -> None:
        if high_water <= 0:
            raise ValueError(f"high_water must be positive, got {high_water}")
        self._lock = threading.Lock()
        self._topics: dict[str, _Topic] = {}
        self.high_water = high_water

    def _topic(self, name: str) -> _Topic:
        if not name or name != name.strip() or any(c.isspace() for c in name):
            raise ValueError(f"topic name must be non-empty without whitespace: {name!r}")
        if name not in self._topics:
            self._topics[name] = _Topic()
        return self._topics[name]

    def publish(self, topic: str, payload: Any, timestamp: float) -> int:
        """Queue payload for every subscriber of topic; return its seq."""
        with self._lock:
            t = self._topic(topic)
            if t.payload_type is None:
                t.payload_type = type(payload)
            elif type(payload) is not t.payload_type:
                raise TypeError(
                    f"topic {topic!r} carries {t.payload_type.__name__}, "
                    f"got {type(payload).__name__}"
                )
            if t.last_message is not None and timestamp < t.last_message.timestamp:
                raise ValueError(
                    f"timestamp went backwards on {topic!r}: "
                    f"{timestamp} < {t.last_message.timestamp}"
                )
            msg = Message(topic, payload, timestamp, t.next_seq)
            t.next_seq += 1
            t.last_message = msg
            for sub in t.subscriptions:
                sub._queue.append(msg)
                if len(sub._queue) > self.high_water and not sub._warned:
                    sub._warned = True
                    log.warning(
                        "subscription on %r exceeds high-water mark (%d queued)",
                        topic, len(sub._queue),
                    )
            return msg.seq

    def subscribe(self, topic: str) -> Subscription:
        """Register a subscriber; a latched message is delivered first."""
        with self._lock:
            t = self._topic(topic)
            sub = Subscription(self, topic)
            t.subscriptions.append(sub)
            if t.last_message is not None:
                sub._queue.append(t.last_message)
            return sub

    def latest(self, topic: str) -> Message | None:
        """Peek at the latched message without consuming anything."""
        with self._lock:
            t = self._topics.get(topic)
            return t.last_message if t else None
