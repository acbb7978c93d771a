"""Level fusion and the alert state machine.

The EEG and video paths each emit a 0/1/2 level.  The fused drowsiness
level is their maximum, which reproduces every published combination rule
and covers the one combination those rules leave open.  A fused level of
2 raises an alert immediately; the alert releases only after the level
stays below 2 for a hysteresis interval, preventing flapping.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass

from .errors import TimestampRegression, VigilError

VALID_LEVELS = (0, 1, 2)

DEFAULT_RELEASE_HYSTERESIS = 5.0  # seconds below level 2 before release


class OutOfDomainLevel(VigilError):
    """A level outside {0, 1, 2} reached the fusion stage."""


def _check_level(value, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value not in VALID_LEVELS:
        raise OutOfDomainLevel(f"{name} level {value!r} not in {{0, 1, 2}}")
    return value


def fuse_levels(eeg: int, video: int) -> int:
    """Fused drowsiness level: the maximum of the two stream levels."""
    return max(_check_level(eeg, "eeg"), _check_level(video, "video"))


class AlertStatus(enum.Enum):
    QUIET = "quiet"
    ALERTING = "alerting"


@dataclass(frozen=True)
class AlertEvent:
    timestamp: float
    level: int
    transition: str  # "start" | "end"

    def to_json_line(self) -> str:
        return json.dumps(
            {"timestamp": self.timestamp, "level": self.level,
             "transition": self.transition},
            sort_keys=True,
        )


class AlertMachine:
    """Sequential consumer of the fused (timestamp, level) stream.

    Enters ALERTING the instant a level-2 sample arrives; returns to QUIET
    once the level has stayed below 2 for ``release_after`` seconds.
    Every transition is logged to ``events``.
    """

    def __init__(self, release_after: float = DEFAULT_RELEASE_HYSTERESIS):
        if release_after < 0:
            raise ValueError("release_after must be non-negative")
        self.release_after = release_after
        self.status = AlertStatus.QUIET
        self.since: float | None = None
        self.events: list[AlertEvent] = []
        self._below_since: float | None = None
        self._last_time: float | None = None

    def step(self, timestamp: float, level: int) -> AlertEvent | None:
        """Feed one fused sample; returns the transition event, if any."""
        level = _check_level(level, "fused")
        if self._last_time is not None and timestamp < self._last_time:
            raise TimestampRegression(
                f"timestamp {timestamp} precedes {self._last_time}"
            )
        self._last_time = timestamp

        event = None
        if self.status is AlertStatus.QUIET:
            if level == 2:
                self.status = AlertStatus.ALERTING
                self.since = timestamp
                self._below_since = None
                event = AlertEvent(timestamp, level, "start")
        else:
            if level == 2:
                self._below_since = None
            else:
                if self._below_since is None:
                    self._below_since = timestamp
                if timestamp - self._below_since >= self.release_after:
                    self.status = AlertStatus.QUIET
                    self.since = timestamp
                    self._below_since = None
                    event = AlertEvent(timestamp, level, "end")
        if event is not None:
            self.events.append(event)
        return event


def step_alert(machine: AlertMachine, timestamp: float, level: int) -> AlertEvent | None:
    """Advance the alert machine one sample; see :meth:`AlertMachine.step`."""
    return machine.step(timestamp, level)
