"""Input events: the learner's raw mouse/keyboard stream.

Only clicks and key presses move the avatar or activate anything in the
world; mouse movement just changes the viewing direction, so it is kept
in the log but excluded from action-timing statistics and from the
engagement rule.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class EventKind(str, Enum):
    MOUSE_LEFT = "mouse_left"
    MOUSE_RIGHT = "mouse_right"
    MOUSE_MOVE = "mouse_move"
    KEY_PRESS = "key_press"


# Kinds that count as deliberate actions (drive the avatar, reset idleness).
ACTION_KINDS = frozenset(
    {EventKind.MOUSE_LEFT, EventKind.MOUSE_RIGHT, EventKind.KEY_PRESS}
)


@dataclass(frozen=True)
class InputEvent:
    """One input action at t milliseconds since session start."""

    t: int
    kind: EventKind

    def __post_init__(self):
        if self.t < 0:
            raise ValueError(f"event time {self.t} is negative")
