"""The simulated learning world: positions, avatar movement, event logging,
and the learner's incremental knowledge-map editing.

The world is 3D-coordinate (z reserved for clients that want it); movement
is click-driven teleport-to-target, which is all the companion logic needs.
A ``SessionWorldState`` is owned by exactly one session and mutated only
through its methods; ``WorldMap`` instances are immutable and shareable.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Union

from .events import ACTION_KINDS, EventKind, InputEvent
from .fcm import Concept, Fcm, validate_fcm

POSITION_RING = 8  # recent-position samples kept; the away rule needs 3


class OutOfBoundsError(ValueError):
    """Move target outside the world bounds."""


class TimeRegressionError(ValueError):
    """Event timestamp earlier than the last logged event."""


class EditError(ValueError):
    """Knowledge-map edit referencing unknown concepts or invalid weights."""


@dataclass(frozen=True)
class Position:
    x: float
    y: float
    z: float = 0.0


@dataclass(frozen=True)
class PositionSample:
    t: int
    position: Position


def distance(a: Position, b: Position) -> float:
    """Euclidean distance between two world positions."""
    return math.sqrt((a.x - b.x) ** 2 + (a.y - b.y) ** 2 + (a.z - b.z) ** 2)


@dataclass(frozen=True)
class Bounds:
    """Axis-aligned box the avatar must stay inside."""

    min_corner: Position
    max_corner: Position

    def contains(self, p: Position) -> bool:
        lo, hi = self.min_corner, self.max_corner
        return lo.x <= p.x <= hi.x and lo.y <= p.y <= hi.y and lo.z <= p.z <= hi.z


@dataclass(frozen=True)
class LearningActivity:
    """A positioned activity teaching a set of concepts.

    ``concepts`` are ids in the world's expert-map space; ``interaction_radius``
    is how close the avatar must be to take part.
    """

    id: str
    name: str
    objectives: str
    background: str
    concepts: frozenset[int]
    position: Position
    interaction_radius: float


@dataclass(frozen=True)
class WorldMap:
    """Immutable description of one world: bounds, activities, expert map."""

    id: str
    name: str
    bounds: Bounds
    spawn: Position
    activities: tuple[LearningActivity, ...]
    vicinity_radius: float
    companion_fcm: Fcm

    def activity(self, activity_id: str) -> LearningActivity:
        for a in self.activities:
            if a.id == activity_id:
                return a
        raise KeyError(f"unknown activity id {activity_id!r}")

    def validate(self) -> list[str]:
        problems = []
        seen = set()
        known_ids = self.companion_fcm.concept_ids()
        for a in self.activities:
            if a.id in seen:
                problems.append(f"duplicate activity id {a.id!r}")
            seen.add(a.id)
            if not a.concepts:
                problems.append(f"activity {a.id} embeds no concepts")
            if a.interaction_radius <= 0:
                problems.append(f"activity {a.id} has non-positive interaction radius")
            if not self.bounds.contains(a.position):
                problems.append(f"activity {a.id} positioned outside world bounds")
            stray = set(a.concepts) - known_ids
            if stray:
                problems.append(f"activity {a.id} references unknown concepts {sorted(stray)}")
        if not self.bounds.contains(self.spawn):
            problems.append("spawn position outside world bounds")
        report = validate_fcm(self.companion_fcm)
        problems.extend(f"expert map: {m}" for m in report.messages())
        return problems


@dataclass(frozen=True)
class AddConcept:
    """Add a concept from the world's authored palette (the expert map)."""

    concept_id: int


@dataclass(frozen=True)
class SetEdge:
    i: int
    j: int
    w: float


@dataclass(frozen=True)
class ClearEdge:
    i: int
    j: int


FcmEdit = Union[AddConcept, SetEdge, ClearEdge]


class SessionWorldState:
    """Mutable per-session world state: avatar, event log, learner map.

    The event log is append-only and time-ordered; the avatar keeps a short
    ring of timestamped position samples for the moving-away rule.
    """

    def __init__(self, world: WorldMap, learner_fcm: Fcm, start_t: int = 0) -> None:
        self.world = world
        self.avatar: Position = world.spawn
        self.samples: deque[PositionSample] = deque(maxlen=POSITION_RING)
        self.samples.append(PositionSample(start_t, world.spawn))
        self.events: list[InputEvent] = []
        self.learner_fcm = learner_fcm
        self.engaged: str | None = None

    @property
    def last_event_t(self) -> int:
        return self.events[-1].t if self.events else 0

    def move_avatar(self, target: Position, now: int) -> None:
        """Click-move the avatar; logs the click that caused it."""
        if not self.world.bounds.contains(target):
            raise OutOfBoundsError(f"target {target} outside world bounds")
        if self.events and now < self.events[-1].t:
            raise TimeRegressionError(
                f"move at t={now} before last event t={self.events[-1].t}"
            )
        self.avatar = target
        self.samples.append(PositionSample(now, target))
        if self.engaged is not None:
            a = self.world.activity(self.engaged)
            if distance(target, a.position) > a.interaction_radius:
                self.engaged = None
        self.record_event(InputEvent(now, EventKind.MOUSE_LEFT))

    def record_event(self, ev: InputEvent) -> None:
        if self.events and ev.t < self.events[-1].t:
            raise TimeRegressionError(
                f"event at t={ev.t} before last event t={self.events[-1].t}"
            )
        self.events.append(ev)
        if ev.kind in ACTION_KINDS:
            here = [
                a
                for a in self.world.activities
                if distance(self.avatar, a.position) <= a.interaction_radius
            ]
            if here:
                nearest = min(here, key=lambda a: (distance(self.avatar, a.position), a.id))
                self.engaged = nearest.id

    def apply_fcm_edit(self, edit: FcmEdit) -> None:
        """Apply one palette-constrained edit; the learner map stays valid."""
        palette = self.world.companion_fcm
        if isinstance(edit, AddConcept):
            if not palette.has_concept(edit.concept_id):
                raise EditError(f"concept {edit.concept_id} is not in the palette")
            if self.learner_fcm.has_concept(edit.concept_id):
                raise EditError(f"concept {edit.concept_id} already in the learner map")
            source = palette.concept(edit.concept_id)
            self.learner_fcm = self.learner_fcm.with_concept(
                Concept(source.id, source.name)
            )
            return
        if isinstance(edit, (SetEdge, ClearEdge)):
            i, j = edit.i, edit.j
            for cid in (i, j):
                if not self.learner_fcm.has_concept(cid):
                    raise EditError(f"unknown concept {cid} in edge edit")
            if i == j:
                raise EditError(f"self-edge on concept {i} is not allowed")
            w = edit.w if isinstance(edit, SetEdge) else 0.0
            if not (-1 <= w <= 1) or not math.isfinite(w):
                raise EditError(f"edge weight {w} outside [-1, 1]")
            self.learner_fcm = self.learner_fcm.with_weight(i, j, w)
            return
        raise EditError(f"unknown edit {edit!r}")
