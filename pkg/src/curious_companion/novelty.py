"""Novelty detection: what in this world would be new or surprising to
this learner, and which nearby activities carry it.

The detector diffs the learner's knowledge map against the expert map:
concepts the learner lacks are "something new" (c_new); causal links whose
fuzzified labels disagree are "something surprising" (the pair set r_s).
Activities embedding either kind get flagged so the stimulation policy can
pick among them.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping

import numpy as np

from .fcm import (
    Fcm,
    SurprisePair,
    compare_fuzzified,
    concept_partition,
    fuzzify_matrix,
    reduce_matrix,
)
from .world import LearningActivity, Position, WorldMap, distance

__all__ = [
    "ActivityNovelty",
    "NoveltyReport",
    "Trigger",
    "TriggerKind",
    "activities_in_vicinity",
    "detect",
    "mark_novel",
    "surprise_concepts",
]


class TriggerKind(str, Enum):
    NEW_CONCEPT = "new_concept"
    SURPRISE_CONCEPT = "surprise_concept"


@dataclass(frozen=True)
class Trigger:
    """Why an activity looks novel: one new or surprising concept it embeds."""

    kind: TriggerKind
    concept_id: int


@dataclass(frozen=True)
class ActivityNovelty:
    novel: bool
    triggers: tuple[Trigger, ...]


@dataclass(frozen=True)
class NoveltyReport:
    c_new: frozenset[int]
    r_s: frozenset[SurprisePair]
    novel_activities: Mapping[str, ActivityNovelty]

    def novel_ids(self) -> list[str]:
        return sorted(a for a, v in self.novel_activities.items() if v.novel)

    def to_doc(self) -> dict:
        return {
            "c_new": sorted(self.c_new),
            "r_s": sorted(p.as_tuple() for p in self.r_s),
            "activities": {
                aid: {
                    "novel": v.novel,
                    "triggers": [
                        {"kind": t.kind.value, "concept_id": t.concept_id}
                        for t in v.triggers
                    ],
                }
                for aid, v in sorted(self.novel_activities.items())
            },
        }


def detect(learner: Fcm, companion: Fcm) -> tuple[frozenset[int], frozenset[SurprisePair]]:
    """Diff the learner map against the expert map.

    Returns (c_new, r_s): expert-map ids the learner has not met, and the
    surprise pairs over the shared concepts, expressed in the learner's id
    space.  Shared concepts are matched by name and compared in the
    learner's concept order; learner-only concepts are ignored.
    """
    _, c_new = concept_partition(learner, companion)
    reduced = reduce_matrix(companion, c_new)

    by_name = {c.name: k for k, c in enumerate(reduced.concepts)}
    learner_keep = [k for k, c in enumerate(learner.concepts) if c.name in by_name]
    companion_order = [by_name[learner.concepts[k].name] for k in learner_keep]

    if learner_keep:
        w_learner = learner.weights[np.ix_(learner_keep, learner_keep)]
        w_companion = reduced.weights[np.ix_(companion_order, companion_order)]
    else:
        w_learner = w_companion = np.zeros((0, 0))

    ids = [learner.concepts[k].id for k in learner_keep]
    r_s = compare_fuzzified(fuzzify_matrix(w_learner), fuzzify_matrix(w_companion), ids)
    return c_new, r_s


def surprise_concepts(r_s: Iterable[SurprisePair]) -> frozenset[int]:
    """Every concept id appearing in either position of a surprise pair."""
    out: set[int] = set()
    for p in r_s:
        out.add(p.i)
        out.add(p.j)
    return frozenset(out)


def activities_in_vicinity(
    pos: Position, world: WorldMap, rho: float
) -> list[LearningActivity]:
    """Activities within rho of pos (closed ball), nearest first, ties by id."""
    if rho <= 0:
        raise ValueError(f"vicinity radius must be positive, got {rho}")
    near = [a for a in world.activities if distance(pos, a.position) <= rho]
    near.sort(key=lambda a: (distance(pos, a.position), a.id))
    return near


def mark_novel(
    activities: Iterable[LearningActivity],
    c_new: frozenset[int],
    r_s: frozenset[SurprisePair],
) -> NoveltyReport:
    """Flag each activity that embeds a new concept or a surprising one.

    A concept is surprising if it appears in either position of some pair
    in r_s.  New-concept triggers come first, each group ordered by id.
    """
    surprising = surprise_concepts(r_s)
    marked: dict[str, ActivityNovelty] = {}
    for a in activities:
        triggers = [
            Trigger(TriggerKind.NEW_CONCEPT, cid) for cid in sorted(a.concepts & c_new)
        ] + [
            Trigger(TriggerKind.SURPRISE_CONCEPT, cid)
            for cid in sorted(a.concepts & surprising)
        ]
        marked[a.id] = ActivityNovelty(bool(triggers), tuple(triggers))
    return NoveltyReport(c_new, r_s, marked)
