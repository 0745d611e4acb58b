"""Offline scenario runner: scripted learners driving a full session.

A scenario is a JSON document naming a world, a learner map, a curiosity
profile, a seed, and a script of timed steps.  Running it produces a
transcript (one JSON object per line, stable key order) and summary
metrics; the same scenario and seed always produce byte-identical
transcripts.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from typing import Union

from .documents import (
    DataStore,
    DocumentError,
    fcm_from_doc,
    policy_from_doc,
    profile_from_doc,
    world_from_doc,
)
from .events import EventKind
from .fcm import Fcm
from .policy import CuriosityProfile, PolicyConfig
from .session import ACK_ACCEPT, ACK_IGNORE, CompanionSession, edit_from_doc
from .world import FcmEdit, Position, WorldMap

__all__ = [
    "Metrics",
    "Scenario",
    "ScenarioError",
    "SimResult",
    "Transcript",
    "load_scenario",
    "run_scenario",
    "scenario_from_doc",
]


class ScenarioError(ValueError):
    """A scenario document or script that cannot be run."""


# ----------------------------------------------------------------------
# script steps

@dataclass(frozen=True)
class MoveTo:
    t: int
    target: Position


@dataclass(frozen=True)
class Idle:
    ms: int


@dataclass(frozen=True)
class InputBurst:
    t: int
    kind: EventKind
    count: int
    gap_ms: int


@dataclass(frozen=True)
class EngageActivity:
    t: int
    activity_id: str


@dataclass(frozen=True)
class EditFcm:
    t: int
    edit: FcmEdit


@dataclass(frozen=True)
class AcceptPrompt:
    t: int


@dataclass(frozen=True)
class IgnorePrompt:
    t: int


ScriptStep = Union[
    MoveTo, Idle, InputBurst, EngageActivity, EditFcm, AcceptPrompt, IgnorePrompt
]


@dataclass(frozen=True)
class Scenario:
    id: str
    world: WorldMap
    learner_fcm: Fcm
    profile: CuriosityProfile
    seed: int
    config: PolicyConfig
    script: tuple[ScriptStep, ...]


@dataclass(frozen=True)
class Metrics:
    prompts_issued: int
    prompts_accepted: int
    activities_engaged: int
    time_idle_ms: int

    def to_doc(self) -> dict:
        return {
            "prompts_issued": self.prompts_issued,
            "prompts_accepted": self.prompts_accepted,
            "activities_engaged": self.activities_engaged,
            "time_idle_ms": self.time_idle_ms,
        }


@dataclass(frozen=True)
class Transcript:
    records: tuple[dict, ...]

    def to_jsonl(self) -> str:
        """One record per line, sorted keys, no spaces: replayable verbatim."""
        return "".join(
            json.dumps(r, sort_keys=True, separators=(",", ":")) + "\n"
            for r in self.records
        )


@dataclass(frozen=True)
class SimResult:
    transcript: Transcript
    metrics: Metrics
    session: CompanionSession


# ----------------------------------------------------------------------
# parsing

def _step_from_doc(doc: dict) -> ScriptStep:
    action = doc.get("action")
    try:
        if action == "move_to":
            return MoveTo(
                int(doc["t"]),
                Position(
                    float(doc["x"]), float(doc["y"]), float(doc.get("z", 0.0))
                ),
            )
        if action == "idle":
            ms = int(doc["ms"])
            if ms < 0:
                raise ScenarioError(f"idle ms must be >= 0, got {ms}")
            return Idle(ms)
        if action == "input_burst":
            count = int(doc["count"])
            gap = int(doc["gap_ms"])
            if count < 1:
                raise ScenarioError(f"input_burst count must be >= 1, got {count}")
            if gap < 0:
                raise ScenarioError(f"input_burst gap_ms must be >= 0, got {gap}")
            return InputBurst(int(doc["t"]), EventKind(doc["kind"]), count, gap)
        if action == "engage":
            return EngageActivity(int(doc["t"]), str(doc["activity_id"]))
        if action == "edit_fcm":
            return EditFcm(int(doc["t"]), edit_from_doc(doc["edit"]))
        if action == "accept_prompt":
            return AcceptPrompt(int(doc["t"]))
        if action == "ignore_prompt":
            return IgnorePrompt(int(doc["t"]))
    except ScenarioError:
        raise
    except (TypeError, KeyError, ValueError) as exc:
        raise ScenarioError(f"bad script step {doc!r}: {exc}") from exc
    raise ScenarioError(f"unknown script action {action!r}")


def scenario_from_doc(doc: dict, store: DataStore) -> Scenario:
    """Parse a scenario document, resolving named references via the store."""

    def fcm_field(value) -> Fcm:
        if isinstance(value, str):
            return fcm_from_doc(store.read_json(value))
        return fcm_from_doc(value)

    try:
        world = world_from_doc(
            store.read_json(f"worlds/{doc['world']}.json"), store.read_json
        )
        if "companion_fcm" in doc:
            world = replace(world, companion_fcm=fcm_field(doc["companion_fcm"]))
        return Scenario(
            id=str(doc["id"]),
            world=world,
            learner_fcm=fcm_field(doc["learner_fcm"]),
            profile=profile_from_doc(doc["profile"]),
            seed=int(doc["seed"]),
            config=policy_from_doc(doc.get("policy")),
            script=tuple(_step_from_doc(s) for s in doc.get("script", ())),
        )
    except ScenarioError:
        raise
    except DocumentError as exc:
        raise ScenarioError(f"scenario references a bad document: {exc}") from exc
    except (TypeError, KeyError, ValueError) as exc:
        raise ScenarioError(f"bad scenario document: {exc}") from exc


def load_scenario(store: DataStore, name: str) -> Scenario:
    """Load a bundled or data-dir scenario by name."""
    return scenario_from_doc(store.read_json(f"scenarios/{name}.json"), store)


# ----------------------------------------------------------------------
# running

def _oldest_unacked(session: CompanionSession) -> int:
    for index, entry in enumerate(session.outbox):
        if entry.ack is None:
            return index
    raise ScenarioError("script acknowledges a prompt but none is pending")


def run_scenario(scenario: Scenario, seed: int | None = None) -> SimResult:
    """Run the script to completion and return transcript plus metrics."""
    session = CompanionSession(
        world=scenario.world,
        learner_fcm=scenario.learner_fcm,
        profile=scenario.profile,
        seed=scenario.seed if seed is None else seed,
        config=scenario.config,
    )
    clock = 0
    idle_total = 0

    def check(t: int, step: ScriptStep) -> int:
        if t < clock:
            raise ScenarioError(f"script goes back in time at {step!r}")
        return t

    for step in scenario.script:
        if isinstance(step, MoveTo):
            clock = check(step.t, step)
            session.move(step.target, clock)
        elif isinstance(step, Idle):
            idle_total += step.ms
            clock = clock + step.ms
            session.idle_until(clock)
        elif isinstance(step, InputBurst):
            t = check(step.t, step)
            for k in range(step.count):
                clock = t + k * step.gap_ms
                session.input(step.kind, clock)
        elif isinstance(step, EngageActivity):
            clock = check(step.t, step)
            session.engage(step.activity_id, clock)
        elif isinstance(step, EditFcm):
            clock = check(step.t, step)
            session.edit_fcm(step.edit, clock)
        elif isinstance(step, AcceptPrompt):
            clock = check(step.t, step)
            index = _oldest_unacked(session)
            target = session.outbox[index].prompt.activity_id
            session.ack_prompt(index, ACK_ACCEPT, clock)
            session.engage(target, clock)
        elif isinstance(step, IgnorePrompt):
            clock = check(step.t, step)
            session.ack_prompt(index=_oldest_unacked(session), response=ACK_IGNORE, t=clock)
        else:  # pragma: no cover - parser rejects unknown steps
            raise ScenarioError(f"unknown step {step!r}")

    metrics = Metrics(
        prompts_issued=len(session.outbox),
        prompts_accepted=sum(1 for e in session.outbox if e.ack == ACK_ACCEPT),
        activities_engaged=session.engagement_count,
        time_idle_ms=idle_total,
    )
    return SimResult(Transcript(tuple(session.transcript)), metrics, session)
