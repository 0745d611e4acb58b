"""The companion loop: one session tying world state, novelty detection,
and the stimulation policy together.

A session is driven by timestamped items (moves, raw inputs, knowledge-map
edits, engagements, prompt acknowledgments).  Every item advances the
session clock; crossing an open wait's deadline first runs the deadline
tick at exactly the deadline time, so a batch replayed late produces the
same trace as live play with an idle timer.  All randomness comes from one
seeded generator, consumed only when a prompt target is drawn, which makes
whole sessions replayable bit-for-bit.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .events import EventKind, InputEvent
from .fcm import Fcm
from .novelty import (
    NoveltyReport,
    activities_in_vicinity,
    detect,
    mark_novel,
)
from .policy import (
    CuriosityProfile,
    NoAction,
    PolicyConfig,
    Prompt,
    Stimulate,
    WaitSnapshot,
    WaitState,
    evaluate_wait,
    mean_action_interval,
    render_prompt,
    wait_duration,
)
from .world import FcmEdit, Position, PositionSample, SessionWorldState, WorldMap

# A prompted activity is not prompted again for this many wait windows.
COOLDOWN_TAU_FACTOR = 5

ACK_ACCEPT = "accept"
ACK_IGNORE = "ignore"


class AckError(ValueError):
    """Prompt acknowledgment for a bad index or an already-answered prompt."""


class SessionTimeError(ValueError):
    """Item timestamp earlier than the session clock."""


@dataclass
class PromptEntry:
    prompt: Prompt
    tau: int
    ack: str | None = None


class CompanionSession:
    """One learner's session: world state, wait machinery, prompt outbox."""

    def __init__(
        self,
        world: WorldMap,
        learner_fcm: Fcm,
        profile: CuriosityProfile,
        seed: int,
        config: PolicyConfig | None = None,
    ) -> None:
        self.world = world
        self.config = config or PolicyConfig()
        self.profile = profile
        self.seed = seed
        self.rng = random.Random(seed)
        self.state = SessionWorldState(world, learner_fcm)
        self.wait: WaitState | None = None
        self.outbox: list[PromptEntry] = []
        self.cooldown_until: dict[str, int] = {}
        self.transcript: list[dict] = []
        self.last_t = 0
        self.engagement_count = 0
        self._novelty = detect(learner_fcm, world.companion_fcm)
        self._record(0, "session_started", world_id=world.id, seed=seed)
        self._record_novelty(0)
        self._tick(0)

    # ------------------------------------------------------------------
    # transcript

    def _record(self, t: int, record_type: str, **fields) -> None:
        self.transcript.append({"t": t, "type": record_type, **fields})

    def _record_novelty(self, t: int) -> None:
        c_new, r_s = self._novelty
        report = self.full_report()
        self._record(
            t,
            "novelty_report",
            c_new=sorted(c_new),
            r_s=sorted(p.as_tuple() for p in r_s),
            novel_activities=report.novel_ids(),
        )

    # ------------------------------------------------------------------
    # novelty views

    def full_report(self) -> NoveltyReport:
        """Novelty verdicts over every activity in the world."""
        c_new, r_s = self._novelty
        return mark_novel(self.world.activities, c_new, r_s)

    def _refresh_novelty(self, now: int) -> None:
        self._novelty = detect(self.state.learner_fcm, self.world.companion_fcm)
        self._record_novelty(now)

    # ------------------------------------------------------------------
    # clock

    def _check_time(self, t: int) -> None:
        if t < self.last_t:
            raise SessionTimeError(f"item at t={t} behind session clock {self.last_t}")

    def advance_to(self, t: int) -> None:
        """Run any deadline ticks that fall at or before t."""
        while self.wait is not None and self.wait.deadline <= t:
            self._tick(self.wait.deadline)

    def idle_until(self, t: int) -> None:
        """Let time pass with no learner action up to t."""
        self._check_time(t)
        self.advance_to(t)
        self._tick(t)

    # ------------------------------------------------------------------
    # driven items

    def move(self, target: Position, t: int) -> None:
        self._check_time(t)
        self.advance_to(t)
        before = self.state.engaged
        self.state.move_avatar(target, t)
        self._note_engagement(before)
        if self.wait is not None:
            self.wait.observe_position(PositionSample(t, target))
        self._record(t, "move", x=target.x, y=target.y, z=target.z)
        self._tick(t)

    def input(self, kind: EventKind, t: int) -> None:
        self._check_time(t)
        self.advance_to(t)
        before = self.state.engaged
        self.state.record_event(InputEvent(t, kind))
        self._note_engagement(before)
        self._record(t, "input", kind=kind.value)
        self._tick(t)

    def engage(self, activity_id: str, t: int) -> None:
        """Click an activity: moves the avatar onto it and engages."""
        self._check_time(t)
        self.advance_to(t)
        activity = self.world.activity(activity_id)
        before = self.state.engaged
        self.state.move_avatar(activity.position, t)
        self._note_engagement(before)
        if self.wait is not None:
            self.wait.observe_position(PositionSample(t, activity.position))
        self._record(t, "engage", activity_id=activity_id)
        self._tick(t)

    def edit_fcm(self, edit: FcmEdit, t: int) -> None:
        self._check_time(t)
        self.advance_to(t)
        self.state.apply_fcm_edit(edit)
        self._record(t, "fcm_edit", edit=edit_to_doc(edit))
        self._refresh_novelty(t)
        self._tick(t)

    def replace_fcm(self, fcm: Fcm, t: int) -> None:
        self._check_time(t)
        self.advance_to(t)
        self.state.learner_fcm = fcm
        self._record(t, "fcm_replaced", concepts=len(fcm.concepts))
        self._refresh_novelty(t)
        self._tick(t)

    def ack_prompt(self, index: int, response: str, t: int) -> None:
        self._check_time(t)
        if response not in (ACK_ACCEPT, ACK_IGNORE):
            raise AckError(f"unknown prompt response {response!r}")
        if not 0 <= index < len(self.outbox):
            raise AckError(f"no prompt with index {index}")
        entry = self.outbox[index]
        if entry.ack is not None:
            raise AckError(f"prompt {index} already acknowledged")
        self.advance_to(t)
        entry.ack = response
        if response == ACK_IGNORE:
            aid = entry.prompt.activity_id
            until = t + COOLDOWN_TAU_FACTOR * entry.tau
            self.cooldown_until[aid] = max(self.cooldown_until.get(aid, 0), until)
        self._record(t, "learner_response", index=index, response=response)
        self._tick(t)

    def _note_engagement(self, before: str | None) -> None:
        after = self.state.engaged
        if after is not None and after != before:
            self.engagement_count += 1

    # ------------------------------------------------------------------
    # the companion tick

    def _tick(self, now: int) -> None:
        self.last_t = max(self.last_t, now)
        report = self.full_report()
        if self.wait is not None:
            self._resolve_wait(report, now)
        if self.wait is None and self.state.engaged is None:
            eligible = self._eligible_candidates(report, now)
            if eligible:
                self._open_wait(eligible, now)

    def _eligible_candidates(self, report: NoveltyReport, now: int) -> list[str]:
        near = activities_in_vicinity(
            self.state.avatar, self.world, self.config.vicinity_radius
        )
        return [
            a.id
            for a in near
            if report.novel_activities[a.id].novel
            and self.cooldown_until.get(a.id, 0) <= now
        ]

    def _open_wait(self, candidates: list[str], now: int) -> None:
        T = mean_action_interval(self.state.events, self.config.fallback_t0_ms)
        if T <= 0:
            # all qualifying events share one timestamp; treat as cold start
            T = float(self.config.fallback_t0_ms)
        tau = wait_duration(T, self.config.n)
        self.wait = WaitState(
            candidates=tuple(candidates),
            candidate_positions={
                aid: self.world.activity(aid).position for aid in candidates
            },
            opened_at=now,
            deadline=now + tau,
            tau=tau,
            anchor_position=self.state.avatar,
            away_samples=self.config.moving_away_samples,
        )
        self._record(
            now,
            "wait_opened",
            candidates=list(candidates),
            mean_interval_ms=T,
            tau=tau,
            deadline=now + tau,
        )

    def _close_wait(self, now: int, reason: str) -> None:
        self._record(now, "wait_closed", reason=reason)
        self.wait = None

    def _resolve_wait(self, report: NoveltyReport, now: int) -> None:
        wait = self.wait
        assert wait is not None
        near_ids = {
            a.id
            for a in activities_in_vicinity(
                self.state.avatar, self.world, self.config.vicinity_radius
            )
        }
        still = tuple(
            aid
            for aid in wait.candidates
            if aid in near_ids
            and report.novel_activities[aid].novel
            and self.cooldown_until.get(aid, 0) <= now
        )
        if not still:
            self._close_wait(now, "no_candidates")
            return
        wait.candidates = still
        decision = evaluate_wait(
            wait, WaitSnapshot(now, self.state.engaged), self.rng
        )
        if isinstance(decision, Stimulate):
            self._issue_prompt(decision.activity_id, report, wait.tau, now)
            self._close_wait(now, "stimulated")
        elif isinstance(decision, NoAction) and decision.reason == "engaged":
            self._close_wait(now, "engaged")
        # "waiting": leave the wait open

    def _issue_prompt(self, activity_id: str, report: NoveltyReport, tau: int, now: int) -> None:
        trigger = report.novel_activities[activity_id].triggers[0]
        names = self.world.companion_fcm
        if not names.has_concept(trigger.concept_id):
            names = self.state.learner_fcm
        concept_name = names.concept(trigger.concept_id).name
        activity = self.world.activity(activity_id)
        ss = self.config.strategy_for_profile(self.profile)
        prompt = render_prompt(
            trigger, concept_name, activity_id, activity.name, ss, now
        )
        self.outbox.append(PromptEntry(prompt, tau))
        self.cooldown_until[activity_id] = max(
            self.cooldown_until.get(activity_id, 0), now + COOLDOWN_TAU_FACTOR * tau
        )
        self._record(
            now,
            "prompt_issued",
            index=len(self.outbox) - 1,
            activity_id=activity_id,
            template=prompt.template.value,
            concept_id=prompt.concept_id,
            text=prompt.text,
        )

    # ------------------------------------------------------------------
    # snapshots

    def state_snapshot(self) -> dict:
        """Consistent view at the latest tick, stable across save/reload."""
        from .documents import fcm_to_doc  # local import to avoid a cycle

        report = self.full_report()
        wait_doc = None
        if self.wait is not None:
            wait_doc = {
                "candidates": list(self.wait.candidates),
                "opened_at": self.wait.opened_at,
                "deadline": self.wait.deadline,
                "tau": self.wait.tau,
            }
        return {
            "last_t": self.last_t,
            "avatar": {"x": self.state.avatar.x, "y": self.state.avatar.y, "z": self.state.avatar.z},
            "engaged": self.state.engaged,
            "learner_fcm": fcm_to_doc(self.state.learner_fcm),
            "novelty": report.to_doc(),
            "wait": wait_doc,
            "prompt_count": len(self.outbox),
        }

    def prompt_docs(self, since: int = 0) -> list[dict]:
        """Issued prompts from index ``since`` on, oldest first."""
        out = []
        for index, entry in enumerate(self.outbox):
            if index < since:
                continue
            p = entry.prompt
            out.append(
                {
                    "index": index,
                    "text": p.text,
                    "activity_id": p.activity_id,
                    "template": p.template.value,
                    "concept_id": p.concept_id,
                    "issued_at": p.issued_at,
                    "ack": entry.ack,
                }
            )
        return out

    # ------------------------------------------------------------------
    # persistence

    def to_doc(self) -> dict:
        """Everything needed to resume this exact session after a restart."""
        from .documents import (
            fcm_to_doc,
            policy_to_doc,
            position_to_doc,
            world_to_doc,
        )

        version, ints, gauss = self.rng.getstate()
        wait_doc = None
        if self.wait is not None:
            w = self.wait
            wait_doc = {
                "candidates": list(w.candidates),
                "opened_at": w.opened_at,
                "deadline": w.deadline,
                "tau": w.tau,
                "anchor": position_to_doc(w.anchor_position),
                "samples": [
                    {"t": s.t, **position_to_doc(s.position)}
                    for s in w.position_samples
                ],
                "away_samples": w.away_samples,
            }
        return {
            "world": world_to_doc(self.world),
            "seed": self.seed,
            "rng_state": [version, list(ints), gauss],
            "profile": list(self.profile.responses),
            "config": policy_to_doc(self.config),
            "last_t": self.last_t,
            "avatar": position_to_doc(self.state.avatar),
            "engaged": self.state.engaged,
            "samples": [
                {"t": s.t, **position_to_doc(s.position)} for s in self.state.samples
            ],
            "events": [{"t": e.t, "kind": e.kind.value} for e in self.state.events],
            "learner_fcm": fcm_to_doc(self.state.learner_fcm),
            "wait": wait_doc,
            "outbox": [
                {
                    "text": e.prompt.text,
                    "activity_id": e.prompt.activity_id,
                    "template": e.prompt.template.value,
                    "concept_id": e.prompt.concept_id,
                    "issued_at": e.prompt.issued_at,
                    "tau": e.tau,
                    "ack": e.ack,
                }
                for e in self.outbox
            ],
            "cooldown_until": dict(self.cooldown_until),
            "transcript": list(self.transcript),
            "engagement_count": self.engagement_count,
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "CompanionSession":
        """Rebuild a session saved with :meth:`to_doc`, tick for tick."""
        from .documents import (
            fcm_from_doc,
            policy_from_doc,
            position_from_doc,
            profile_from_doc,
            world_from_doc,
        )
        from .policy import PromptTemplate

        world = world_from_doc(doc["world"])
        session = cls.__new__(cls)
        session.world = world
        session.config = policy_from_doc(doc["config"])
        session.profile = profile_from_doc({"responses": doc["profile"]})
        session.seed = int(doc["seed"])
        session.rng = random.Random()
        version, ints, gauss = doc["rng_state"]
        session.rng.setstate((version, tuple(ints), gauss))
        session.state = SessionWorldState(world, fcm_from_doc(doc["learner_fcm"]))
        session.state.avatar = position_from_doc(doc["avatar"])
        session.state.engaged = doc["engaged"]
        session.state.samples.clear()
        for s in doc["samples"]:
            session.state.samples.append(
                PositionSample(int(s["t"]), position_from_doc(s))
            )
        session.state.events = [
            InputEvent(int(e["t"]), EventKind(e["kind"])) for e in doc["events"]
        ]
        session.wait = None
        if doc["wait"] is not None:
            w = doc["wait"]
            session.wait = WaitState(
                candidates=tuple(w["candidates"]),
                candidate_positions={
                    aid: world.activity(aid).position for aid in w["candidates"]
                },
                opened_at=int(w["opened_at"]),
                deadline=int(w["deadline"]),
                tau=int(w["tau"]),
                anchor_position=position_from_doc(w["anchor"]),
                away_samples=int(w["away_samples"]),
            )
            session.wait.position_samples = [
                PositionSample(int(s["t"]), position_from_doc(s))
                for s in w["samples"]
            ]
        session.outbox = [
            PromptEntry(
                Prompt(
                    text=e["text"],
                    activity_id=e["activity_id"],
                    template=PromptTemplate(e["template"]),
                    concept_id=int(e["concept_id"]),
                    issued_at=int(e["issued_at"]),
                ),
                tau=int(e["tau"]),
                ack=e["ack"],
            )
            for e in doc["outbox"]
        ]
        session.cooldown_until = {k: int(v) for k, v in doc["cooldown_until"].items()}
        session.transcript = list(doc["transcript"])
        session.last_t = int(doc["last_t"])
        session.engagement_count = int(doc["engagement_count"])
        session._novelty = detect(session.state.learner_fcm, world.companion_fcm)
        return session


def edit_to_doc(edit: FcmEdit) -> dict:
    from .world import AddConcept, ClearEdge, SetEdge

    if isinstance(edit, AddConcept):
        return {"op": "add_concept", "id": edit.concept_id}
    if isinstance(edit, SetEdge):
        return {"op": "set_edge", "i": edit.i, "j": edit.j, "w": edit.w}
    if isinstance(edit, ClearEdge):
        return {"op": "clear_edge", "i": edit.i, "j": edit.j}
    raise ValueError(f"unknown edit {edit!r}")


def edit_from_doc(doc: dict) -> FcmEdit:
    from .world import AddConcept, ClearEdge, SetEdge

    op = doc.get("op")
    if op == "add_concept":
        return AddConcept(int(doc["id"]))
    if op == "set_edge":
        return SetEdge(int(doc["i"]), int(doc["j"]), float(doc["w"]))
    if op == "clear_edge":
        return ClearEdge(int(doc["i"]), int(doc["j"]))
    raise ValueError(f"unknown edit op {op!r}")
