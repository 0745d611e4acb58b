"""Stimulation policy: when to nudge the learner and with what words.

The companion times its patience from the learner's own rhythm: T is the
mean gap between their clicks/keystrokes, and the wait window is tau = n*T.
If the window expires, or the learner starts moving away from the flagged
activities, one candidate is picked uniformly at random (seeded) and a
prompt is rendered from a fixed question template.  The learner's
self-assessed curiosity profile selects how elaborate the prompt may be.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence, Union

from .events import ACTION_KINDS, EventKind, InputEvent
from .novelty import Trigger, TriggerKind
from .world import POSITION_RING, Position, PositionSample, distance

__all__ = [
    "CuriosityProfile",
    "MoodEstimate",
    "NoAction",
    "PolicyConfig",
    "Prompt",
    "PromptTemplate",
    "PropensityClass",
    "StimulationStrategy",
    "TEMPLATES",
    "WaitSnapshot",
    "WaitState",
    "classify_profile",
    "evaluate_wait",
    "mean_action_interval",
    "mood_stub",
    "render_prompt",
    "strategy_for",
    "wait_duration",
]

DEFAULT_FALLBACK_T0_MS = 2000
DEFAULT_N = 3


@dataclass(frozen=True)
class CuriosityProfile:
    """Questionnaire self-assessment: M responses on a 1-7 agreement scale."""

    responses: tuple[int, ...]

    def __init__(self, responses: Iterable[int]) -> None:
        object.__setattr__(self, "responses", tuple(responses))
        if not self.responses:
            raise ValueError("curiosity profile needs at least one response")
        bad = [r for r in self.responses if not 1 <= r <= 7]
        if bad:
            raise ValueError(f"responses outside the 1-7 scale: {bad}")

    @property
    def mean(self) -> float:
        return sum(self.responses) / len(self.responses)


class PropensityClass(str, Enum):
    LOW = "low"
    MEDIUM = "medium"
    HIGH = "high"


class Complexity(str, Enum):
    SIMPLE = "simple"
    MODERATE = "moderate"
    RICH = "rich"


class Medium(str, Enum):
    TEXT = "text"


class Persuasion(str, Enum):
    SUGGESTION = "suggestion"
    QUESTION = "question"
    CHALLENGE = "challenge"


@dataclass(frozen=True)
class StimulationStrategy:
    complexity: Complexity
    medium: Medium
    persuasion: Persuasion
    # optional authored sentence appended after the template core
    elaboration: str = ""


DEFAULT_STRATEGY_TABLE: dict[PropensityClass, StimulationStrategy] = {
    # low-propensity learners get the gentlest wording so the nudge never
    # tips into anxiety; high-propensity learners can take a challenge
    PropensityClass.LOW: StimulationStrategy(
        Complexity.SIMPLE, Medium.TEXT, Persuasion.SUGGESTION
    ),
    PropensityClass.MEDIUM: StimulationStrategy(
        Complexity.MODERATE, Medium.TEXT, Persuasion.QUESTION
    ),
    PropensityClass.HIGH: StimulationStrategy(
        Complexity.RICH, Medium.TEXT, Persuasion.CHALLENGE
    ),
}


@dataclass(frozen=True)
class MoodEstimate:
    arousal: float
    valence: float
    dominance: float

    def __post_init__(self):
        for name in ("arousal", "valence", "dominance"):
            v = getattr(self, name)
            if not 0 <= v <= 1:
                raise ValueError(f"{name} {v} outside [0, 1]")


class PromptTemplate(str, Enum):
    NEW_CONCEPT = "new_concept"
    SURPRISING_CONCEPT = "surprising_concept"


TEMPLATES: dict[PromptTemplate, str] = {
    PromptTemplate.NEW_CONCEPT: (
        "Would you like to learn something about {concept}? "
        "You can explore it by participating in {activity} here."
    ),
    PromptTemplate.SURPRISING_CONCEPT: (
        "There may be other ways of explaining the concept {concept}, "
        "would you like to see how it is done in {activity}?"
    ),
}


@dataclass(frozen=True)
class Prompt:
    text: str
    activity_id: str
    template: PromptTemplate
    concept_id: int
    issued_at: int


@dataclass
class WaitState:
    """An open patience window over a fixed candidate list.

    ``position_samples`` collects the avatar positions seen since the wait
    opened (the anchor is the first sample); the away rule reads the last
    ``away_samples`` of them.
    """

    candidates: tuple[str, ...]
    candidate_positions: dict[str, Position]
    opened_at: int
    deadline: int
    tau: int
    anchor_position: Position
    position_samples: list[PositionSample] = field(default_factory=list)
    away_samples: int = 3

    def __post_init__(self):
        if not self.candidates:
            raise ValueError("a wait needs at least one candidate activity")
        if self.deadline <= self.opened_at:
            raise ValueError("wait deadline must lie after its opening time")
        if not self.position_samples:
            self.position_samples.append(
                PositionSample(self.opened_at, self.anchor_position)
            )

    def observe_position(self, sample: PositionSample) -> None:
        self.position_samples.append(sample)
        del self.position_samples[:-POSITION_RING]

    def nearest_candidate_distance(self, pos: Position) -> float:
        # only current candidates count: the list may shrink while open
        return min(distance(pos, self.candidate_positions[c]) for c in self.candidates)


@dataclass(frozen=True)
class WaitSnapshot:
    """What the policy sees at evaluation time."""

    now: int
    engaged_activity: str | None = None


@dataclass(frozen=True)
class NoAction:
    reason: str  # "engaged" or "waiting"


@dataclass(frozen=True)
class Stimulate:
    activity_id: str


WaitDecision = Union[NoAction, Stimulate]


def mean_action_interval(
    events: Sequence[InputEvent], fallback_t0_ms: float = DEFAULT_FALLBACK_T0_MS
) -> float:
    """Mean gap in ms between consecutive clicks/keystrokes.

    Mouse movement is excluded: it only turns the view.  With fewer than
    two qualifying events there is no gap to average, so the configured
    fallback is returned.
    """
    times = [e.t for e in events if e.kind in ACTION_KINDS]
    if len(times) < 2:
        return float(fallback_t0_ms)
    gaps = [b - a for a, b in zip(times, times[1:])]
    return sum(gaps) / len(gaps)


def wait_duration(T: float, n: int) -> int:
    """tau = n*T, rounded to the nearest millisecond."""
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    if T <= 0:
        raise ValueError(f"mean action interval must be positive, got {T}")
    return round(n * T)


def _moving_away(state: WaitState) -> bool:
    k = state.away_samples
    recent = state.position_samples[-k:]
    if len(recent) < k:
        return False
    dists = [state.nearest_candidate_distance(s.position) for s in recent]
    return all(a < b for a, b in zip(dists, dists[1:]))


def evaluate_wait(
    state: WaitState, snapshot: WaitSnapshot, rng: random.Random
) -> WaitDecision:
    """Decide what an open wait does at this instant.

    Engaging any candidate strictly before the deadline wins and no prompt
    is ever issued for this wait.  At or past the deadline, or as soon as
    the learner is walking away (nearest-candidate distance strictly rising
    over the last ``away_samples`` positions), one candidate is drawn
    uniformly with the session rng.
    """
    if snapshot.engaged_activity in state.candidates and snapshot.now < state.deadline:
        return NoAction("engaged")
    if snapshot.now >= state.deadline or _moving_away(state):
        return Stimulate(rng.choice(state.candidates))
    return NoAction("waiting")


def classify_profile(
    cp: CuriosityProfile, low_below: float = 3.0, high_at_or_above: float = 5.0
) -> PropensityClass:
    """Bucket the mean questionnaire score into low / medium / high propensity."""
    if not cp.responses:
        raise ValueError("cannot classify an empty curiosity profile")
    mu = cp.mean
    if mu < low_below:
        return PropensityClass.LOW
    if mu < high_at_or_above:
        return PropensityClass.MEDIUM
    return PropensityClass.HIGH


def strategy_for(
    klass: PropensityClass,
    table: dict[PropensityClass, StimulationStrategy] | None = None,
) -> StimulationStrategy:
    """Total, deterministic propensity-class -> strategy lookup."""
    return (table or DEFAULT_STRATEGY_TABLE)[klass]


def render_prompt(
    trigger: Trigger,
    concept_name: str,
    activity_id: str,
    activity_name: str,
    ss: StimulationStrategy,
    now: int,
) -> Prompt:
    """Instantiate the question template for this trigger.

    The template core is fixed wording; the strategy may append an authored
    elaboration sentence but never alters the core.
    """
    if not concept_name:
        raise ValueError("concept name must be non-empty")
    if not activity_name:
        raise ValueError("activity name must be non-empty")
    template = (
        PromptTemplate.NEW_CONCEPT
        if trigger.kind is TriggerKind.NEW_CONCEPT
        else PromptTemplate.SURPRISING_CONCEPT
    )
    text = TEMPLATES[template].format(concept=concept_name, activity=activity_name)
    if ss.elaboration:
        text = f"{text} {ss.elaboration}"
    return Prompt(
        text=text,
        activity_id=activity_id,
        template=template,
        concept_id=trigger.concept_id,
        issued_at=now,
    )


def mood_stub(events: Sequence[InputEvent]) -> MoodEstimate:
    """Placeholder mood reading: always neutral.

    A real input-dynamics mood model can be plugged in here; nothing in the
    shipped policy conditions on mood.
    """
    return MoodEstimate(0.5, 0.5, 0.5)


@dataclass(frozen=True)
class PolicyConfig:
    """Tunable policy knobs, loadable from a JSON document."""

    n: int = DEFAULT_N
    fallback_t0_ms: int = DEFAULT_FALLBACK_T0_MS
    vicinity_radius: float = 10.0
    moving_away_samples: int = 3
    low_below: float = 3.0
    high_at_or_above: float = 5.0
    strategy_table: tuple[tuple[PropensityClass, StimulationStrategy], ...] = tuple(
        DEFAULT_STRATEGY_TABLE.items()
    )

    def strategies(self) -> dict[PropensityClass, StimulationStrategy]:
        return dict(self.strategy_table)

    def strategy_for_profile(self, cp: CuriosityProfile) -> StimulationStrategy:
        klass = classify_profile(cp, self.low_below, self.high_at_or_above)
        return strategy_for(klass, self.strategies())
