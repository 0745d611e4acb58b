"""A curiosity companion for virtual learning worlds.

The package detects what would look new or surprising to a learner by
diffing their fuzzy cognitive map against an expert map, decides when a
nudge is worth sending from the learner's own input rhythm, and renders
the nudge as a fixed-template question.  It ships an offline scenario
runner, an HTTP session service, and a small survey-comparison utility.
"""

from .events import ACTION_KINDS, EventKind, InputEvent
from .fcm import (
    Concept,
    Fcm,
    FuzzifiedMatrix,
    FuzzyLabel,
    MembershipResult,
    SurprisePair,
    ValidationReport,
    Violation,
    compare_fuzzified,
    concept_partition,
    fuzzify_matrix,
    fuzzify_weight,
    membership,
    reduce_matrix,
    validate_fcm,
)
from .novelty import (
    ActivityNovelty,
    NoveltyReport,
    Trigger,
    TriggerKind,
    activities_in_vicinity,
    detect,
    mark_novel,
    surprise_concepts,
)
from .policy import (
    CuriosityProfile,
    MoodEstimate,
    PolicyConfig,
    PropensityClass,
    Prompt,
    PromptTemplate,
    StimulationStrategy,
    WaitSnapshot,
    WaitState,
    classify_profile,
    evaluate_wait,
    mean_action_interval,
    render_prompt,
    strategy_for,
    wait_duration,
)
from .session import CompanionSession
from .stats import SurveySample, WelchResult, improvement_pct, welch_t
from .world import (
    Bounds,
    LearningActivity,
    Position,
    PositionSample,
    SessionWorldState,
    WorldMap,
    distance,
)

__version__ = "0.1.0"

__all__ = [
    "ACTION_KINDS",
    "ActivityNovelty",
    "Bounds",
    "CompanionSession",
    "Concept",
    "CuriosityProfile",
    "EventKind",
    "Fcm",
    "FuzzifiedMatrix",
    "FuzzyLabel",
    "InputEvent",
    "LearningActivity",
    "MembershipResult",
    "MoodEstimate",
    "NoveltyReport",
    "PolicyConfig",
    "Position",
    "PositionSample",
    "Prompt",
    "PromptTemplate",
    "PropensityClass",
    "SessionWorldState",
    "StimulationStrategy",
    "SurprisePair",
    "SurveySample",
    "Trigger",
    "TriggerKind",
    "ValidationReport",
    "Violation",
    "WaitSnapshot",
    "WaitState",
    "WelchResult",
    "WorldMap",
    "activities_in_vicinity",
    "classify_profile",
    "compare_fuzzified",
    "concept_partition",
    "detect",
    "distance",
    "evaluate_wait",
    "fuzzify_matrix",
    "fuzzify_weight",
    "improvement_pct",
    "mark_novel",
    "mean_action_interval",
    "membership",
    "reduce_matrix",
    "render_prompt",
    "strategy_for",
    "surprise_concepts",
    "validate_fcm",
    "wait_duration",
    "welch_t",
]
