"""Stimulation policy: timing, waits, profiles, strategies, templates."""

from __future__ import annotations

import random

import pytest
from hypothesis import given, strategies as st

from curious_companion import (
    CuriosityProfile,
    EventKind,
    InputEvent,
    PolicyConfig,
    Position,
    PositionSample,
    PromptTemplate,
    PropensityClass,
    Trigger,
    TriggerKind,
    WaitSnapshot,
    WaitState,
    classify_profile,
    evaluate_wait,
    mean_action_interval,
    render_prompt,
    strategy_for,
    wait_duration,
)
from curious_companion.policy import (
    DEFAULT_STRATEGY_TABLE,
    Complexity,
    Medium,
    NoAction,
    Persuasion,
    Stimulate,
    mood_stub,
)

CLICK = EventKind.MOUSE_LEFT
KEY = EventKind.KEY_PRESS
MOVE = EventKind.MOUSE_MOVE


def events(*pairs):
    return [InputEvent(t, kind) for t, kind in pairs]


# ----------------------------------------------------------------------
# action timing

def test_mean_interval_averages_click_and_key_gaps():
    evs = events((0, CLICK), (1000, KEY), (4000, CLICK))
    assert mean_action_interval(evs) == pytest.approx(2000.0)


def test_mean_interval_excludes_mouse_movement():
    evs = events((0, CLICK), (500, MOVE), (900, MOVE), (1000, KEY))
    assert mean_action_interval(evs) == pytest.approx(1000.0)


def test_mean_interval_fallback_with_too_few_actions():
    assert mean_action_interval([]) == 2000.0
    assert mean_action_interval(events((100, CLICK))) == 2000.0
    assert mean_action_interval(events((100, MOVE), (200, MOVE))) == 2000.0
    assert mean_action_interval(events((100, CLICK)), fallback_t0_ms=750) == 750.0


def test_wait_duration_from_mean_interval():
    # four actions 4s apart -> T = 4000/3 ms -> tau = 4000 ms
    evs = events((0, KEY), (4000, KEY))
    T = mean_action_interval(evs)
    assert T == pytest.approx(4000.0)
    evs = events((0, KEY), (1000, KEY), (2000, KEY), (4000, KEY))
    T = mean_action_interval(evs)
    assert T == pytest.approx(4000.0 / 3.0)
    assert wait_duration(T, 3) == 4000


def test_wait_duration_scales_with_n_and_rounds():
    assert wait_duration(1000.0, 3) == 3000
    assert wait_duration(333.4, 3) == 1000
    assert wait_duration(2000.0, 1) == 2000


def test_wait_duration_rejects_bad_arguments():
    with pytest.raises(ValueError):
        wait_duration(1000.0, 0)
    with pytest.raises(ValueError):
        wait_duration(0.0, 3)
    with pytest.raises(ValueError):
        wait_duration(-5.0, 3)


@given(st.floats(min_value=1.0, max_value=1e6), st.integers(min_value=1, max_value=10))
def test_wait_duration_near_linear_in_T(T, n):
    tau = wait_duration(T, n)
    assert abs(tau - n * T) <= 0.5


# ----------------------------------------------------------------------
# waits

def make_wait(deadline=3000, candidates=("A_2",), anchor=Position(3, 5, 0)):
    return WaitState(
        candidates=tuple(candidates),
        candidate_positions={
            "A_1": Position(0, 0, 0),
            "A_2": Position(6, 0, 0),
        },
        opened_at=0,
        deadline=deadline,
        tau=deadline,
        anchor_position=anchor,
    )


def test_engaged_candidate_before_deadline_suppresses():
    wait = make_wait()
    decision = evaluate_wait(wait, WaitSnapshot(2999, "A_2"), random.Random(1))
    assert decision == NoAction("engaged")


def test_engagement_at_deadline_is_too_late():
    wait = make_wait()
    decision = evaluate_wait(wait, WaitSnapshot(3000, "A_2"), random.Random(1))
    assert isinstance(decision, Stimulate)


def test_engaged_elsewhere_does_not_suppress():
    wait = make_wait(candidates=("A_2",))
    decision = evaluate_wait(wait, WaitSnapshot(1000, "A_1"), random.Random(1))
    assert decision == NoAction("waiting")


def test_deadline_stimulates_a_candidate():
    wait = make_wait(candidates=("A_1", "A_2"))
    decision = evaluate_wait(wait, WaitSnapshot(3000, None), random.Random(1))
    assert isinstance(decision, Stimulate)
    assert decision.activity_id in {"A_1", "A_2"}


def test_stimulation_choice_is_seed_deterministic():
    wait = make_wait(candidates=("A_1", "A_2"))
    picks_a = [
        evaluate_wait(make_wait(candidates=("A_1", "A_2")),
                      WaitSnapshot(3000, None), random.Random(s)).activity_id
        for s in range(20)
    ]
    picks_b = [
        evaluate_wait(make_wait(candidates=("A_1", "A_2")),
                      WaitSnapshot(3000, None), random.Random(s)).activity_id
        for s in range(20)
    ]
    assert picks_a == picks_b
    assert len(set(picks_a)) == 2  # both candidates actually get drawn


def test_moving_away_stimulates_before_deadline():
    wait = make_wait(deadline=10_000)
    # three strictly receding samples from the nearest candidate
    for t, x in ((100, 8.0), (200, 10.0), (300, 12.0)):
        wait.observe_position(PositionSample(t, Position(x, 0, 0)))
    decision = evaluate_wait(wait, WaitSnapshot(400, None), random.Random(1))
    assert decision == Stimulate("A_2")


def test_wandering_within_reach_keeps_waiting():
    wait = make_wait(deadline=10_000)
    # distance dips in the middle: not strictly receding
    for t, x in ((100, 8.0), (200, 7.0), (300, 12.0)):
        wait.observe_position(PositionSample(t, Position(x, 0, 0)))
    decision = evaluate_wait(wait, WaitSnapshot(400, None), random.Random(1))
    assert decision == NoAction("waiting")


def test_too_few_samples_never_counts_as_moving_away():
    wait = make_wait(deadline=10_000)
    wait.observe_position(PositionSample(100, Position(20, 0, 0)))
    decision = evaluate_wait(wait, WaitSnapshot(200, None), random.Random(1))
    assert decision == NoAction("waiting")


def test_position_ring_keeps_last_eight():
    wait = make_wait(deadline=10_000)
    for k in range(20):
        wait.observe_position(PositionSample(k, Position(float(k), 0, 0)))
    assert len(wait.position_samples) == 8
    assert wait.position_samples[-1].t == 19


@given(st.integers(min_value=0, max_value=100))
def test_engagement_suppression_property(offset):
    # engaging a candidate at any instant strictly before the deadline
    # suppresses stimulation at that instant
    wait = make_wait(deadline=101)
    decision = evaluate_wait(wait, WaitSnapshot(offset, "A_2"), random.Random(0))
    assert decision == NoAction("engaged")


# ----------------------------------------------------------------------
# profiles and strategies

def test_profile_mean_and_validation():
    assert CuriosityProfile([4, 5, 6]).mean == pytest.approx(5.0)
    with pytest.raises(ValueError):
        CuriosityProfile([])
    with pytest.raises(ValueError):
        CuriosityProfile([0, 4])
    with pytest.raises(ValueError):
        CuriosityProfile([4, 8])


@pytest.mark.parametrize(
    "responses,expected",
    [
        ([1, 1, 1], PropensityClass.LOW),
        ([2, 3, 3], PropensityClass.LOW),  # mean 2.67
        ([3, 3, 3], PropensityClass.MEDIUM),  # mean 3 is the low edge of medium
        ([4, 5, 5], PropensityClass.MEDIUM),  # mean 4.67
        ([5, 5, 5], PropensityClass.HIGH),  # mean 5 is the low edge of high
        ([7, 7, 7], PropensityClass.HIGH),
    ],
)
def test_classify_profile_boundaries(responses, expected):
    assert classify_profile(CuriosityProfile(responses)) is expected


def test_strategy_table_shape():
    low = strategy_for(PropensityClass.LOW)
    med = strategy_for(PropensityClass.MEDIUM)
    high = strategy_for(PropensityClass.HIGH)
    assert (low.complexity, low.medium, low.persuasion) == (
        Complexity.SIMPLE, Medium.TEXT, Persuasion.SUGGESTION)
    assert (med.complexity, med.medium, med.persuasion) == (
        Complexity.MODERATE, Medium.TEXT, Persuasion.QUESTION)
    assert (high.complexity, high.medium, high.persuasion) == (
        Complexity.RICH, Medium.TEXT, Persuasion.CHALLENGE)


def test_policy_config_profile_strategy_round_trip():
    cfg = PolicyConfig()
    ss = cfg.strategy_for_profile(CuriosityProfile([6, 6, 6]))
    assert ss == DEFAULT_STRATEGY_TABLE[PropensityClass.HIGH]


# ----------------------------------------------------------------------
# prompt rendering

def test_new_concept_template_verbatim():
    prompt = render_prompt(
        Trigger(TriggerKind.NEW_CONCEPT, 9),
        "transpiration",
        "A_3",
        "Leaf Lab",
        strategy_for(PropensityClass.MEDIUM),
        5000,
    )
    assert prompt.text == (
        "Would you like to learn something about transpiration? "
        "You can explore it by participating in Leaf Lab here."
    )
    assert prompt.template is PromptTemplate.NEW_CONCEPT
    assert prompt.activity_id == "A_3"
    assert prompt.concept_id == 9
    assert prompt.issued_at == 5000


def test_surprising_concept_template_verbatim():
    prompt = render_prompt(
        Trigger(TriggerKind.SURPRISE_CONCEPT, 7),
        "osmosis",
        "A_2",
        "water molecule activity",
        strategy_for(PropensityClass.MEDIUM),
        8000,
    )
    assert prompt.text == (
        "There may be other ways of explaining the concept osmosis, "
        "would you like to see how it is done in water molecule activity?"
    )
    assert prompt.template is PromptTemplate.SURPRISING_CONCEPT


def test_elaboration_appends_after_the_fixed_core():
    from curious_companion import StimulationStrategy

    ss = StimulationStrategy(
        Complexity.RICH, Medium.TEXT, Persuasion.CHALLENGE,
        elaboration="Bet you cannot finish it in one go.",
    )
    prompt = render_prompt(
        Trigger(TriggerKind.NEW_CONCEPT, 9), "transpiration", "A_3", "Leaf Lab", ss, 0
    )
    core = (
        "Would you like to learn something about transpiration? "
        "You can explore it by participating in Leaf Lab here."
    )
    assert prompt.text == core + " Bet you cannot finish it in one go."


def test_render_prompt_rejects_empty_names():
    ss = strategy_for(PropensityClass.LOW)
    with pytest.raises(ValueError):
        render_prompt(Trigger(TriggerKind.NEW_CONCEPT, 9), "", "A_3", "Leaf Lab", ss, 0)
    with pytest.raises(ValueError):
        render_prompt(Trigger(TriggerKind.NEW_CONCEPT, 9), "transpiration", "A_3", "", ss, 0)


def test_mood_stub_is_neutral():
    mood = mood_stub(events((0, CLICK)))
    assert (mood.arousal, mood.valence, mood.dominance) == (0.5, 0.5, 0.5)
