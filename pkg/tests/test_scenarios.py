# SPDX-FileCopyrightText: Copyright (c) 2026 Cooper Dalrymple
#
# SPDX-License-Identifier: Unlicense

import math

import numpy as np
import pytest

import scenarios
from bprogram import BProgram, Event
from conftest import payload
from scenarios import (
    AVOID_BACK_AND_FORTH, AVOID_K_TURNS, AVOID_TURNING_WHEN_CLEAR,
    EVENTS, MOVE_FORWARD, TURN_LEFT, TURN_RIGHT, NavAction,
)

BLOCKED_AHEAD = payload(lidar=(0.1,) * 7, bearing=2.0)

def program_with(*rules) -> BProgram:
    program = BProgram(external=EVENTS)
    for rule in rules:
        program.register(rule)
    return program

def deliver(program:BProgram, names:list, data:tuple = BLOCKED_AHEAD) -> list:
    return [program.deliver_external(Event(name, data)).violated_rules for name in names]

## Action mapping

def test_action_event_bijection():
    assert [action.event_name for action in NavAction] == [MOVE_FORWARD, TURN_LEFT, TURN_RIGHT]
    for action in NavAction:
        assert NavAction.from_event(action.event_name) == action

def test_action_to_event_carries_payload():
    event = scenarios.action_to_event(NavAction.LEFT, np.array(payload()))
    assert event.name == TURN_LEFT
    assert event.payload == payload()
    assert scenarios.action_to_event(NavAction.FORWARD, payload()).name == MOVE_FORWARD
    assert scenarios.action_to_event(NavAction.RIGHT, payload()).name == TURN_RIGHT

## Back and forth

def test_left_blocks_right():
    program = program_with(scenarios.make_avoid_back_and_forth())
    assert deliver(program, [TURN_LEFT]) == [frozenset()]
    assert program.blocked_events() == {TURN_RIGHT: frozenset({AVOID_BACK_AND_FORTH})}
    assert deliver(program, [TURN_RIGHT]) == [frozenset({AVOID_BACK_AND_FORTH})]

def test_forward_clears_blocking():
    program = program_with(scenarios.make_avoid_back_and_forth())
    deliver(program, [TURN_LEFT, MOVE_FORWARD])
    assert program.blocked_events() == {}

def test_repeated_right_keeps_left_blocked():
    program = program_with(scenarios.make_avoid_back_and_forth())
    assert deliver(program, [TURN_RIGHT, TURN_RIGHT]) == [frozenset(), frozenset()]
    assert program.blocked_events() == {TURN_LEFT: frozenset({AVOID_BACK_AND_FORTH})}

def test_at_most_one_turn_blocked():
    rng = np.random.default_rng(3)
    program = program_with(scenarios.make_avoid_back_and_forth())
    for name in rng.choice(EVENTS, size=500):
        deliver(program, [str(name)])
        assert len(program.blocked_events().get(TURN_LEFT, ())) + len(program.blocked_events().get(TURN_RIGHT, ())) <= 1

## Consecutive turns

def test_seventh_left_is_blocked():
    program = program_with(scenarios.make_avoid_k_consecutive_turns(7))
    deliver(program, [TURN_LEFT] * 6)
    assert program.blocked_events() == {}
    deliver(program, [TURN_LEFT])
    assert program.blocked_events() == {TURN_LEFT: frozenset({AVOID_K_TURNS})}
    assert deliver(program, [TURN_LEFT]) == [frozenset({AVOID_K_TURNS})]

def test_direction_change_resets_counter():
    program = program_with(scenarios.make_avoid_k_consecutive_turns(7))
    violations = deliver(program, [TURN_LEFT] * 6 + [TURN_RIGHT])
    assert all(not v for v in violations)
    assert program.blocked_events() == {}
    deliver(program, [TURN_RIGHT] * 5)
    assert program.blocked_events() == {}

def test_forward_resets_counter():
    program = program_with(scenarios.make_avoid_k_consecutive_turns(3))
    deliver(program, [TURN_LEFT, TURN_LEFT, MOVE_FORWARD, TURN_LEFT, TURN_LEFT])
    assert program.blocked_events() == {}

def test_k_one_blocks_any_repeat():
    program = program_with(scenarios.make_avoid_k_consecutive_turns(1))
    deliver(program, [TURN_LEFT])
    assert program.blocked_events() == {TURN_LEFT: frozenset({AVOID_K_TURNS})}

def test_k_zero_rejected():
    with pytest.raises(scenarios.ScenarioError):
        scenarios.make_avoid_k_consecutive_turns(0)

def test_never_blocks_before_k_turns():
    rng = np.random.default_rng(5)
    for k in range(1, 9):
        program = program_with(scenarios.make_avoid_k_consecutive_turns(k))
        run = 0
        previous = None
        for name in rng.choice(EVENTS, size=300):
            name = str(name)
            run = run + 1 if name == previous and name != MOVE_FORWARD else (1 if name != MOVE_FORWARD else 0)
            previous = name
            deliver(program, [name])
            if name in program.blocked_events():
                assert run >= k

## Turning when clear

def test_clear_path_blocks_both_turns(guard):
    program = program_with(scenarios.make_avoid_turning_when_clear(guard))
    deliver(program, [MOVE_FORWARD], payload())
    assert program.blocked_events() == {
        TURN_LEFT: frozenset({AVOID_TURNING_WHEN_CLEAR}),
        TURN_RIGHT: frozenset({AVOID_TURNING_WHEN_CLEAR}),
    }

def test_obstacle_ahead_blocks_nothing(guard):
    program = program_with(scenarios.make_avoid_turning_when_clear(guard))
    deliver(program, [MOVE_FORWARD], payload(lidar=(1.0, 1.0, 1.0, 0.2, 1.0, 1.0, 1.0)))
    assert program.blocked_events() == {}

def test_misaligned_target_blocks_nothing(guard):
    program = program_with(scenarios.make_avoid_turning_when_clear(guard))
    deliver(program, [MOVE_FORWARD], payload(bearing=1.0))
    assert program.blocked_events() == {}

def test_guard_depends_on_latest_payload_only(guard):
    rng = np.random.default_rng(8)
    program = program_with(scenarios.make_avoid_turning_when_clear(guard))
    for i in range(200):
        deliver(program, [str(rng.choice(EVENTS))], payload(lidar=rng.uniform(0.0, 3.5, size=7), bearing=rng.uniform(-0.5, 0.5)))
        deliver(program, [MOVE_FORWARD], payload())
        assert TURN_LEFT in program.blocked_events()

def test_missing_payload_rejected(guard):
    program = program_with(scenarios.make_avoid_turning_when_clear(guard))
    with pytest.raises(scenarios.ScenarioError):
        program.deliver_external(Event(MOVE_FORWARD))
    with pytest.raises(scenarios.ScenarioError):
        program.deliver_external(Event(MOVE_FORWARD, (1.0, 2.0)))

def test_guard_config_validation():
    with pytest.raises(scenarios.ScenarioError):
        scenarios.ClearPathGuardConfig(fwd_dir_tolerance=0.0).validate()
    with pytest.raises(scenarios.ScenarioError):
        scenarios.ClearPathGuardConfig(minimal_clearance=0.0).validate()
    with pytest.raises(scenarios.ScenarioError):
        scenarios.ClearPathGuardConfig(fwd_dir_tolerance=math.pi).validate()

## Programs

def test_fresh_program_blocks_nothing():
    program = scenarios.make_program()
    assert program.scenario_ids == scenarios.RULES
    assert program.blocked_events() == {}

def test_full_program_after_clear_observation():
    program = scenarios.make_program()
    program.deliver_external(scenarios.action_to_event(NavAction.FORWARD, payload()))
    assert program.blocked_events() == {
        TURN_LEFT: frozenset({AVOID_TURNING_WHEN_CLEAR}),
        TURN_RIGHT: frozenset({AVOID_TURNING_WHEN_CLEAR}),
    }

def test_violations_attributed_to_rules():
    program = scenarios.make_program()
    program.deliver_external(scenarios.action_to_event(NavAction.LEFT, payload()))
    outcome = program.deliver_external(scenarios.action_to_event(NavAction.RIGHT, BLOCKED_AHEAD))
    assert outcome.violated_rules == frozenset({AVOID_BACK_AND_FORTH, AVOID_TURNING_WHEN_CLEAR})

def test_rule_subset():
    program = scenarios.make_program(scenarios.RulesConfig(active=[AVOID_K_TURNS, AVOID_BACK_AND_FORTH], k=3))
    assert program.scenario_ids == (AVOID_BACK_AND_FORTH, AVOID_K_TURNS)

def test_rules_config_validation():
    with pytest.raises(scenarios.ScenarioError):
        scenarios.RulesConfig(active=["avoid-everything"]).validate()
    with pytest.raises(scenarios.ScenarioError):
        scenarios.RulesConfig(k=0).validate()

def test_count_violations():
    counts = scenarios.count_violations(
        [NavAction.LEFT, NavAction.RIGHT, NavAction.LEFT],
        [BLOCKED_AHEAD] * 3,
    )
    assert counts == {AVOID_BACK_AND_FORTH: 2, AVOID_K_TURNS: 0, AVOID_TURNING_WHEN_CLEAR: 0}
