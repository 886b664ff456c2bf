# SPDX-FileCopyrightText: Copyright (c) 2026 Cooper Dalrymple
#
# SPDX-License-Identifier: Unlicense

# Behavioral rules for the navigation agent, expressed as scenarios over
# the three action events. Every scenario waits for all three events; the
# environment observation travels with each event as its payload, laid out
# as [lidar0..lidar6, bearing, distance] with lidar3 the front ray.

import math
from dataclasses import dataclass, field
from enum import IntEnum

import bprogram
from bprogram import Event, Scenario, SyncDeclaration

MOVE_FORWARD = "SBP_MoveForward"
TURN_LEFT = "SBP_TurnLeft"
TURN_RIGHT = "SBP_TurnRight"
EVENTS = (MOVE_FORWARD, TURN_LEFT, TURN_RIGHT)
TURNS = frozenset((TURN_LEFT, TURN_RIGHT))

PAYLOAD_SIZE = 9
FRONT = 3
BEARING = -2

AVOID_BACK_AND_FORTH = "avoid-back-and-forth"
AVOID_K_TURNS = "avoid-k-consecutive-turns"
AVOID_TURNING_WHEN_CLEAR = "avoid-turning-when-clear"
RULES = (AVOID_BACK_AND_FORTH, AVOID_K_TURNS, AVOID_TURNING_WHEN_CLEAR)

class ScenarioError(RuntimeError):
    pass

class NavAction(IntEnum):
    FORWARD = 0
    LEFT = 1
    RIGHT = 2

    @property
    def event_name(self) -> str:
        return EVENTS[self]

    @classmethod
    def from_event(cls, name:str) -> "NavAction":
        return cls(EVENTS.index(name))

def _waiting(blocked:tuple = ()) -> SyncDeclaration:
    return SyncDeclaration(blocked=blocked, waited_for=EVENTS)

## Guard configuration

@dataclass
class ClearPathGuardConfig:
    # Clearances in meters relative to a 0.15 m forward step
    minimal_fwd_clearance: float = 0.3
    minimal_clearance: float = 0.15
    fwd_dir: float = 0.0
    fwd_dir_tolerance: float = math.radians(15)

    def validate(self) -> None:
        if self.minimal_fwd_clearance <= 0.0 or self.minimal_clearance <= 0.0:
            raise ScenarioError("clearances must be positive")
        if not 0.0 < self.fwd_dir_tolerance < math.pi:
            raise ScenarioError("fwd_dir_tolerance must lie in (0, pi)")

@dataclass
class RulesConfig:
    active: list = field(default_factory=lambda: list(RULES))
    k: int = 7
    minimal_fwd_clearance: float = 0.3
    minimal_clearance: float = 0.15
    fwd_dir: float = 0.0
    fwd_dir_tolerance: float = math.radians(15)
    advance_on_block: bool = True
    max_super_step: int = bprogram.MAX_SUPER_STEP

    def guard(self) -> ClearPathGuardConfig:
        return ClearPathGuardConfig(
            minimal_fwd_clearance=self.minimal_fwd_clearance,
            minimal_clearance=self.minimal_clearance,
            fwd_dir=self.fwd_dir,
            fwd_dir_tolerance=self.fwd_dir_tolerance,
        )

    def validate(self) -> None:
        for rule in self.active:
            if rule not in RULES:
                raise ScenarioError("unknown rule {:s}, expected one of {:s}".format(str(rule), ", ".join(RULES)))
        if len(set(self.active)) != len(self.active):
            raise ScenarioError("rules listed more than once")
        if self.k < 1:
            raise ScenarioError("k must be at least 1")
        self.guard().validate()

## Rules

def make_avoid_back_and_forth() -> Scenario:
    """Turning one way blocks turning straight back; moving forward clears it."""

    def step(state:str, event:Event) -> tuple:
        if event.name == TURN_LEFT:
            state = TURN_LEFT
        elif event.name == TURN_RIGHT:
            state = TURN_RIGHT
        else:
            state = None
        if state == TURN_LEFT:
            return state, _waiting((TURN_RIGHT,))
        if state == TURN_RIGHT:
            return state, _waiting((TURN_LEFT,))
        return state, _waiting()

    return Scenario(AVOID_BACK_AND_FORTH, None, step)

def make_avoid_k_consecutive_turns(k:int = 7) -> Scenario:
    """Blocks a turn once it has been taken k times in a row."""
    if k < 1:
        raise ScenarioError("k must be at least 1, got {:d}".format(k))

    # state: (previous event name, repeats beyond the first)
    def step(state:tuple, event:Event) -> tuple:
        previous, counter = state
        if event.name == bprogram.INIT:
            return (None, 0), _waiting()
        if previous is None or event.name == MOVE_FORWARD or previous != event.name:
            previous, counter = event.name, 0
        else:
            counter += 1
        if event.name in TURNS and counter >= k - 1:
            return (previous, counter), _waiting((event.name,))
        return (previous, counter), _waiting()

    return Scenario(AVOID_K_TURNS, (None, 0), step)

def clear_path(payload:tuple, cfg:ClearPathGuardConfig) -> bool:
    if payload is None or len(payload) != PAYLOAD_SIZE:
        raise ScenarioError("expected an observation payload of {:d} values, got {}".format(
            PAYLOAD_SIZE, None if payload is None else len(payload)
        ))
    return (
        payload[FRONT] > cfg.minimal_fwd_clearance
        and payload[FRONT - 1] > cfg.minimal_clearance
        and payload[FRONT + 1] > cfg.minimal_clearance
        and abs(cfg.fwd_dir - payload[BEARING]) < cfg.fwd_dir_tolerance
    )

def make_avoid_turning_when_clear(cfg:ClearPathGuardConfig = None) -> Scenario:
    """Blocks both turns while the target is straight ahead and the way there is clear.
    Stateless: only the latest payload matters."""
    cfg = cfg or ClearPathGuardConfig()
    cfg.validate()

    def step(state:None, event:Event) -> tuple:
        if event.name == bprogram.INIT:
            return None, _waiting()
        if clear_path(event.payload, cfg):
            return None, _waiting((TURN_LEFT, TURN_RIGHT))
        return None, _waiting()

    return Scenario(AVOID_TURNING_WHEN_CLEAR, None, step)

## Program

def action_to_event(action:NavAction, obs) -> Event:
    """``obs`` is an observation with ``flat()`` or a flat sequence in canonical layout."""
    flat = obs.flat() if hasattr(obs, "flat") and callable(obs.flat) else obs
    return Event(NavAction(action).event_name, tuple(float(v) for v in flat))

def make_program(cfg:RulesConfig = None) -> bprogram.BProgram:
    cfg = cfg or RulesConfig()
    cfg.validate()
    program = bprogram.BProgram(external=EVENTS, max_super_step=cfg.max_super_step, advance_on_block=cfg.advance_on_block)
    # Registration order follows the canonical rule order
    for rule in RULES:
        if rule not in cfg.active:
            continue
        if rule == AVOID_BACK_AND_FORTH:
            program.register(make_avoid_back_and_forth())
        elif rule == AVOID_K_TURNS:
            program.register(make_avoid_k_consecutive_turns(cfg.k))
        else:
            program.register(make_avoid_turning_when_clear(cfg.guard()))
    return program

def count_violations(actions:list, payloads:list, cfg:RulesConfig = None) -> dict:
    """Replays an action log through a fresh program and counts violations per active rule."""
    cfg = cfg or RulesConfig()
    program = make_program(cfg)
    counts = {rule: 0 for rule in program.scenario_ids}
    for action, payload in zip(actions, payloads):
        outcome = program.deliver_external(action_to_event(action, payload))
        for rule in outcome.violated_rules:
            counts[rule] += 1
    return counts
