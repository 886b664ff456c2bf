# SPDX-FileCopyrightText: Copyright (c) 2026 Cooper Dalrymple
#
# SPDX-License-Identifier: Unlicense

"""
NAME
    bprogram

DESCRIPTION
    A small scenario-based programming runtime.

    A program is a set of scenarios. Each scenario sits at a
    synchronization point where it declares which events it requests,
    which it blocks and which it waits for. The runtime fires events that
    are requested by at least one scenario and blocked by none, and lets
    the outside world inject "external" events which the program itself
    never selects.

    Example:

    import bprogram
    program = bprogram.BProgram(external=("go",))
    program.register(my_scenario)
    outcome = program.deliver_external(bprogram.Event("go"))
    if outcome.violated_rules:
        ... the delivered event was blocked by those scenarios ...
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable

logger = logging.getLogger(__name__)

# Name of the event passed to every scenario when it is registered or reset
INIT = "__init__"

MAX_SUPER_STEP = 1000

## Errors

class BProgramError(Exception):
    pass

class DuplicateScenarioError(BProgramError):
    def __init__(self, scenario_id:str):
        super().__init__("scenario {:s} is already registered".format(scenario_id))
        self.scenario_id = scenario_id

class UnknownEventError(BProgramError):
    def __init__(self, name:str):
        super().__init__("{:s} is not an external event of this program".format(name))
        self.name = name

class DeclarationError(BProgramError):
    pass

class SuperStepLimitError(BProgramError, RuntimeError):
    def __init__(self, limit:int, scenario_ids:tuple):
        super().__init__("super-step did not settle after {:d} internal events (scenarios: {:s})".format(
            limit, ", ".join(scenario_ids)
        ))
        self.limit = limit
        self.scenario_ids = scenario_ids

## Events

@dataclass(frozen=True, eq=False)
class Event:
    name: str
    payload: tuple | None = None

    # Identity is the name only, blocking matches by name
    def __eq__(self, other:object) -> bool:
        if isinstance(other, Event):
            return self.name == other.name
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.name)

    def __repr__(self) -> str:
        return "Event({:s})".format(self.name)

INIT_EVENT = Event(INIT)

@dataclass(frozen=True)
class SyncDeclaration:
    # Requested keeps declaration order, it is the second tie-break key
    requested: tuple = ()
    blocked: frozenset = frozenset()
    waited_for: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "requested", tuple(self.requested))
        object.__setattr__(self, "blocked", frozenset(self.blocked))
        object.__setattr__(self, "waited_for", frozenset(self.waited_for))
        if overlap := self.blocked.intersection(self.requested):
            raise DeclarationError("events both requested and blocked: {:s}".format(", ".join(sorted(overlap))))

    def interested(self, name:str) -> bool:
        return name in self.waited_for or name in self.requested

## Scenarios

StepFunction = Callable[[Any, Event], tuple[Any, SyncDeclaration]]

@dataclass(frozen=True)
class Scenario:
    """An immutable description: an id, an initial local state and a
    deterministic transition function ``step(state, event) -> (state, declaration)``.
    The initial declaration is obtained by stepping with :data:`INIT_EVENT`."""
    id: str
    initial_state: Any
    step: StepFunction

@dataclass
class StepOutcome:
    violated_rules: frozenset = frozenset()
    triggered_internal: list = field(default_factory=list)

## Program

class BProgram:

    def __init__(self, external:Iterable[str] = (), max_super_step:int = MAX_SUPER_STEP, advance_on_block:bool = True):
        if max_super_step < 1:
            raise ValueError("max_super_step must be positive")
        self.external = frozenset(external)
        self.max_super_step = max_super_step
        self.advance_on_block = advance_on_block
        self._scenarios = []
        self._states = []
        self._declarations = []

    def __len__(self) -> int:
        return len(self._scenarios)

    @property
    def scenario_ids(self) -> tuple:
        return tuple(scenario.id for scenario in self._scenarios)

    @property
    def declarations(self) -> dict:
        return {scenario.id: declaration for scenario, declaration in zip(self._scenarios, self._declarations)}

    def register(self, scenario:Scenario) -> "BProgram":
        if scenario.id in self.scenario_ids:
            raise DuplicateScenarioError(scenario.id)
        state, declaration = scenario.step(scenario.initial_state, INIT_EVENT)
        self._scenarios.append(scenario)
        self._states.append(state)
        self._declarations.append(declaration)
        logger.debug("registered %s: %s", scenario.id, declaration)
        return self

    def reset(self) -> None:
        for i, scenario in enumerate(self._scenarios):
            self._states[i], self._declarations[i] = scenario.step(scenario.initial_state, INIT_EVENT)

    def blocked_events(self) -> dict:
        blocked = {}
        for scenario, declaration in zip(self._scenarios, self._declarations):
            for name in declaration.blocked:
                blocked.setdefault(name, set()).add(scenario.id)
        return {name: frozenset(ids) for name, ids in blocked.items()}

    def blockers(self, name:str) -> frozenset:
        return frozenset(
            scenario.id for scenario, declaration in zip(self._scenarios, self._declarations)
            if name in declaration.blocked
        )

    def select_internal_event(self) -> Event | None:
        blocked = set()
        for declaration in self._declarations:
            blocked.update(declaration.blocked)
        # Registration order, then declaration order
        for declaration in self._declarations:
            for name in declaration.requested:
                if name not in blocked and name not in self.external:
                    return Event(name)
        return None

    def _advance(self, event:Event) -> None:
        for i, scenario in enumerate(self._scenarios):
            if self._declarations[i].interested(event.name):
                self._states[i], self._declarations[i] = scenario.step(self._states[i], event)

    def deliver_external(self, event:Event) -> StepOutcome:
        if event.name not in self.external:
            raise UnknownEventError(event.name)

        violated = self.blockers(event.name)
        if violated:
            logger.debug("%s blocked by %s", event.name, ", ".join(sorted(violated)))
        if not violated or self.advance_on_block:
            self._advance(event)

        triggered = []
        while (internal := self.select_internal_event()) is not None:
            if len(triggered) >= self.max_super_step:
                raise SuperStepLimitError(self.max_super_step, self.scenario_ids)
            self._advance(internal)
            triggered.append(internal)

        return StepOutcome(violated_rules=violated, triggered_internal=triggered)
