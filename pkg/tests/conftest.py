# SPDX-FileCopyrightText: Copyright (c) 2026 Cooper Dalrymple
#
# SPDX-License-Identifier: Unlicense

import numpy as np
import pytest

import dense
import policy
import world
from scenarios import ClearPathGuardConfig

@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)

@pytest.fixture
def toy():
    return dense.toy_net()

@pytest.fixture
def guard() -> ClearPathGuardConfig:
    return ClearPathGuardConfig(minimal_fwd_clearance=0.5, minimal_clearance=0.3, fwd_dir=0.0, fwd_dir_tolerance=0.26)

def payload(lidar:tuple = (1.0, 1.0, 1.0, 3.0, 1.0, 1.0, 1.0), bearing:float = 0.0, distance:float = 2.0) -> tuple:
    return tuple(lidar) + (bearing, distance)

def constant_net(logits:tuple, inputs:int = policy.INPUTS) -> dense.DenseNet:
    return dense.DenseNet([
        dense.Layer(np.zeros((len(logits), inputs)), np.array(logits, dtype=np.float64), dense.IDENTITY),
    ])

def constant_bundle(logits:tuple, rules:tuple = ()) -> policy.PolicyBundle:
    return policy.PolicyBundle(
        policy=constant_net(logits),
        reward_critic=constant_net((0.0,)),
        cost_critics={rule: constant_net((0.0,)) for rule in rules},
        metadata={"mode": "fixture"},
    )

@pytest.fixture
def empty_env() -> world.NavEnv:
    return world.NavEnv(world.empty())

def straight_ahead(distance:float = 2.0) -> world.RobotState:
    # Facing +x in the middle of the empty arena with the target dead ahead
    return world.RobotState(1.0, 2.5, 0.0, 1.0 + distance, 2.5)

def place(env:world.NavEnv, state:world.RobotState) -> world.Observation:
    # Forced placement, returns the raw observation
    _, info = env.reset(options={"state": state})
    return info["observation"]
