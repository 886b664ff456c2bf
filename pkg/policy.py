# SPDX-FileCopyrightText: Copyright (c) 2026 Cooper Dalrymple
#
# SPDX-License-Identifier: Unlicense

# The agent: a 9-32-32-3 policy network over the normalized observation,
# a scalar reward critic and one scalar cost critic per active rule.

import json
import logging
from dataclasses import dataclass, field

import numpy as np

import dense
import scenarios

logger = logging.getLogger(__name__)

FORMAT = "policy-bundle"
VERSION = 1

INPUTS = 9
ACTIONS = len(scenarios.NavAction)
HIDDEN = (32, 32)

@dataclass
class PolicyBundle:
    policy: dense.DenseNet
    reward_critic: dense.DenseNet
    cost_critics: dict = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    @property
    def rules(self) -> tuple:
        return tuple(self.cost_critics.keys())

    def networks(self) -> list:
        return [self.policy, self.reward_critic] + list(self.cost_critics.values())

    def copy(self) -> "PolicyBundle":
        return PolicyBundle(
            policy=self.policy.copy(),
            reward_critic=self.reward_critic.copy(),
            cost_critics={rule: net.copy() for rule, net in self.cost_critics.items()},
            metadata=json.loads(json.dumps(self.metadata)),
        )

def make_bundle(rules:tuple, rng:np.random.Generator, hidden:tuple = HIDDEN, policy_out_scale:float = 0.01) -> PolicyBundle:
    """Initializes every network from ``rng`` in a fixed order: policy, reward critic, then cost critics by rule order."""
    hidden = tuple(hidden)
    return PolicyBundle(
        policy=dense.make_net((INPUTS,) + hidden + (ACTIONS,), rng, out_scale=policy_out_scale),
        reward_critic=dense.make_net((INPUTS,) + hidden + (1,), rng),
        cost_critics={rule: dense.make_net((INPUTS,) + hidden + (1,), rng) for rule in rules},
    )

## Action selection

def policy_distribution(bundle:PolicyBundle|dense.DenseNet, x:np.ndarray) -> np.ndarray:
    net = bundle.policy if isinstance(bundle, PolicyBundle) else bundle
    return dense.softmax(net.predict(x))

def select_action(probs:np.ndarray, rng:np.random.Generator = None, deterministic:bool = False) -> int:
    if deterministic:
        # np.argmax returns the lowest index on ties
        return int(np.argmax(probs))
    if rng is None:
        raise ValueError("stochastic action selection needs a generator")
    return int(rng.choice(len(probs), p=probs))

## Checkpoints

def bundle_to_dict(bundle:PolicyBundle) -> dict:
    return {
        "format": FORMAT,
        "version": VERSION,
        "metadata": bundle.metadata,
        "policy": dense.net_to_dict(bundle.policy),
        "reward_critic": dense.net_to_dict(bundle.reward_critic),
        "cost_critics": {rule: dense.net_to_dict(net) for rule, net in bundle.cost_critics.items()},
    }

def _check_topology(net:dense.DenseNet, outputs:int, name:str) -> None:
    if net.input_dim != INPUTS or net.output_dim != outputs:
        raise dense.TopologyError("{:s} maps {:d} inputs to {:d} outputs, expected {:d} to {:d}".format(
            name, net.input_dim, net.output_dim, INPUTS, outputs
        ))

def bundle_from_dict(data:dict) -> PolicyBundle:
    if data.get("format") != FORMAT:
        raise dense.CheckpointError("not a policy bundle")
    if data.get("version") != VERSION:
        raise dense.CheckpointError("unsupported policy bundle version {}".format(data.get("version")))
    try:
        bundle = PolicyBundle(
            policy=dense.net_from_dict(data["policy"]),
            reward_critic=dense.net_from_dict(data["reward_critic"]),
            cost_critics={rule: dense.net_from_dict(item) for rule, item in data["cost_critics"].items()},
            metadata=dict(data.get("metadata", {})),
        )
    except (KeyError, AttributeError, TypeError) as e:
        raise dense.CheckpointError("malformed policy bundle: {}".format(e)) from e
    _check_topology(bundle.policy, ACTIONS, "policy")
    _check_topology(bundle.reward_critic, 1, "reward critic")
    for rule, net in bundle.cost_critics.items():
        _check_topology(net, 1, "cost critic " + rule)
    return bundle

def save_checkpoint(bundle:PolicyBundle, path:str) -> None:
    with open(path, "w") as file:
        json.dump(bundle_to_dict(bundle), file)
    logger.debug("saved checkpoint %s", path)

def load_checkpoint(path:str) -> PolicyBundle:
    data = dense.read_json(path)
    try:
        return bundle_from_dict(data)
    except dense.CheckpointError as e:
        raise type(e)("{:s}: {}".format(path, e)) from e

def load_network(path:str) -> tuple[dense.DenseNet, dict]:
    """The network to verify and its metadata, from either a policy bundle or a bare network file."""
    data = dense.read_json(path)
    if data["format"] == dense.FORMAT:
        return dense.load_net(path), dict(data.get("metadata", {}))
    bundle = load_checkpoint(path)
    return bundle.policy, bundle.metadata
