# SPDX-FileCopyrightText: Copyright (c) 2026 Cooper Dalrymple
#
# SPDX-License-Identifier: Unlicense

import json
import os

import numpy as np
import pytest

import dense
import policy
import scenarios
from conftest import constant_bundle

PRESETS = os.path.join(os.path.dirname(__file__), "..", "presets")

def test_bundle_shapes(rng):
    bundle = policy.make_bundle(scenarios.RULES, rng)
    assert bundle.policy.topology == (9, 32, 32, 3)
    assert bundle.reward_critic.topology == (9, 32, 32, 1)
    assert bundle.rules == scenarios.RULES
    assert len(bundle.networks()) == 5

def test_bundle_init_is_seeded():
    a = policy.make_bundle(scenarios.RULES, np.random.default_rng(9))
    b = policy.make_bundle(scenarios.RULES, np.random.default_rng(9))
    for x, y in zip(a.networks(), b.networks()):
        for p, q in zip(x.parameters(), y.parameters()):
            assert np.array_equal(p, q)

def test_policy_and_reward_critic_independent_of_rules():
    # Same generator draws for the shared networks whatever rules follow
    a = policy.make_bundle((), np.random.default_rng(9))
    b = policy.make_bundle(scenarios.RULES, np.random.default_rng(9))
    for p, q in zip(a.policy.parameters() + a.reward_critic.parameters(), b.policy.parameters() + b.reward_critic.parameters()):
        assert np.array_equal(p, q)

def test_initial_policy_is_near_uniform(rng):
    bundle = policy.make_bundle(scenarios.RULES, rng)
    probs = policy.policy_distribution(bundle, rng.uniform(size=9))
    assert probs == pytest.approx([1 / 3] * 3, abs=0.05)

def test_select_action():
    probs = np.array([0.2, 0.5, 0.3])
    assert policy.select_action(probs, deterministic=True) == 1
    assert policy.select_action(np.array([0.4, 0.4, 0.2]), deterministic=True) == 0
    with pytest.raises(ValueError):
        policy.select_action(probs)
    counts = np.bincount([policy.select_action(probs, np.random.default_rng(i)) for i in range(3000)], minlength=3)
    assert counts / 3000 == pytest.approx(probs, abs=0.04)

def test_copy_is_deep(rng):
    bundle = policy.make_bundle(scenarios.RULES, rng)
    bundle.metadata = {"mode": "lagrangian_sbp", "lambda": [0.1, 0.2]}
    other = bundle.copy()
    other.policy.layers[0].weight[:] = 0.0
    other.metadata["lambda"][0] = 5.0
    assert np.any(bundle.policy.layers[0].weight != 0.0)
    assert bundle.metadata["lambda"][0] == 0.1

def test_checkpoint_round_trip(tmp_path, rng):
    bundle = policy.make_bundle(scenarios.RULES, rng)
    bundle.metadata = {"mode": "baseline_ppo", "episodes": 12}
    path = str(tmp_path / "final.json")
    policy.save_checkpoint(bundle, path)
    loaded = policy.load_checkpoint(path)
    assert loaded.rules == bundle.rules
    assert loaded.metadata == bundle.metadata
    for x, y in zip(bundle.networks(), loaded.networks()):
        for p, q in zip(x.parameters(), y.parameters()):
            assert np.array_equal(p, q)

def test_checkpoint_topology_checked(tmp_path):
    data = policy.bundle_to_dict(constant_bundle((0.0, 0.0, 0.0)))
    data["policy"] = dense.net_to_dict(dense.toy_net())
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    with pytest.raises(dense.TopologyError):
        policy.load_checkpoint(str(path))

def test_checkpoint_format_checked(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"format": policy.FORMAT, "version": policy.VERSION}))
    with pytest.raises(dense.CheckpointError):
        policy.load_checkpoint(str(path))
    with pytest.raises(dense.CheckpointError):
        policy.load_checkpoint(os.path.join(PRESETS, "toy_dnn.json"))

def test_load_network_from_either_format(tmp_path):
    net, metadata = policy.load_network(os.path.join(PRESETS, "toy_dnn.json"))
    assert net.topology == (2, 2, 1)
    assert metadata == {"mode": "fixture"}

    path = str(tmp_path / "bundle.json")
    policy.save_checkpoint(constant_bundle((1.0, 0.0, 0.0), scenarios.RULES), path)
    net, metadata = policy.load_network(path)
    assert net.topology == (9, 3)
    assert metadata["mode"] == "fixture"
