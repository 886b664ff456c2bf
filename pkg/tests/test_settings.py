# SPDX-FileCopyrightText: Copyright (c) 2026 Cooper Dalrymple
#
# SPDX-License-Identifier: Unlicense

import os

import pytest

import menu
import settings
import trainer
from settings import ConfigError, RunConfig

PRESETS = ("sbp", "baseline", "shaping", "plain")

@pytest.mark.parametrize("name", PRESETS)
def test_presets_load(name):
    cfg = menu.load_config(name)
    assert cfg.world.name == "four_block"
    assert cfg.train.episodes == 3000
    assert cfg.seeds.as_tuple() == (1, 1, 1)
    assert cfg.output.dir == "runs/" + name

def test_preset_modes():
    assert menu.load_config("sbp").train.mode == trainer.LAGRANGIAN_SBP
    assert menu.load_config("baseline").train.mode == trainer.BASELINE_PPO
    assert menu.load_config("plain").train.mode == trainer.LAGRANGIAN_PLAIN
    shaping = menu.load_config("shaping").train
    assert shaping.mode == trainer.REWARD_SHAPING
    assert shaping.penalty == 0.05

def test_missing_values_keep_defaults():
    assert settings.from_dict({"schema": settings.SCHEMA}) == RunConfig()
    cfg = settings.from_dict({"schema": 1, "train": {"episodes": 10}, "env": {"max_steps": 50}})
    assert cfg.train.episodes == 10
    assert cfg.train.horizon == trainer.TrainConfig().horizon
    assert cfg.env.max_steps == 50

def test_keys_are_normalized():
    cfg = settings.from_dict({"schema": 1, "train": {"Episodes": 12, "Gate Window": 20}})
    assert cfg.train.episodes == 12
    assert cfg.train.gate_window == 20

def test_integers_accepted_for_floats():
    cfg = settings.from_dict({"schema": 1, "train": {"penalty": 1}})
    assert cfg.train.penalty == 1.0 and type(cfg.train.penalty) is float

@pytest.mark.parametrize("data, path", [
    ({"schema": 2}, "schema"),
    ({"train": {}}, "schema"),
    ({"schema": 1, "trainer": {}}, "trainer"),
    ({"schema": 1, "train": {"epochs": 2, "learning_rate": 0.1}}, "train.learning_rate"),
    ({"schema": 1, "train": {"episodes": "many"}}, "train.episodes"),
    ({"schema": 1, "train": {"episodes": 10.5}}, "train.episodes"),
    ({"schema": 1, "train": {"freeze_lambda": 1}}, "train.freeze_lambda"),
    ({"schema": 1, "train": []}, "train"),
    ({"schema": 1, "train": {"mode": "dqn"}}, "train"),
    ({"schema": 1, "rules": {"k": 0}}, "rules"),
    ({"schema": 1, "rules": {"active": ["avoid-walls"]}}, "rules"),
    ({"schema": 1, "env": {"step_len": -0.1}}, "env"),
    ({"schema": 1, "env": {"goal_radius": 1.5}}, "env"),
    ({"schema": 1, "train": {"cost_limits": {"avoid-back-and-forth": -0.1}}}, "train"),
    ({"schema": 1, "train": {"cost_limits": {"avoid-back-and-forth": "low"}}}, "train"),
    ({"schema": 1, "train": {"cost_limits": {"avoid-walls": 0.1}}}, "train"),
    ({"schema": 1, "verify": {"max_splits": 0}}, "verify"),
    ({"schema": 1, "world": {"name": "maze"}}, "world.name"),
])
def test_invalid_configs(data, path):
    with pytest.raises(ConfigError) as info:
        settings.from_dict(data)
    assert info.value.path == path

def test_save_load_round_trip(tmp_path):
    cfg = settings.from_dict({
        "schema": 1,
        "world": {"name": "corridor"},
        "train": {"mode": "reward_shaping", "penalty": 0.05, "cost_limits": {"avoid-back-and-forth": 0.5}},
        "rules": {"active": ["avoid-back-and-forth"], "k": 4},
    })
    path = str(tmp_path / "config.json")
    settings.save(cfg, path)
    assert settings.load(path) == cfg
    assert cfg.train.threshold("avoid-back-and-forth") == 0.5
    assert cfg.train.threshold("avoid-k-consecutive-turns") == 0.1

def test_load_errors(tmp_path):
    path = tmp_path / "config.json"
    path.write_text("{ schema")
    with pytest.raises(ConfigError):
        settings.load(str(path))
    with pytest.raises(OSError):
        settings.load(str(tmp_path / "missing.json"))

def test_override():
    cfg = settings.override(RunConfig(), seed=5, out="runs/x")
    assert cfg.seeds.as_tuple() == (5, 5, 5)
    assert cfg.output.dir == "runs/x"
    assert settings.override(cfg) == cfg

def test_make_env_from_world_file():
    world_file = os.path.join(menu.PRESET_DIR, "world_pillars.json")
    cfg = settings.from_dict({"schema": 1, "world": {"file": world_file}, "env": {"max_steps": 80}})
    env = settings.make_env(cfg)
    assert env.world.name == "pillars"
    assert env.cfg.max_steps == 80

def test_config_from_checkpoint():
    cfg = menu.load_config("shaping")
    assert menu.config_from_checkpoint({"config": settings.dump(cfg)}) == cfg
    assert menu.config_from_checkpoint({"mode": "fixture"}) is None
