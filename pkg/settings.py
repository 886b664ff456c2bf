# SPDX-FileCopyrightText: Copyright (c) 2026 Cooper Dalrymple
#
# SPDX-License-Identifier: Unlicense

# Run configuration. A JSON file with a schema version and one object per
# section; every value not named in the file keeps its default:
#
#   {
#       "schema": 1,
#       "world": {"name": "four_block"},
#       "train": {"mode": "lagrangian_sbp", "episodes": 3000},
#       "seeds": {"env": 1, "policy_init": 1, "sampling": 1}
#   }

import json
from dataclasses import asdict, dataclass, field, fields, replace

import scenarios
import trainer
import verifier
import world
from world import EnvConfig

SCHEMA = 1

class ConfigError(ValueError):
    def __init__(self, path:str, msg:str):
        super().__init__("{:s}: {:s}".format(path, msg) if path else msg)
        self.path = path

@dataclass
class WorldConfig:
    name: str = "four_block"
    file: str = None

@dataclass
class SeedConfig:
    env: int = 0
    policy_init: int = 0
    sampling: int = 0

    def as_tuple(self) -> tuple:
        return (self.env, self.policy_init, self.sampling)

@dataclass
class OutputConfig:
    dir: str = "runs/default"

@dataclass
class RunConfig:
    world: WorldConfig = field(default_factory=WorldConfig)
    env: EnvConfig = field(default_factory=EnvConfig)
    rules: scenarios.RulesConfig = field(default_factory=scenarios.RulesConfig)
    train: trainer.TrainConfig = field(default_factory=trainer.TrainConfig)
    verify: verifier.VerifyConfig = field(default_factory=verifier.VerifyConfig)
    seeds: SeedConfig = field(default_factory=SeedConfig)
    output: OutputConfig = field(default_factory=OutputConfig)

SECTIONS = tuple(item.name for item in fields(RunConfig))

def _format_name(name:str) -> str:
    return name.lower().replace(' ', '_')

## Parsing

def _coerce(path:str, default:any, value:any) -> any:
    if default is None:
        if value is not None and type(value) is not str:
            raise ConfigError(path, "expected a string or null")
        return value
    if type(default) is bool:
        if type(value) is not bool:
            raise ConfigError(path, "expected true or false")
        return value
    if type(default) is int:
        if type(value) is not int:
            raise ConfigError(path, "expected an integer")
        return value
    if type(default) is float:
        if type(value) not in (int, float):
            raise ConfigError(path, "expected a number")
        return float(value)
    if type(value) is not type(default):
        raise ConfigError(path, "expected {:s}".format(type(default).__name__))
    return value

def _section(name:str, default:any, data:any) -> any:
    if type(data) is not dict:
        raise ConfigError(name, "expected an object")
    known = {item.name for item in fields(default)}
    values = {}
    for key, value in data.items():
        path = name + "." + key
        key = _format_name(key)
        if key not in known:
            raise ConfigError(path, "unknown setting")
        values[key] = _coerce(path, getattr(default, key), value)
    return replace(default, **values)

def _validate(cfg:RunConfig) -> None:
    checks = (
        ("env", cfg.env.validate, world.WorldError),
        ("rules", cfg.rules.validate, scenarios.ScenarioError),
        ("train", cfg.train.validate, trainer.TrainingError),
        ("verify", cfg.verify.validate, verifier.VerifierError),
    )
    for name, check, error in checks:
        try:
            check()
        except error as e:
            raise ConfigError(name, str(e)) from e
    if cfg.world.file is None and cfg.world.name not in world.WORLDS:
        raise ConfigError("world.name", "unknown world {:s}".format(cfg.world.name))

def from_dict(data:dict) -> RunConfig:
    if type(data) is not dict:
        raise ConfigError("", "configuration must be a JSON object")
    if data.get("schema") != SCHEMA:
        raise ConfigError("schema", "unsupported schema {}, expected {:d}".format(data.get("schema"), SCHEMA))
    cfg = RunConfig()
    sections = {}
    for key, value in data.items():
        if key == "schema":
            continue
        if key not in SECTIONS:
            raise ConfigError(key, "unknown section")
        sections[key] = _section(key, getattr(cfg, key), value)
    cfg = replace(cfg, **sections)
    _validate(cfg)
    return cfg

def load(path:str) -> RunConfig:
    with open(path, "r") as file:
        try:
            data = json.load(file)
        except ValueError as e:
            raise ConfigError(path, "not valid JSON: {}".format(e)) from e
    return from_dict(data)

def dump(cfg:RunConfig) -> dict:
    data = {"schema": SCHEMA}
    data.update(asdict(cfg))
    return data

def save(cfg:RunConfig, path:str) -> None:
    with open(path, "w") as file:
        json.dump(dump(cfg), file, indent=4)

def override(cfg:RunConfig, seed:int = None, out:str = None) -> RunConfig:
    if seed is not None:
        cfg = replace(cfg, seeds=SeedConfig(seed, seed, seed))
    if out is not None:
        cfg = replace(cfg, output=OutputConfig(out))
    return cfg

## Construction

def make_world(cfg:RunConfig) -> world.World:
    if cfg.world.file is not None:
        return world.load_world(cfg.world.file, cfg.env.robot_radius)
    return world.get_world(cfg.world.name, cfg.env.robot_radius)

def make_env(cfg:RunConfig) -> world.NavEnv:
    return world.NavEnv(make_world(cfg), cfg.env)
