# SPDX-FileCopyrightText: Copyright (c) 2026 Cooper Dalrymple
#
# SPDX-License-Identifier: Unlicense

"""Evaluate a checkpoint over fresh episodes"""

import argparse

import numpy as np

import menu
import policy
import scenarios
import settings
import trainer
import world

def evaluate(bundle:policy.PolicyBundle, env:world.NavEnv, rules:scenarios.RulesConfig, episodes:int, seed:int = 0, deterministic:bool = False) -> dict:
    """Success rate and per-rule violations per episode (mean and standard deviation)."""
    if episodes <= 0:
        raise settings.ConfigError("episodes", "must be positive, got {:d}".format(episodes))
    program = scenarios.make_program(rules)
    env_rng, _, rng = trainer.make_rngs(seed, seed, seed)
    outcomes, counts = [], []
    for i in range(episodes):
        traj = trainer.run_episode(env, bundle, program, rng, int(env_rng.integers(0, 2 ** 32)), deterministic)
        outcomes.append(traj.terminal)
        counts.append(traj.violations.sum(axis=0))
    counts = np.array(counts, dtype=np.float64).reshape(episodes, len(program))
    return {
        "episodes": episodes,
        "deterministic": deterministic,
        "mode": bundle.metadata.get("mode", "unknown"),
        "success_rate": world.success_rate(outcomes),
        "outcomes": {terminal.label: outcomes.count(terminal) for _, terminal in menu.get_enum(world.Terminal)[1:]},
        "violations": {
            rule: {"mean": float(np.mean(counts[:, k])), "std": float(np.std(counts[:, k]))}
            for k, rule in enumerate(program.scenario_ids)
        },
    }

def add_arguments(parser:argparse.ArgumentParser) -> None:
    parser.add_argument("checkpoint", help="policy checkpoint")
    parser.add_argument("--episodes", type=int, default=100, help="number of episodes (default: 100)")
    parser.add_argument("--deterministic", action="store_true", help="always take the most likely action")
    parser.add_argument("--config", help="config file or preset name (default: the checkpoint's own)")
    parser.add_argument("--seed", type=int, default=0, help="episode seed (default: 0)")
    parser.add_argument("--out", help="write the summary as JSON")

def main(args:argparse.Namespace) -> int:
    bundle = policy.load_checkpoint(args.checkpoint)
    cfg = menu.load_config(args.config) if args.config else (menu.config_from_checkpoint(bundle.metadata) or settings.RunConfig())
    summary = evaluate(bundle, settings.make_env(cfg), cfg.rules, args.episodes, args.seed, args.deterministic)

    menu.write_message("{:s}: success rate {:.3f} over {:d} episodes".format(args.checkpoint, summary["success_rate"], args.episodes))
    for name, terminal in menu.get_enum(world.Terminal)[1:]:
        menu.write_message("  {:s}: {:d}".format(name, summary["outcomes"][terminal.label]))
    for rule, stats in summary["violations"].items():
        menu.write_message("  {:s}: {:.3f} +- {:.3f} violations per episode".format(menu.format_name(rule), stats["mean"], stats["std"]))
    if args.out:
        menu.write_json(summary, args.out)
    return menu.EXIT_OK
