# SPDX-FileCopyrightText: Copyright (c) 2026 Cooper Dalrymple
#
# SPDX-License-Identifier: Unlicense

"""Dump one episode step by step"""

import argparse
import json

import menu
import policy
import scenarios
import settings
import trainer
from scenarios import NavAction

def replay_records(traj:trainer.Trajectory) -> list:
    """One record per step: pose after the action, action, reward, violated rules and the delivered observation."""
    records = []
    for t in range(len(traj)):
        pose = traj.poses[t + 1]
        action = NavAction(int(traj.actions[t]))
        records.append({
            "step": t + 1,
            "seed": traj.seed,
            "pose": {"x": pose.x, "y": pose.y, "heading": pose.heading},
            "target": {"x": pose.target_x, "y": pose.target_y},
            "action": int(action),
            "event": action.event_name,
            "reward": float(traj.env_rewards[t]),
            "violated": [rule for k, rule in enumerate(traj.rules) if traj.violations[t, k]],
            "obs": traj.payloads[t].tolist(),
            "terminal": traj.terminal.label if t == len(traj) - 1 else "none",
        })
    return records

def load_replay(path:str) -> list:
    with open(path, "r") as file:
        return [json.loads(line) for line in file if line.strip()]

def recount(records:list, rules:scenarios.RulesConfig = None) -> dict:
    """Violations per rule recomputed from a dump by a fresh rule program."""
    return scenarios.count_violations(
        [record["action"] for record in records],
        [record["obs"] for record in records],
        rules,
    )

def add_arguments(parser:argparse.ArgumentParser) -> None:
    parser.add_argument("checkpoint", help="policy checkpoint")
    parser.add_argument("--seed", type=int, default=0, help="episode seed (default: 0)")
    parser.add_argument("--config", help="config file or preset name (default: the checkpoint's own)")
    parser.add_argument("--deterministic", action="store_true", help="always take the most likely action")
    parser.add_argument("--out", default="replay.jsonl", help="output file (default: replay.jsonl)")

def main(args:argparse.Namespace) -> int:
    bundle = policy.load_checkpoint(args.checkpoint)
    cfg = menu.load_config(args.config) if args.config else (menu.config_from_checkpoint(bundle.metadata) or settings.RunConfig())
    _, _, rng = trainer.make_rngs(args.seed, args.seed, args.seed)
    traj = trainer.run_episode(settings.make_env(cfg), bundle, scenarios.make_program(cfg.rules), rng, args.seed, args.deterministic)

    menu.write_lines(replay_records(traj), args.out)
    menu.write_message("Complete! {:d} steps, {:s}, violations {:s}, written to {:s}".format(
        len(traj), traj.terminal.label, json.dumps(traj.violation_counts), args.out
    ))
    return menu.EXIT_OK
