# SPDX-FileCopyrightText: Copyright (c) 2026 Cooper Dalrymple
#
# SPDX-License-Identifier: Unlicense

"""Train a navigation policy"""

import argparse
import os

import menu
import settings
import trainer

def add_arguments(parser:argparse.ArgumentParser) -> None:
    parser.add_argument("--config", default="sbp", help="config file or preset name (default: sbp)")
    parser.add_argument("--seed", type=int, help="override every seed")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--progress", action="store_true", help="show a progress bar")

def main(args:argparse.Namespace) -> int:
    cfg = menu.load_config(args.config, args.seed, args.out)
    env = settings.make_env(cfg)
    out = cfg.output.dir

    os.makedirs(out, exist_ok=True)
    settings.save(cfg, os.path.join(out, "config.json"))
    menu.write_message("Training {:s} in {:s}...".format(menu.format_name(cfg.train.mode), env.world.name))

    result = trainer.train(
        cfg.train, env, cfg.rules,
        seeds=cfg.seeds.as_tuple(),
        out_dir=out,
        metadata=settings.dump(cfg),
        progress=args.progress,
    )

    menu.write_message("Complete! {:d} episodes, success rate {:.3f}, checkpoint {:s}".format(
        len(result.outcomes), result.success_rate, result.checkpoint
    ))
    return menu.EXIT_OK
