# SPDX-FileCopyrightText: Copyright (c) 2026 Cooper Dalrymple
#
# SPDX-License-Identifier: Unlicense

"""Check rule properties on trained policy networks"""

import argparse
import os

import menu
import settings
import verifier

def add_arguments(parser:argparse.ArgumentParser) -> None:
    parser.add_argument("checkpoints", nargs="+", help="checkpoint files or glob patterns")
    parser.add_argument("--config", help="config file or preset name")
    parser.add_argument("--properties", nargs="+", choices=verifier.PROPERTIES, help="properties to check")
    parser.add_argument("--budget", type=int, help="maximum box splits per query")
    parser.add_argument("--trials", type=int, help="maximum falsification trials per query")
    parser.add_argument("--workers", type=int, help="parallel worker processes")
    parser.add_argument("--no-cutoff", action="store_true", help="verify checkpoints below the success cutoff too")
    parser.add_argument("--out", help="results table (default: <output dir>/verification.csv)")

def main(args:argparse.Namespace) -> int:
    cfg = menu.load_config(args.config)
    if args.budget is not None and args.budget <= 0:
        raise settings.ConfigError("budget", "must be positive, got {:d}".format(args.budget))
    if args.trials is not None and args.trials <= 0:
        raise settings.ConfigError("trials", "must be positive, got {:d}".format(args.trials))

    verify_cfg = cfg.verify
    verify_cfg.properties = args.properties or verify_cfg.properties
    verify_cfg.max_splits = args.budget or verify_cfg.max_splits
    verify_cfg.max_trials = args.trials or verify_cfg.max_trials
    verify_cfg.workers = args.workers or verify_cfg.workers
    try:
        queries = verifier.make_queries(verify_cfg, cfg.rules.guard(), cfg.env)
    except verifier.VerifierError as e:
        raise settings.ConfigError("verify", str(e)) from e

    checkpoints = menu.expand_paths(args.checkpoints)
    menu.write_message("Verifying {:d} properties on {:d} checkpoints...".format(len(queries), len(checkpoints)))
    rows = verifier.campaign(
        checkpoints, queries,
        max_splits=verify_cfg.max_splits,
        max_trials=verify_cfg.max_trials,
        workers=verify_cfg.workers,
        success_cutoff=None if args.no_cutoff else verify_cfg.success_cutoff,
        seed=verify_cfg.seed,
        progress=True,
    )

    out = args.out or os.path.join(cfg.output.dir, "verification.csv")
    if directory := os.path.dirname(out):
        os.makedirs(directory, exist_ok=True)
    verifier.write_table(rows, out)

    for mode, counts in sorted(verifier.aggregate(rows).items()):
        menu.write_message("{:s}: {:s}".format(menu.format_name(mode), ", ".join(
            "{:d} {:s}".format(count, verdict) for verdict, count in sorted(counts.items())
        )))
    menu.write_message("Complete! Results written to {:s}".format(out))
    return menu.EXIT_OK
