# SPDX-FileCopyrightText: Copyright (c) 2026 Cooper Dalrymple
#
# SPDX-License-Identifier: Unlicense

# Entry point: every module in apps/ is a subcommand.
#
#   python launcher.py train --config sbp --seed 7
#   python launcher.py eval runs/sbp/final.json --episodes 100 --deterministic
#   python launcher.py verify "runs/*/final.json" --budget 2000
#   python launcher.py replay runs/sbp/final.json --seed 3 --out replay.jsonl

import argparse
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), "lib"))

import menu

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="launcher", description="Scenario-constrained navigation lab")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    commands = parser.add_subparsers(dest="app", required=True, metavar="app")
    for name in menu.list_apps():
        app = menu.load_app(name)
        doc = (app.__doc__ or menu.format_name(name)).strip().splitlines()[0]
        subparser = commands.add_parser(name, help=doc, description=doc)
        app.add_arguments(subparser)
        subparser.set_defaults(main=app.main)
    return parser

def main(argv:list = None) -> int:
    args = build_parser().parse_args(argv)
    menu.setup_logging(args.verbose)
    return menu.run_app(args.main, args)

if __name__ == "__main__":
    sys.exit(main())
