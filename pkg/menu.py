# SPDX-FileCopyrightText: Copyright (c) 2026 Cooper Dalrymple
#
# SPDX-License-Identifier: Unlicense

import glob
import importlib
import json
import logging
import os
import sys

import dense
import settings

ROOT = os.path.dirname(os.path.abspath(__file__))
APP_DIR = os.path.join(ROOT, "apps")
PRESET_DIR = os.path.join(ROOT, "presets")

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_NUMERICAL = 4

logger = logging.getLogger("menu")

def format_name(name:str) -> str:
    name = name.lower().replace('_', ' ').replace('-', ' ').split()
    for i in range(len(name)):
        name[i] = name[i][0].upper() + name[i][1:]
    return " ".join(name)

def get_enum(cls) -> tuple:
    return tuple((format_name(item.name), item) for item in cls)

def setup_logging(verbose:bool = False) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(message)s" if not verbose else "%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )

def write_message(msg:str) -> None:
    logger.info(msg)

## Apps

def list_apps() -> tuple:
    return tuple(sorted(filename[:-3] for filename in os.listdir(APP_DIR) if filename.endswith(".py") and not filename.startswith("_")))

def load_app(name:str):
    if name not in list_apps():
        raise ImportError("no app named {:s} in {:s}".format(name, APP_DIR))
    return importlib.import_module("apps." + name)

def run_app(main, args) -> int:
    """Runs an app's ``main`` and maps failures to exit codes."""
    try:
        return main(args)
    except settings.ConfigError as e:
        write_message("Configuration error! {}".format(e))
        return EXIT_CONFIG
    except (OSError, dense.CheckpointError) as e:
        write_message("I/O error! {}".format(e))
        return EXIT_IO
    except (ArithmeticError, FloatingPointError) as e:
        write_message("Numerical error! {}".format(e))
        return EXIT_NUMERICAL
    except Exception as e:
        logger.debug("unhandled error", exc_info=True)
        write_message("Failed! {:s}: {}".format(type(e).__name__, e))
        return EXIT_ERROR

## Presets

def preset_path(name:str) -> str:
    """A config path as given, else the preset of that name."""
    if os.path.exists(name):
        return name
    path = os.path.join(PRESET_DIR, name if name.endswith(".json") else name + ".json")
    if os.path.exists(path):
        return path
    return name

def load_config(name:str = None, seed:int = None, out:str = None) -> settings.RunConfig:
    cfg = settings.load(preset_path(name)) if name is not None else settings.RunConfig()
    return settings.override(cfg, seed, out)

def config_from_checkpoint(metadata:dict) -> settings.RunConfig | None:
    data = metadata.get("config")
    if not data:
        return None
    return settings.from_dict(data)

def expand_paths(patterns:list) -> list:
    paths = []
    for pattern in patterns:
        matches = sorted(glob.glob(pattern))
        paths += matches if matches else [pattern]
    return paths

def write_json(data:dict, path:str) -> None:
    if directory := os.path.dirname(path):
        os.makedirs(directory, exist_ok=True)
    with open(path, "w") as file:
        json.dump(data, file, indent=4)

def write_lines(records:list, path:str) -> None:
    if directory := os.path.dirname(path):
        os.makedirs(directory, exist_ok=True)
    with open(path, "w") as file:
        for record in records:
            file.write(json.dumps(record) + "\n")
