# SPDX-FileCopyrightText: Copyright (c) 2026 Cooper Dalrymple
#
# SPDX-License-Identifier: Unlicense

"""Mapless navigation in a walled 2D arena.

The robot sees seven lidar rays and the polar coordinates of its target
(bearing, distance) and acts with three discrete actions. Rewards follow
the shaped progress signal: +1 on reaching the target, -1 on collision,
otherwise ``(previous distance - distance) * reward_scale - step_penalty``.

World files are JSON::

    {
        "format": "world",
        "bounds": [x0, y0, x1, y1],
        "rects": [[x0, y0, x1, y1], ...],
        "circles": [[x, y, radius], ...]
    }

All coordinates are meters, rectangles are axis-aligned.
"""

import json
import logging
import math
from dataclasses import dataclass, field, replace
from enum import IntEnum

import gymnasium as gym
import numpy as np
from gymnasium import spaces
from scipy import ndimage

import hardware
from scenarios import NavAction

logger = logging.getLogger(__name__)

GRID_RESOLUTION = 0.05

# Normalized observation: lidar / max range, bearing / pi, distance / arena diagonal
OBS_LOW = np.array([0.0] * hardware.LIDAR_RAYS + [-1.0, 0.0])
OBS_HIGH = np.ones(hardware.LIDAR_RAYS + 2)

## Errors

class WorldError(Exception):
    pass

class PlacementError(WorldError, RuntimeError):
    pass

class EpisodeOverError(WorldError, RuntimeError):
    pass

## Configuration

@dataclass
class EnvConfig:
    step_len: float = hardware.STEP_LEN
    turn_angle: float = hardware.TURN_ANGLE
    robot_radius: float = hardware.ROBOT_RADIUS
    max_range: float = hardware.MAX_RANGE
    goal_radius: float = 0.2
    max_steps: int = 500
    min_start_goal_dist: float = 1.0
    reward_scale: float = 3.0
    step_penalty: float = 0.001
    placement_retries: int = 1000

    def validate(self) -> None:
        for name in ("step_len", "turn_angle", "robot_radius", "max_range", "goal_radius"):
            if getattr(self, name) <= 0.0:
                raise WorldError("env.{:s} must be positive".format(name))
        if self.max_steps < 1 or self.placement_retries < 1:
            raise WorldError("env.max_steps and env.placement_retries must be positive")
        if self.min_start_goal_dist <= self.goal_radius:
            raise WorldError("env.min_start_goal_dist must exceed env.goal_radius")

## World

@dataclass(frozen=True)
class World:
    bounds: tuple
    rects: tuple = ()
    circles: tuple = ()
    name: str = "custom"
    robot_radius: float = field(default=hardware.ROBOT_RADIUS, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "bounds", tuple(float(v) for v in self.bounds))
        object.__setattr__(self, "rects", tuple(tuple(float(v) for v in rect) for rect in self.rects))
        object.__setattr__(self, "circles", tuple(tuple(float(v) for v in circle) for circle in self.circles))
        self._validate()
        object.__setattr__(self, "_segments", self._build_segments())
        object.__setattr__(self, "_circle_array", np.array(self.circles, dtype=np.float64).reshape(-1, 3))

    def _validate(self) -> None:
        x0, y0, x1, y1 = self.bounds
        if not (x1 > x0 and y1 > y0):
            raise WorldError("bounds must have positive extent")
        for rect in self.rects:
            if len(rect) != 4 or not (x0 <= rect[0] < rect[2] <= x1 and y0 <= rect[1] < rect[3] <= y1):
                raise WorldError("rectangle {} is degenerate or outside the bounds".format(rect))
        for circle in self.circles:
            if len(circle) != 3 or circle[2] <= 0.0 or not (x0 <= circle[0] - circle[2] and circle[0] + circle[2] <= x1 and y0 <= circle[1] - circle[2] and circle[1] + circle[2] <= y1):
                raise WorldError("circle {} is degenerate or outside the bounds".format(circle))
        free = self.free_grid()
        _, count = ndimage.label(free)
        if count != 1:
            raise WorldError("free space of world {:s} has {:d} connected components".format(self.name, count))

    def _build_segments(self) -> np.ndarray:
        x0, y0, x1, y1 = self.bounds
        segments = [(x0, y0, x1, y0), (x1, y0, x1, y1), (x1, y1, x0, y1), (x0, y1, x0, y0)]
        for rx0, ry0, rx1, ry1 in self.rects:
            segments += [(rx0, ry0, rx1, ry0), (rx1, ry0, rx1, ry1), (rx1, ry1, rx0, ry1), (rx0, ry1, rx0, ry0)]
        return np.array(segments, dtype=np.float64)

    @property
    def segments(self) -> np.ndarray:
        return self._segments

    @property
    def circle_array(self) -> np.ndarray:
        return self._circle_array

    @property
    def diagonal(self) -> float:
        x0, y0, x1, y1 = self.bounds
        return math.hypot(x1 - x0, y1 - y0)

    def free_grid(self, resolution:float = GRID_RESOLUTION) -> np.ndarray:
        """Cells whose center a robot disc can occupy."""
        x0, y0, x1, y1 = self.bounds
        xs = np.arange(x0 + resolution / 2, x1, resolution)
        ys = np.arange(y0 + resolution / 2, y1, resolution)
        gx, gy = np.meshgrid(xs, ys, indexing="ij")
        best = np.minimum.reduce([gx - x0, x1 - gx, gy - y0, y1 - gy])
        for rx0, ry0, rx1, ry1 in self.rects:
            dx = np.maximum.reduce([rx0 - gx, np.zeros_like(gx), gx - rx1])
            dy = np.maximum.reduce([ry0 - gy, np.zeros_like(gy), gy - ry1])
            best = np.minimum(best, np.hypot(dx, dy))
        for cx, cy, r in self.circles:
            best = np.minimum(best, np.hypot(gx - cx, gy - cy) - r)
        return best >= self.robot_radius

    def clearance(self, x:float, y:float) -> float:
        return hardware.clearance(x, y, self.bounds, self.rects, self.circles)

    def to_dict(self) -> dict:
        return {
            "format": "world",
            "name": self.name,
            "bounds": list(self.bounds),
            "rects": [list(rect) for rect in self.rects],
            "circles": [list(circle) for circle in self.circles],
        }

def world_from_dict(data:dict, name:str = "custom", robot_radius:float = hardware.ROBOT_RADIUS) -> World:
    if type(data) is not dict or data.get("format") != "world":
        raise WorldError("not a world description")
    try:
        return World(
            bounds=data["bounds"],
            rects=data.get("rects", ()),
            circles=data.get("circles", ()),
            name=data.get("name", name),
            robot_radius=robot_radius,
        )
    except (KeyError, TypeError, ValueError) as e:
        raise WorldError("malformed world description: {}".format(e)) from e

def load_world(path:str, robot_radius:float = hardware.ROBOT_RADIUS) -> World:
    with open(path, "r") as file:
        try:
            data = json.load(file)
        except ValueError as e:
            raise WorldError("{:s} is not valid JSON: {}".format(path, e)) from e
    world = world_from_dict(data, name=path, robot_radius=robot_radius)
    logger.debug("loaded world %s: %d rects, %d circles", world.name, len(world.rects), len(world.circles))
    return world

## Built-in arenas

def empty(robot_radius:float = hardware.ROBOT_RADIUS) -> World:
    return World((0.0, 0.0, 5.0, 5.0), name="empty", robot_radius=robot_radius)

def four_block(robot_radius:float = hardware.ROBOT_RADIUS) -> World:
    return World((0.0, 0.0, 6.0, 6.0), rects=(
        (1.25, 1.25, 2.25, 2.25),
        (3.75, 1.25, 4.75, 2.25),
        (1.25, 3.75, 2.25, 4.75),
        (3.75, 3.75, 4.75, 4.75),
    ), name="four_block", robot_radius=robot_radius)

def corridor(robot_radius:float = hardware.ROBOT_RADIUS) -> World:
    return World((0.0, 0.0, 8.0, 3.0), rects=(
        (2.0, 0.0, 2.5, 1.8),
        (4.0, 1.2, 4.5, 3.0),
        (6.0, 0.0, 6.5, 1.8),
    ), name="corridor", robot_radius=robot_radius)

WORLDS = {
    "empty": empty,
    "four_block": four_block,
    "corridor": corridor,
}

def get_world(name:str, robot_radius:float = hardware.ROBOT_RADIUS) -> World:
    if name not in WORLDS:
        raise WorldError("unknown world {:s}, expected one of {:s}".format(name, ", ".join(WORLDS)))
    return WORLDS[name](robot_radius)

## Robot

class Terminal(IntEnum):
    NONE = 0
    REACHED_TARGET = 1
    COLLISION = 2
    TIMEOUT = 3

    @property
    def label(self) -> str:
        return self.name.lower()

@dataclass(frozen=True)
class RobotState:
    x: float
    y: float
    heading: float
    target_x: float
    target_y: float
    steps_taken: int = 0
    done: bool = False

    @property
    def distance(self) -> float:
        return math.hypot(self.target_x - self.x, self.target_y - self.y)

@dataclass(frozen=True)
class Observation:
    lidar: tuple
    bearing: float
    distance: float

    def flat(self) -> np.ndarray:
        # Index 3 is the front ray, index 7 (-2) the bearing
        return np.array(tuple(self.lidar) + (self.bearing, self.distance), dtype=np.float64)

    def normalized(self, max_range:float, diagonal:float) -> np.ndarray:
        return np.array(
            tuple(v / max_range for v in self.lidar) + (self.bearing / math.pi, self.distance / diagonal),
            dtype=np.float64,
        )

@dataclass(frozen=True)
class StepResult:
    state: RobotState
    obs: Observation
    reward: float
    terminal: Terminal = Terminal.NONE

def raycast_lidar(world:World, pose:RobotState, cfg:EnvConfig = None) -> np.ndarray:
    cfg = cfg or EnvConfig()
    return hardware.raycast(pose.x, pose.y, pose.heading, world.segments, world.circle_array, cfg.max_range)

def observe(world:World, state:RobotState, cfg:EnvConfig = None) -> Observation:
    dx, dy = state.target_x - state.x, state.target_y - state.y
    # Positive when the target lies clockwise of the heading
    bearing = hardware.wrap_angle(state.heading - math.atan2(dy, dx))
    return Observation(
        lidar=tuple(float(v) for v in raycast_lidar(world, state, cfg)),
        bearing=bearing,
        distance=math.hypot(dx, dy),
    )

## Episodes

def reset(world:World, seed:int, cfg:EnvConfig = None) -> tuple[RobotState, Observation]:
    cfg = cfg or EnvConfig()
    rng = np.random.default_rng(seed)
    x0, y0, x1, y1 = world.bounds
    r = cfg.robot_radius

    def sample() -> tuple:
        return rng.uniform(x0 + r, x1 - r), rng.uniform(y0 + r, y1 - r)

    for attempt in range(cfg.placement_retries):
        x, y = sample()
        if world.clearance(x, y) < r:
            continue
        tx, ty = sample()
        if world.clearance(tx, ty) < r or math.hypot(tx - x, ty - y) < cfg.min_start_goal_dist:
            continue
        heading = hardware.wrap_angle(rng.uniform(-math.pi, math.pi))
        state = RobotState(float(x), float(y), heading, float(tx), float(ty))
        return state, observe(world, state, cfg)

    raise PlacementError("no valid start/target placement in world {:s} after {:d} attempts (seed {})".format(
        world.name, cfg.placement_retries, seed
    ))

def step(world:World, state:RobotState, action:NavAction, cfg:EnvConfig = None) -> StepResult:
    cfg = cfg or EnvConfig()
    if state.done:
        raise EpisodeOverError("step called on a finished episode")
    action = NavAction(action)
    previous = state.distance
    steps = state.steps_taken + 1

    if action == NavAction.FORWARD:
        nx = state.x + cfg.step_len * math.cos(state.heading)
        ny = state.y + cfg.step_len * math.sin(state.heading)
        if hardware.swept_collision(state.x, state.y, nx, ny, world.bounds, world.rects, world.circles, cfg.robot_radius):
            state = replace(state, steps_taken=steps, done=True)
            return StepResult(state, observe(world, state, cfg), -1.0, Terminal.COLLISION)
        state = replace(state, x=nx, y=ny, steps_taken=steps)
    else:
        turn = cfg.turn_angle if action == NavAction.LEFT else -cfg.turn_angle
        state = replace(state, heading=hardware.wrap_angle(state.heading + turn), steps_taken=steps)

    distance = state.distance
    if distance <= cfg.goal_radius:
        state = replace(state, done=True)
        return StepResult(state, observe(world, state, cfg), 1.0, Terminal.REACHED_TARGET)

    reward = (previous - distance) * cfg.reward_scale - cfg.step_penalty
    terminal = Terminal.NONE
    if steps >= cfg.max_steps:
        state = replace(state, done=True)
        terminal = Terminal.TIMEOUT
    return StepResult(state, observe(world, state, cfg), reward, terminal)

def success_rate(window:list) -> float:
    if not len(window):
        raise WorldError("success rate of an empty window")
    return sum(1 for outcome in window if Terminal(outcome) == Terminal.REACHED_TARGET) / len(window)

class NavEnv(gym.Env):
    """Gymnasium environment around :func:`reset` and :func:`step` for one rollout worker.

    Observations are the normalized network inputs. ``info`` carries the raw
    :class:`Observation`, the :class:`RobotState` and the :class:`Terminal` kind.
    A placement can be forced with ``options={"state": RobotState(...)}``."""

    metadata = {"render_modes": []}

    def __init__(self, world:World, cfg:EnvConfig = None):
        super().__init__()
        self.world = world
        self.cfg = cfg or EnvConfig()
        self.state = None
        self.action_space = spaces.Discrete(len(NavAction))
        self.observation_space = spaces.Box(OBS_LOW, OBS_HIGH, dtype=np.float64)

    def _info(self, obs:Observation, terminal:Terminal = Terminal.NONE) -> dict:
        return {"observation": obs, "state": self.state, "terminal": terminal}

    def reset(self, seed:int = None, options:dict = None) -> tuple[np.ndarray, dict]:
        super().reset(seed=seed)
        state = (options or {}).get("state")
        if state is not None:
            self.state, obs = state, observe(self.world, state, self.cfg)
        else:
            if seed is None:
                seed = int(self.np_random.integers(0, 2 ** 32))
            self.state, obs = reset(self.world, seed, self.cfg)
        return self.normalize(obs), self._info(obs)

    def step(self, action:NavAction) -> tuple[np.ndarray, float, bool, bool, dict]:
        if self.state is None:
            raise EpisodeOverError("step called before reset")
        result = step(self.world, self.state, NavAction(int(action)), self.cfg)
        self.state = result.state
        terminated = result.terminal in (Terminal.REACHED_TARGET, Terminal.COLLISION)
        truncated = result.terminal == Terminal.TIMEOUT
        return self.normalize(result.obs), result.reward, terminated, truncated, self._info(result.obs, result.terminal)

    def normalize(self, obs:Observation) -> np.ndarray:
        return obs.normalized(self.cfg.max_range, self.world.diagonal)
