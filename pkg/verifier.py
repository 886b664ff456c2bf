# SPDX-FileCopyrightText: Copyright (c) 2026 Cooper Dalrymple
#
# SPDX-License-Identifier: Unlicense

"""Bounded property checking for policy networks.

Proofs come from interval bound propagation over recursively split input
boxes, counterexamples from sampling and gradient search using the exact
input gradient of the network. Neither side is complete: running out of
budget yields :class:`Unknown`.

A query holds when every chain of observations starting in one of its
precondition boxes, whose intermediate steps satisfy the chain guards and
follow its transitions, ends in an observation whose output satisfies the
chain's desired predicate. Transitions over-approximate how the normalized
observation moves after a turn, so a counterexample is a counterexample to
the over-approximation.
"""

import csv
import logging
import math
import multiprocessing
import time
from collections import deque
from dataclasses import dataclass, field

import numpy as np
from tqdm import tqdm

import dense
import hardware
import policy
import world
from scenarios import ClearPathGuardConfig, NavAction
from world import EnvConfig

logger = logging.getLogger(__name__)

MIN_WIDTH = 1e-6
GRADIENT_STEPS = 12
TRIALS_PER_NODE = 2
INITIAL_TRIALS = 16

LIDAR = slice(0, hardware.LIDAR_RAYS)
BEARING = hardware.LIDAR_RAYS
DISTANCE = hardware.LIDAR_RAYS + 1

class VerifierError(Exception):
    pass

## Boxes

@dataclass(frozen=True, eq=False)
class Box:
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = np.array(self.lower, dtype=np.float64).reshape(-1)
        upper = np.array(self.upper, dtype=np.float64).reshape(-1)
        if lower.shape != upper.shape:
            raise VerifierError("box bounds have different dimensions")
        if np.any(lower > upper) or not np.all(np.isfinite(lower)) or not np.all(np.isfinite(upper)):
            raise VerifierError("box lower bound exceeds upper bound")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def point(cls, x:np.ndarray) -> "Box":
        return cls(x, x)

    def __len__(self) -> int:
        return len(self.lower)

    @property
    def width(self) -> np.ndarray:
        return self.upper - self.lower

    @property
    def center(self) -> np.ndarray:
        return (self.lower + self.upper) / 2.0

    def contains(self, x:np.ndarray) -> bool:
        x = np.asarray(x, dtype=np.float64)
        return x.shape == self.lower.shape and bool(np.all(x >= self.lower) and np.all(x <= self.upper))

    def clip(self, x:np.ndarray) -> np.ndarray:
        return np.clip(x, self.lower, self.upper)

    def sample(self, rng:np.random.Generator) -> np.ndarray:
        return self.clip(self.lower + rng.random(len(self)) * self.width)

    def intersect(self, other:"Box") -> "Box | None":
        lower = np.maximum(self.lower, other.lower)
        upper = np.minimum(self.upper, other.upper)
        if np.any(lower > upper):
            return None
        return Box(lower, upper)

    def split(self, dim:int) -> tuple["Box", "Box"]:
        middle = self.center[dim]
        upper = self.upper.copy()
        upper[dim] = middle
        lower = self.lower.copy()
        lower[dim] = middle
        return Box(self.lower, upper), Box(lower, self.upper)

    def __repr__(self) -> str:
        return "Box({}, {})".format(self.lower.tolist(), self.upper.tolist())

DOMAIN = Box(world.OBS_LOW, world.OBS_HIGH)

## Bounds

def ibp_bounds(net:dense.DenseNet, box:Box) -> tuple[np.ndarray, np.ndarray]:
    """Sound elementwise output bounds over ``box``, padded outward for floating point rounding.
    A point box yields exactly the forward output."""
    if len(box) != net.input_dim:
        raise VerifierError("box has dimension {:d}, network expects {:d}".format(len(box), net.input_dim))
    lower, upper = box.lower, box.upper
    eps = np.finfo(np.float64).eps
    for layer in net.layers:
        mid = (lower + upper) / 2.0
        rad = (upper - lower) / 2.0
        z = (np.atleast_2d(mid) @ layer.weight.T + layer.bias)[0]
        if np.any(rad > 0.0):
            w = np.abs(layer.weight)
            spread = w @ rad
            pad = (layer.inputs + 2) * eps * (w @ (np.abs(mid) + rad) + np.abs(layer.bias))
            lower, upper = z - spread - pad, z + spread + pad
        else:
            lower, upper = z, z
        if layer.activation == dense.RELU:
            lower, upper = np.maximum(lower, 0.0), np.maximum(upper, 0.0)
    return lower, upper

## Output predicates

class Predicate:
    """Exact on concrete outputs, three-valued on output intervals (True, False or None for undecided).
    ``margin`` is positive where the predicate comfortably holds."""

    def holds(self, y:np.ndarray) -> bool:
        raise NotImplementedError()

    def on_interval(self, lower:np.ndarray, upper:np.ndarray) -> bool | None:
        raise NotImplementedError()

    def margin(self, y:np.ndarray) -> float:
        raise NotImplementedError()

    def margin_gradient(self, y:np.ndarray) -> np.ndarray:
        raise NotImplementedError()

    def negate(self) -> "Predicate":
        raise NotImplementedError()

@dataclass(frozen=True)
class ArgmaxIs(Predicate):
    action: int

    def holds(self, y:np.ndarray) -> bool:
        return int(np.argmax(y)) == self.action

    def on_interval(self, lower:np.ndarray, upper:np.ndarray) -> bool | None:
        others = np.delete(np.arange(len(lower)), self.action)
        if lower[self.action] > np.max(upper[others]):
            return True
        if np.any(lower[others] > upper[self.action]):
            return False
        return None

    def _rival(self, y:np.ndarray) -> int:
        others = np.delete(np.arange(len(y)), self.action)
        return int(others[np.argmax(y[others])])

    def margin(self, y:np.ndarray) -> float:
        return float(y[self.action] - y[self._rival(y)])

    def margin_gradient(self, y:np.ndarray) -> np.ndarray:
        g = np.zeros(len(y))
        g[self.action] = 1.0
        g[self._rival(y)] = -1.0
        return g

    def negate(self) -> Predicate:
        return ArgmaxIsNot(self.action)

@dataclass(frozen=True)
class ArgmaxIsNot(Predicate):
    action: int

    def holds(self, y:np.ndarray) -> bool:
        return not ArgmaxIs(self.action).holds(y)

    def on_interval(self, lower:np.ndarray, upper:np.ndarray) -> bool | None:
        result = ArgmaxIs(self.action).on_interval(lower, upper)
        return None if result is None else not result

    def margin(self, y:np.ndarray) -> float:
        return -ArgmaxIs(self.action).margin(y)

    def margin_gradient(self, y:np.ndarray) -> np.ndarray:
        return -ArgmaxIs(self.action).margin_gradient(y)

    def negate(self) -> Predicate:
        return ArgmaxIs(self.action)

@dataclass(frozen=True)
class LinearGE(Predicate):
    """``coeffs . y >= bound``"""
    coeffs: tuple
    bound: float

    def holds(self, y:np.ndarray) -> bool:
        return float(np.dot(self.coeffs, y)) >= self.bound

    def _range(self, lower:np.ndarray, upper:np.ndarray) -> tuple[float, float]:
        c = np.asarray(self.coeffs, dtype=np.float64)
        low = float(np.sum(np.where(c > 0.0, c * lower, c * upper)))
        high = float(np.sum(np.where(c > 0.0, c * upper, c * lower)))
        return low, high

    def on_interval(self, lower:np.ndarray, upper:np.ndarray) -> bool | None:
        low, high = self._range(lower, upper)
        if low >= self.bound:
            return True
        if high < self.bound:
            return False
        return None

    def margin(self, y:np.ndarray) -> float:
        return float(np.dot(self.coeffs, y)) - self.bound

    def margin_gradient(self, y:np.ndarray) -> np.ndarray:
        return np.asarray(self.coeffs, dtype=np.float64)

    def negate(self) -> Predicate:
        return LinearLT(self.coeffs, self.bound)

@dataclass(frozen=True)
class LinearLT(LinearGE):
    """``coeffs . y < bound``"""

    def holds(self, y:np.ndarray) -> bool:
        return not super().holds(y)

    def on_interval(self, lower:np.ndarray, upper:np.ndarray) -> bool | None:
        result = super().on_interval(lower, upper)
        return None if result is None else not result

    def margin(self, y:np.ndarray) -> float:
        return -super().margin(y)

    def margin_gradient(self, y:np.ndarray) -> np.ndarray:
        return -super().margin_gradient(y)

    def negate(self) -> Predicate:
        return LinearGE(self.coeffs, self.bound)

## Transitions

@dataclass(frozen=True)
class Transition:
    """Over-approximation of the normalized observation after a turn.

    A left turn by ``turn_angle`` adds that angle to the bearing and shifts
    the lidar fan by ``turn_angle / spacing`` rays, exposing unknown readings
    on the left end; a right turn mirrors it. Every dimension is widened by
    ``slack`` and clipped to the observation domain."""
    action: int
    slack: float = 0.05
    turn_angle: float = hardware.TURN_ANGLE
    spacing: float = hardware.LIDAR_SPACING

    def __post_init__(self):
        if self.action not in (NavAction.LEFT, NavAction.RIGHT):
            raise VerifierError("transitions exist for turns only")
        if self.slack < 0.0:
            raise VerifierError("slack must not be negative")
        if self.turn_angle <= 0.0 or self.spacing <= 0.0:
            raise VerifierError("turn angle and lidar spacing must be positive")
        rays = self.turn_angle / self.spacing
        if abs(rays - round(rays)) > 1e-9:
            raise VerifierError("turn angle {:g} deg is not a multiple of the lidar spacing {:g} deg".format(
                math.degrees(self.turn_angle), math.degrees(self.spacing)
            ))

    @property
    def rays(self) -> int:
        return min(int(round(self.turn_angle / self.spacing)), BEARING)

    def apply(self, box:Box) -> Box:
        lower, upper = box.lower.copy(), box.upper.copy()
        n, s = BEARING, self.rays
        shift = self.turn_angle / math.pi
        if self.action == NavAction.LEFT:
            lower[0:n - s], upper[0:n - s] = box.lower[s:n], box.upper[s:n]
            lower[n - s:n], upper[n - s:n] = DOMAIN.lower[n - s:n], DOMAIN.upper[n - s:n]
        else:
            lower[s:n], upper[s:n] = box.lower[0:n - s], box.upper[0:n - s]
            lower[0:s], upper[0:s] = DOMAIN.lower[0:s], DOMAIN.upper[0:s]
            shift = -shift
        lower[BEARING] += shift
        upper[BEARING] += shift
        # Past +-pi the bearing wraps around
        if lower[BEARING] < DOMAIN.lower[BEARING] or upper[BEARING] > DOMAIN.upper[BEARING]:
            lower[BEARING], upper[BEARING] = DOMAIN.lower[BEARING], DOMAIN.upper[BEARING]
        return Box(
            np.maximum(lower - self.slack, DOMAIN.lower),
            np.minimum(upper + self.slack, DOMAIN.upper),
        )

    def contains(self, x:np.ndarray, x_next:np.ndarray) -> bool:
        return self.apply(Box.point(x)).contains(x_next)

## Queries

@dataclass(frozen=True)
class Chain:
    """``guards[i]`` must hold at step i and ``transitions[i]`` leads to step i + 1;
    ``post`` is the desired predicate at the last step."""
    name: str
    post: Predicate
    guards: tuple = ()
    transitions: tuple = ()

    def __post_init__(self):
        if len(self.guards) != len(self.transitions):
            raise VerifierError("chain {:s} needs one transition per guard".format(self.name))

    @property
    def steps(self) -> int:
        return len(self.guards) + 1

    @property
    def negation(self) -> Predicate:
        return self.post.negate()

    def propagate(self, start:Box) -> tuple | None:
        boxes = [start]
        for transition in self.transitions:
            boxes.append(transition.apply(boxes[-1]))
        return tuple(boxes)

@dataclass(frozen=True)
class PropertyQuery:
    name: str
    preconditions: tuple
    chains: tuple

    def __post_init__(self):
        if isinstance(self.preconditions, Box):
            object.__setattr__(self, "preconditions", (self.preconditions,))
        object.__setattr__(self, "preconditions", tuple(self.preconditions))
        object.__setattr__(self, "chains", tuple(self.chains))
        if not self.preconditions or not self.chains:
            raise VerifierError("query {:s} needs a precondition and a chain".format(self.name))

    @property
    def steps(self) -> int:
        return max(chain.steps for chain in self.chains)

    @property
    def input_dim(self) -> int:
        return len(self.preconditions[0])

## Properties

def property_turning_when_clear(cfg:ClearPathGuardConfig = None, max_range:float = hardware.MAX_RANGE) -> PropertyQuery:
    """With the path ahead clear and the target ahead, the policy moves forward."""
    cfg = cfg or ClearPathGuardConfig()
    fwd = cfg.minimal_fwd_clearance / max_range
    side = cfg.minimal_clearance / max_range
    bearing = ((cfg.fwd_dir - cfg.fwd_dir_tolerance) / math.pi, (cfg.fwd_dir + cfg.fwd_dir_tolerance) / math.pi)
    if not (0.0 <= fwd <= 1.0 and 0.0 <= side <= 1.0):
        raise VerifierError("clearances {:g} and {:g} fall outside the lidar range".format(cfg.minimal_fwd_clearance, cfg.minimal_clearance))
    if not (-1.0 <= bearing[0] <= bearing[1] <= 1.0):
        raise VerifierError("forward direction and tolerance fall outside the bearing range")
    lower, upper = DOMAIN.lower.copy(), DOMAIN.upper.copy()
    lower[2], lower[3], lower[4] = side, fwd, side
    lower[BEARING], upper[BEARING] = bearing
    return PropertyQuery("turning_when_clear", Box(lower, upper), (
        Chain("forward", ArgmaxIs(NavAction.FORWARD)),
    ))

def _turn_chain(first:NavAction, then:NavAction, steps:int, slack:float, turn_angle:float, name:str) -> Chain:
    transition = Transition(first, slack, turn_angle)
    return Chain(name, ArgmaxIsNot(then), (ArgmaxIs(first),) * (steps - 1), (transition,) * (steps - 1))

def property_back_and_forth(slack:float = 0.05, turn_angle:float = hardware.TURN_ANGLE) -> PropertyQuery:
    """After choosing one turn the policy never chooses the opposite turn."""
    if slack < 0.0:
        raise VerifierError("slack must not be negative")
    return PropertyQuery("back_and_forth", DOMAIN, (
        _turn_chain(NavAction.LEFT, NavAction.RIGHT, 2, slack, turn_angle, "left-right"),
        _turn_chain(NavAction.RIGHT, NavAction.LEFT, 2, slack, turn_angle, "right-left"),
    ))

def property_k_turns(k:int = 7, slack:float = 0.05, turn_angle:float = hardware.TURN_ANGLE) -> PropertyQuery:
    """The policy never chooses the same turn k times in a row."""
    if k < 2:
        raise VerifierError("k must be at least 2, got {:d}".format(k))
    if slack < 0.0:
        raise VerifierError("slack must not be negative")
    return PropertyQuery("k_turns", DOMAIN, (
        _turn_chain(NavAction.LEFT, NavAction.LEFT, k, slack, turn_angle, "left-x{:d}".format(k)),
        _turn_chain(NavAction.RIGHT, NavAction.RIGHT, k, slack, turn_angle, "right-x{:d}".format(k)),
    ))

def toy_below_40() -> PropertyQuery:
    # Two non-negative inputs of the toy network should map below 40
    return PropertyQuery("toy_below_40", Box([0.0, 0.0], [10.0, 10.0]), (
        Chain("output", LinearGE((1.0,), 40.0).negate()),
    ))

PROPERTIES = ("turning_when_clear", "back_and_forth", "k_turns", "toy_below_40")

## Verdicts

@dataclass
class Verdict:
    splits: int = 0
    trials: int = 0

    @property
    def label(self) -> str:
        return type(self).__name__.lower()

    def __str__(self) -> str:
        return self.label

@dataclass
class Verified(Verdict):
    pass

@dataclass
class Falsified(Verdict):
    chain: str = ""
    witness: list = field(default_factory=list)
    outputs: list = field(default_factory=list)

    def __str__(self) -> str:
        return "falsified by {} -> {}".format(
            [x.tolist() for x in self.witness], [y.tolist() for y in self.outputs]
        )

@dataclass
class Unknown(Verdict):
    open_nodes: int = 0

    def __str__(self) -> str:
        return "unknown after {:d} splits and {:d} trials, {:d} open boxes".format(self.splits, self.trials, self.open_nodes)

## Falsification

def _climb(net:dense.DenseNet, predicate:Predicate, region:Box, x:np.ndarray, sign:float, done) -> np.ndarray:
    # Signed gradient steps on the predicate margin, projected back into the region
    step = 0.25 * region.width
    for i in range(GRADIENT_STEPS):
        y = net.forward(x)
        if done(y):
            break
        _, g = net.backward(predicate.margin_gradient(y))
        x = region.clip(x + sign * step * np.sign(g))
        step = step * 0.7
    return x

def search_chain(net:dense.DenseNet, chain:Chain, boxes:tuple, rng:np.random.Generator) -> list | None:
    """One greedy attempt at a counterexample chain inside ``boxes``."""
    states = []
    region = boxes[0]
    for i in range(chain.steps):
        x = region.sample(rng)
        if i < len(chain.guards):
            guard = chain.guards[i]
            x = _climb(net, guard, region, x, 1.0, guard.holds)
            if not guard.holds(net.predict(x)):
                return None
            states.append(x)
            region = chain.transitions[i].apply(Box.point(x)).intersect(boxes[i + 1])
            if region is None:
                return None
        else:
            x = _climb(net, chain.post, region, x, -1.0, lambda y: not chain.post.holds(y))
            states.append(x)
    return states if not chain.post.holds(net.predict(states[-1])) else None

def check_witness(net:dense.DenseNet, query:PropertyQuery, chain:Chain, states:list) -> bool:
    if len(states) != chain.steps or not any(box.contains(states[0]) for box in query.preconditions):
        return False
    for i, guard in enumerate(chain.guards):
        if not guard.holds(net.predict(states[i])):
            return False
        if not chain.transitions[i].contains(states[i], states[i + 1]):
            return False
    return not chain.post.holds(net.predict(states[-1]))

## Branch and bound

@dataclass
class _Node:
    chain: Chain
    boxes: tuple

def _status(net:dense.DenseNet, node:_Node) -> bool | None:
    """True when the node holds no counterexample, False when every chain in it is one."""
    definite = True
    for guard, box in zip(node.chain.guards, node.boxes):
        result = guard.on_interval(*ibp_bounds(net, box))
        if result is False:
            return True
        definite = definite and result is True
    result = node.chain.post.on_interval(*ibp_bounds(net, node.boxes[-1]))
    if result is True:
        return True
    if result is False and definite:
        return False
    return None

def _split(node:_Node) -> list | None:
    widths = [box.width for box in node.boxes]
    step = max(range(len(widths)), key=lambda i: float(np.max(widths[i])))
    dim = int(np.argmax(widths[step]))
    if widths[step][dim] < MIN_WIDTH:
        return None
    children = []
    for half in node.boxes[step].split(dim):
        boxes = list(node.boxes[:step]) + [half]
        for i in range(step, len(node.chain.transitions)):
            following = node.chain.transitions[i].apply(boxes[-1]).intersect(node.boxes[i + 1])
            if following is None:
                break
            boxes.append(following)
        else:
            children.append(_Node(node.chain, tuple(boxes)))
    return children

def verify(net:dense.DenseNet, query:PropertyQuery, max_splits:int = 2000, max_trials:int = 500, rng:np.random.Generator = None) -> Verdict:
    if max_splits <= 0 or max_trials <= 0:
        raise VerifierError("verification budget must be positive, got {:d} splits and {:d} trials".format(max_splits, max_trials))
    if query.input_dim != net.input_dim:
        raise VerifierError("query {:s} has {:d} inputs, network expects {:d}".format(query.name, query.input_dim, net.input_dim))
    rng = rng if rng is not None else np.random.default_rng(0)
    splits = trials = 0

    queue = deque(
        _Node(chain, chain.propagate(box))
        for chain in query.chains for box in query.preconditions
    )

    def falsify(node:_Node, count:int) -> Falsified | None:
        nonlocal trials
        for i in range(count):
            if trials >= max_trials:
                return None
            trials += 1
            states = search_chain(net, node.chain, node.boxes, rng)
            if states is not None and check_witness(net, query, node.chain, states):
                return Falsified(splits, trials, node.chain.name, states, [net.predict(x) for x in states])
        return None

    for node in list(queue):
        if (verdict := falsify(node, max(1, INITIAL_TRIALS // len(queue)))) is not None:
            return verdict

    unresolved = []
    while queue:
        node = queue.popleft()
        status = _status(net, node)
        if status is True:
            continue
        if (verdict := falsify(node, TRIALS_PER_NODE if status is None else max_trials)) is not None:
            return verdict
        children = _split(node) if splits < max_splits else None
        if children is None:
            unresolved.append(node)
            continue
        splits += 1
        queue.extend(children)

    if not unresolved:
        logger.debug("%s verified after %d splits", query.name, splits)
        return Verified(splits, trials)

    # Remaining trials go round-robin over the open boxes
    while trials < max_trials:
        before = trials
        for node in unresolved:
            if (verdict := falsify(node, 1)) is not None:
                return verdict
        if trials == before:
            break
    return Unknown(splits, trials, len(unresolved))

## Campaigns

@dataclass
class VerifyConfig:
    properties: list = field(default_factory=lambda: ["turning_when_clear", "back_and_forth", "k_turns"])
    max_splits: int = 2000
    max_trials: int = 500
    slack: float = 0.05
    k: int = 7
    workers: int = 1
    success_cutoff: float = 0.8
    seed: int = 0

    def validate(self) -> None:
        for name in self.properties:
            if name not in PROPERTIES:
                raise VerifierError("unknown property {:s}, expected one of {:s}".format(str(name), ", ".join(PROPERTIES)))
        if self.max_splits <= 0 or self.max_trials <= 0:
            raise VerifierError("verification budget must be positive")
        if self.workers < 1:
            raise VerifierError("verify.workers must be at least 1")

def make_queries(cfg:VerifyConfig, guard:ClearPathGuardConfig = None, env:EnvConfig = None) -> list:
    """Queries for the configured properties, with transitions matching the turns of ``env``."""
    cfg.validate()
    env = env or EnvConfig()
    queries = []
    for name in cfg.properties:
        if name == "turning_when_clear":
            queries.append(property_turning_when_clear(guard, env.max_range))
        elif name == "back_and_forth":
            queries.append(property_back_and_forth(cfg.slack, env.turn_angle))
        elif name == "k_turns":
            queries.append(property_k_turns(cfg.k, cfg.slack, env.turn_angle))
        else:
            queries.append(toy_below_40())
    return queries

@dataclass
class CampaignRow:
    model: str
    mode: str
    property: str
    verdict: str
    splits: int = 0
    trials: int = 0
    seconds: float = 0.0
    detail: str = ""

COLUMNS = ("model", "mode", "property", "verdict", "splits", "trials", "seconds", "detail")

def _verify_item(item:tuple) -> list:
    path, queries, max_splits, max_trials, success_cutoff, seed = item
    try:
        net, metadata = policy.load_network(path)
    except (OSError, dense.DenseError) as e:
        return [CampaignRow(path, "?", query.name, "error", detail=str(e)) for query in queries]
    mode = str(metadata.get("mode", "unknown"))
    rate = metadata.get("success_rate")
    if success_cutoff is not None and rate is not None and rate < success_cutoff:
        return [CampaignRow(path, mode, query.name, "excluded", detail="success rate {:.3f}".format(rate)) for query in queries]

    rows = []
    for query in queries:
        start = time.perf_counter()
        try:
            verdict = verify(net, query, max_splits, max_trials, np.random.default_rng(seed))
        except (VerifierError, dense.DenseError) as e:
            rows.append(CampaignRow(path, mode, query.name, "error", seconds=time.perf_counter() - start, detail=str(e)))
            continue
        rows.append(CampaignRow(path, mode, query.name, verdict.label, verdict.splits, verdict.trials, time.perf_counter() - start, str(verdict)))
        logger.info("%s %s: %s", path, query.name, verdict.label)
    return rows

def campaign(checkpoints:list, queries:list, max_splits:int = 2000, max_trials:int = 500, workers:int = 1, success_cutoff:float = None, seed:int = 0, progress:bool = False) -> list:
    """Verifies every query on every checkpoint; rows come back in checkpoint order."""
    if max_splits <= 0 or max_trials <= 0:
        raise VerifierError("verification budget must be positive")
    items = [(path, queries, max_splits, max_trials, success_cutoff, seed) for path in checkpoints]
    rows = []
    with tqdm(total=len(items), unit="model", disable=not progress) as bar:
        if workers > 1:
            with multiprocessing.Pool(workers) as pool:
                for result in pool.imap(_verify_item, items):
                    rows += result
                    bar.update()
        else:
            for item in items:
                rows += _verify_item(item)
                bar.update()
    return rows

def aggregate(rows:list) -> dict:
    counts = {}
    for row in rows:
        mode = counts.setdefault(row.mode, {})
        mode[row.verdict] = mode.get(row.verdict, 0) + 1
    return counts

def write_table(rows:list, path:str) -> None:
    with open(path, "w", newline="") as file:
        writer = csv.writer(file)
        writer.writerow(COLUMNS)
        for row in rows:
            writer.writerow((row.model, row.mode, row.property, row.verdict, row.splits, row.trials, "{:.3f}".format(row.seconds), row.detail))
