# SPDX-FileCopyrightText: Copyright (c) 2026 Cooper Dalrymple
#
# SPDX-License-Identifier: Unlicense

"""Proximal policy optimization with scenario-derived costs.

Every executed action is delivered to the rule program as an event; the
rules that block it mark a violation, which is the cost signal of the
constrained modes:

- ``baseline_ppo``: plain PPO, violations are only counted.
- ``lagrangian_sbp``: Lagrangian PPO with a reward multiplier, normalized
  multipliers starting at zero, a multiplier learning rate of a tenth of the
  policy learning rate and multiplier updates delayed until the agent
  succeeds often enough.
- ``lagrangian_plain``: textbook Lagrangian PPO, none of the above.
- ``reward_shaping``: a fixed penalty is subtracted from the reward of every
  step whose action was blocked.

Metrics are written as one JSON object per line and episode::

    {"episode": 1, "update": 1, "success": false, "outcome": "collision",
     "steps": 41, "reward": -1.2, "mean_reward": -0.03,
     "violations": {"avoid-back-and-forth": 2, ...}, "J_C": {...},
     "lambda": {...}, "alpha": 1.0, "gate_open": false, "losses": {...}}
"""

import json
import logging
import os
from dataclasses import dataclass, field

import numpy as np
from tqdm import tqdm

import bprogram
import dense
import policy
import scenarios
import world
from policy import PolicyBundle
from world import NavEnv, Terminal

logger = logging.getLogger(__name__)

BASELINE_PPO = "baseline_ppo"
LAGRANGIAN_SBP = "lagrangian_sbp"
LAGRANGIAN_PLAIN = "lagrangian_plain"
REWARD_SHAPING = "reward_shaping"
MODES = (BASELINE_PPO, LAGRANGIAN_SBP, LAGRANGIAN_PLAIN, REWARD_SHAPING)
LAGRANGIAN_MODES = (LAGRANGIAN_SBP, LAGRANGIAN_PLAIN)

ON_OVERFLOW = "on_overflow"
ALWAYS = "always"
NO_NORMALIZATION = "none"
NORM_MODES = (ON_OVERFLOW, ALWAYS)

ADVANTAGE_EPS = 1e-8
METRICS_FILE = "metrics.jsonl"
FINAL_CHECKPOINT = "final.json"

## Errors

class TrainingError(Exception):
    pass

class RolloutError(TrainingError):
    def __init__(self, step:int, error:Exception):
        super().__init__("rollout failed at episode step {:d}: {}".format(step, error))
        self.step = step
        self.error = error

class NonFiniteLossError(TrainingError, ArithmeticError):
    def __init__(self, diagnostics:dict):
        super().__init__("non-finite loss ({:s})".format(", ".join("{:s}={}".format(k, v) for k, v in diagnostics.items())))
        self.diagnostics = diagnostics

class LagrangeInvariantError(TrainingError, AssertionError):
    pass

## Configuration

@dataclass
class TrainConfig:
    mode: str = LAGRANGIAN_SBP
    penalty: float = 1.0
    policy_lr: float = 3e-4
    critic_lr: float = 1e-3
    clip: float = 0.2
    gamma: float = 0.99
    gae_lambda: float = 0.95
    epochs: int = 10
    minibatch: int = 64
    horizon: int = 2048
    entropy_coef: float = 0.01
    episodes: int = 2000
    gate_threshold: float = 0.6
    gate_window: int = 100
    cost_limit: float = 0.1
    cost_limits: dict = field(default_factory=dict)
    lambda_norm_mode: str = ON_OVERFLOW
    freeze_lambda: bool = False
    checkpoint_every: int = 0
    hidden: list = field(default_factory=lambda: list(policy.HIDDEN))
    policy_out_scale: float = 0.01

    @property
    def lambda_lr(self) -> float:
        if self.mode == LAGRANGIAN_PLAIN:
            return self.policy_lr
        return 0.1 * self.policy_lr

    def threshold(self, rule:str) -> float:
        return float(self.cost_limits.get(rule, self.cost_limit))

    def validate(self) -> None:
        if self.mode not in MODES:
            raise TrainingError("unknown mode {:s}, expected one of {:s}".format(str(self.mode), ", ".join(MODES)))
        if self.lambda_norm_mode not in NORM_MODES:
            raise TrainingError("unknown lambda_norm_mode {:s}".format(str(self.lambda_norm_mode)))
        for name in ("policy_lr", "critic_lr", "clip", "horizon", "minibatch", "epochs", "episodes", "gate_window"):
            if getattr(self, name) <= 0:
                raise TrainingError("train.{:s} must be positive".format(name))
        if not (0.0 <= self.gamma <= 1.0 and 0.0 <= self.gae_lambda <= 1.0):
            raise TrainingError("train.gamma and train.gae_lambda must lie in [0, 1]")
        if self.penalty < 0.0 or self.cost_limit < 0.0:
            raise TrainingError("train.penalty and train.cost_limit must not be negative")
        for rule, limit in self.cost_limits.items():
            if rule not in scenarios.RULES:
                raise TrainingError("train.cost_limits names unknown rule {:s}".format(str(rule)))
            if isinstance(limit, bool) or not isinstance(limit, (int, float)) or not limit >= 0.0:
                raise TrainingError("train.cost_limits.{:s} must be a non-negative number".format(rule))

## Lagrange multipliers

@dataclass
class LagrangeState:
    rules: tuple
    raw: np.ndarray
    normalized: np.ndarray
    reward_multiplier: float
    lambda_lr: float
    thresholds: np.ndarray
    gate_open: bool = False
    norm_mode: str = ON_OVERFLOW

    @property
    def delayed(self) -> bool:
        return self.norm_mode != NO_NORMALIZATION

    def as_dict(self) -> dict:
        return {rule: float(value) for rule, value in zip(self.rules, self.normalized)}

def make_lagrange(cfg:TrainConfig, rules:tuple) -> LagrangeState:
    """Multipliers start at zero; the plain variant skips the start delay and normalization."""
    plain = cfg.mode == LAGRANGIAN_PLAIN
    return LagrangeState(
        rules=tuple(rules),
        raw=np.zeros(len(rules)),
        normalized=np.zeros(len(rules)),
        reward_multiplier=1.0,
        lambda_lr=cfg.lambda_lr,
        thresholds=np.array([cfg.threshold(rule) for rule in rules], dtype=np.float64),
        gate_open=plain,
        norm_mode=NO_NORMALIZATION if plain else cfg.lambda_norm_mode,
    )

def normalize_multipliers(raw:np.ndarray, mode:str = ON_OVERFLOW) -> np.ndarray:
    raw = np.asarray(raw, dtype=np.float64)
    total = float(np.sum(raw))
    if mode == NO_NORMALIZATION or total <= 0.0 or (mode == ON_OVERFLOW and total <= 0.5):
        return raw.copy()
    normalized = raw / (2.0 * total)
    # Rounding may leave the sum a few ulps above one half
    while float(np.sum(normalized)) > 0.5:
        i = int(np.argmax(normalized))
        normalized[i] = np.nextafter(normalized[i], 0.0)
    return normalized

def lambda_update(state:LagrangeState, costs:np.ndarray) -> LagrangeState:
    """Gradient ascent on the multipliers from the mean episode costs J_C, a no-op while the gate is closed."""
    if not state.gate_open:
        return state
    costs = np.asarray(costs, dtype=np.float64)
    raw = np.maximum(0.0, state.raw + state.lambda_lr * (costs - state.thresholds))
    normalized = normalize_multipliers(raw, state.norm_mode)
    alpha = 1.0 if state.norm_mode == NO_NORMALIZATION else 1.0 - float(np.sum(normalized))
    return LagrangeState(
        rules=state.rules,
        raw=raw,
        normalized=normalized,
        reward_multiplier=alpha,
        lambda_lr=state.lambda_lr,
        thresholds=state.thresholds,
        gate_open=state.gate_open,
        norm_mode=state.norm_mode,
    )

def check_invariants(state:LagrangeState) -> None:
    if np.any(state.raw < 0.0) or np.any(state.normalized < 0.0):
        raise LagrangeInvariantError("negative multiplier: {}".format(state.normalized))
    if not state.delayed:
        return
    total = float(np.sum(state.normalized))
    if total > 0.5:
        raise LagrangeInvariantError("multipliers sum to {:.17g} > 1/2".format(total))
    if state.reward_multiplier != 1.0 - total or state.reward_multiplier < total:
        raise LagrangeInvariantError("reward multiplier {:.17g} does not equal 1 - {:.17g}".format(state.reward_multiplier, total))
    if not state.gate_open and (np.any(state.raw != 0.0) or state.reward_multiplier != 1.0):
        raise LagrangeInvariantError("multipliers moved before the gate opened")

def gate_check(outcomes:list, threshold:float = 0.6, window:int = 100, was_open:bool = False) -> bool:
    # Latched: once open it stays open
    if was_open:
        return True
    if len(outcomes) < window:
        return False
    return world.success_rate(outcomes[-window:]) > threshold

## Rollouts

@dataclass
class Trajectory:
    """One complete episode. ``obs`` rows are normalized network inputs, ``payloads`` the raw
    observations delivered with each action event."""
    rules: tuple
    seed: int
    obs: np.ndarray
    actions: np.ndarray
    log_probs: np.ndarray
    env_rewards: np.ndarray
    violations: np.ndarray
    payloads: np.ndarray
    poses: list
    terminal: Terminal
    last_obs: np.ndarray
    rewards: np.ndarray = None
    costs: np.ndarray = None
    values: np.ndarray = None
    cost_values: np.ndarray = None
    last_value: float = 0.0
    last_cost_values: np.ndarray = None

    def __len__(self) -> int:
        return len(self.actions)

    @property
    def success(self) -> bool:
        return self.terminal == Terminal.REACHED_TARGET

    @property
    def violation_counts(self) -> dict:
        return {rule: int(count) for rule, count in zip(self.rules, self.violations.sum(axis=0))}

    @property
    def episode_costs(self) -> np.ndarray:
        return self.costs.sum(axis=0)

def run_episode(env:NavEnv, bundle:PolicyBundle, program:bprogram.BProgram, rng:np.random.Generator, seed:int, deterministic:bool = False, state:world.RobotState = None) -> Trajectory:
    rules = program.scenario_ids
    x, info = env.reset(seed=seed, options={"state": state} if state is not None else None)
    program.reset()
    inputs, actions, log_probs, rewards, violations, payloads = [], [], [], [], [], []
    poses = [info["state"]]

    while True:
        logits = bundle.policy.predict(x)
        action = policy.select_action(dense.softmax(logits), rng, deterministic)
        try:
            x_next, reward, terminated, truncated, info = env.step(action)
            outcome = program.deliver_external(scenarios.action_to_event(action, info["observation"]))
        except (world.WorldError, bprogram.BProgramError, scenarios.ScenarioError) as e:
            raise RolloutError(len(actions), e) from e

        inputs.append(x)
        actions.append(action)
        log_probs.append(dense.log_softmax(logits)[action])
        rewards.append(reward)
        violations.append([1 if rule in outcome.violated_rules else 0 for rule in rules])
        payloads.append(info["observation"].flat())
        poses.append(info["state"])
        x = x_next
        if terminated or truncated:
            break

    return Trajectory(
        rules=rules,
        seed=seed,
        obs=np.array(inputs),
        actions=np.array(actions, dtype=np.int64),
        log_probs=np.array(log_probs),
        env_rewards=np.array(rewards),
        violations=np.array(violations, dtype=np.int64).reshape(len(actions), len(rules)),
        payloads=np.array(payloads),
        poses=poses,
        terminal=info["terminal"],
        last_obs=x,
    )

def assign_signals(traj:Trajectory, mode:str, penalty:float = 1.0) -> Trajectory:
    """Fills in the reward and cost channels the given training mode learns from."""
    violated = traj.violations.any(axis=1)
    traj.rewards = traj.env_rewards - penalty * violated if mode == REWARD_SHAPING else traj.env_rewards.copy()
    traj.costs = traj.violations.astype(np.float64) if mode in LAGRANGIAN_MODES else np.zeros(traj.violations.shape)
    return traj

def estimate_values(traj:Trajectory, bundle:PolicyBundle) -> Trajectory:
    rules = traj.rules
    traj.values = bundle.reward_critic.predict(traj.obs)[:, 0]
    traj.cost_values = np.zeros((len(traj), len(rules)))
    traj.last_cost_values = np.zeros(len(rules))
    traj.last_value = 0.0
    for k, rule in enumerate(rules):
        traj.cost_values[:, k] = bundle.cost_critics[rule].predict(traj.obs)[:, 0]
    # Only a timeout cuts an episode short of its natural end
    if traj.terminal == Terminal.TIMEOUT:
        traj.last_value = float(bundle.reward_critic.predict(traj.last_obs)[0])
        for k, rule in enumerate(rules):
            traj.last_cost_values[k] = bundle.cost_critics[rule].predict(traj.last_obs)[0]
    return traj

def collect_rollout(env:NavEnv, bundle:PolicyBundle, program:bprogram.BProgram, cfg:TrainConfig, env_rng:np.random.Generator, rng:np.random.Generator, max_episodes:int = None) -> list:
    """Complete episodes until at least ``cfg.horizon`` steps were taken."""
    trajectories, steps = [], 0
    while steps < cfg.horizon and (max_episodes is None or len(trajectories) < max_episodes):
        seed = int(env_rng.integers(0, 2 ** 32))
        traj = run_episode(env, bundle, program, rng, seed)
        assign_signals(traj, cfg.mode, cfg.penalty)
        estimate_values(traj, bundle)
        trajectories.append(traj)
        steps += len(traj)
    return trajectories

## Advantages

def gae(rewards:np.ndarray, values:np.ndarray, last_value:float, gamma:float, decay:float) -> tuple[np.ndarray, np.ndarray]:
    """Generalized advantage estimates and returns for one channel of one episode."""
    advantages = np.zeros(len(rewards))
    running = 0.0
    for t in reversed(range(len(rewards))):
        following = values[t + 1] if t + 1 < len(rewards) else last_value
        delta = rewards[t] + gamma * following - values[t]
        running = delta + gamma * decay * running
        advantages[t] = running
    return advantages, advantages + values

def compute_advantages(traj:Trajectory, gamma:float, decay:float) -> tuple:
    """Unnormalized ``(A_R, returns_R, A_C, returns_C)``, cost channels as (T, K) columns."""
    reward_adv, reward_ret = gae(traj.rewards, traj.values, traj.last_value, gamma, decay)
    cost_adv = np.zeros(traj.costs.shape)
    cost_ret = np.zeros(traj.costs.shape)
    for k in range(traj.costs.shape[1]):
        cost_adv[:, k], cost_ret[:, k] = gae(traj.costs[:, k], traj.cost_values[:, k], traj.last_cost_values[k], gamma, decay)
    return reward_adv, reward_ret, cost_adv, cost_ret

@dataclass
class Batch:
    obs: np.ndarray
    actions: np.ndarray
    log_probs: np.ndarray
    reward_adv: np.ndarray
    reward_ret: np.ndarray
    cost_adv: np.ndarray
    cost_ret: np.ndarray

    def __len__(self) -> int:
        return len(self.actions)

def make_batch(trajectories:list, cfg:TrainConfig) -> Batch:
    """Concatenates episodes; reward advantages are normalized over the batch, cost advantages keep their scale."""
    if not trajectories:
        raise TrainingError("empty batch")
    parts = [compute_advantages(traj, cfg.gamma, cfg.gae_lambda) for traj in trajectories]
    reward_adv = np.concatenate([part[0] for part in parts])
    reward_adv = (reward_adv - reward_adv.mean()) / (reward_adv.std() + ADVANTAGE_EPS)
    return Batch(
        obs=np.concatenate([traj.obs for traj in trajectories]),
        actions=np.concatenate([traj.actions for traj in trajectories]),
        log_probs=np.concatenate([traj.log_probs for traj in trajectories]),
        reward_adv=reward_adv,
        reward_ret=np.concatenate([part[1] for part in parts]),
        cost_adv=np.concatenate([part[2] for part in parts]),
        cost_ret=np.concatenate([part[3] for part in parts]),
    )

## Policy update

@dataclass
class Optimizers:
    policy: dense.Adam
    reward_critic: dense.Adam
    cost_critics: dict

def make_optimizers(bundle:PolicyBundle, cfg:TrainConfig) -> Optimizers:
    return Optimizers(
        policy=dense.Adam(bundle.policy.parameters(), cfg.policy_lr),
        reward_critic=dense.Adam(bundle.reward_critic.parameters(), cfg.critic_lr),
        cost_critics={rule: dense.Adam(net.parameters(), cfg.critic_lr) for rule, net in bundle.cost_critics.items()},
    )

def combined_advantage(reward_adv:np.ndarray, cost_adv:np.ndarray, lagrange:LagrangeState) -> np.ndarray:
    return lagrange.reward_multiplier * reward_adv - cost_adv @ lagrange.normalized

def surrogate_gradient(ratio:np.ndarray, advantage:np.ndarray, probs:np.ndarray, actions:np.ndarray, clip:float) -> np.ndarray:
    """Per-sample gradient of min(r A, clip(r) A) with respect to the logits."""
    clipped = ((advantage > 0.0) & (ratio > 1.0 + clip)) | ((advantage < 0.0) & (ratio < 1.0 - clip))
    onehot = np.eye(probs.shape[1])[actions]
    return np.where(clipped, 0.0, advantage * ratio)[:, None] * (onehot - probs)

def entropy_gradient(probs:np.ndarray, log_probs:np.ndarray) -> np.ndarray:
    entropy = -np.sum(probs * log_probs, axis=1, keepdims=True)
    return -probs * (log_probs + entropy)

def _critic_step(net:dense.DenseNet, optimizer:dense.Adam, obs:np.ndarray, targets:np.ndarray) -> float:
    values = net.forward(obs)[:, 0]
    error = values - targets
    loss = 0.5 * float(np.mean(error * error))
    grads, _ = net.backward((error / len(targets))[:, None])
    optimizer.update(net.parameters(), grads)
    return loss

def ppo_update(bundle:PolicyBundle, batch:Batch, lagrange:LagrangeState, cfg:TrainConfig, optimizers:Optimizers, rng:np.random.Generator) -> dict:
    if not len(batch):
        raise TrainingError("empty batch")
    advantage = combined_advantage(batch.reward_adv, batch.cost_adv, lagrange)
    rules = bundle.rules
    totals = {"policy": 0.0, "entropy": 0.0, "value": 0.0, "clip_fraction": 0.0}
    totals.update({"cost_value/" + rule: 0.0 for rule in rules})
    count = 0

    for epoch in range(cfg.epochs):
        order = rng.permutation(len(batch))
        for start in range(0, len(batch), cfg.minibatch):
            idx = order[start:start + cfg.minibatch]
            n = len(idx)
            adv = advantage[idx]

            logits = bundle.policy.forward(batch.obs[idx])
            log_p = dense.log_softmax(logits)
            probs = np.exp(log_p)
            ratio = np.exp(log_p[np.arange(n), batch.actions[idx]] - batch.log_probs[idx])
            surrogate = np.minimum(ratio * adv, np.clip(ratio, 1.0 - cfg.clip, 1.0 + cfg.clip) * adv)
            entropy = -np.sum(probs * log_p, axis=1)
            loss = -float(np.mean(surrogate) + cfg.entropy_coef * np.mean(entropy))
            if not np.isfinite(loss):
                raise NonFiniteLossError({
                    "epoch": epoch,
                    "loss": loss,
                    "max_ratio": float(np.max(ratio)),
                    "max_advantage": float(np.max(np.abs(adv))),
                })

            upstream = -(surrogate_gradient(ratio, adv, probs, batch.actions[idx], cfg.clip) + cfg.entropy_coef * entropy_gradient(probs, log_p)) / n
            grads, _ = bundle.policy.backward(upstream)
            optimizers.policy.update(bundle.policy.parameters(), grads)

            totals["policy"] += loss
            totals["entropy"] += float(np.mean(entropy))
            totals["clip_fraction"] += float(np.mean(np.abs(ratio - 1.0) > cfg.clip))
            totals["value"] += _critic_step(bundle.reward_critic, optimizers.reward_critic, batch.obs[idx], batch.reward_ret[idx])
            for k, rule in enumerate(rules):
                totals["cost_value/" + rule] += _critic_step(bundle.cost_critics[rule], optimizers.cost_critics[rule], batch.obs[idx], batch.cost_ret[idx, k])
            count += 1

    losses = {name: value / count for name, value in totals.items()}
    if not all(np.isfinite(value) for value in losses.values()):
        raise NonFiniteLossError(losses)
    return losses

## Training

def make_rngs(env_seed:int, policy_init_seed:int, sampling_seed:int) -> tuple:
    # Distinct spawn keys keep the streams independent even for equal seeds
    return tuple(
        np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(i,)))
        for i, seed in enumerate((env_seed, policy_init_seed, sampling_seed))
    )

@dataclass
class TrainResult:
    bundle: PolicyBundle
    lagrange: LagrangeState
    records: list
    outcomes: list
    updates: int = 0
    checkpoint: str = None

    @property
    def success_rate(self) -> float:
        return world.success_rate(self.outcomes[-200:]) if self.outcomes else 0.0

def episode_record(episode:int, update:int, traj:Trajectory, lagrange:LagrangeState, gate_open:bool, losses:dict) -> dict:
    return {
        "episode": episode,
        "update": update,
        "success": traj.success,
        "outcome": traj.terminal.label,
        "steps": len(traj),
        "reward": float(np.sum(traj.rewards)),
        "mean_reward": float(np.mean(traj.rewards)),
        "violations": traj.violation_counts,
        "J_C": {rule: float(cost) for rule, cost in zip(traj.rules, traj.episode_costs)},
        "lambda": lagrange.as_dict(),
        "alpha": lagrange.reward_multiplier,
        "gate_open": gate_open,
        "losses": losses,
    }

def train(cfg:TrainConfig, env:NavEnv, rules_cfg:scenarios.RulesConfig = None, seeds:tuple = (0, 0, 0), out_dir:str = None, metadata:dict = None, progress:bool = False, on_update=None) -> TrainResult:
    """Runs ``cfg.episodes`` episodes. With ``out_dir`` set, writes the metrics log, periodic checkpoints
    every ``cfg.checkpoint_every`` updates and ``final.json``. ``on_update(update, bundle, lagrange)`` is
    called after every update."""
    cfg.validate()
    rules_cfg = rules_cfg or scenarios.RulesConfig()
    program = scenarios.make_program(rules_cfg)
    rules = program.scenario_ids
    env_rng, init_rng, rng = make_rngs(*seeds)

    bundle = policy.make_bundle(rules, init_rng, tuple(cfg.hidden), cfg.policy_out_scale)
    optimizers = make_optimizers(bundle, cfg)
    lagrange = make_lagrange(cfg, rules)
    constrained = cfg.mode in LAGRANGIAN_MODES
    result = TrainResult(bundle, lagrange, [], [])

    metrics = None
    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
        metrics = open(os.path.join(out_dir, METRICS_FILE), "w")
    logger.info("training %s on %s with rules %s", cfg.mode, env.world.name, ", ".join(rules) or "none")

    try:
        with tqdm(total=cfg.episodes, unit="episode", disable=not progress) as bar:
            while len(result.outcomes) < cfg.episodes:
                trajectories = collect_rollout(env, bundle, program, cfg, env_rng, rng, cfg.episodes - len(result.outcomes))
                losses = ppo_update(bundle, make_batch(trajectories, cfg), lagrange, cfg, optimizers, rng)
                result.outcomes += [traj.terminal for traj in trajectories]
                result.updates += 1

                if constrained:
                    lagrange.gate_open = gate_check(result.outcomes, cfg.gate_threshold, cfg.gate_window, lagrange.gate_open)
                    if not cfg.freeze_lambda:
                        lagrange = lambda_update(lagrange, np.mean([traj.episode_costs for traj in trajectories], axis=0))
                    check_invariants(lagrange)
                result.lagrange = lagrange

                for traj in trajectories:
                    record = episode_record(len(result.records) + 1, result.updates, traj, lagrange, lagrange.gate_open, losses)
                    result.records.append(record)
                    if metrics is not None:
                        metrics.write(json.dumps(record) + "\n")
                bar.update(len(trajectories))
                bar.set_postfix(success="{:.2f}".format(world.success_rate(result.outcomes[-cfg.gate_window:])), alpha="{:.3f}".format(lagrange.reward_multiplier))

                if on_update is not None:
                    on_update(result.updates, bundle, lagrange)
                if out_dir is not None and cfg.checkpoint_every and result.updates % cfg.checkpoint_every == 0:
                    _checkpoint(bundle, result, cfg, rules, metadata, os.path.join(out_dir, "update-{:d}.json".format(result.updates)))
    finally:
        if metrics is not None:
            metrics.close()

    if out_dir is not None:
        result.checkpoint = os.path.join(out_dir, FINAL_CHECKPOINT)
        _checkpoint(bundle, result, cfg, rules, metadata, result.checkpoint)
    logger.info("finished %d episodes in %d updates, success rate %.3f", len(result.outcomes), result.updates, result.success_rate)
    return result

def _checkpoint(bundle:PolicyBundle, result:TrainResult, cfg:TrainConfig, rules:tuple, metadata:dict, path:str) -> None:
    bundle.metadata = {
        "mode": cfg.mode,
        "rules": list(rules),
        "episodes": len(result.outcomes),
        "updates": result.updates,
        "success_rate": result.success_rate,
        "lambda": result.lagrange.as_dict(),
        "alpha": result.lagrange.reward_multiplier,
        "config": metadata or {},
    }
    policy.save_checkpoint(bundle, path)
