"""Online schedulers: replay-trained value networks and tabular baselines.

All agents pick one target node per in-flight chain per slot under the
environment's action mask. The deep agents share one network across chains
(the chain index is part of the observation); the tabular ones share one
table over a coarse discretization. Everything is driven by explicit
numpy Generators so runs are bit-reproducible.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .config import AgentConfig
from .env import EnvState, encode_state, encoded_length
from .net import DenseNet, make_optimizer


class TrainingDiverged(RuntimeError):
    """Raised when a loss or parameter stops being finite."""


# ---------------------------------------------------------------------------
# Replay memory and target rules
# ---------------------------------------------------------------------------

@dataclass
class Transition:
    obs: np.ndarray
    action: int
    reward: float
    next_obs: np.ndarray | None
    next_mask: np.ndarray | None
    terminal: bool


class ReplayMemory:
    """Fixed-capacity ring; uniform sampling without replacement."""

    def __init__(self, capacity: int):
        if capacity < 1:
            raise ValueError("capacity must be positive")
        self.capacity = capacity
        self._items: list = []
        self._cursor = 0

    def push(self, item: Transition) -> None:
        if len(self._items) < self.capacity:
            self._items.append(item)
        else:
            self._items[self._cursor] = item
        self._cursor = (self._cursor + 1) % self.capacity

    def sample(self, batch: int, rng: np.random.Generator) -> list:
        idx = rng.choice(len(self._items), size=min(batch, len(self._items)),
                         replace=False)
        return [self._items[i] for i in idx]

    def __len__(self) -> int:
        return len(self._items)


def masked_q(q: np.ndarray, mask: np.ndarray | None) -> np.ndarray:
    """Invalid actions pushed to -inf so max/argmax never picks them."""
    if mask is None:
        return q
    out = np.where(mask, q, -np.inf)
    if not np.any(mask):
        raise ValueError("mask admits no action")
    return out


def dqn_target(reward: float, gamma: float, terminal: bool,
               next_q_target: np.ndarray | None,
               next_mask: np.ndarray | None = None) -> float:
    """One-step bootstrap where the target net both picks and scores."""
    if terminal:
        return reward
    return reward + gamma * float(np.max(masked_q(next_q_target, next_mask)))


def ddqn_target(reward: float, gamma: float, terminal: bool,
                next_q_online: np.ndarray | None,
                next_q_target: np.ndarray | None,
                next_mask: np.ndarray | None = None) -> float:
    """Double estimator: online net picks the action, target net scores it."""
    if terminal:
        return reward
    best = int(np.argmax(masked_q(next_q_online, next_mask)))
    return reward + gamma * float(next_q_target[best])


def epsilon_greedy(q: np.ndarray, mask: np.ndarray, greediness: float,
                   rng: np.random.Generator) -> int:
    """Greedy with probability `greediness` (ties to lowest index), else uniform."""
    valid = np.flatnonzero(mask)
    if valid.size == 0:
        raise ValueError("mask admits no action")
    if rng.random() < greediness:
        return int(np.argmax(masked_q(q, mask)))
    return int(valid[rng.integers(valid.size)])


def greediness_schedule(episode: int, episodes: int, greed_max: float,
                        fraction: float) -> float:
    """Linear 0 -> greed_max over the first `fraction` of episodes, then flat."""
    ramp = max(1, int(round(episodes * fraction)))
    return greed_max * min(1.0, episode / ramp)


# ---------------------------------------------------------------------------
# Agents
# ---------------------------------------------------------------------------

class DrlAgent:
    """DQN/DDQN on a shared dense net; one gradient batch per train tick."""

    def __init__(self, kind: str, obs_len: int, action_count: int,
                 cfg: AgentConfig, rng: np.random.Generator):
        if kind not in ("ddqn", "dqn"):
            raise ValueError(f"unknown deep agent '{kind}'")
        self.kind = kind
        self.double = kind == "ddqn"
        self.cfg = cfg
        self.action_count = action_count
        self.online = DenseNet([obs_len, *cfg.hidden_widths, action_count], rng)
        self.target = self.online.clone()
        self.optimizer = make_optimizer(cfg.optimizer, self.online.parameters(),
                                        cfg.learning_rate)
        self.memory = ReplayMemory(cfg.replay_capacity)
        self.updates = 0

    def prepare(self, state: EnvState, k: int) -> np.ndarray:
        return encode_state(state, k)

    def act(self, k: int, obs: np.ndarray, mask: np.ndarray, greediness: float,
            rng: np.random.Generator) -> int:
        return epsilon_greedy(self.online.forward(obs), mask, greediness, rng)

    def record(self, k: int, obs, action: int, reward: float, next_obs,
               next_mask, terminal: bool) -> None:
        self.memory.push(Transition(obs, action, reward, next_obs, next_mask,
                                    terminal))

    def train_tick(self, rng: np.random.Generator) -> None:
        for _ in range(self.cfg.updates_per_step):
            if len(self.memory) < self.cfg.batch_size:
                return
            self._learn_batch(self.memory.sample(self.cfg.batch_size, rng))

    def _learn_batch(self, batch: list) -> None:
        cfg = self.cfg
        xs = np.stack([tr.obs for tr in batch])
        targets = np.empty(len(batch))
        nonterminal = [tr for tr in batch if not tr.terminal]
        next_q_t = next_q_o = {}
        if nonterminal:
            nxt = np.stack([tr.next_obs for tr in nonterminal])
            q_t = self.target.forward(nxt)
            q_o = self.online.forward(nxt) if self.double else q_t
            next_q_t = {id(tr): q_t[i] for i, tr in enumerate(nonterminal)}
            next_q_o = {id(tr): q_o[i] for i, tr in enumerate(nonterminal)}
        for i, tr in enumerate(batch):
            mask = tr.next_mask if cfg.masked_targets else None
            if self.double:
                targets[i] = ddqn_target(tr.reward, cfg.discount, tr.terminal,
                                         next_q_o.get(id(tr)), next_q_t.get(id(tr)),
                                         mask)
            else:
                targets[i] = dqn_target(tr.reward, cfg.discount, tr.terminal,
                                        next_q_t.get(id(tr)), mask)
        out, cache = self.online.forward_cached(xs)
        grad_out = np.zeros_like(out)
        rows = np.arange(len(batch))
        acts = np.array([tr.action for tr in batch])
        diff = out[rows, acts] - targets
        loss = float(np.mean(diff**2))
        if not np.isfinite(loss):
            raise TrainingDiverged(f"loss became {loss}")
        grad_out[rows, acts] = 2.0 * diff / len(batch)
        grad_w, grad_b = self.online.backward(cache, grad_out)
        self.optimizer.step(grad_w + grad_b)
        self.updates += 1
        if self.updates % self.cfg.target_sync_steps == 0:
            self.target.copy_from(self.online)


def discretize(state: EnvState, k: int, tracked_nodes: int, buckets: int) -> tuple:
    """Coarse table key: phase, node, progress, bucketed load of tracked nodes."""
    view = state.sfcs[k]
    compute_ids = np.flatnonzero(state.capacity_bits > 0)[:tracked_nodes]
    levels = []
    for n in compute_ids:
        frac = state.occupancy_bits[n] / state.capacity_bits[n]
        levels.append(min(buckets - 1, int(frac * buckets)))
    return (int(view.phase), view.node, min(view.vnf_index, 4), tuple(levels))


class TabularAgent:
    """Q-learning (off-policy max) or Sarsa (on-policy realized action)."""

    def __init__(self, kind: str, action_count: int, cfg: AgentConfig):
        if kind not in ("qlearning", "sarsa"):
            raise ValueError(f"unknown tabular agent '{kind}'")
        self.kind = kind
        self.cfg = cfg
        self.action_count = action_count
        self.q: dict = {}
        self.pending: dict = {}  # k -> (key, action, reward) awaiting Sarsa's a'

    def _row(self, key: tuple) -> np.ndarray:
        if key not in self.q:
            self.q[key] = np.zeros(self.action_count)
        return self.q[key]

    def prepare(self, state: EnvState, k: int) -> tuple:
        return discretize(state, k, self.cfg.tabular_tracked_nodes,
                          self.cfg.tabular_buckets)

    def act(self, k: int, key: tuple, mask: np.ndarray, greediness: float,
            rng: np.random.Generator) -> int:
        action = epsilon_greedy(self._row(key), mask, greediness, rng)
        held = self.pending.pop(k, None)
        if held is not None:  # Sarsa: bootstrap on the action just realized
            p_key, p_action, p_reward = held
            target = p_reward + self.cfg.discount * self._row(key)[action]
            self._bump(p_key, p_action, target)
        return action

    def _bump(self, key: tuple, action: int, target: float) -> None:
        row = self._row(key)
        row[action] += self.cfg.tabular_alpha * (target - row[action])

    def record(self, k: int, key, action: int, reward: float, next_key,
               next_mask, terminal: bool) -> None:
        if self.kind == "qlearning":
            target = reward
            if not terminal:
                target += self.cfg.discount * float(
                    np.max(masked_q(self._row(next_key), next_mask))
                )
            self._bump(key, action, target)
        elif terminal:
            self._bump(key, action, reward)
        else:
            self.pending[k] = (key, action, reward)

    def train_tick(self, rng: np.random.Generator) -> None:
        return None  # updates happen inline


def make_agent(kind: str, node_count: int, cfg: AgentConfig,
               rng: np.random.Generator):
    if kind in ("ddqn", "dqn"):
        return DrlAgent(kind, encoded_length(node_count), node_count, cfg, rng)
    return TabularAgent(kind, node_count, cfg)


# ---------------------------------------------------------------------------
# Training loop
# ---------------------------------------------------------------------------

@dataclass
class MetricRecord:
    episode: int
    mean_reward: float
    completed_sfcs: int
    node_utilization: float
    wall_seconds: float


def run_episode(env, agent, greediness: float, rng: np.random.Generator,
                learn: bool = True) -> tuple:
    """One full episode; returns (mean reward per chain, completed, utilization)."""
    env.reset()
    total = 0.0
    while not env.episode_over:
        state = env.state()
        active = env.active_sfcs()
        prepared, actions = {}, {}
        for k in active:
            prepared[k] = agent.prepare(state, k)
            actions[k] = agent.act(k, prepared[k], env.action_mask(k),
                                   greediness, rng)
        result = env.step(actions)
        next_state = None if env.episode_over else env.state()
        for k in active:
            reward_k = result.rewards[k]
            total += reward_k
            if not learn:
                continue
            terminal = result.done_flags[k] is not None
            if terminal:
                agent.record(k, prepared[k], actions[k], reward_k, None, None, True)
            else:
                agent.record(k, prepared[k], actions[k], reward_k,
                             agent.prepare(next_state, k), env.action_mask(k),
                             False)
        if learn:
            agent.train_tick(rng)
    return total / len(env.sfcs), env.objective(), env.utilization()


def train(env, agent, episodes: int, cfg: AgentConfig, rng: np.random.Generator,
          measure_wall_time: bool = False) -> list:
    """Full training run; one MetricRecord per episode."""
    records = []
    for episode in range(episodes):
        started = time.perf_counter() if measure_wall_time else None
        greediness = greediness_schedule(episode, episodes, cfg.greed_max,
                                         cfg.greed_fraction)
        mean_reward, completed, utilization = run_episode(env, agent, greediness,
                                                          rng)
        wall = time.perf_counter() - started if measure_wall_time else 0.0
        records.append(MetricRecord(episode + 1, mean_reward, completed,
                                    utilization, wall))
    return records


def evaluate_greedy(env, agent, rng: np.random.Generator) -> tuple:
    """One exploitation-only episode without learning."""
    return run_episode(env, agent, 1.0, rng, learn=False)
