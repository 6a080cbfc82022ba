"""Self-play deep Q-learning.

Both players are driven by the same network; the opponent's reply is folded
into the environment, so the bootstrap target looks two plies ahead:

    Y = r_t - r_{t+1} + gamma * Q_target(s_{t+2}, argmax_a Q_online(s_{t+2}, a))

with the bootstrap dropped when the game ended at t or t+1. The action at
s_{t+2} is chosen by the online network and evaluated by the target network.
Training runs on Shannon-graph states for the graph network or on stone
planes for the convolutional baseline; the loop is identical.
"""

from __future__ import annotations

import dataclasses
import json
import os
import queue
import threading
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import board as hexboard
from . import models, shannon
from .board import Color, HexBoard
from .errors import InvalidArgumentError
from .nn import Adam
from .nn import tensor as T
from .replay import PriorityBuffer, Transition
from .shannon import GameStatus, Player


class GraphGame:
    """Red-perspective Shannon-graph environment: Red plays join moves, Blue
    plays cut moves, on one shared graph. Snapshots are (adj tuple, mover)."""

    name = "graph"
    default_arch = "graph_q"

    def __init__(self, size: int, pruning: bool = False):
        self.size = size
        self.pruning = pruning

    def initial(self) -> shannon.ShannonGraph:
        return shannon.from_board(hexboard.new_board(self.size), Color.RED)

    def legal(self, state: shannon.ShannonGraph) -> list[int]:
        return state.legal_actions()

    def snapshot(self, state: shannon.ShannonGraph) -> tuple:
        return (tuple(state.adj), state.to_move)

    def encode(self, snap: tuple) -> shannon.GraphEncoding:
        return shannon.encode_adj(snap[0], snap[1])

    def step(self, state: shannon.ShannonGraph, action: int) -> tuple:
        """Returns (next_state, status)."""
        if self.pruning:
            labels = [state.labels[u] for u in state.neighbors(action) if u >= 2]
            state = state.move(action)
            index = {lab: i for i, lab in enumerate(state.labels)}
            cands = [index[lab] for lab in labels if lab in index]
            if cands:
                state, _ = shannon.prune_dead_captured(cands, state)
        else:
            state = state.move(action)
        return state, state.status()

    def q_array(self, model, snap: tuple) -> np.ndarray:
        q, _, _ = model.q_values(self.encode(snap))
        return q

    def greedy(self, model, state: shannon.ShannonGraph) -> int:
        q, _, _ = model.q_values(shannon.encode(state))
        return int(np.argmax(q))

    def batch_loss(self, model, batch, targets, weights, delta: float):
        terms = []
        tds = np.empty(len(batch), dtype=np.float64)
        for i, tr in enumerate(batch):
            q, _, _, playable = model.q_tensors(self.encode(tr.state))
            qa = T.gather_rows(q, np.array([tr.action - 2]))
            tds[i] = float(qa.data[0]) - targets[i]
            diff = T.add(qa, -targets[i])
            terms.append(T.mul(T.huber(diff, delta), float(weights[i])))
        loss = T.mul(T.tsum(T.concat(terms)), 1.0 / len(batch))
        return loss, tds


class PlaneGame:
    """Grid environment for the convolutional baseline: states are boards,
    actions are flat cell indices."""

    name = "planes"
    default_arch = "conv_q"

    def __init__(self, size: int, pruning: bool = False):
        if pruning:
            raise InvalidArgumentError("dead-cell pruning applies to graph states only")
        self.size = size

    def initial(self) -> HexBoard:
        return hexboard.new_board(self.size)

    def legal(self, state: HexBoard) -> list[int]:
        n = state.size
        return [c.row * n + c.col for c in state.empty_cells()]

    def snapshot(self, state: HexBoard) -> tuple:
        return (state.size, state.cells.tobytes(), state.to_move)

    def board_from(self, snap: tuple) -> HexBoard:
        size, raw, to_move = snap
        cells = np.frombuffer(raw, dtype=np.int8).reshape(size, size).copy()
        return HexBoard(size=size, cells=cells, to_move=to_move)

    def step(self, state: HexBoard, action: int) -> tuple:
        cell = hexboard.Cell(action // state.size, action % state.size)
        nxt = hexboard.play(state, cell, check_winner=False)
        won = hexboard.winner(nxt)
        if won is None:
            status = GameStatus.ONGOING
        else:
            status = GameStatus.SHORT_WINS if won is Color.RED else GameStatus.CUT_WINS
        return nxt, status

    def q_array(self, model, snap: tuple) -> np.ndarray:
        return model.q_board(self.board_from(snap)).reshape(-1)

    def greedy(self, model, state: HexBoard) -> int:
        return int(np.argmax(model.q_board(state).reshape(-1)))

    def batch_loss(self, model, batch, targets, weights, delta: float):
        boards = [self.board_from(tr.state) for tr in batch]
        planes = np.stack([
            hexboard.encode_planes(b, padding=model.config.padding) for b in boards
        ])
        q_maps = model.q_planes(planes)
        # padded maps are indexed with a ring offset instead of being cropped
        n = self.size
        side = n + 2 if model.config.padding else n
        off = 1 if model.config.padding else 0
        flat_idx = []
        for i, tr in enumerate(batch):
            r, c = divmod(tr.action, n)
            flat_idx.append(i * side * side + (r + off) * side + (c + off))
        q_flat = T.reshape(q_maps, (-1,))
        qa = T.gather_rows(q_flat, np.array(flat_idx))
        tds = qa.data.astype(np.float64) - np.asarray(targets, dtype=np.float64)
        diff = T.add(qa, -np.asarray(targets, dtype=qa.data.dtype))
        loss = T.mul(T.tsum(T.mul(T.huber(diff, delta), weights.astype(qa.data.dtype))), 1.0 / len(batch))
        return loss, tds


def make_game(name: str, size: int, pruning: bool = False):
    if name == "graph":
        return GraphGame(size, pruning)
    if name == "planes":
        return PlaneGame(size, pruning)
    raise InvalidArgumentError(f"unknown game type {name!r}")


def _mover_of(game, snap) -> Player:
    if isinstance(game, GraphGame):
        return snap[1]
    return Player.SHORT if snap[2] is Color.RED else Player.CUT


def self_play_episode(model, game, epsilon: float, rng: np.random.Generator) -> list[Transition]:
    """Play one full game; both movers follow epsilon-greedy on the shared
    network. Returns one transition per move with two-ply successors and
    zero-sum terminal rewards."""
    state = game.initial()
    snaps: list[tuple] = []
    actions: list[int] = []
    status = GameStatus.ONGOING
    while status is GameStatus.ONGOING:
        legal = game.legal(state)
        if epsilon > 0.0 and rng.random() < epsilon:
            action = int(legal[rng.integers(len(legal))])
        else:
            action = game.greedy(model, state)
        snaps.append(game.snapshot(state))
        actions.append(action)
        state, status = game.step(state, action)
    winner_role = Player.SHORT if status is GameStatus.SHORT_WINS else Player.CUT
    total = len(snaps)
    out: list[Transition] = []
    for i in range(total):
        mover = _mover_of(game, snaps[i])
        r_t = (1.0 if mover is winner_role else -1.0) if i == total - 1 else 0.0
        r_t1 = 0.0
        if i == total - 2:
            reply_mover = _mover_of(game, snaps[i + 1])
            r_t1 = 1.0 if reply_mover is winner_role else -1.0
        done = i >= total - 2
        nxt = snaps[i + 2] if not done else None
        out.append(Transition(snaps[i], actions[i], r_t, r_t1, nxt, done))
    return out


def q_target(tr: Transition, online, target, gamma: float, game) -> float:
    """Two-ply bootstrap target with double-Q action selection."""
    base = tr.r_t - tr.r_t1
    if tr.done:
        return base
    q_online = game.q_array(online, tr.next_state)
    a_star = int(np.argmax(q_online))
    q_tgt = game.q_array(target, tr.next_state)
    return base + gamma * float(q_tgt[a_star])


@dataclass
class DqnConfig:
    board_size: int = 5
    game: str = "graph"            # "graph" or "planes"
    model: Optional[dict] = None   # architecture config overrides
    seed: int = 0
    total_steps: int = 2000
    batch_size: int = 64
    gamma: float = 0.98
    lr: float = 1e-3
    lr_final: Optional[float] = None   # linear decay to this rate when set
    weight_decay: float = 0.0
    buffer_capacity: int = 50_000
    epsilon_start: float = 1.0
    epsilon_end: float = 0.05
    epsilon_decay_steps: int = 20_000
    target_sync_interval: int = 500
    alpha: float = 0.6
    beta_start: float = 0.4
    beta_end: float = 1.0
    steps_per_episode: int = 4
    pruning: bool = False
    huber_delta: float = 1.0
    min_buffer: int = 200
    log_interval: int = 200
    probe_games: int = 20
    checkpoint_interval: int = 0
    workers: int = 1

    def __post_init__(self):
        if not 0.0 < self.gamma <= 1.0:
            raise InvalidArgumentError("gamma must be in (0, 1]")
        for eps in (self.epsilon_start, self.epsilon_end):
            if not 0.0 <= eps <= 1.0:
                raise InvalidArgumentError("epsilon must be in [0, 1]")
        if self.total_steps < 0 or self.batch_size < 1:
            raise InvalidArgumentError("bad step/batch configuration")

    def epsilon_at(self, step: int) -> float:
        frac = min(1.0, step / max(1, self.epsilon_decay_steps))
        return self.epsilon_start + (self.epsilon_end - self.epsilon_start) * frac

    def beta_at(self, step: int) -> float:
        frac = min(1.0, step / max(1, self.total_steps))
        return self.beta_start + (self.beta_end - self.beta_start) * frac

    def lr_at(self, step: int) -> float:
        if self.lr_final is None:
            return self.lr
        frac = min(1.0, step / max(1, self.total_steps))
        return self.lr + (self.lr_final - self.lr) * frac


def winrate_vs_random(model, game, games: int, seed: int) -> float:
    """Greedy network against a uniform-random mover; the network starts the
    odd games, replies in the even ones."""
    rng = np.random.default_rng(seed)
    wins = 0
    for g in range(games):
        net_role = Player.SHORT if g % 2 == 0 else Player.CUT
        state = game.initial()
        status = GameStatus.ONGOING
        mover = Player.SHORT
        while status is GameStatus.ONGOING:
            if mover is net_role:
                action = game.greedy(model, state)
            else:
                legal = game.legal(state)
                action = int(legal[rng.integers(len(legal))])
            state, status = game.step(state, action)
            mover = mover.opponent
        winner_role = Player.SHORT if status is GameStatus.SHORT_WINS else Player.CUT
        wins += winner_role is net_role
    return wins / games


@dataclass
class DqnResult:
    model: object
    initial_state: dict
    metrics: list[dict]
    config: DqnConfig


def train_dqn(config: DqnConfig, out_dir: Optional[str] = None) -> DqnResult:
    """Full training loop: generate episodes, push with max priority, sample
    with importance weights, Huber loss on the two-ply TD error, Adam update,
    refresh priorities, periodic target sync and metric probes."""
    rng = np.random.default_rng(config.seed)
    game = make_game(config.game, config.board_size, config.pruning)
    arch = game.default_arch
    model = models.build_model(arch, config.model, seed=config.seed)
    target = models.build_model(arch, config.model, seed=config.seed)
    target.load_state_dict(model.state_dict())
    initial_state = model.state_dict()
    opt = Adam(model, lr=config.lr, weight_decay=config.weight_decay)
    buffer = PriorityBuffer(config.buffer_capacity, alpha=config.alpha)
    metrics: list[dict] = []

    if out_dir:
        os.makedirs(os.path.join(out_dir, "checkpoints"), exist_ok=True)
        with open(os.path.join(out_dir, "config.json"), "w") as fh:
            json.dump(dataclasses.asdict(config), fh, indent=2)
        models.save(model, os.path.join(out_dir, "checkpoints", "initial.json"),
                    meta={"steps": 0, "seed": config.seed})

    episode_source = _episode_source(model, game, config, rng)

    step = 0
    while step < config.total_steps:
        for tr in episode_source(config.epsilon_at(step)):
            buffer.push(tr)
        if len(buffer) < max(config.batch_size, min(config.min_buffer, config.buffer_capacity)):
            continue
        for _ in range(config.steps_per_episode):
            if step >= config.total_steps:
                break
            indices, batch, weights = buffer.sample(config.batch_size, config.beta_at(step), rng)
            targets = [q_target(tr, model, target, config.gamma, game) for tr in batch]
            loss, tds = game.batch_loss(model, batch, targets, weights, config.huber_delta)
            loss.backward()
            opt.lr = config.lr_at(step)
            opt.step()
            buffer.update_priorities(indices, tds)
            step += 1
            if step % config.target_sync_interval == 0:
                target.load_state_dict(model.state_dict())
            if config.checkpoint_interval and out_dir and step % config.checkpoint_interval == 0:
                models.save(model, os.path.join(out_dir, "checkpoints", f"step{step}.json"),
                            meta={"steps": step, "seed": config.seed})
            if step % config.log_interval == 0 or step == config.total_steps:
                row = {
                    "step": step,
                    "loss": round(float(loss.data), 6),
                    "epsilon": round(config.epsilon_at(step), 6),
                    "winrate_vs_random": winrate_vs_random(
                        model, game, config.probe_games, seed=config.seed * 1_000_003 + step),
                    "buffer_size": len(buffer),
                }
                metrics.append(row)

    if out_dir:
        models.save(model, os.path.join(out_dir, "checkpoints", "final.json"),
                    meta={"steps": step, "seed": config.seed})
        with open(os.path.join(out_dir, "metrics.jsonl"), "w") as fh:
            for row in metrics:
                fh.write(json.dumps(row) + "\n")
    return DqnResult(model=model, initial_state=initial_state, metrics=metrics, config=config)


def _episode_source(model, game, config: DqnConfig, rng: np.random.Generator):
    """Single-threaded by default. With workers > 1, episode generators run in
    threads with independent rng streams; ordering (hence determinism) is not
    guaranteed in that mode."""
    if config.workers <= 1:
        return lambda eps: self_play_episode(model, game, eps, rng)

    feed: queue.Queue = queue.Queue(maxsize=config.workers * 2)
    current_eps = [config.epsilon_start]

    def worker(wid: int) -> None:
        wrng = np.random.default_rng(config.seed ^ (wid + 1) * 0x9E3779B9)
        while True:
            feed.put(self_play_episode(model, game, current_eps[0], wrng))

    for wid in range(config.workers):
        threading.Thread(target=worker, args=(wid,), daemon=True).start()

    def source(eps: float):
        current_eps[0] = eps
        return feed.get()

    return source
