"""Self-play tree training with gated model replacement.

Each epoch the best network generates a batch of search-guided games, a
candidate is trained on the (state, visit distribution, outcome) triplets
with loss (z - v)^2 - pi^T log p (plus decoupled weight decay), and the
candidate replaces the best network only if it wins strictly more than the
gate threshold of paired-opening games against it.
"""

from __future__ import annotations

import dataclasses
import json
import os
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import board as hexboard
from . import models, shannon
from .board import Color
from .errors import InvalidArgumentError
from .mcts import NetEvaluator, mcts
from .nn import Adam
from .nn import tensor as T
from .shannon import GameStatus, Player, ShannonGraph


@dataclass
class AzConfig:
    board_size: int = 5
    simulations: int = 64
    c_puct: float = 1.5
    dirichlet_eps: float = 0.25
    dirichlet_alpha: Optional[float] = None  # None -> 10 / legal moves
    games_per_epoch: int = 200
    epochs: int = 5
    gate_openings: Optional[int] = None      # None -> all unique openings
    gate_threshold: float = 0.5
    temperature_moves: int = 6               # 0 reproduces pure argmax play
    sgd_epochs: int = 2
    batch_size: int = 32
    lr: float = 1e-3
    weight_decay: float = 1e-4
    model: Optional[dict] = None
    seed: int = 0

    def __post_init__(self):
        if self.simulations < 2:
            raise InvalidArgumentError("simulations must be >= 2")
        if not 0.0 < self.gate_threshold < 1.0:
            raise InvalidArgumentError("gate threshold must be in (0, 1)")

    @classmethod
    def reference(cls) -> "AzConfig":
        """Full-scale settings (not desk-runnable): 800-simulation searches,
        30,000 games per epoch, up to 300 epochs."""
        return cls(board_size=11, simulations=800, games_per_epoch=30_000, epochs=300)


@dataclass
class GameTriplets:
    """One self-play game: per-move (snapshot, visit distribution, outcome)."""

    snaps: list = field(default_factory=list)      # (adj tuple, mover)
    pis: list = field(default_factory=list)        # np arrays over playable ids
    zs: list = field(default_factory=list)         # +1/-1 from the mover's view
    moves: list = field(default_factory=list)      # chosen node ids


def self_play_game(model, config: AzConfig, rng: np.random.Generator,
                   training: bool = True, opening: Optional[int] = None) -> GameTriplets:
    """Play one search-guided game. Moves are argmax of the visit counts;
    in training mode the first `temperature_moves` moves sample from them and
    root priors get Dirichlet noise."""
    evaluator = NetEvaluator(model)
    state = shannon.from_board(hexboard.new_board(config.board_size), Color.RED)
    game = GameTriplets()
    move_no = 0
    if opening is not None:
        game.moves.append(opening)
        state.apply_move(opening)
        move_no = 1
    status = state.status()
    while status is GameStatus.ONGOING:
        pi, _, _ = mcts(
            state, evaluator, config.simulations, config.c_puct,
            training=training, dirichlet_eps=config.dirichlet_eps,
            dirichlet_alpha=config.dirichlet_alpha, rng=rng if training else None,
        )
        if training and move_no < config.temperature_moves:
            idx = int(rng.choice(len(pi), p=pi))
        else:
            idx = int(np.argmax(pi))
        game.snaps.append((tuple(state.adj), state.to_move))
        game.pis.append(pi.astype(np.float32))
        game.moves.append(idx + 2)
        state.apply_move(idx + 2)
        move_no += 1
        status = state.status()
    winner = Player.SHORT if status is GameStatus.SHORT_WINS else Player.CUT
    game.zs = [1.0 if snap[1] is winner else -1.0 for snap in game.snaps]
    return game


def dataset_from_games(games: list[GameTriplets]) -> list[tuple]:
    return [
        (snap, pi, z)
        for g in games
        for snap, pi, z in zip(g.snaps, g.pis, g.zs)
    ]


def train_epoch(model, dataset: list[tuple], config: AzConfig,
                rng: np.random.Generator, opt: Optional[Adam] = None) -> dict:
    """Minibatch updates on (z - v)^2 - pi log p; returns loss metrics."""
    if not dataset:
        raise InvalidArgumentError("empty training dataset")
    if opt is None:
        opt = Adam(model, lr=config.lr, weight_decay=config.weight_decay)
    losses = []
    for _ in range(config.sgd_epochs):
        order = rng.permutation(len(dataset))
        for start in range(0, len(order), config.batch_size):
            rows = order[start:start + config.batch_size]
            terms = []
            for i in rows:
                snap, pi, z = dataset[i]
                logits, value, _ = model.pv_tensors(shannon.encode_adj(snap[0], snap[1]))
                mse = T.square(T.add(value, -float(z)))
                ce = T.cross_entropy(logits, pi)
                terms.append(T.reshape(T.add(mse, ce), (1,)))
            loss = T.mul(T.tsum(T.concat(terms)), 1.0 / len(rows))
            loss.backward()
            opt.step()
            losses.append(float(loss.data))
    return {"loss_first": losses[0], "loss_last": losses[-1], "batches": len(losses)}


def azero_loss(model, snap, pi, z) -> T.Tensor:
    """Single-sample combined loss (exposed for gradient checking)."""
    logits, value, _ = model.pv_tensors(shannon.encode_adj(snap[0], snap[1]))
    return T.add(T.square(T.add(value, -float(z))), T.cross_entropy(logits, pi))


def _play_gated_game(first, second, config: AzConfig, opening: int) -> bool:
    """True iff `first` (who owns the forced opening move) wins."""
    ev_first, ev_second = NetEvaluator(first), NetEvaluator(second)
    state = shannon.from_board(hexboard.new_board(config.board_size), Color.RED)
    state.apply_move(opening)
    movers = {Player.CUT: ev_second, Player.SHORT: ev_first}
    status = state.status()
    while status is GameStatus.ONGOING:
        pi, _, _ = mcts(state, movers[state.to_move], config.simulations, config.c_puct)
        state.apply_move(2 + int(np.argmax(pi)))
        status = state.status()
    return status is GameStatus.SHORT_WINS


def gate_evaluate(candidate, best, config: AzConfig) -> tuple[bool, float]:
    """Paired unique openings, colors swapped; replace only on a strict
    majority of wins for the candidate."""
    openings = hexboard.unique_openings(config.board_size)
    if config.gate_openings is not None:
        openings = openings[:config.gate_openings]
    board = hexboard.new_board(config.board_size)
    graph = shannon.from_board(board, Color.RED)
    wins = 0
    games = 0
    for cell in openings:
        node = graph.node_for_cell(cell)
        wins += _play_gated_game(candidate, best, config, node)
        wins += not _play_gated_game(best, candidate, config, node)
        games += 2
    rate = wins / games
    return rate > config.gate_threshold, rate


@dataclass
class AzResult:
    best: object
    initial_state: dict
    lineage: list[dict]
    config: AzConfig


def train_azero(config: AzConfig, init_checkpoint: Optional[str] = None,
                out_dir: Optional[str] = None) -> AzResult:
    """Appendix-style loop: generate games with the best model, train a
    candidate, gate it against the best, keep the winner's lineage."""
    rng = np.random.default_rng(config.seed)
    if init_checkpoint:
        best = models.load(init_checkpoint)
    else:
        best = models.build_model("graph_pv", config.model, seed=config.seed)
    initial_state = best.state_dict()
    lineage: list[dict] = []

    if out_dir:
        os.makedirs(os.path.join(out_dir, "checkpoints"), exist_ok=True)
        with open(os.path.join(out_dir, "config.json"), "w") as fh:
            json.dump(dataclasses.asdict(config), fh, indent=2)
        models.save(best, os.path.join(out_dir, "checkpoints", "epoch0.json"),
                    meta={"epoch": 0, "seed": config.seed})

    for epoch in range(1, config.epochs + 1):
        games = [self_play_game(best, config, rng) for _ in range(config.games_per_epoch)]
        dataset = dataset_from_games(games)
        if out_dir:
            _write_shard(os.path.join(out_dir, f"games_epoch{epoch}.jsonl"), games, config)
        candidate = models.build_model("graph_pv", config.model, seed=config.seed)
        candidate.load_state_dict(best.state_dict())
        stats = train_epoch(candidate, dataset, config, rng)
        accepted, rate = gate_evaluate(candidate, best, config)
        if accepted:
            best = candidate
        entry = {
            "epoch": epoch,
            "samples": len(dataset),
            "gate_win_rate": rate,
            "accepted": accepted,
            "loss_last": stats["loss_last"],
            "checkpoint_hash": models.content_hash(best),
        }
        lineage.append(entry)
        if out_dir:
            models.save(best, os.path.join(out_dir, "checkpoints", f"epoch{epoch}.json"),
                        meta={"epoch": epoch, "seed": config.seed})
            with open(os.path.join(out_dir, "lineage.json"), "w") as fh:
                json.dump(lineage, fh, indent=2)
    return AzResult(best=best, initial_state=initial_state, lineage=lineage, config=config)


def _write_shard(path: str, games: list[GameTriplets], config: AzConfig) -> None:
    """Dataset shard: one JSON object per stored position."""
    board = hexboard.new_board(config.board_size)
    with open(path, "w") as fh:
        for g in games:
            graph = shannon.from_board(board, Color.RED)
            offset = len(g.moves) - len(g.snaps)
            for move in g.moves[:offset]:
                graph.apply_move(move)
            for move, pi, z in zip(g.moves[offset:], g.pis, g.zs):
                fh.write(json.dumps({
                    "graph": graph.dump(),
                    "pi": [round(float(p), 6) for p in pi],
                    "z": int(z),
                }) + "\n")
                graph.apply_move(move)
