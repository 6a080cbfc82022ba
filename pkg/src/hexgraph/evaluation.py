"""Match protocols, teacher-game generation, and supervised imitation.

Tournaments fix every unique opening once per color per pairing, so a
pairing on size n plays exactly n(n+1) games (72 on 8x8, 132 on 11x11).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import board as hexboard
from . import models, shannon
from .board import Cell, Color, GameRecord, HexBoard
from .errors import InvalidArgumentError
from .mcts import NetEvaluator, RolloutEvaluator, mcts
from .nn import Adam
from .nn import tensor as T
from .shannon import GameStatus, Player


@dataclass
class TournamentResult:
    agents: list[str]
    wins: dict                      # (a, b) -> games a won against b
    games: list[GameRecord] = field(default_factory=list)

    def total_games(self) -> int:
        return sum(self.wins.values())

    def win_rate(self, a: str, b: str) -> float:
        total = self.wins[(a, b)] + self.wins[(b, a)]
        return self.wins[(a, b)] / total if total else 0.0

    def matrix_rows(self) -> list[dict]:
        rows = []
        for a in self.agents:
            row = {"agent": a}
            for b in self.agents:
                row[b] = "" if a == b else f"{100.0 * self.win_rate(a, b):.1f}%"
            rows.append(row)
        return rows


def play_game(red_agent, blue_agent, board: HexBoard,
              rng: Optional[np.random.Generator] = None) -> tuple[Color, GameRecord]:
    record = GameRecord(size=board.size)
    for cell in board.stones(Color.RED):
        record.moves.append(hexboard.cell_name(cell))
    for cell in board.stones(Color.BLUE):
        record.moves.append(hexboard.cell_name(cell))
    while True:
        agent = red_agent if board.to_move is Color.RED else blue_agent
        cell = Cell(*agent.best_move(board, rng))
        board = hexboard.play(board, cell)
        record.moves.append(hexboard.cell_name(cell))
        won = hexboard.winner(board)
        if won is not None:
            record.winner = "red" if won is Color.RED else "blue"
            return won, record


def tournament(agents: list, size: int,
               openings: Optional[list[Cell]] = None,
               rng: Optional[np.random.Generator] = None,
               keep_records: bool = False) -> TournamentResult:
    """Round-robin over unique openings; within a pairing each agent plays
    the forced opening move (as Red) once per opening."""
    if len(agents) < 2:
        raise InvalidArgumentError("a tournament needs at least two agents")
    if openings is None:
        openings = hexboard.unique_openings(size)
    names = [a.name for a in agents]
    if len(set(names)) != len(names):
        raise InvalidArgumentError("agent names must be unique")
    wins = {(a, b): 0 for a in names for b in names if a != b}
    records = []
    for i, red in enumerate(agents):
        for j, blue in enumerate(agents):
            if i == j:
                continue
            for opening in openings:
                board = hexboard.play(hexboard.new_board(size), opening)
                won, record = play_game(red, blue, board, rng)
                winner_name = red.name if won is Color.RED else blue.name
                loser_name = blue.name if won is Color.RED else red.name
                wins[(winner_name, loser_name)] += 1
                if keep_records:
                    records.append(record)
    return TournamentResult(agents=names, wins=wins, games=records)


# -- teacher data ----------------------------------------------------------


@dataclass
class TeacherSample:
    graph_snap: tuple          # (adj tuple, mover)
    board_snap: tuple          # (size, cells bytes, mover color)
    pi_nodes: np.ndarray       # over playable node ids of graph_snap
    pi_cells: np.ndarray       # over flat board cells
    z: float


@dataclass
class TeacherDataset:
    size: int
    train: list[TeacherSample]
    val: list[TeacherSample]

    def save_jsonl(self, path: str) -> None:
        with open(path, "w") as fh:
            for split, samples in (("train", self.train), ("val", self.val)):
                for s in samples:
                    graph = shannon.ShannonGraph(
                        list(s.graph_snap[0]),
                        ["t1", "t2"] + [f"n{i}" for i in range(2, len(s.graph_snap[0]))],
                        Color.RED, s.graph_snap[1])
                    fh.write(json.dumps({
                        "split": split,
                        "graph": graph.dump(),
                        "board": {
                            "size": self.size,
                            "cells": _cells_str(s.board_snap),
                            "to_move": "red" if s.board_snap[2] is Color.RED else "blue",
                        },
                        "pi": [round(float(p), 6) for p in s.pi_nodes],
                        "pi_cells": {int(i): round(float(p), 6)
                                     for i, p in enumerate(s.pi_cells) if p > 0},
                        "z": int(s.z),
                    }) + "\n")


def _cells_str(board_snap: tuple) -> str:
    size, raw, _ = board_snap
    sym = {0: ".", 1: "r", 2: "b"}
    return "".join(sym[int(v)] for v in np.frombuffer(raw, dtype=np.int8))


def gen_teacher_dataset(
    source,
    n_games: int,
    size: int,
    simulations: int = 128,
    seed: int = 0,
    val_fraction: float = 0.2,
    temperature_moves: int = 4,
) -> TeacherDataset:
    """Search self-play games with per-move visit targets and outcomes.

    `source` is a policy/value model or the string "rollout" for the
    network-free searcher. The split keeps whole games together (80/20 by
    default, matching the reference train/validation ratio).
    """
    rng = np.random.default_rng(seed)
    if source == "rollout":
        evaluator = RolloutEvaluator(rollouts=1, rng=np.random.default_rng(seed + 1))
    elif isinstance(source, models.GraphPVModel):
        evaluator = NetEvaluator(source)
    else:
        raise InvalidArgumentError("teacher source must be 'rollout' or a policy/value model")

    games: list[list[TeacherSample]] = []
    for _ in range(n_games):
        board = hexboard.new_board(size)
        graph = shannon.from_board(board, Color.RED)
        samples: list[TeacherSample] = []
        move_no = 0
        status = graph.status()
        while status is GameStatus.ONGOING:
            pi, _, _ = mcts(graph, evaluator, simulations, training=True, rng=rng)
            if move_no < temperature_moves:
                idx = int(rng.choice(len(pi), p=pi))
            else:
                idx = int(np.argmax(pi))
            node = idx + 2
            pi_cells = np.zeros(size * size, dtype=np.float32)
            for k, p in enumerate(pi):
                label = graph.labels[k + 2]
                pi_cells[label.row * size + label.col] = p
            samples.append(TeacherSample(
                graph_snap=(tuple(graph.adj), graph.to_move),
                board_snap=(size, board.cells.tobytes(), board.to_move),
                pi_nodes=pi.astype(np.float32),
                pi_cells=pi_cells,
                z=0.0,
            ))
            cell = graph.labels[node]
            board = hexboard.play(board, cell, check_winner=False)
            graph.apply_move(node)
            move_no += 1
            status = graph.status()
        winner = Player.SHORT if status is GameStatus.SHORT_WINS else Player.CUT
        for s in samples:
            s.z = 1.0 if s.graph_snap[1] is winner else -1.0
        games.append(samples)

    n_val = int(round(n_games * val_fraction))
    val_games = games[:n_val]
    train_games = games[n_val:]
    return TeacherDataset(
        size=size,
        train=[s for g in train_games for s in g],
        val=[s for g in val_games for s in g],
    )


# -- supervised imitation --------------------------------------------------


def _graph_sample_loss(model, sample: TeacherSample):
    logits, value, _ = model.pv_tensors(
        shannon.encode_adj(sample.graph_snap[0], sample.graph_snap[1]))
    mse = T.square(T.add(value, -float(sample.z)))
    ce = T.cross_entropy(logits, sample.pi_nodes)
    return T.reshape(T.add(mse, ce), (1,)), logits.data, float(value.data)


def _conv_batch(model, samples: list[TeacherSample], size: int):
    boards = []
    for s in samples:
        cells = np.frombuffer(s.board_snap[1], dtype=np.int8).reshape(size, size).copy()
        boards.append(HexBoard(size=size, cells=cells, to_move=s.board_snap[2]))
    planes = np.stack([hexboard.encode_planes(b, padding=model.config.padding) for b in boards])
    return boards, planes


def _conv_batch_loss(model, samples: list[TeacherSample], size: int):
    """Q-net imitation: softmax over the Q map approximates the teacher
    policy, max-Q approximates the outcome. Occupied cells are masked out."""
    boards, planes = _conv_batch(model, samples, size)
    q_maps = model.q_planes(planes)
    side = planes.shape[-1]
    off = 1 if model.config.padding else 0
    terms = []
    stats = []
    for i, (s, b) in enumerate(zip(samples, boards)):
        empty = [c.row * size + c.col for c in b.empty_cells()]
        flat = [i * side * side + (c // size + off) * side + (c % size + off) for c in empty]
        logits = T.gather_rows(T.reshape(q_maps, (-1,)), np.array(flat))
        target = s.pi_cells[empty]
        total = target.sum()
        target = target / total if total > 0 else np.full(len(empty), 1.0 / len(empty))
        ce = T.cross_entropy(logits, target)
        vmax = T.tmax0(logits)
        mse = T.square(T.add(vmax, -float(s.z)))
        terms.append(T.reshape(T.add(mse, ce), (1,)))
        stats.append((empty, logits.data.copy(), float(vmax.data)))
    return T.mul(T.tsum(T.concat(terms)), 1.0 / len(samples)), stats


def _accuracy(model, samples: list[TeacherSample], size: int,
              batch: int = 64) -> tuple[float, float]:
    """(policy argmax accuracy, value sign accuracy)."""
    pol_hits = 0
    val_hits = 0
    with T.no_grad():
        if isinstance(model, models.ConvQModel):
            for start in range(0, len(samples), batch):
                chunk = samples[start:start + batch]
                _, stats = _conv_batch_loss(model, chunk, size)
                for s, (empty, logits, vmax) in zip(chunk, stats):
                    pol_hits += int(empty[int(np.argmax(logits))] == int(np.argmax(s.pi_cells)))
                    val_hits += int(np.sign(vmax) == np.sign(s.z) or vmax == 0)
        else:
            for s in samples:
                pi, value = model.policy_value(
                    shannon.encode_adj(s.graph_snap[0], s.graph_snap[1]))
                pol_hits += int(np.argmax(pi[2:]) == np.argmax(s.pi_nodes))
                val_hits += int(np.sign(value) == np.sign(s.z) or value == 0)
    return pol_hits / len(samples), val_hits / len(samples)


def supervised_train(
    model,
    dataset: TeacherDataset,
    epochs: int,
    lr: float = 1e-4,
    weight_decay: float = 1e-4,
    batch_size: int = 64,
    seed: int = 0,
    eval_every: int = 1,
) -> list[dict]:
    """Cross-entropy on the move targets plus squared error on the outcome;
    logs train/validation policy accuracy and value sign accuracy."""
    if not dataset.train:
        raise InvalidArgumentError("empty training dataset")
    rng = np.random.default_rng(seed)
    opt = Adam(model, lr=lr, weight_decay=weight_decay)
    history = []
    is_conv = isinstance(model, models.ConvQModel)
    for epoch in range(1, epochs + 1):
        order = rng.permutation(len(dataset.train))
        epoch_loss = 0.0
        batches = 0
        for start in range(0, len(order), batch_size):
            rows = [dataset.train[i] for i in order[start:start + batch_size]]
            if is_conv:
                loss, _ = _conv_batch_loss(model, rows, dataset.size)
            else:
                terms = [_graph_sample_loss(model, s)[0] for s in rows]
                loss = T.mul(T.tsum(T.concat(terms)), 1.0 / len(rows))
            loss.backward()
            opt.step()
            epoch_loss += float(loss.data)
            batches += 1
        row = {"epoch": epoch, "loss": epoch_loss / max(1, batches)}
        if epoch % eval_every == 0 or epoch == epochs:
            row["train_policy_acc"], row["train_value_sign_acc"] = _accuracy(
                model, dataset.train, dataset.size)
            if dataset.val:
                row["val_policy_acc"], row["val_value_sign_acc"] = _accuracy(
                    model, dataset.val, dataset.size)
        history.append(row)
    return history
