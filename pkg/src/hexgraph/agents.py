"""Board-space agents: greedy network players, search players, oracles.

Graph-network agents always evaluate the red-perspective graph; the mover's
role (Short for Red, Cut for Blue) selects the head parameters.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from . import board as hexboard
from . import models, shannon, solver
from .board import Cell, Color, HexBoard
from .errors import InvalidArgumentError
from .mcts import MctsAgent, NetEvaluator, RolloutEvaluator  # noqa: F401 (re-export)
from .shannon import GameStatus, Player


class RandomAgent:
    name = "random"

    def best_move(self, board: HexBoard, rng: Optional[np.random.Generator] = None) -> Cell:
        if rng is None:
            raise InvalidArgumentError("random agent needs an rng")
        moves = board.empty_cells()
        return moves[int(rng.integers(len(moves)))]


class GraphQAgent:
    """Greedy argmax over the dueling graph network's Q values."""

    def __init__(self, model, name: str = "graph_q"):
        self.model = model
        self.name = name

    def _graph_q(self, board: HexBoard):
        graph = shannon.from_board(board, Color.RED)
        q, value, _ = self.model.q_values(shannon.encode(graph))
        return graph, q, value

    def best_move(self, board: HexBoard, rng=None) -> Cell:
        graph, q, _ = self._graph_q(board)
        return Cell(*graph.labels[int(np.argmax(q))])

    def q_cells(self, board: HexBoard) -> tuple[dict[str, float], float]:
        graph, q, value = self._graph_q(board)
        out = {}
        for v in graph.legal_actions():
            out[hexboard.cell_name(graph.labels[v])] = float(q[v])
        return out, value


class ConvQAgent:
    """Greedy argmax over the convolutional baseline's Q map."""

    def __init__(self, model, name: str = "conv_q"):
        self.model = model
        self.name = name

    def best_move(self, board: HexBoard, rng=None) -> Cell:
        q = self.model.q_board(board)
        flat = int(np.argmax(q.reshape(-1)))
        return Cell(flat // board.size, flat % board.size)

    def q_cells(self, board: HexBoard) -> tuple[dict[str, float], float]:
        q = self.model.q_board(board)
        out = {}
        for cell in board.empty_cells():
            out[hexboard.cell_name(cell)] = float(q[cell.row, cell.col])
        finite = q[np.isfinite(q)]
        return out, float(finite.max()) if finite.size else 0.0


class OracleAgent:
    """Exact play on small boards: the first winning move in row-major order,
    or the first legal move in a lost position. Solves the pruned graph of
    every candidate reply; the transposition table persists across calls."""

    name = "oracle"

    def __init__(self, max_playable: Optional[int] = None, use_pruning: bool = True):
        self.max_playable = max_playable
        self.use_pruning = use_pruning
        self.tt: dict = {}

    def wins_after(self, board: HexBoard, cell: Cell) -> bool:
        """Does the current mover win by playing `cell`?"""
        mover = board.to_move
        nxt = hexboard.play(board, cell)
        if hexboard.winner(nxt) is mover:
            return True
        graph = shannon.from_board(nxt, Color.RED)
        value = solver.solve(graph, max_playable=self.max_playable, tt=self.tt,
                             use_pruning=self.use_pruning)
        wanted = GameStatus.SHORT_WINS if mover is Color.RED else GameStatus.CUT_WINS
        return value is wanted

    def best_move(self, board: HexBoard, rng=None) -> Cell:
        moves = board.empty_cells()
        for cell in moves:
            if self.wins_after(board, cell):
                return cell
        return moves[0]


def agent_for_model(model, name: Optional[str] = None, mode: str = "greedy",
                    simulations: int = 200):
    """Wrap a loaded model in the right agent for its architecture."""
    if isinstance(model, models.GraphPVModel):
        if mode == "greedy":
            return PolicyAgent(model, name or "graph_pv")
        return MctsAgent(NetEvaluator(model), simulations, name=name or f"mcts{simulations}")
    if isinstance(model, models.GraphQModel):
        return GraphQAgent(model, name or "graph_q")
    if isinstance(model, models.ConvQModel):
        return ConvQAgent(model, name or "conv_q")
    raise InvalidArgumentError(f"no agent wrapper for {type(model).__name__}")


class PolicyAgent:
    """Greedy argmax over the policy head (no search)."""

    def __init__(self, model, name: str = "policy"):
        self.model = model
        self.name = name

    def best_move(self, board: HexBoard, rng=None) -> Cell:
        graph = shannon.from_board(board, Color.RED)
        pi, _ = self.model.policy_value(shannon.encode(graph))
        return Cell(*graph.labels[int(np.argmax(pi))])
