"""PUCT tree search over Shannon-graph states.

Selection maximizes Q(a) + c_puct * P(a) * sqrt(N_parent) / (1 + N(a)) with
unvisited Q treated as 0; leaves are evaluated by a network (or rollouts for
the teacher), values are negated every ply on the way back up, and the move
distribution is the normalized root visit count. The root evaluation counts
as one simulation, so root child visits sum to budget - 1.
"""

from __future__ import annotations

from typing import Callable, Optional

import numpy as np

from . import board as hexboard
from .board import Color
from .errors import InvalidArgumentError, InvalidStateError
from .shannon import GameStatus, Player, ShannonGraph, encode


class NetEvaluator:
    """Policy/value network evaluation of a graph state for its mover."""

    def __init__(self, model):
        self.model = model

    def __call__(self, state: ShannonGraph) -> tuple[np.ndarray, float]:
        pi, value = self.model.policy_value(encode(state))
        return pi[2:].astype(np.float64), value


class RolloutEvaluator:
    """Network-free evaluation: uniform priors and averaged random playouts.
    Playout moves alternate join/cut uniformly at random."""

    def __init__(self, rollouts: int = 1, rng: Optional[np.random.Generator] = None):
        self.rollouts = rollouts
        self.rng = rng if rng is not None else np.random.default_rng(0)

    def __call__(self, state: ShannonGraph) -> tuple[np.ndarray, float]:
        k = state.num_playable
        priors = np.full(k, 1.0 / k)
        total = 0.0
        for _ in range(self.rollouts):
            g = state.copy()
            status = g.status()
            while status is GameStatus.ONGOING:
                g.apply_move(2 + int(self.rng.integers(g.num_playable)))
                status = g.status()
            won = status is (GameStatus.SHORT_WINS if state.to_move is Player.SHORT
                             else GameStatus.CUT_WINS)
            total += 1.0 if won else -1.0
        return priors, total / self.rollouts


class _Node:
    __slots__ = ("prior", "visits", "value_sum", "child_n", "child_w", "children",
                 "states", "expanded", "terminal")

    def __init__(self):
        self.prior: Optional[np.ndarray] = None
        self.visits = 0
        self.value_sum = 0.0
        self.child_n: Optional[np.ndarray] = None
        self.child_w: Optional[np.ndarray] = None
        self.children: dict[int, "_Node"] = {}
        self.states: dict[int, ShannonGraph] = {}
        self.expanded = False
        self.terminal = False


def mcts(
    state: ShannonGraph,
    evaluator: Callable[[ShannonGraph], tuple[np.ndarray, float]],
    simulations: int,
    c_puct: float = 1.5,
    training: bool = False,
    dirichlet_eps: float = 0.25,
    dirichlet_alpha: Optional[float] = None,
    rng: Optional[np.random.Generator] = None,
) -> tuple[np.ndarray, float, _Node]:
    """Returns (pi over playable actions in id order, root value, root node)."""
    if simulations < 2:
        raise InvalidArgumentError("need at least 2 simulations")
    if state.status() is not GameStatus.ONGOING:
        raise InvalidStateError("search from a decided position")

    root = _Node()
    priors, value = evaluator(state)
    _expand(root, priors)
    root.visits = 1
    root.value_sum = value
    if training:
        if rng is None:
            raise InvalidArgumentError("training noise needs an rng")
        alpha = dirichlet_alpha if dirichlet_alpha is not None else 10.0 / len(priors)
        noise = rng.dirichlet([alpha] * len(priors))
        root.prior = (1.0 - dirichlet_eps) * root.prior + dirichlet_eps * noise

    for _ in range(simulations - 1):
        node = root
        st = state
        path: list[tuple[_Node, int]] = []
        while node.expanded and not node.terminal:
            idx = _select(node, c_puct)
            path.append((node, idx))
            child = node.children.get(idx)
            if child is None:
                nxt = st.move(idx + 2)
                child = _Node()
                if nxt.status() is not GameStatus.ONGOING:
                    child.terminal = True
                node.children[idx] = child
                node.states[idx] = nxt
            st = node.states[idx]
            node = child
        if node.terminal:
            leaf_value = -1.0  # mover at a decided position has lost
        else:
            priors, leaf_value = evaluator(st)
            _expand(node, priors)
        node.visits += 1
        node.value_sum += leaf_value
        value = leaf_value
        for parent, idx in reversed(path):
            value = -value
            parent.child_n[idx] += 1
            parent.child_w[idx] += value
            parent.visits += 1
            parent.value_sum += value

    pi = root.child_n / root.child_n.sum()
    return pi, root.value_sum / root.visits, root


def _expand(node: _Node, priors: np.ndarray) -> None:
    total = priors.sum()
    node.prior = priors / total if total > 0 else np.full(len(priors), 1.0 / len(priors))
    node.child_n = np.zeros(len(priors))
    node.child_w = np.zeros(len(priors))
    node.expanded = True


def _select(node: _Node, c_puct: float) -> int:
    q = np.where(node.child_n > 0, node.child_w / np.maximum(node.child_n, 1), 0.0)
    u = c_puct * node.prior * np.sqrt(node.visits) / (1.0 + node.child_n)
    return int(np.argmax(q + u))


def check_visit_conservation(node: _Node) -> bool:
    """N(node) == sum of child visits + 1 at every expanded node."""
    if not node.expanded or node.terminal:
        return True
    if node.visits != int(node.child_n.sum()) + 1:
        return False
    return all(check_visit_conservation(c) for c in node.children.values())


class MctsAgent:
    """Board-space agent: searches the red-perspective graph each move."""

    def __init__(self, evaluator, simulations: int, c_puct: float = 1.5, name: str = "mcts"):
        self.evaluator = evaluator
        self.simulations = simulations
        self.c_puct = c_puct
        self.name = name

    def best_move(self, board: hexboard.HexBoard, rng=None) -> hexboard.Cell:
        from . import shannon
        graph = shannon.from_board(board, Color.RED)
        pi, _, _ = mcts(graph, self.evaluator, self.simulations, self.c_puct)
        node_id = 2 + int(np.argmax(pi))
        label = graph.labels[node_id]
        return hexboard.Cell(*label)

    def scores(self, board: hexboard.HexBoard) -> dict:
        from . import shannon
        graph = shannon.from_board(board, Color.RED)
        pi, value, root = mcts(graph, self.evaluator, self.simulations, self.c_puct)
        cells = {}
        visits = {}
        for idx, p in enumerate(pi):
            label = graph.labels[idx + 2]
            if isinstance(label, hexboard.Cell):
                cells[hexboard.cell_name(label)] = float(p)
                visits[hexboard.cell_name(label)] = int(root.child_n[idx])
        return {"pi": cells, "visits": visits, "value": float(value)}
