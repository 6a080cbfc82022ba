"""Shannon vertex-switching game engine.

A position is an undirected graph with two terminal nodes. The Short player
removes a node and connects all its former neighbors pairwise (join); the Cut
player removes a node outright. Short wins when the terminals become adjacent,
Cut wins when they end up in different components.

Node ids are dense 0..N-1 with the terminals pinned at 0 and 1; deletions
remap by moving the last node into the freed slot. Stable identity across
moves is provided by the label map (board cells / border tags). Adjacency is
stored as per-node bitmasks, so neighbor sets iterate in sorted order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional, Union

import numpy as np

from . import board as hexboard
from .board import Cell, Color, HexBoard
from .errors import IllegalMoveError, InvalidArgumentError, InvalidStateError

T1 = 0
T2 = 1


class Player(Enum):
    SHORT = "short"
    CUT = "cut"

    @property
    def opponent(self) -> "Player":
        return Player.CUT if self is Player.SHORT else Player.SHORT


class GameStatus(Enum):
    ONGOING = "ongoing"
    SHORT_WINS = "short_wins"
    CUT_WINS = "cut_wins"


NodeLabel = Union[Cell, str]


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class ShannonGraph:
    """Mutating core with value-type wrappers: `join`/`cut`/`move` return new
    graphs, the underscore `apply_*` variants mutate in place (single writer)."""

    __slots__ = ("adj", "labels", "perspective", "to_move", "_cell_ids")

    def __init__(
        self,
        adj: list[int],
        labels: list[NodeLabel],
        perspective: Color,
        to_move: Player,
    ):
        self.adj = adj
        self.labels = labels
        self.perspective = perspective
        self.to_move = to_move
        self._cell_ids = {
            lab: i for i, lab in enumerate(labels) if isinstance(lab, Cell)
        }

    # -- construction ------------------------------------------------------

    @classmethod
    def from_edges(
        cls,
        num_nodes: int,
        edges: Iterable[tuple[int, int]],
        to_move: Player = Player.SHORT,
        perspective: Color = Color.RED,
        labels: Optional[list[NodeLabel]] = None,
    ) -> "ShannonGraph":
        """Test/reload factory. Terminals are nodes 0 and 1."""
        if num_nodes < 2:
            raise InvalidArgumentError("graph needs at least the two terminals")
        adj = [0] * num_nodes
        for u, v in edges:
            if u == v or not (0 <= u < num_nodes and 0 <= v < num_nodes):
                raise InvalidArgumentError(f"bad edge ({u}, {v})")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        if labels is None:
            labels = ["t1", "t2"] + [f"n{i}" for i in range(2, num_nodes)]
        return cls(adj, list(labels), perspective, to_move)

    def copy(self) -> "ShannonGraph":
        g = ShannonGraph.__new__(ShannonGraph)
        g.adj = list(self.adj)
        g.labels = list(self.labels)
        g.perspective = self.perspective
        g.to_move = self.to_move
        g._cell_ids = dict(self._cell_ids)
        return g

    # -- inspection --------------------------------------------------------

    @property
    def num_nodes(self) -> int:
        return len(self.adj)

    @property
    def num_playable(self) -> int:
        return len(self.adj) - 2

    def neighbors(self, v: int) -> list[int]:
        return list(_bits(self.adj[v]))

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def edge_count(self) -> int:
        return sum(m.bit_count() for m in self.adj) // 2

    def legal_actions(self) -> list[int]:
        return list(range(2, len(self.adj)))

    def node_for_cell(self, cell: Cell) -> Optional[int]:
        return self._cell_ids.get(Cell(*cell))

    def status(self) -> GameStatus:
        if self.adj[T1] >> T2 & 1:
            return GameStatus.SHORT_WINS
        reach = 1 << T1
        frontier = reach
        while frontier:
            nxt = 0
            for u in _bits(frontier):
                nxt |= self.adj[u]
            nxt &= ~reach
            if nxt >> T2 & 1:
                return GameStatus.ONGOING
            reach |= nxt
            frontier = nxt
        return GameStatus.CUT_WINS

    # -- moves -------------------------------------------------------------

    def _check_move(self, v: int, player: Player) -> None:
        if self.to_move is not player:
            raise IllegalMoveError(f"it is the {self.to_move.value} player's move")
        if not (0 <= v < len(self.adj)):
            raise IllegalMoveError(f"node {v} does not exist")
        if v < 2:
            raise IllegalMoveError("terminal nodes are not playable")

    def _delete(self, v: int) -> None:
        """Remove node v; the last node is renamed to v to keep ids dense."""
        adj = self.adj
        for u in _bits(adj[v]):
            adj[u] &= ~(1 << v)
        last = len(adj) - 1
        lab_v = self.labels[v]
        if isinstance(lab_v, Cell):
            del self._cell_ids[lab_v]
        if v != last:
            moved = adj[last]
            bit_last = 1 << last
            bit_v = 1 << v
            for u in _bits(moved):
                adj[u] = (adj[u] & ~bit_last) | bit_v
            adj[v] = moved
            self.labels[v] = self.labels[last]
            if isinstance(self.labels[v], Cell):
                self._cell_ids[self.labels[v]] = v
        adj.pop()
        self.labels.pop()

    def apply_join(self, v: int) -> None:
        self._check_move(v, Player.SHORT)
        adj = self.adj
        m = adj[v]
        for u in _bits(m):
            adj[u] |= m & ~(1 << u)
        self._delete(v)
        self.to_move = Player.CUT

    def apply_cut(self, v: int) -> None:
        self._check_move(v, Player.CUT)
        self._delete(v)
        self.to_move = Player.SHORT

    def apply_move(self, v: int) -> None:
        if self.to_move is Player.SHORT:
            self.apply_join(v)
        else:
            self.apply_cut(v)

    def join(self, v: int) -> "ShannonGraph":
        g = self.copy()
        g.apply_join(v)
        return g

    def cut(self, v: int) -> "ShannonGraph":
        g = self.copy()
        g.apply_cut(v)
        return g

    def move(self, v: int) -> "ShannonGraph":
        g = self.copy()
        g.apply_move(v)
        return g

    # -- serialization -----------------------------------------------------

    def dump(self) -> dict:
        nodes = []
        for i, lab in enumerate(self.labels):
            name = hexboard.cell_name(lab) if isinstance(lab, Cell) else str(lab)
            terminal = 1 if i == T1 else 2 if i == T2 else 0
            nodes.append({"id": i, "label": name, "terminal": terminal})
        edges = [[u, v] for u in range(len(self.adj)) for v in _bits(self.adj[u]) if u < v]
        return {
            "nodes": nodes,
            "edges": edges,
            "to_move": self.to_move.value,
            "perspective": "red" if self.perspective is Color.RED else "blue",
        }

    def dump_json(self) -> str:
        return json.dumps(self.dump())

    @classmethod
    def from_dump(cls, d: Union[dict, str]) -> "ShannonGraph":
        if isinstance(d, str):
            d = json.loads(d)
        n = len(d["nodes"])
        labels: list[NodeLabel] = [""] * n
        for node in d["nodes"]:
            name = node["label"]
            try:
                lab: NodeLabel = hexboard.parse_cell(name) if node["terminal"] == 0 else name
            except InvalidArgumentError:
                lab = name
            labels[node["id"]] = lab
        return cls.from_edges(
            n,
            [tuple(e) for e in d["edges"]],
            to_move=Player(d["to_move"]),
            perspective=Color.RED if d["perspective"] == "red" else Color.BLUE,
            labels=labels,
        )


def from_board(board: HexBoard, perspective: Color) -> ShannonGraph:
    """Convert a grid position to its Shannon graph for one player's borders.

    Uncolored tiles become nodes; the perspective player's borders become the
    terminals; each chain of perspective-colored stones is contracted, making
    its uncolored/terminal neighborhood pairwise adjacent; opponent stones
    vanish. Short is to move exactly when the perspective player is.
    """
    if hexboard.winner(board) is not None:
        raise InvalidStateError("cannot build a Shannon graph for a decided position")
    n = board.size
    stone = perspective.stone
    if perspective is Color.RED:
        labels: list[NodeLabel] = ["top", "bottom"]
    else:
        labels = ["left", "right"]

    ids: dict[Cell, int] = {}
    for r in range(n):
        for c in range(n):
            if board.cells[r, c] == hexboard.EMPTY:
                ids[Cell(r, c)] = 2 + len(ids)
                labels.append(Cell(r, c))
    adj = [0] * (2 + len(ids))

    def connect(u: int, v: int) -> None:
        if u != v:
            adj[u] |= 1 << v
            adj[v] |= 1 << u

    def border_terminal(cell: Cell) -> Optional[int]:
        if perspective is Color.RED:
            if cell.row == 0:
                return T1
            if cell.row == n - 1:
                return T2
        else:
            if cell.col == 0:
                return T1
            if cell.col == n - 1:
                return T2
        return None

    # Edges among uncolored tiles, and tile-terminal edges at the borders.
    for cell, u in ids.items():
        t = border_terminal(cell)
        if t is not None:
            connect(u, t)
        for nb in hexboard.neighbors(cell, n):
            if nb in ids:
                connect(u, ids[nb])

    # Contract perspective-colored chains: union stones, then clique each
    # group's uncolored/terminal neighborhood.
    stones = board.stones(perspective)
    group = {cell: cell for cell in stones}

    def find(cell: Cell) -> Cell:
        while group[cell] != cell:
            group[cell] = group[group[cell]]
            cell = group[cell]
        return cell

    for cell in stones:
        for nb in hexboard.neighbors(cell, n):
            if board.cells[nb.row, nb.col] == stone:
                group[find(nb)] = find(cell)

    touching: dict[Cell, set[int]] = {}
    for cell in stones:
        root = find(cell)
        ent = touching.setdefault(root, set())
        t = border_terminal(cell)
        if t is not None:
            ent.add(t)
        for nb in hexboard.neighbors(cell, n):
            if nb in ids:
                ent.add(ids[nb])
    for ent in touching.values():
        members = sorted(ent)
        for i, u in enumerate(members):
            for v in members[i + 1:]:
                connect(u, v)

    to_move = Player.SHORT if board.to_move is perspective else Player.CUT
    return ShannonGraph(adj, labels, perspective, to_move)


@dataclass
class GraphEncoding:
    """Network input: symmetric edge list, terminal one-hot features, mover flag."""

    edge_index: np.ndarray  # (2, E) int32, both directions of every edge
    features: np.ndarray    # (N, 2) float32, columns [is_t1, is_t2]
    to_move: Player

    @property
    def num_nodes(self) -> int:
        return self.features.shape[0]

    def playable_ids(self) -> np.ndarray:
        return np.nonzero(self.features.sum(axis=1) == 0)[0]


def encode_adj(adj, to_move: Player) -> GraphEncoding:
    """Encode a bare adjacency-mask sequence (terminals at 0 and 1)."""
    n = len(adj)
    features = np.zeros((n, 2), dtype=np.float32)
    features[T1, 0] = 1.0
    features[T2, 1] = 1.0
    src, dst = [], []
    for u in range(n):
        for v in _bits(adj[u]):
            src.append(u)
            dst.append(v)
    edge_index = np.array([src, dst], dtype=np.int32).reshape(2, -1)
    return GraphEncoding(edge_index=edge_index, features=features, to_move=to_move)


def encode(graph: ShannonGraph) -> GraphEncoding:
    return encode_adj(graph.adj, graph.to_move)


# -- dead and captured node removal ---------------------------------------


def _fully_connected(adj: list[int], mask: int) -> bool:
    m = mask
    while m:
        low = m & -m
        u = low.bit_length() - 1
        if (mask & ~low) & ~adj[u]:
            return False
        m ^= low
    return True


def prune_dead_captured(
    candidates: Iterable[int],
    graph: ShannonGraph,
    rng: Optional[np.random.Generator] = None,
    stats: Optional[dict] = None,
) -> tuple[ShannonGraph, set[int]]:
    """Remove dead and captured nodes reachable from `candidates`.

    A node whose neighborhood is fully connected is dead and removed outright.
    A pair v, n with N(v)-{n} = N(n)-{v} is short-captured: the neighborhood
    of v is cliqued (join semantics) and both nodes are removed. A pair whose
    reduced neighborhoods are both fully connected is cut-captured and removed
    without replacement. Neighborhoods affected by a removal are reprocessed
    until nothing changes.

    Returns a new graph plus the removed node ids (in the input labeling);
    the mover is unchanged. `rng` randomizes neighbor/candidate order (the
    result's game value must not depend on it); `stats` collects instrumented
    counters: 'touched' is the set of ids whose adjacency the first pass read.
    """
    cand = [int(v) for v in candidates]
    for v in cand:
        if v < 2 or v >= graph.num_nodes:
            raise InvalidArgumentError(f"candidate {v} is a terminal or missing")

    adj = list(graph.adj)
    alive = [True] * len(adj)
    removed: set[int] = set()
    touched: set[int] = set()
    tracking = True  # instrumentation covers the first pass only

    def order(items: list[int]) -> list[int]:
        if rng is None:
            return sorted(items)
        items = sorted(items)
        rng.shuffle(items)
        return items

    def read(v: int) -> int:
        if tracking:
            touched.add(v)
        return adj[v]

    def delete(v: int) -> None:
        for u in _bits(adj[v]):
            adj[u] &= ~(1 << v)
        adj[v] = 0
        alive[v] = False
        removed.add(v)

    def run_pass(todo: list[int]) -> set[int]:
        affected: set[int] = set()
        for v in todo:
            if not alive[v]:
                continue
            nv = read(v)
            if _is_clique(nv):
                affected.update(_bits(nv))
                delete(v)
                continue
            if _try_short_capture(v, nv, affected):
                continue
            _try_cut_capture(v, nv, affected)
        return affected

    def _is_clique(mask: int) -> bool:
        m = mask
        while m:
            low = m & -m
            u = low.bit_length() - 1
            if (mask & ~low) & ~read(u):
                return False
            m ^= low
        return True

    def _try_short_capture(v: int, nv: int, affected: set[int]) -> bool:
        nb = order(list(_bits(nv)))
        if not nb:
            return False
        first = nb[0]
        for n in order([first] + list(_bits(read(first)))):
            if n == v or n < 2:
                continue
            if (nv & ~(1 << n)) == (read(n) & ~(1 << v)):
                affected.update(_bits(nv & ~(1 << n)))
                for u in _bits(nv):
                    adj[u] |= nv & ~(1 << u)
                delete(v)
                delete(n)
                return True
        return False

    def _try_cut_capture(v: int, nv: int, affected: set[int]) -> bool:
        for n in _bits(nv):
            if n < 2:
                continue
            rest_v = nv & ~(1 << n)
            rest_n = read(n) & ~(1 << v)
            if _is_clique(rest_v) and _is_clique(rest_n):
                affected.update(_bits(rest_v))
                affected.update(_bits(rest_n))
                delete(v)
                delete(n)
                return True
        return False

    todo = order(cand)
    while todo:
        affected = run_pass(todo)
        tracking = False
        todo = order([v for v in affected if v >= 2 and alive[v]])

    if stats is not None:
        stats["touched"] = touched
        stats["removed"] = set(removed)

    # Rebuild a dense graph from the surviving universe.
    keep = [i for i in range(len(adj)) if alive[i]]
    remap = {old: new for new, old in enumerate(keep)}
    new_adj = [0] * len(keep)
    for old in keep:
        m = 0
        for u in _bits(adj[old]):
            m |= 1 << remap[u]
        new_adj[remap[old]] = m
    new_labels = [graph.labels[old] for old in keep]
    out = ShannonGraph(new_adj, new_labels, graph.perspective, graph.to_move)
    return out, removed
