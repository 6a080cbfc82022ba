"""Grid-side Hex engine: board state, win detection, openings, entropy, input planes.

Orientation convention used across the whole package: Red connects the top and
bottom borders (rows 0 and n-1), Blue connects left and right (columns 0 and
n-1), and Red moves first.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, NamedTuple, Optional

import numpy as np

from .errors import GameOverError, IllegalMoveError, InvalidArgumentError

MIN_SIZE = 3
MAX_SIZE = 25

EMPTY = 0
RED = 1
BLUE = 2

# Hex adjacency on the rhombic grid.
NEIGHBOR_OFFSETS = ((-1, 0), (1, 0), (0, -1), (0, 1), (1, -1), (-1, 1))


class Color(Enum):
    RED = 1
    BLUE = 2

    @property
    def opponent(self) -> "Color":
        return Color.BLUE if self is Color.RED else Color.RED

    @property
    def stone(self) -> int:
        return self.value


class Cell(NamedTuple):
    row: int
    col: int


def neighbors(cell: Cell, n: int) -> Iterator[Cell]:
    r, c = cell
    for dr, dc in NEIGHBOR_OFFSETS:
        nr, nc = r + dr, c + dc
        if 0 <= nr < n and 0 <= nc < n:
            yield Cell(nr, nc)


def cell_name(cell: Cell) -> str:
    """Letter-number notation: column letter, 1-based row ('c4' = col 2, row 3)."""
    return chr(ord("a") + cell.col) + str(cell.row + 1)


def parse_cell(name: str) -> Cell:
    name = name.strip().lower()
    if len(name) < 2 or not name[0].isalpha() or not name[1:].isdigit():
        raise InvalidArgumentError(f"bad cell name {name!r}")
    return Cell(int(name[1:]) - 1, ord(name[0]) - ord("a"))


@dataclass
class HexBoard:
    """n x n Hex position. Value type: `play` returns a new board.

    Boards built through `new_board`/`play` satisfy the legal-play invariants
    (balanced stone counts, mover parity). `from_position` additionally admits
    composed diagram positions that are not reachable by alternating play.
    """

    size: int
    cells: np.ndarray
    to_move: Color = Color.RED
    move_count: int = 0

    def copy(self) -> "HexBoard":
        return HexBoard(self.size, self.cells.copy(), self.to_move, self.move_count)

    def cell(self, cell: Cell) -> int:
        return int(self.cells[cell.row, cell.col])

    def empty_cells(self) -> list[Cell]:
        rows, cols = np.nonzero(self.cells == EMPTY)
        return [Cell(int(r), int(c)) for r, c in zip(rows, cols)]

    def stones(self, color: Color) -> list[Cell]:
        rows, cols = np.nonzero(self.cells == color.stone)
        return [Cell(int(r), int(c)) for r, c in zip(rows, cols)]

    def is_full(self) -> bool:
        return not (self.cells == EMPTY).any()


def new_board(n: int) -> HexBoard:
    if not MIN_SIZE <= n <= MAX_SIZE:
        raise InvalidArgumentError(f"board size must be in [{MIN_SIZE}, {MAX_SIZE}], got {n}")
    return HexBoard(size=n, cells=np.zeros((n, n), dtype=np.int8))


def from_position(
    n: int,
    red: list[Cell] = (),
    blue: list[Cell] = (),
    to_move: Color = Color.RED,
) -> HexBoard:
    """Build a composed position. Validates bounds and overlap but not mover
    parity or stone balance (diagram positions need not be play-reachable)."""
    board = new_board(n)
    for color, cells in ((RED, red), (BLUE, blue)):
        for cell in cells:
            cell = Cell(*cell)
            if not (0 <= cell.row < n and 0 <= cell.col < n):
                raise InvalidArgumentError(f"cell {cell} out of range for size {n}")
            if board.cells[cell.row, cell.col] != EMPTY:
                raise InvalidArgumentError(f"cell {cell} assigned twice")
            board.cells[cell.row, cell.col] = color
    board.to_move = to_move
    board.move_count = len(red) + len(blue)
    return board


def play(board: HexBoard, cell: Cell, check_winner: bool = True) -> HexBoard:
    """Place the mover's stone. Returns a new board; raises on occupied cells
    and finished games."""
    if check_winner and winner(board) is not None:
        raise GameOverError("game already won")
    cell = Cell(*cell)
    if not (0 <= cell.row < board.size and 0 <= cell.col < board.size):
        raise IllegalMoveError(f"cell {cell} out of range")
    if board.cells[cell.row, cell.col] != EMPTY:
        raise IllegalMoveError(f"cell {cell_name(cell)} is occupied")
    nxt = board.copy()
    nxt.cells[cell.row, cell.col] = board.to_move.stone
    nxt.to_move = board.to_move.opponent
    nxt.move_count += 1
    return nxt


def _reaches(board: HexBoard, color: Color) -> bool:
    """BFS from the color's first border over same-colored stones."""
    n = board.size
    stone = color.stone
    if color is Color.RED:
        frontier = [Cell(0, c) for c in range(n) if board.cells[0, c] == stone]
        goal_row = n - 1
    else:
        frontier = [Cell(r, 0) for r in range(n) if board.cells[r, 0] == stone]
        goal_row = None
    seen = set(frontier)
    while frontier:
        cur = frontier.pop()
        if color is Color.RED and cur.row == goal_row:
            return True
        if color is Color.BLUE and cur.col == n - 1:
            return True
        for nb in neighbors(cur, n):
            if nb not in seen and board.cells[nb.row, nb.col] == stone:
                seen.add(nb)
                frontier.append(nb)
    return False


def winner(board: HexBoard) -> Optional[Color]:
    if _reaches(board, Color.RED):
        return Color.RED
    if _reaches(board, Color.BLUE):
        return Color.BLUE
    return None


def legal_moves(board: HexBoard) -> list[Cell]:
    return board.empty_cells()


def _reflect(cell: Cell, n: int) -> Cell:
    """Short-diagonal reflection (i, j) -> (n-1-j, n-1-i)."""
    return Cell(n - 1 - cell.col, n - 1 - cell.row)


def _rotate(cell: Cell, n: int) -> Cell:
    """180-degree rotation (i, j) -> (n-1-i, n-1-j)."""
    return Cell(n - 1 - cell.row, n - 1 - cell.col)


def unique_openings(n: int, include_rotation: bool = False) -> list[Cell]:
    """One canonical cell per symmetry orbit of opening moves.

    Default quotient is by the short-diagonal reflection only, giving
    n(n+1)/2 openings (36 on 8x8, 66 on 11x11). `include_rotation` also
    quotients by the 180-degree rotation; it is exposed for analysis but not
    used by the match protocols.
    """
    if not MIN_SIZE <= n <= MAX_SIZE:
        raise InvalidArgumentError(f"board size must be in [{MIN_SIZE}, {MAX_SIZE}], got {n}")
    seen: set[Cell] = set()
    out: list[Cell] = []
    for r in range(n):
        for c in range(n):
            cell = Cell(r, c)
            orbit = {cell, _reflect(cell, n)}
            if include_rotation:
                for m in list(orbit):
                    orbit.add(_rotate(m, n))
            canonical = min(orbit)
            if canonical not in seen:
                seen.add(canonical)
                out.append(canonical)
    return out


def board_entropy(board: HexBoard) -> float:
    """Shannon entropy (natural log) of the empty/red/blue tile proportions."""
    total = board.size * board.size
    h = 0.0
    for value in (EMPTY, RED, BLUE):
        p = float(np.count_nonzero(board.cells == value)) / total
        if p > 0.0:
            h -= p * np.log(p)
    return float(h)


def encode_planes(board: HexBoard, padding: bool = True) -> np.ndarray:
    """4-channel float32 planes: red, blue, empty, to-move constant.

    With `padding` a one-cell border ring is added and encoded as stones:
    top/bottom rows red, left/right columns blue, corners both. Disable to
    get bare 4 x n x n planes.
    """
    n = board.size
    if padding:
        planes = np.zeros((4, n + 2, n + 2), dtype=np.float32)
        planes[0, [0, -1], :] = 1.0
        planes[1, :, [0, -1]] = 1.0
        inner = slice(1, n + 1)
        planes[0, inner, inner] = board.cells == RED
        planes[1, inner, inner] = board.cells == BLUE
        planes[2, inner, inner] = board.cells == EMPTY
    else:
        planes = np.zeros((4, n, n), dtype=np.float32)
        planes[0] = board.cells == RED
        planes[1] = board.cells == BLUE
        planes[2] = board.cells == EMPTY
    planes[3] = 1.0 if board.to_move is Color.RED else 0.0
    return planes


class BorderUnionFind:
    """Array DSU over board cells plus two virtual border nodes per color,
    supporting incremental stone placement during playouts."""

    __slots__ = ("n", "parent")

    def __init__(self, n: int):
        self.n = n
        # Layout: n*n cells, then red-top, red-bottom, blue-left, blue-right.
        self.parent = list(range(n * n + 4))

    def find(self, i: int) -> int:
        parent = self.parent
        root = i
        while parent[root] != root:
            root = parent[root]
        while parent[i] != root:
            parent[i], i = root, parent[i]
        return root

    def union(self, i: int, j: int) -> None:
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            self.parent[rj] = ri

    def add_stone(self, board_cells: np.ndarray, cell: Cell, color: Color) -> bool:
        """Register a just-placed stone; returns True if it wins the game."""
        n = self.n
        idx = cell.row * n + cell.col
        stone = color.stone
        for dr, dc in NEIGHBOR_OFFSETS:
            nr, nc = cell.row + dr, cell.col + dc
            if 0 <= nr < n and 0 <= nc < n and board_cells[nr, nc] == stone:
                self.union(idx, nr * n + nc)
        if color is Color.RED:
            if cell.row == 0:
                self.union(idx, n * n)
            if cell.row == n - 1:
                self.union(idx, n * n + 1)
            return self.find(n * n) == self.find(n * n + 1)
        if cell.col == 0:
            self.union(idx, n * n + 2)
        if cell.col == n - 1:
            self.union(idx, n * n + 3)
        return self.find(n * n + 2) == self.find(n * n + 3)


def random_playout(board: HexBoard, rng: np.random.Generator) -> Color:
    """Play uniform random legal moves until someone wins; returns the winner.
    Mutates nothing; runs on an internal copy with incremental win detection."""
    b = board.copy()
    uf = BorderUnionFind(b.size)
    for color in (Color.RED, Color.BLUE):
        for cell in b.stones(color):
            if uf.add_stone(b.cells, cell, color):
                return color
    empties = b.empty_cells()
    order = rng.permutation(len(empties))
    mover = b.to_move
    for k in order:
        cell = empties[k]
        if b.cells[cell.row, cell.col] != EMPTY:
            continue
        b.cells[cell.row, cell.col] = mover.stone
        if uf.add_stone(b.cells, cell, mover):
            return mover
        mover = mover.opponent
    raise AssertionError("full Hex board with no winner")  # unreachable: no draws


@dataclass
class GameRecord:
    """One finished game in letter-number notation."""

    size: int
    moves: list[str] = field(default_factory=list)
    winner: Optional[str] = None

    def to_json(self) -> str:
        return json.dumps({"size": self.size, "moves": self.moves, "winner": self.winner})

    @classmethod
    def from_json(cls, line: str) -> "GameRecord":
        d = json.loads(line)
        return cls(size=d["size"], moves=list(d["moves"]), winner=d.get("winner"))

    def replay(self) -> HexBoard:
        board = new_board(self.size)
        for name in self.moves:
            board = play(board, parse_cell(name))
        return board
