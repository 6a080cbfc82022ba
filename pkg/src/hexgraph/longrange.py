"""Long-range dependency test positions.

Each problem puts the mover's decision at one corner while the single cell
that determines whether that decision is right sits at the opposite end of
the board.

Red family (red to move) on an n x n board:

* a red wall (r, 0) for r in 1..n-2 seals the left border column, leaving
  the bottom-left corner D = (n-1, 0) as the only gap;
* blue owns row 1 from column 2 to the right border and column 1 from row 2
  to the bottom -- a finished chain that wins outright with one move at D --
  plus a lone stone on the top-left corner (0, 0);
* the toggle is (0, 1): red in positive problems, empty in negative ones.

With the toggle red, the wall already touches the top border, so capturing
D both parries blue's threat and completes red's chain: D is the unique
winning move, and its correctness hinges on the toggle's color a full board
diagonal away. Without the toggle, the wall is one outlet short: after red
takes D, blue seizes (0, 1), red's column is sealed from the top, and the
block achieves nothing -- every red move loses, and grabbing D is the
classic wasted move. Blue problems are the short-diagonal reflection with
colors swapped, keeping the decision at the bottom-left corner (a fixed
point of that reflection) with the toggle at the far bottom-right.

Labels at sizes <= 7 are checked against the exact solver: the decision
cell must be the unique winning move in positive problems and no winning
move may exist in negative ones (decision cell wins iff positive).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from . import board as hexboard
from .agents import OracleAgent
from .board import Cell, Color, HexBoard
from .errors import InvalidArgumentError

POSITIVE = "positive"
NEGATIVE = "negative"

MIN_PROBLEM_SIZE = 6
SOLVER_VERIFIED_MAX = 7


@dataclass
class LongRangeProblem:
    board: HexBoard
    color: Color            # the mover being tested
    polarity: str           # positive: must play decision_cell; negative: must not
    decision_cell: Cell
    toggle_cell: Cell
    size: int

    @property
    def must_play(self) -> bool:
        return self.polarity == POSITIVE


def _red_problem(n: int, polarity: str) -> LongRangeProblem:
    red = [Cell(r, 0) for r in range(1, n - 1)]
    blue = ([Cell(1, c) for c in range(1, n)]
            + [Cell(r, 1) for r in range(2, n)]
            + [Cell(0, 0)])
    toggle = Cell(0, 1)
    if polarity == POSITIVE:
        red.append(toggle)
    board = hexboard.from_position(n, red=red, blue=blue, to_move=Color.RED)
    return LongRangeProblem(board, Color.RED, polarity, Cell(n - 1, 0), toggle, n)


def _reflect_problem(p: LongRangeProblem) -> LongRangeProblem:
    """Short-diagonal reflection (i, j) -> (n-1-j, n-1-i) with colors
    swapped: a blue-to-move problem whose decision stays at the bottom-left
    corner (a fixed point of the reflection)."""
    n = p.size

    def ref(c: Cell) -> Cell:
        return Cell(n - 1 - c.col, n - 1 - c.row)

    board = hexboard.from_position(
        n,
        red=[ref(c) for c in p.board.stones(Color.BLUE)],
        blue=[ref(c) for c in p.board.stones(Color.RED)],
        to_move=Color.BLUE,
    )
    return LongRangeProblem(board, Color.BLUE, p.polarity,
                            ref(p.decision_cell), ref(p.toggle_cell), n)


def gen_long_range(size: int, color: Color, polarity: str,
                   verify: Optional[bool] = None) -> LongRangeProblem:
    """Deterministic problem for (size, color, polarity). With `verify` (the
    default at sizes <= 7) the labels are checked against the exact solver:
    the decision cell must win iff the polarity is positive -- uniquely so
    in positive problems, while negative positions are lost outright."""
    if not MIN_PROBLEM_SIZE <= size <= hexboard.MAX_SIZE:
        raise InvalidArgumentError(
            f"problem size must be in [{MIN_PROBLEM_SIZE}, {hexboard.MAX_SIZE}]")
    if polarity not in (POSITIVE, NEGATIVE):
        raise InvalidArgumentError(f"unknown polarity {polarity!r}")
    problem = _red_problem(size, polarity)
    if color is Color.BLUE:
        problem = _reflect_problem(problem)
    if verify is None:
        verify = size <= SOLVER_VERIFIED_MAX
    if verify:
        verify_labels(problem)
    return problem


def verify_labels(problem: LongRangeProblem, oracle: Optional[OracleAgent] = None) -> None:
    """Solver check of the generated label; raises on any mismatch. The
    decision cell wins exactly in positive problems: uniquely there, while a
    negative position offers no winning move at all."""
    oracle = oracle or OracleAgent(max_playable=None)
    board = problem.board
    decision = problem.decision_cell
    if problem.must_play:
        if not oracle.wins_after(board, decision):
            raise AssertionError(f"positive problem: decision cell loses ({problem})")
        for cell in board.empty_cells():
            if cell != decision and oracle.wins_after(board, cell):
                raise AssertionError(
                    f"positive problem: {cell} also wins, decision not unique")
    else:
        for cell in board.empty_cells():
            if oracle.wins_after(board, cell):
                raise AssertionError(
                    f"negative problem: {cell} wins, position is not lost")


def problem_suite(sizes: Iterable[int], verify: Optional[bool] = None) -> list[LongRangeProblem]:
    out = []
    for size in sizes:
        for color in (Color.RED, Color.BLUE):
            for polarity in (POSITIVE, NEGATIVE):
                out.append(gen_long_range(size, color, polarity, verify=verify))
    return out


@dataclass
class LongRangeReport:
    agent: str
    per_size: dict            # size -> [errors, problems]
    mistakes: list            # (size, color, polarity, chosen cell)

    @property
    def total_errors(self) -> int:
        return sum(e for e, _ in self.per_size.values())

    def errors_for(self, sizes: Sequence[int]) -> int:
        return sum(self.per_size[s][0] for s in sizes if s in self.per_size)

    def to_rows(self) -> list[dict]:
        rows = []
        for size in sorted(self.per_size):
            errors, count = self.per_size[size]
            rows.append({"agent": self.agent, "size": size,
                         "errors": errors, "problems": count})
        rows.append({"agent": self.agent, "size": "sum",
                     "errors": self.total_errors,
                     "problems": sum(c for _, c in self.per_size.values())})
        return rows


def eval_long_range(agent, sizes: Iterable[int],
                    problems: Optional[list[LongRangeProblem]] = None,
                    verify: Optional[bool] = None) -> LongRangeReport:
    """Score an agent: a positive problem is failed by not choosing the
    decision cell, a negative one by choosing it."""
    if problems is None:
        problems = problem_suite(sizes, verify=verify)
    per_size: dict = {}
    mistakes = []
    for p in problems:
        chosen = Cell(*agent.best_move(p.board))
        wrong = (chosen != p.decision_cell) if p.must_play else (chosen == p.decision_cell)
        errors, count = per_size.get(p.size, (0, 0))
        per_size[p.size] = (errors + int(wrong), count + 1)
        if wrong:
            mistakes.append((p.size, p.color.name.lower(), p.polarity,
                             hexboard.cell_name(chosen)))
    return LongRangeReport(agent=getattr(agent, "name", "agent"),
                           per_size=per_size, mistakes=mistakes)
