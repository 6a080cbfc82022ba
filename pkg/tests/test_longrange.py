import numpy as np
import pytest

from hexgraph import board as hb
from hexgraph import longrange as lr
from hexgraph.board import Cell, Color
from hexgraph.errors import InvalidArgumentError


def test_generation_deterministic():
    a = lr.gen_long_range(9, Color.RED, lr.POSITIVE, verify=False)
    b = lr.gen_long_range(9, Color.RED, lr.POSITIVE, verify=False)
    assert np.array_equal(a.board.cells, b.board.cells)
    assert a.decision_cell == b.decision_cell
    assert a.toggle_cell == b.toggle_cell


def test_pair_differs_only_at_toggle():
    for color in (Color.RED, Color.BLUE):
        pos = lr.gen_long_range(10, color, lr.POSITIVE, verify=False)
        neg = lr.gen_long_range(10, color, lr.NEGATIVE, verify=False)
        diff = np.argwhere(pos.board.cells != neg.board.cells)
        assert len(diff) == 1
        assert Cell(*diff[0]) == pos.toggle_cell
        assert neg.board.cell(neg.toggle_cell) == hb.EMPTY


def test_four_problems_per_size():
    problems = lr.problem_suite([8], verify=False)
    assert len(problems) == 4
    kinds = {(p.color, p.polarity) for p in problems}
    assert len(kinds) == 4


def test_72_problems_sizes_8_to_25():
    problems = lr.problem_suite(range(8, 26), verify=False)
    assert len(problems) == 72


def test_size_range_enforced():
    with pytest.raises(InvalidArgumentError):
        lr.gen_long_range(5, Color.RED, lr.POSITIVE)
    with pytest.raises(InvalidArgumentError):
        lr.gen_long_range(26, Color.RED, lr.POSITIVE)


def test_mover_and_decision_corners():
    red = lr.gen_long_range(8, Color.RED, lr.POSITIVE, verify=False)
    assert red.board.to_move is Color.RED
    assert red.decision_cell == Cell(7, 0)
    assert red.toggle_cell == Cell(0, 1)
    blue = lr.gen_long_range(8, Color.BLUE, lr.POSITIVE, verify=False)
    assert blue.board.to_move is Color.BLUE
    assert blue.decision_cell == Cell(7, 0)  # reflection fixed point
    assert blue.toggle_cell == Cell(6, 7)
    assert np.array_equal(blue.board.cells, _reflect_swap(red.board.cells))


def _reflect_swap(cells):
    n = cells.shape[0]
    out = np.zeros_like(cells)
    for r in range(n):
        for c in range(n):
            v = cells[r, c]
            out[n - 1 - c, n - 1 - r] = {0: 0, 1: 2, 2: 1}[int(v)]
    return out


def test_labels_verified_at_size_6():
    for color in (Color.RED, Color.BLUE):
        for pol in (lr.POSITIVE, lr.NEGATIVE):
            lr.gen_long_range(6, color, pol)  # verify defaults on at <= 7


class AlwaysDecision:
    name = "always_decision"

    def best_move(self, board, rng=None):
        return Cell(board.size - 1, 0)


class NeverDecision:
    name = "never_decision"

    def best_move(self, board, rng=None):
        for cell in board.empty_cells():
            if cell != Cell(board.size - 1, 0):
                return cell
        return board.empty_cells()[0]


def test_always_decision_agent_fails_all_negatives():
    report = lr.eval_long_range(AlwaysDecision(), [8, 9], verify=False)
    # half of the problems are negative, and those are exactly the errors
    assert report.total_errors == 4
    assert all(pol == lr.NEGATIVE for _, _, pol, _ in report.mistakes)


def test_never_decision_agent_fails_all_positives():
    report = lr.eval_long_range(NeverDecision(), [8, 9], verify=False)
    assert report.total_errors == 4
    assert all(pol == lr.POSITIVE for _, _, pol, _ in report.mistakes)


def test_report_rows_include_sum():
    report = lr.eval_long_range(AlwaysDecision(), [8], verify=False)
    rows = report.to_rows()
    assert rows[-1]["size"] == "sum"
    assert rows[-1]["errors"] == report.total_errors
    assert report.errors_for([8]) == report.per_size[8][0]
