import numpy as np
import pytest

from hexgraph import board as hb
from hexgraph import shannon as sh
from hexgraph.board import Cell, Color
from hexgraph.errors import IllegalMoveError, InvalidStateError
from hexgraph.shannon import GameStatus, Player, ShannonGraph


def oracle_graph(board, perspective):
    """Independent construction: entities are uncolored cells and the two
    perspective borders; two entities are adjacent iff they touch directly or
    are linked through a chain of perspective-colored stones (BFS)."""
    n = board.size
    stone = perspective.stone

    def entity(cell):
        if board.cells[cell.row, cell.col] == hb.EMPTY:
            return ("cell", cell)
        return None

    def border_entities(cell):
        out = []
        if perspective is Color.RED:
            if cell.row == 0:
                out.append(("t", 1))
            if cell.row == n - 1:
                out.append(("t", 2))
        else:
            if cell.col == 0:
                out.append(("t", 1))
            if cell.col == n - 1:
                out.append(("t", 2))
        return out

    entities = set()
    for r in range(n):
        for c in range(n):
            e = entity(Cell(r, c))
            if e:
                entities.add(e)
    entities |= {("t", 1), ("t", 2)}

    def reachable_from(start_cell):
        """Entities reachable from a cell/border seed through stones."""
        found = set()
        seen_stones = set()
        stack = [start_cell]
        while stack:
            cur = stack.pop()
            for nb in hb.neighbors(cur, n):
                v = board.cells[nb.row, nb.col]
                if v == hb.EMPTY:
                    found.add(("cell", nb))
                elif v == stone and nb not in seen_stones:
                    seen_stones.add(nb)
                    found |= set(border_entities(nb))
                    stack.append(nb)
        return found

    edges = set()
    for r in range(n):
        for c in range(n):
            cell = Cell(r, c)
            if board.cells[r, c] != hb.EMPTY:
                continue
            here = ("cell", cell)
            for e in border_entities(cell):
                edges.add(frozenset((here, e)))
            for nb in hb.neighbors(cell, n):
                v = board.cells[nb.row, nb.col]
                if v == hb.EMPTY:
                    edges.add(frozenset((here, ("cell", nb))))
            for other in reachable_from(cell):
                if other != here:
                    edges.add(frozenset((here, other)))
    # borders linked through stone chains touching the border
    for r in range(n):
        for c in range(n):
            if board.cells[r, c] == stone:
                starts = border_entities(Cell(r, c))
                if starts:
                    reach = reachable_from(Cell(r, c)) | set(starts)
                    for a in starts:
                        for b in reach:
                            if a != b:
                                edges.add(frozenset((a, b)))
    return entities, edges


def graphs_equal(graph, board, perspective):
    entities, edges = oracle_graph(board, perspective)
    if graph.num_nodes != len(entities):
        return False
    def ent(v):
        if v == 0:
            return ("t", 1)
        if v == 1:
            return ("t", 2)
        return ("cell", Cell(*graph.labels[v]))
    got = set()
    for u in range(graph.num_nodes):
        for v in graph.neighbors(u):
            if u < v:
                got.add(frozenset((ent(u), ent(v))))
    return got == edges


def test_empty_5x5_structure():
    g = sh.from_board(hb.new_board(5), Color.RED)
    assert g.num_nodes == 27
    assert g.edge_count() == 66
    assert g.degree(0) == 5 and g.degree(1) == 5
    assert g.to_move is Player.SHORT
    assert g.status() is GameStatus.ONGOING


def test_from_board_matches_oracle_on_random_positions():
    rng = np.random.default_rng(11)
    for _ in range(40):
        n = int(rng.integers(3, 7))
        b = hb.new_board(n)
        for _ in range(int(rng.integers(0, n * n // 2))):
            moves = b.empty_cells()
            b = hb.play(b, moves[int(rng.integers(len(moves)))], check_winner=False)
            if hb.winner(b) is not None:
                break
        if hb.winner(b) is not None:
            continue
        for persp in (Color.RED, Color.BLUE):
            assert graphs_equal(sh.from_board(b, persp), b, persp)


def test_from_board_rejects_won_position():
    b = hb.from_position(4, red=[Cell(r, 0) for r in range(4)])
    with pytest.raises(InvalidStateError):
        sh.from_board(b, Color.RED)


def test_to_move_follows_perspective():
    b = hb.play(hb.new_board(5), Cell(0, 0))
    assert sh.from_board(b, Color.RED).to_move is Player.CUT
    assert sh.from_board(b, Color.BLUE).to_move is Player.SHORT


def test_join_path_wins():
    g = ShannonGraph.from_edges(3, [(0, 2), (2, 1)], to_move=Player.SHORT)
    g2 = g.join(2)
    assert g2.status() is GameStatus.SHORT_WINS
    assert g2.num_nodes == 2
    assert g.num_nodes == 3  # pure op


def test_join_builds_clique():
    # v=2 with neighbors {3,4,5}: join connects them pairwise
    g = ShannonGraph.from_edges(6, [(2, 3), (2, 4), (2, 5), (0, 3), (1, 4)],
                                to_move=Player.SHORT)
    g2 = g.join(2)
    assert g2.num_nodes == 5
    labels = {g2.labels[i]: i for i in range(g2.num_nodes)}
    n3, n4, n5 = labels["n3"], labels["n4"], labels["n5"]
    for u, v in [(n3, n4), (n3, n5), (n4, n5)]:
        assert g2.has_edge(u, v)


def test_cut_path_disconnects():
    g = ShannonGraph.from_edges(3, [(0, 2), (2, 1)], to_move=Player.CUT)
    g2 = g.cut(2)
    assert g2.status() is GameStatus.CUT_WINS


def test_cut_leaf_keeps_connectivity():
    g = ShannonGraph.from_edges(4, [(0, 2), (2, 1), (2, 3)], to_move=Player.CUT)
    g2 = g.cut(3)
    assert g2.status() is GameStatus.ONGOING


def test_moves_decrease_node_count_by_one():
    g = sh.from_board(hb.new_board(4), Color.RED)
    rng = np.random.default_rng(3)
    count = g.num_nodes
    while g.status() is GameStatus.ONGOING:
        g = g.move(int(rng.integers(2, g.num_nodes)))
        count -= 1
        assert g.num_nodes == count


def test_nodes_after_k_moves_formula():
    n = 5
    b = hb.new_board(n)
    g = sh.from_board(b, Color.RED)
    rng = np.random.default_rng(5)
    for k in range(1, 10):
        moves = b.empty_cells()
        cell = moves[int(rng.integers(len(moves)))]
        b = hb.play(b, cell, check_winner=False)
        if hb.winner(b) is not None:
            break
        g.apply_move(g.node_for_cell(cell))
        assert g.num_nodes == n * n + 2 - k


def test_move_validation():
    g = sh.from_board(hb.new_board(4), Color.RED)
    with pytest.raises(IllegalMoveError):
        g.join(0)  # terminal
    with pytest.raises(IllegalMoveError):
        g.cut(2)   # wrong player
    with pytest.raises(IllegalMoveError):
        g.join(99)


def test_dual_consistency_on_playouts():
    rng = np.random.default_rng(17)
    for _ in range(60):
        n = int(rng.integers(3, 6))
        b = hb.new_board(n)
        gr = sh.from_board(b, Color.RED)
        gb = sh.from_board(b, Color.BLUE)
        winner = None
        while winner is None:
            moves = b.empty_cells()
            cell = moves[int(rng.integers(len(moves)))]
            gr.apply_move(gr.node_for_cell(cell))
            gb.apply_move(gb.node_for_cell(cell))
            b = hb.play(b, cell, check_winner=False)
            winner = hb.winner(b)
        if winner is Color.RED:
            assert gr.status() is GameStatus.SHORT_WINS
            assert gb.status() is GameStatus.CUT_WINS
        else:
            assert gr.status() is GameStatus.CUT_WINS
            assert gb.status() is GameStatus.SHORT_WINS


def test_encode_shapes_and_symmetry():
    g = sh.from_board(hb.new_board(5), Color.RED)
    enc = sh.encode(g)
    assert enc.features.shape == (27, 2)
    assert enc.features.sum() == 2.0
    assert enc.edge_index.shape == (2, 132)
    pairs = set(map(tuple, enc.edge_index.T))
    assert all((v, u) in pairs for u, v in pairs)
    assert list(enc.playable_ids()) == list(range(2, 27))


def test_dump_roundtrip():
    g = sh.from_board(hb.play(hb.new_board(4), Cell(1, 1)), Color.RED)
    d = g.dump()
    assert d["to_move"] == "cut"
    assert d["perspective"] == "red"
    g2 = ShannonGraph.from_dump(g.dump_json())
    assert g2.num_nodes == g.num_nodes
    assert g2.edge_count() == g.edge_count()
    assert g2.to_move is g.to_move
    assert sorted(map(tuple, d["edges"])) == sorted(map(tuple, g2.dump()["edges"]))


def test_neighbors_sorted():
    g = sh.from_board(hb.new_board(4), Color.RED)
    for v in range(g.num_nodes):
        nb = g.neighbors(v)
        assert nb == sorted(nb)
