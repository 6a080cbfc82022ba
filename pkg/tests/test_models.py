import os

import numpy as np
import pytest

from hexgraph import board as hb
from hexgraph import models
from hexgraph import shannon as sh
from hexgraph.board import Cell, Color
from hexgraph.errors import FormatError, InvalidStateError
from hexgraph.shannon import GraphEncoding, Player


def random_encoding(rng, n_min=5, n_max=14):
    n = int(rng.integers(n_min, n_max))
    feats = np.zeros((n, 2), dtype=np.float32)
    feats[0, 0] = 1.0
    feats[1, 1] = 1.0
    edges = [(u, v) for u in range(n) for v in range(n) if u != v and rng.random() < 0.35]
    if not edges:
        edges = [(0, 2), (2, 0)]
    src = np.array([e[0] for e in edges], dtype=np.int32)
    dst = np.array([e[1] for e in edges], dtype=np.int32)
    to_move = Player.SHORT if rng.random() < 0.5 else Player.CUT
    return GraphEncoding(edge_index=np.stack([src, dst]), features=feats, to_move=to_move)


def test_desk_configs_parameter_matched():
    gq = models.build_model("graph_q", seed=0)
    cq = models.build_model("conv_q", seed=0)
    diff = abs(gq.num_parameters() - cq.num_parameters()) / gq.num_parameters()
    assert diff < 0.05


def test_reference_configs_build():
    ref_g = models.GraphQConfig.reference()
    assert ref_g.body_layers == 15
    ref_c = models.ConvQConfig.reference()
    assert ref_c.blocks == 10
    m = models.build_model("graph_q", {"body_layers": 15, "width": 8})
    assert len(m.body.layers) == 15


def test_dueling_combiner_example():
    # V=0.3, A=[0.5,-0.2] -> Q=[0.3,-0.4]
    v = 0.3
    a = np.array([0.5, -0.2])
    q = v + a - a.max()
    assert np.allclose(q, [0.3, -0.4])


def test_dueling_identities_random_states():
    rng = np.random.default_rng(0)
    model = models.build_model("graph_q", {"body_layers": 2, "width": 8,
                                           "value_hidden": (16, 8)}, seed=1)
    for _ in range(100):
        enc = random_encoding(rng)
        q, v, a = model.q_values(enc)
        playable = enc.playable_ids()
        assert abs(q[playable].max() - v) < 1e-5
        assert playable[np.argmax(q[playable])] == playable[np.argmax(a[playable])]
        assert a.min() >= -2.0 and a.max() <= 2.0
        assert -1.0 <= v <= 1.0


def test_ranges_hold_for_arbitrary_parameters():
    """tanh scaling bounds A and V regardless of parameter magnitudes."""
    rng = np.random.default_rng(21)
    model = models.build_model("graph_q", {"body_layers": 2, "width": 8,
                                           "value_hidden": (8, 8)}, seed=22)
    for _, p in model.named_parameters():
        p.data = rng.normal(scale=50.0, size=p.data.shape).astype(np.float32)
    for _ in range(20):
        enc = random_encoding(rng)
        _, v, a = model.q_values(enc)
        assert -2.0 <= a.min() and a.max() <= 2.0
        assert -1.0 <= v <= 1.0


def test_terminal_only_graph_rejected():
    model = models.build_model("graph_q", seed=0)
    feats = np.zeros((2, 2), dtype=np.float32)
    feats[0, 0] = feats[1, 1] = 1.0
    enc = GraphEncoding(edge_index=np.zeros((2, 0), dtype=np.int32),
                        features=feats, to_move=Player.SHORT)
    with pytest.raises(InvalidStateError):
        model.q_values(enc)


def test_q_permutation_equivariance():
    rng = np.random.default_rng(2)
    model = models.build_model("graph_q", {"body_layers": 3, "width": 16,
                                           "value_hidden": (16, 8)}, seed=3)
    for _ in range(30):
        enc = random_encoding(rng)
        n = enc.num_nodes
        q, v, _ = model.q_values(enc)
        perm = rng.permutation(n)
        inv = np.empty(n, dtype=np.int64)
        inv[perm] = np.arange(n)
        enc_p = GraphEncoding(edge_index=inv[enc.edge_index],
                              features=enc.features[perm], to_move=enc.to_move)
        q_p, v_p, _ = model.q_values(enc_p)
        finite = np.isfinite(q[perm]) & np.isfinite(q_p)
        assert np.max(np.abs(q_p[finite] - q[perm][finite])) < 1e-5
        assert abs(v_p - v) < 1e-5


def test_head_switching_changes_and_restores():
    rng = np.random.default_rng(4)
    model = models.build_model("graph_q", seed=5)
    enc = random_encoding(rng)
    enc.to_move = Player.SHORT
    q1, v1, _ = model.q_values(enc)
    enc.to_move = Player.CUT
    q2, v2, _ = model.q_values(enc)
    assert not np.array_equal(q1, q2) or v1 != v2
    enc.to_move = Player.SHORT
    q3, v3, _ = model.q_values(enc)
    assert np.array_equal(q1, q3) and v1 == v3


def test_policy_value_outputs():
    model = models.build_model("graph_pv", seed=6)
    g = sh.from_board(hb.new_board(5), Color.RED)
    pi, v = model.policy_value(sh.encode(g))
    assert abs(pi.sum() - 1.0) < 1e-6
    assert pi[0] == 0.0 and pi[1] == 0.0
    assert -1.0 <= v <= 1.0


def test_policy_uniform_for_equal_logits():
    model = models.build_model("graph_pv", seed=7)
    for _, p in model.named_parameters():
        p.data[:] = 0.0
    g = sh.from_board(hb.new_board(4), Color.RED)
    pi, v = model.policy_value(sh.encode(g))
    playable = pi[2:]
    assert np.allclose(playable, 1.0 / len(playable), atol=1e-7)
    assert v == 0.0


def test_conv_q_shapes_and_masking():
    model = models.build_model("conv_q", seed=8)
    b = hb.play(hb.new_board(5), Cell(2, 2))
    q = model.q_board(b)
    assert q.shape == (5, 5)
    assert q[2, 2] == -np.inf
    assert np.isfinite(q[0, 0])


def test_conv_q_any_board_size():
    model = models.build_model("conv_q", seed=9)
    for n in (7, 9):
        assert model.q_board(hb.new_board(n)).shape == (n, n)


def test_conv_q_zero_weights_zero_output():
    model = models.build_model("conv_q", seed=10)
    for _, p in model.named_parameters():
        p.data[:] = 0.0
    q = model.q_board(hb.new_board(5))
    assert np.allclose(q[np.isfinite(q)], 0.0)


def test_conv_q_translation_equivariance_interior():
    model = models.build_model("conv_q", seed=11)
    n = 25
    base = hb.from_position(n, red=[Cell(11, 11), Cell(12, 11)], blue=[Cell(11, 12)],
                            to_move=Color.RED)
    shifted = hb.from_position(n, red=[Cell(12, 12), Cell(13, 12)], blue=[Cell(12, 13)],
                               to_move=Color.RED)
    qb = model.q_board(base)
    qs = model.q_board(shifted)
    # compare a window far from every border: response must shift with input
    win_b = qb[9:15, 9:15].copy()
    win_s = qs[10:16, 10:16].copy()
    win_b[~np.isfinite(win_b)] = 0
    win_s[~np.isfinite(win_s)] = 0
    assert np.max(np.abs(win_b - win_s)) < 1e-5


def test_checkpoint_roundtrip_bitwise(tmp_path):
    rng = np.random.default_rng(12)
    for arch in ("graph_q", "graph_pv"):
        model = models.build_model(arch, {"body_layers": 2, "width": 8,
                                          "value_hidden": (8, 4)}, seed=13)
        path = os.path.join(tmp_path, f"{arch}.json")
        models.save(model, path, meta={"steps": 7})
        loaded = models.load(path)
        assert loaded.meta["steps"] == 7
        for _ in range(20):
            enc = random_encoding(rng)
            if arch == "graph_q":
                q1, v1, a1 = model.q_values(enc)
                q2, v2, a2 = loaded.q_values(enc)
                assert np.array_equal(q1, q2) and v1 == v2 and np.array_equal(a1, a2)
            else:
                p1, v1 = model.policy_value(enc)
                p2, v2 = loaded.policy_value(enc)
                assert np.array_equal(p1, p2) and v1 == v2
    conv = models.build_model("conv_q", {"channels": 6, "blocks": 1}, seed=14)
    path = os.path.join(tmp_path, "conv.json")
    models.save(conv, path)
    loaded = models.load(path)
    for n in (5, 7):
        b = hb.new_board(n)
        assert np.array_equal(conv.q_board(b), loaded.q_board(b))


def test_checkpoint_truncated_file(tmp_path):
    model = models.build_model("graph_q", {"body_layers": 1, "width": 4,
                                           "value_hidden": (4, 4)}, seed=0)
    path = os.path.join(tmp_path, "m.json")
    models.save(model, path)
    with open(path) as fh:
        raw = fh.read()
    with open(path, "w") as fh:
        fh.write(raw[:len(raw) // 2])
    with pytest.raises(FormatError):
        models.load(path)


def test_checkpoint_unknown_version(tmp_path):
    path = os.path.join(tmp_path, "m.json")
    with open(path, "w") as fh:
        fh.write('{"format_version": 99, "arch": {"type": "graph_q"}, "params": {}}')
    with pytest.raises(FormatError, match="99"):
        models.load(path)
