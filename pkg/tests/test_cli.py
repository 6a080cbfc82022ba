import json
import os

import numpy as np
import pytest

from hexgraph import cli, models


def test_unknown_subcommand_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["frobnicate"])
    assert exc.value.code == 2


def test_missing_required_flag_exits_2():
    with pytest.raises(SystemExit) as exc:
        cli.main(["selfplay-data", "--games", "1"])  # --out missing
    assert exc.value.code == 2


def test_solve_command_reports_first_player_win(capsys):
    assert cli.main(["solve", "--size", "3"]) == 0
    out = capsys.readouterr().out
    assert "first player win" in out


def test_solve_command_with_moves(capsys):
    assert cli.main(["solve", "--size", "3", "--moves", "b2"]) == 0
    out = capsys.readouterr().out
    assert "blue to move" in out


def test_selfplay_data_and_supervised_roundtrip(tmp_path, capsys):
    data = str(tmp_path / "teacher.jsonl")
    rc = cli.main(["selfplay-data", "--seed", "0", "--games", "4", "--size", "4",
                   "--sims", "8", "--out", data])
    assert rc == 0
    assert os.path.exists(data)
    out_dir = str(tmp_path / "sup")
    rc = cli.main(["supervised", "--seed", "0", "--data", data, "--epochs", "1",
                   "--lr", "1e-3", "--out", out_dir])
    assert rc == 0
    assert os.path.exists(os.path.join(out_dir, "model.json"))
    assert os.path.exists(os.path.join(out_dir, "history.csv"))
    assert os.path.exists(os.path.join(out_dir, "figures", "supervised.png"))


def test_train_dqn_writes_run_dir(tmp_path):
    out = str(tmp_path / "run")
    rc = cli.main(["train-dqn", "--seed", "1", "--size", "3", "--steps", "12",
                   "--batch-size", "8", "--log-interval", "6",
                   "--probe-games", "2", "--out", out])
    assert rc == 0
    assert os.path.exists(os.path.join(out, "config.json"))
    assert os.path.exists(os.path.join(out, "metrics.jsonl"))
    assert os.path.exists(os.path.join(out, "metrics.csv"))
    assert os.path.exists(os.path.join(out, "checkpoints", "initial.json"))
    assert os.path.exists(os.path.join(out, "checkpoints", "final.json"))
    assert os.path.exists(os.path.join(out, "figures", "training.png"))
    with open(os.path.join(out, "config.json")) as fh:
        cfg = json.load(fh)
    assert cfg["seed"] == 1 and cfg["board_size"] == 3


def test_tournament_command(tmp_path, capsys):
    out = str(tmp_path / "t")
    rc = cli.main(["tournament", "--agents", "random,oracle", "--size", "3",
                   "--openings", "2", "--seed", "0", "--out", out])
    assert rc == 0
    printed = capsys.readouterr().out
    assert "4 games" in printed
    assert os.path.exists(os.path.join(out, "win_matrix.csv"))
    assert os.path.exists(os.path.join(out, "games.jsonl"))
    assert os.path.exists(os.path.join(out, "figures", "win_matrix.png"))
    assert os.path.exists(os.path.join(out, "figures", "game_profile.png"))


def test_eval_longrange_command(tmp_path, capsys):
    ckpt = str(tmp_path / "net.json")
    models.save(models.build_model("graph_q", {"body_layers": 1, "width": 8,
                                               "value_hidden": (8, 8)}, seed=0), ckpt)
    out = str(tmp_path / "lr")
    rc = cli.main(["eval-longrange", "--ckpt", ckpt, "--sizes", "8..9", "--out", out])
    assert rc == 0
    printed = capsys.readouterr().out
    assert "sum" in printed
    assert os.path.exists(os.path.join(out, "longrange.csv"))
    assert os.path.exists(os.path.join(out, "longrange.json"))
    assert os.path.exists(os.path.join(out, "figures", "longrange.png"))


def test_parse_sizes():
    assert cli._parse_sizes("6..9") == [6, 7, 8, 9]
    assert cli._parse_sizes("6,8,10") == [6, 8, 10]
    assert cli._parse_sizes("6..7,10") == [6, 7, 10]


def test_train_azero_command(tmp_path, capsys):
    out = str(tmp_path / "az")
    rc = cli.main(["train-azero", "--seed", "2", "--size", "3", "--sims", "8",
                   "--games", "2", "--epochs", "1", "--sgd-epochs", "1",
                   "--gate-openings", "1", "--out", out])
    assert rc == 0
    assert os.path.exists(os.path.join(out, "lineage.json"))
    assert os.path.exists(os.path.join(out, "lineage.csv"))
    assert os.path.exists(os.path.join(out, "checkpoints", "epoch1.json"))
