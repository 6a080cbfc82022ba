"""Command-line entry points.

Every run writes its fully resolved configuration next to its outputs, and
report paths emit figures alongside the delimited tables. Flags can be
seeded from HEXGRAPH_* environment variables (flags win).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
import time
from typing import Optional

import numpy as np

from . import agents as agents_mod
from . import azero as azero_mod
from . import board as hexboard
from . import dqn as dqn_mod
from . import evaluation, longrange, models, report, shannon, solver
from .board import Color
from .errors import HexgraphError


def _env(name: str, default=None):
    return os.environ.get(f"HEXGRAPH_{name.upper()}", default)


def _run_dir(base: Optional[str], seed: int, kind: str) -> str:
    if base:
        path = base
    else:
        stamp = time.strftime("%Y%m%d-%H%M%S")
        path = os.path.join(_env("RUNS_DIR", "runs"), f"{stamp}-{kind}-seed{seed}")
    os.makedirs(path, exist_ok=True)
    return path


def _parse_sizes(spec: str) -> list[int]:
    sizes: list[int] = []
    for part in spec.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..")
            sizes.extend(range(int(lo), int(hi) + 1))
        elif part:
            sizes.append(int(part))
    return sizes


def _load_agent(spec: str, mode: str, simulations: int):
    if spec == "random":
        return agents_mod.RandomAgent()
    if spec == "oracle":
        return agents_mod.OracleAgent(max_playable=None)
    model = models.load(spec)
    name = os.path.splitext(os.path.basename(spec))[0]
    if mode == "mcts":
        if not isinstance(model, models.GraphPVModel):
            raise HexgraphError("mcts mode needs a policy/value checkpoint")
        return agents_mod.MctsAgent(agents_mod.NetEvaluator(model), simulations, name=name)
    return agents_mod.agent_for_model(model, name=name)


def cmd_train_dqn(args) -> int:
    out = _run_dir(args.out, args.seed, "dqn")
    config = dqn_mod.DqnConfig(
        board_size=args.size, game=args.game, seed=args.seed,
        total_steps=args.steps, batch_size=args.batch_size, gamma=args.gamma,
        lr=args.lr, weight_decay=args.weight_decay,
        buffer_capacity=args.capacity, epsilon_start=args.epsilon_start,
        epsilon_end=args.epsilon_end, epsilon_decay_steps=args.epsilon_decay,
        target_sync_interval=args.sync_interval, alpha=args.alpha,
        beta_start=args.beta_start, beta_end=args.beta_end,
        steps_per_episode=args.steps_per_episode, pruning=args.pruning,
        huber_delta=args.huber_delta, min_buffer=args.min_buffer,
        log_interval=args.log_interval, probe_games=args.probe_games,
        checkpoint_interval=args.checkpoint_interval, workers=args.workers,
    )
    result = dqn_mod.train_dqn(config, out_dir=out)
    report.write_csv(result.metrics, os.path.join(out, "metrics.csv"))
    if result.metrics:
        report.plot_dqn_metrics(result.metrics, os.path.join(report.figures_dir(out), "training.png"))
    print(f"trained {config.total_steps} steps -> {out}")
    if result.metrics:
        print(f"final win rate vs random: {result.metrics[-1]['winrate_vs_random']:.2f}")
    return 0


def cmd_train_azero(args) -> int:
    out = _run_dir(args.out, args.seed, "azero")
    config = azero_mod.AzConfig(
        board_size=args.size, simulations=args.sims, games_per_epoch=args.games,
        epochs=args.epochs, seed=args.seed, sgd_epochs=args.sgd_epochs,
        lr=args.lr, gate_openings=args.gate_openings,
    )
    result = azero_mod.train_azero(config, init_checkpoint=args.init, out_dir=out)
    rows = [{k: e[k] for k in ("epoch", "samples", "gate_win_rate", "accepted")}
            for e in result.lineage]
    report.write_csv(rows, os.path.join(out, "lineage.csv"))
    print(report.format_table(rows))
    print(f"lineage -> {out}")
    return 0


def cmd_supervised(args) -> int:
    out = _run_dir(args.out, args.seed, "supervised")
    dataset = _load_teacher_jsonl(args.data)
    model = models.build_model(args.arch, seed=args.seed)
    history = evaluation.supervised_train(
        model, dataset, epochs=args.epochs, lr=args.lr,
        weight_decay=args.weight_decay, batch_size=args.batch_size, seed=args.seed)
    models.save(model, os.path.join(out, "model.json"), meta={"seed": args.seed})
    report.write_csv(history, os.path.join(out, "history.csv"))
    report.plot_supervised({args.arch: history},
                           os.path.join(report.figures_dir(out), "supervised.png"))
    last = history[-1]
    print(report.format_table([{k: round(v, 4) if isinstance(v, float) else v
                                for k, v in last.items()}]))
    print(f"model + history -> {out}")
    return 0


def cmd_selfplay_data(args) -> int:
    source = "rollout" if args.teacher == "rollout" else models.load(args.teacher)
    dataset = evaluation.gen_teacher_dataset(
        source, n_games=args.games, size=args.size,
        simulations=args.sims, seed=args.seed)
    dataset.save_jsonl(args.out)
    print(f"{len(dataset.train)} train / {len(dataset.val)} val samples -> {args.out}")
    return 0


def cmd_eval_longrange(args) -> int:
    sizes = _parse_sizes(args.sizes)
    reports = []
    for spec in args.ckpt.split(","):
        agent = _load_agent(spec.strip(), args.mode, args.sims)
        reports.append(longrange.eval_long_range(agent, sizes, verify=args.verify))
    rows = [row for r in reports for row in r.to_rows()]
    print(report.format_table(rows))
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        report.write_csv(rows, os.path.join(args.out, "longrange.csv"))
        report.write_json([{"agent": r.agent,
                            "per_size": {str(k): list(v) for k, v in r.per_size.items()},
                            "mistakes": r.mistakes} for r in reports],
                          os.path.join(args.out, "longrange.json"))
        report.plot_longrange(reports, os.path.join(report.figures_dir(args.out), "longrange.png"))
        print(f"tables + figure -> {args.out}")
    return 0


def cmd_tournament(args) -> int:
    specs = [s.strip() for s in args.agents.split(",")]
    agent_list = [_load_agent(s, args.mode, args.sims) for s in specs]
    rng = np.random.default_rng(args.seed)
    openings = hexboard.unique_openings(args.size)
    if args.openings:
        openings = openings[:args.openings]
    result = evaluation.tournament(agent_list, args.size, openings=openings, rng=rng,
                                   keep_records=bool(args.out))
    rows = result.matrix_rows()
    print(f"{result.total_games()} games on {args.size}x{args.size}")
    print(report.format_table(rows))
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        report.write_csv(rows, os.path.join(args.out, "win_matrix.csv"))
        report.write_json({f"{a} vs {b}": w for (a, b), w in result.wins.items()},
                          os.path.join(args.out, "wins.json"))
        with open(os.path.join(args.out, "games.jsonl"), "w") as fh:
            for rec in result.games:
                fh.write(rec.to_json() + "\n")
        report.plot_win_matrix(result, os.path.join(report.figures_dir(args.out), "win_matrix.png"))
        if result.games:
            report.plot_game_profile(result.games[0],
                                     os.path.join(report.figures_dir(args.out), "game_profile.png"))
        print(f"tables + figures -> {args.out}")
    return 0


def cmd_solve(args) -> int:
    board = hexboard.new_board(args.size)
    if args.moves:
        for name in args.moves.split(","):
            board = hexboard.play(board, hexboard.parse_cell(name.strip()))
    graph = shannon.from_board(board, Color.RED)
    value = solver.solve(graph, max_playable=args.max_nodes, use_pruning=True)
    mover = "red" if board.to_move is Color.RED else "blue"
    short_is_mover = (board.to_move is Color.RED)
    mover_wins = (value is shannon.GameStatus.SHORT_WINS) == short_is_mover
    print(f"{args.size}x{args.size} after [{args.moves or ''}]: "
          f"{mover} to move {'wins' if mover_wins else 'loses'} with perfect play "
          f"({'first player win' if mover_wins and not args.moves else value.value})")
    return 0


def cmd_serve(args) -> int:
    from . import service
    return service.run(port=args.port, ckpt_dir=args.ckpt_dir, host=args.host)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hexgraph",
                                     description="Hex on Shannon vertex-switching graphs")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train-dqn", help="self-play Q-learning")
    p.add_argument("--seed", type=int, required=_env("SEED") is None,
                   default=int(_env("SEED", 0)))
    p.add_argument("--size", type=int, default=5)
    p.add_argument("--game", choices=["graph", "planes"], default="graph")
    p.add_argument("--steps", type=int, default=2000)
    p.add_argument("--batch-size", type=int, default=64)
    p.add_argument("--gamma", type=float, default=0.98)
    p.add_argument("--lr", type=float, default=1e-3)
    p.add_argument("--weight-decay", type=float, default=0.0)
    p.add_argument("--capacity", type=int, default=50000)
    p.add_argument("--epsilon-start", type=float, default=1.0)
    p.add_argument("--epsilon-end", type=float, default=0.05)
    p.add_argument("--epsilon-decay", type=int, default=20000)
    p.add_argument("--sync-interval", type=int, default=500)
    p.add_argument("--alpha", type=float, default=0.6)
    p.add_argument("--beta-start", type=float, default=0.4)
    p.add_argument("--beta-end", type=float, default=1.0)
    p.add_argument("--steps-per-episode", type=int, default=4)
    p.add_argument("--pruning", action="store_true")
    p.add_argument("--huber-delta", type=float, default=1.0)
    p.add_argument("--min-buffer", type=int, default=200)
    p.add_argument("--log-interval", type=int, default=200)
    p.add_argument("--probe-games", type=int, default=20)
    p.add_argument("--checkpoint-interval", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default=_env("OUT"))
    p.set_defaults(fn=cmd_train_dqn)

    p = sub.add_parser("train-azero", help="search self-play training with gating")
    p.add_argument("--seed", type=int, required=_env("SEED") is None,
                   default=int(_env("SEED", 0)))
    p.add_argument("--size", type=int, default=5)
    p.add_argument("--sims", type=int, default=64)
    p.add_argument("--games", type=int, default=200)
    p.add_argument("--epochs", type=int, default=5)
    p.add_argument("--sgd-epochs", type=int, default=2)
    p.add_argument("--lr", type=float, default=1e-3)
    p.add_argument("--gate-openings", type=int, default=None)
    p.add_argument("--init", default=None, help="checkpoint to start from")
    p.add_argument("--out", default=_env("OUT"))
    p.set_defaults(fn=cmd_train_azero)

    p = sub.add_parser("supervised", help="imitation training on teacher games")
    p.add_argument("--seed", type=int, required=_env("SEED") is None,
                   default=int(_env("SEED", 0)))
    p.add_argument("--data", required=True, help="teacher dataset JSONL")
    p.add_argument("--arch", choices=["graph_pv", "conv_q"], default="graph_pv")
    p.add_argument("--epochs", type=int, default=30)
    p.add_argument("--lr", type=float, default=1e-4)
    p.add_argument("--weight-decay", type=float, default=1e-4)
    p.add_argument("--batch-size", type=int, default=64)
    p.add_argument("--out", default=_env("OUT"))
    p.set_defaults(fn=cmd_supervised)

    p = sub.add_parser("selfplay-data", help="generate teacher games with search")
    p.add_argument("--seed", type=int, required=_env("SEED") is None,
                   default=int(_env("SEED", 0)))
    p.add_argument("--teacher", default="rollout", help="'rollout' or a pv checkpoint")
    p.add_argument("--games", type=int, default=100)
    p.add_argument("--size", type=int, default=7)
    p.add_argument("--sims", type=int, default=64)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_selfplay_data)

    p = sub.add_parser("eval-longrange", help="long-range dependency error table")
    p.add_argument("--ckpt", required=True,
                   help="comma list: checkpoint paths, 'random', or 'oracle'")
    p.add_argument("--sizes", default="6..13")
    p.add_argument("--mode", choices=["greedy", "mcts"], default="greedy")
    p.add_argument("--sims", type=int, default=200)
    p.add_argument("--verify", action="store_true", default=None)
    p.add_argument("--out", default=_env("OUT"))
    p.set_defaults(fn=cmd_eval_longrange)

    p = sub.add_parser("tournament", help="round-robin over unique openings")
    p.add_argument("--agents", required=True, help="comma list of checkpoints/'random'")
    p.add_argument("--size", type=int, default=8)
    p.add_argument("--mode", choices=["greedy", "mcts"], default="greedy")
    p.add_argument("--sims", type=int, default=200)
    p.add_argument("--openings", type=int, default=None, help="limit opening count")
    p.add_argument("--seed", type=int, default=int(_env("SEED", 0)))
    p.add_argument("--out", default=_env("OUT"))
    p.set_defaults(fn=cmd_tournament)

    p = sub.add_parser("solve", help="exact value of small positions")
    p.add_argument("--size", type=int, default=3)
    p.add_argument("--moves", default="", help="comma list like c1,b2")
    p.add_argument("--max-nodes", type=int, default=None)
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("serve", help="JSON-over-HTTP game service")
    p.add_argument("--port", type=int, default=int(_env("PORT", 8710)))
    p.add_argument("--host", default=_env("HOST", "127.0.0.1"))
    p.add_argument("--ckpt-dir", default=_env("CKPT_DIR", "checkpoints"))
    p.set_defaults(fn=cmd_serve)

    return parser


def _load_teacher_jsonl(path: str) -> evaluation.TeacherDataset:
    train, val = [], []
    size = None
    with open(path) as fh:
        for line in fh:
            d = json.loads(line)
            size = d["board"]["size"]
            graph = shannon.ShannonGraph.from_dump(d["graph"])
            sym = {".": 0, "r": 1, "b": 2}
            cells = np.array([sym[ch] for ch in d["board"]["cells"]],
                             dtype=np.int8).reshape(size, size)
            to_move = Color.RED if d["board"]["to_move"] == "red" else Color.BLUE
            pi_nodes = np.array(d["pi"], dtype=np.float32)
            pi_cells = np.zeros(size * size, dtype=np.float32)
            for k, v in d["pi_cells"].items():
                pi_cells[int(k)] = v
            sample = evaluation.TeacherSample(
                graph_snap=(tuple(graph.adj), graph.to_move),
                board_snap=(size, cells.tobytes(), to_move),
                pi_nodes=pi_nodes, pi_cells=pi_cells, z=float(d["z"]))
            (train if d["split"] == "train" else val).append(sample)
    if size is None:
        raise HexgraphError(f"no samples in {path}")
    return evaluation.TeacherDataset(size=size, train=train, val=val)


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except HexgraphError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
