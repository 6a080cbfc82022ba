"""Delimited reports and matplotlib figures for the CLI's report paths.

Every harness emits CSV/JSON tables; these helpers render the matching
figures next to them (training curves, error bars, win matrices, and the
shrinking-graph profile of a game).
"""

from __future__ import annotations

import csv
import json
import os
from typing import Optional

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from . import board as hexboard
from . import shannon
from .board import Color, GameRecord


def write_csv(rows: list[dict], path: str) -> None:
    if not rows:
        return
    fields: list[str] = []
    for row in rows:
        for key in row:
            if key not in fields:
                fields.append(key)
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields)
        writer.writeheader()
        writer.writerows(rows)


def write_json(obj, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2)


def format_table(rows: list[dict]) -> str:
    if not rows:
        return "(empty)"
    fields: list[str] = []
    for row in rows:
        for key in row:
            if key not in fields:
                fields.append(key)
    widths = {f: max(len(str(f)), max(len(str(r.get(f, ""))) for r in rows)) for f in fields}
    lines = ["  ".join(str(f).ljust(widths[f]) for f in fields)]
    for row in rows:
        lines.append("  ".join(str(row.get(f, "")).ljust(widths[f]) for f in fields))
    return "\n".join(lines)


def plot_dqn_metrics(metrics: list[dict], path: str) -> None:
    fig, axes = plt.subplots(1, 3, figsize=(12, 3.2))
    steps = [m["step"] for m in metrics]
    axes[0].plot(steps, [m["loss"] for m in metrics])
    axes[0].set_xlabel("step")
    axes[0].set_ylabel("loss")
    axes[1].plot(steps, [m["epsilon"] for m in metrics])
    axes[1].set_xlabel("step")
    axes[1].set_ylabel("epsilon")
    axes[2].plot(steps, [m["winrate_vs_random"] for m in metrics])
    axes[2].set_xlabel("step")
    axes[2].set_ylabel("win rate vs random")
    axes[2].set_ylim(0, 1.05)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_longrange(reports: list, path: str) -> None:
    fig, ax = plt.subplots(figsize=(7, 3.5))
    width = 0.8 / max(1, len(reports))
    for k, report in enumerate(reports):
        sizes = sorted(report.per_size)
        xs = np.arange(len(sizes)) + k * width
        ax.bar(xs, [report.per_size[s][0] for s in sizes], width, label=report.agent)
    sizes = sorted(reports[0].per_size) if reports else []
    ax.set_xticks(np.arange(len(sizes)) + 0.4 - width / 2)
    ax.set_xticklabels([f"{s}x{s}" for s in sizes])
    ax.set_ylabel("errors")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_win_matrix(result, path: str) -> None:
    names = result.agents
    n = len(names)
    mat = np.full((n, n), np.nan)
    for i, a in enumerate(names):
        for j, b in enumerate(names):
            if i != j:
                mat[i, j] = 100.0 * result.win_rate(a, b)
    fig, ax = plt.subplots(figsize=(1.2 * n + 2, 1.0 * n + 1.5))
    im = ax.imshow(mat, vmin=0, vmax=100, cmap="RdYlGn")
    ax.set_xticks(range(n), names, rotation=30, ha="right")
    ax.set_yticks(range(n), names)
    for i in range(n):
        for j in range(n):
            if i != j:
                ax.text(j, i, f"{mat[i, j]:.0f}%", ha="center", va="center")
    fig.colorbar(im, label="row wins (%)")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_supervised(histories: dict[str, list[dict]], path: str) -> None:
    fig, axes = plt.subplots(1, 2, figsize=(10, 3.5))
    for name, hist in histories.items():
        rows = [h for h in hist if "train_policy_acc" in h]
        epochs = [h["epoch"] for h in rows]
        axes[0].plot(epochs, [h["train_policy_acc"] for h in rows], label=f"{name} train")
        axes[1].plot(epochs, [h["train_value_sign_acc"] for h in rows], label=f"{name} train")
        if rows and "val_policy_acc" in rows[-1]:
            axes[0].plot(epochs, [h["val_policy_acc"] for h in rows], "--", label=f"{name} val")
            axes[1].plot(epochs, [h["val_value_sign_acc"] for h in rows], "--", label=f"{name} val")
    axes[0].set_ylabel("policy accuracy")
    axes[1].set_ylabel("value sign accuracy")
    for ax in axes:
        ax.set_xlabel("epoch")
        ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_game_profile(record: GameRecord, path: str) -> None:
    """Board entropy rises while the graph loses one node per move."""
    board = hexboard.new_board(record.size)
    entropies = [hexboard.board_entropy(board)]
    node_counts = [shannon.from_board(board, Color.RED).num_nodes]
    for name in record.moves:
        board = hexboard.play(board, hexboard.parse_cell(name))
        entropies.append(hexboard.board_entropy(board))
        if hexboard.winner(board) is None:
            node_counts.append(shannon.from_board(board, Color.RED).num_nodes)
    fig, ax1 = plt.subplots(figsize=(6, 3.2))
    ax1.plot(entropies, color="tab:blue")
    ax1.set_xlabel("move")
    ax1.set_ylabel("board entropy", color="tab:blue")
    ax2 = ax1.twinx()
    ax2.plot(node_counts, color="tab:red")
    ax2.set_ylabel("graph nodes", color="tab:red")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def figures_dir(out_dir: str) -> str:
    path = os.path.join(out_dir, "figures")
    os.makedirs(path, exist_ok=True)
    return path
