// Application shell: new-game form, status line, board and graph panes.
// One in-flight request at a time; the server is the single source of truth.

import { ApiError, GameClient } from "./api.js";
import { BoardView } from "./boardview.js";
import { GraphView } from "./graphview.js";
import type { GameState } from "./types.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

export class App {
  private client: GameClient;
  private state: GameState | null = null;
  private busy = false;
  private board: BoardView;
  private graph: GraphView;

  constructor() {
    const base = (localStorage.getItem("hexgraph-url") ??
      `${location.protocol}//${location.hostname}:8710`);
    el<HTMLInputElement>("server-url").value = base;
    this.client = new GameClient(base);
    this.board = new BoardView(el("board-pane"), {
      onCellClick: (cell) => void this.humanMove(cell),
      onHover: (cell) => this.hover(cell),
    });
    this.graph = new GraphView(el("graph-pane"), el("node-count"), {
      onHover: (cell) => this.hover(cell),
    });
    el<HTMLButtonElement>("new-game").addEventListener("click", () => void this.newGame());
    el<HTMLInputElement>("heatmap-toggle").addEventListener("change", (e) => {
      this.board.showHeatmap = (e.target as HTMLInputElement).checked;
      if (this.state) this.board.render(this.state);
    });
    el<HTMLInputElement>("server-url").addEventListener("change", (e) => {
      const url = (e.target as HTMLInputElement).value;
      localStorage.setItem("hexgraph-url", url);
      this.client = new GameClient(url);
      void this.loadAgents();
    });
    void this.loadAgents();
  }

  private hover(cell: string | null): void {
    this.board.setHover(cell);
    this.graph.setHover(cell);
  }

  private banner(text: string, kind: "info" | "error" = "info"): void {
    const bar = el("banner");
    bar.textContent = text;
    bar.className = `banner ${kind}`;
  }

  private async loadAgents(): Promise<void> {
    try {
      const { agents } = await this.client.listAgents();
      const select = el<HTMLSelectElement>("agent-select");
      select.replaceChildren(...agents.map((a) => {
        const opt = document.createElement("option");
        opt.value = a.name;
        opt.textContent = a.arch === "random" ? a.name : `${a.name} (${a.arch})`;
        return opt;
      }));
      this.banner("connected");
    } catch (err) {
      this.banner(`cannot reach service: ${(err as Error).message} — retry via the URL box`,
                  "error");
    }
  }

  private async newGame(): Promise<void> {
    if (this.busy) return;
    this.busy = true;
    try {
      const resp = await this.client.createGame({
        size: parseInt(el<HTMLSelectElement>("size-select").value, 10),
        agent: el<HTMLSelectElement>("agent-select").value,
        human_color: el<HTMLSelectElement>("color-select").value as "red" | "blue",
        mode: el<HTMLSelectElement>("mode-select").value as "greedy" | "mcts",
        simulations: parseInt(el<HTMLInputElement>("sims-input").value, 10) || 200,
      });
      this.apply(resp.state);
      this.banner(resp.agent_move ? `agent opened with ${resp.agent_move}` : "your move");
    } catch (err) {
      this.banner((err as Error).message, "error");
    } finally {
      this.busy = false;
    }
  }

  private async humanMove(cell: string): Promise<void> {
    if (this.busy || !this.state || this.state.winner) return;
    if (this.state.to_move !== this.state.human_color) return;
    this.busy = true;
    try {
      const resp = await this.client.move(this.state.game_id, cell);
      this.apply(resp.state);
      if (resp.state.winner) {
        this.banner(`${resp.state.winner} wins`);
      } else if (resp.agent_move) {
        this.banner(`agent replied ${resp.agent_move}`);
      }
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        this.banner(err.message, "error"); // illegal move: no state change
      } else {
        this.banner(`request failed: ${(err as Error).message} — retry`, "error");
      }
    } finally {
      this.busy = false;
    }
  }

  private apply(state: GameState): void {
    this.state = state;
    this.board.render(state);
    this.graph.render(state);
    const turn = state.winner
      ? `${state.winner} wins after ${state.moves.length} moves`
      : `${state.to_move} to move (you are ${state.human_color})`;
    el("status").textContent =
      `${state.size}x${state.size} vs ${state.agent.name} [${state.agent.mode}] — ${turn}` +
      (state.eval?.value !== undefined && state.eval !== null
        ? ` — eval ${state.eval.value!.toFixed(3)}`
        : "");
  }
}

if (typeof document !== "undefined" && document.getElementById("board-pane")) {
  new App();
}
