// Application shell: new-game form, status line, board and graph panes.
// One in-flight request at a time; the server is the single source of truth.
import { ApiError, GameClient } from "./api.js";
import { BoardView } from "./boardview.js";
import { GraphView } from "./graphview.js";
function el(id) {
    const node = document.getElementById(id);
    if (!node)
        throw new Error(`missing #${id}`);
    return node;
}
export class App {
    client;
    state = null;
    busy = false;
    board;
    graph;
    constructor() {
        const base = (localStorage.getItem("hexgraph-url") ??
            `${location.protocol}//${location.hostname}:8710`);
        el("server-url").value = base;
        this.client = new GameClient(base);
        this.board = new BoardView(el("board-pane"), {
            onCellClick: (cell) => void this.humanMove(cell),
            onHover: (cell) => this.hover(cell),
        });
        this.graph = new GraphView(el("graph-pane"), el("node-count"), {
            onHover: (cell) => this.hover(cell),
        });
        el("new-game").addEventListener("click", () => void this.newGame());
        el("heatmap-toggle").addEventListener("change", (e) => {
            this.board.showHeatmap = e.target.checked;
            if (this.state)
                this.board.render(this.state);
        });
        el("server-url").addEventListener("change", (e) => {
            const url = e.target.value;
            localStorage.setItem("hexgraph-url", url);
            this.client = new GameClient(url);
            void this.loadAgents();
        });
        void this.loadAgents();
    }
    hover(cell) {
        this.board.setHover(cell);
        this.graph.setHover(cell);
    }
    banner(text, kind = "info") {
        const bar = el("banner");
        bar.textContent = text;
        bar.className = `banner ${kind}`;
    }
    async loadAgents() {
        try {
            const { agents } = await this.client.listAgents();
            const select = el("agent-select");
            select.replaceChildren(...agents.map((a) => {
                const opt = document.createElement("option");
                opt.value = a.name;
                opt.textContent = a.arch === "random" ? a.name : `${a.name} (${a.arch})`;
                return opt;
            }));
            this.banner("connected");
        }
        catch (err) {
            this.banner(`cannot reach service: ${err.message} — retry via the URL box`, "error");
        }
    }
    async newGame() {
        if (this.busy)
            return;
        this.busy = true;
        try {
            const resp = await this.client.createGame({
                size: parseInt(el("size-select").value, 10),
                agent: el("agent-select").value,
                human_color: el("color-select").value,
                mode: el("mode-select").value,
                simulations: parseInt(el("sims-input").value, 10) || 200,
            });
            this.apply(resp.state);
            this.banner(resp.agent_move ? `agent opened with ${resp.agent_move}` : "your move");
        }
        catch (err) {
            this.banner(err.message, "error");
        }
        finally {
            this.busy = false;
        }
    }
    async humanMove(cell) {
        if (this.busy || !this.state || this.state.winner)
            return;
        if (this.state.to_move !== this.state.human_color)
            return;
        this.busy = true;
        try {
            const resp = await this.client.move(this.state.game_id, cell);
            this.apply(resp.state);
            if (resp.state.winner) {
                this.banner(`${resp.state.winner} wins`);
            }
            else if (resp.agent_move) {
                this.banner(`agent replied ${resp.agent_move}`);
            }
        }
        catch (err) {
            if (err instanceof ApiError && err.status === 409) {
                this.banner(err.message, "error"); // illegal move: no state change
            }
            else {
                this.banner(`request failed: ${err.message} — retry`, "error");
            }
        }
        finally {
            this.busy = false;
        }
    }
    apply(state) {
        this.state = state;
        this.board.render(state);
        this.graph.render(state);
        const turn = state.winner
            ? `${state.winner} wins after ${state.moves.length} moves`
            : `${state.to_move} to move (you are ${state.human_color})`;
        el("status").textContent =
            `${state.size}x${state.size} vs ${state.agent.name} [${state.agent.mode}] — ${turn}` +
                (state.eval?.value !== undefined && state.eval !== null
                    ? ` — eval ${state.eval.value.toFixed(3)}`
                    : "");
    }
}
if (typeof document !== "undefined" && document.getElementById("board-pane")) {
    new App();
}
