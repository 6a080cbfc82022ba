"""JSON-over-HTTP game service backing the web client.

Sessions are in-memory; the board and its red-perspective Shannon graph are
kept in lockstep move by move (cross-checked via the canonical hash), model
weights are shared read-only across sessions, and the agent's reply is
computed synchronously inside the move request.
"""

from __future__ import annotations

import json
import os
import re
import threading
import uuid
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Optional

import numpy as np

from . import agents as agents_mod
from . import board as hexboard
from . import models, shannon, solver
from .board import Cell, Color, HexBoard
from .errors import HexgraphError, IllegalMoveError

LOCKSTEP_CHECK_MAX_NODES = 200


class ApiError(Exception):
    def __init__(self, status: int, message: str):
        super().__init__(message)
        self.status = status
        self.message = message


class GameSession:
    def __init__(self, game_id: str, size: int, agent_name: str, agent,
                 human_color: Color, mode: str, simulations: int):
        self.game_id = game_id
        self.size = size
        self.agent_name = agent_name
        self.agent = agent
        self.human_color = human_color
        self.mode = mode
        self.simulations = simulations
        self.board = hexboard.new_board(size)
        self.graph = shannon.from_board(self.board, Color.RED)
        self.moves: list[str] = []
        self.eval: Optional[dict] = None
        self.lock = threading.Lock()
        self.rng = np.random.default_rng(abs(hash(game_id)) % (2 ** 32))

    @property
    def winner(self) -> Optional[Color]:
        return hexboard.winner(self.board)

    def apply(self, cell: Cell) -> None:
        node = self.graph.node_for_cell(cell)
        self.board = hexboard.play(self.board, cell)
        self.graph.apply_move(node)
        self.moves.append(hexboard.cell_name(cell))
        if self.winner is None and self.graph.num_nodes <= LOCKSTEP_CHECK_MAX_NODES:
            rebuilt = shannon.from_board(self.board, Color.RED)
            if solver.canonical_hash(rebuilt) != solver.canonical_hash(self.graph):
                raise HexgraphError("board/graph lockstep violated")

    def agent_move(self) -> Optional[str]:
        if self.winner is not None:
            return None
        cell = Cell(*self.agent.best_move(self.board, self.rng))
        if self.board.cell(cell) != hexboard.EMPTY:
            raise HexgraphError(f"agent proposed occupied cell {hexboard.cell_name(cell)}")
        self.apply(cell)
        return hexboard.cell_name(cell)

    def refresh_eval(self) -> None:
        if self.winner is not None:
            self.eval = None
            return
        self.eval = build_eval(self.agent, self.board, self.graph)

    def state(self) -> dict:
        sym = {0: ".", 1: "r", 2: "b"}
        winner = self.winner
        return {
            "game_id": self.game_id,
            "size": self.size,
            "board": [[sym[int(v)] for v in row] for row in self.board.cells],
            "to_move": "red" if self.board.to_move is Color.RED else "blue",
            "winner": None if winner is None else ("red" if winner is Color.RED else "blue"),
            "moves": list(self.moves),
            "human_color": "red" if self.human_color is Color.RED else "blue",
            "agent": {"name": self.agent_name, "mode": self.mode,
                      "simulations": self.simulations},
            "node_count": self.graph.num_nodes,
            "graph": self.graph.dump(),
            "eval": self.eval,
        }


def build_eval(agent, board: HexBoard, graph: shannon.ShannonGraph) -> dict:
    """Evaluation of the current position from the mover's point of view,
    keyed both by cell name and by graph node id."""
    cell_ids = {hexboard.cell_name(graph.labels[v]): v for v in graph.legal_actions()}
    if isinstance(agent, agents_mod.MctsAgent):
        scores = agent.scores(board)
        return {
            "kind": "mcts",
            "pi": scores["pi"],
            "pi_nodes": {cell_ids[k]: v for k, v in scores["pi"].items()},
            "visits": scores["visits"],
            "value": scores["value"],
        }
    if isinstance(agent, (agents_mod.GraphQAgent, agents_mod.ConvQAgent)):
        q_cells, value = agent.q_cells(board)
        return {
            "kind": "q",
            "q_cells": q_cells,
            "q_nodes": {cell_ids[k]: v for k, v in q_cells.items()},
            "value": value,
        }
    if isinstance(agent, agents_mod.PolicyAgent):
        pi, value = agent.model.policy_value(shannon.encode(graph))
        cells = {hexboard.cell_name(graph.labels[v]): float(pi[v])
                 for v in graph.legal_actions()}
        return {
            "kind": "policy",
            "pi": cells,
            "pi_nodes": {cell_ids[k]: v for k, v in cells.items()},
            "value": value,
        }
    return {"kind": "none"}


class HexService:
    def __init__(self, ckpt_dir: str):
        self.ckpt_dir = ckpt_dir
        self.sessions: dict[str, GameSession] = {}
        self.models: dict[str, object] = {}
        self.lock = threading.Lock()

    def agent_specs(self) -> list[dict]:
        out = [{"name": "random", "arch": "random"}]
        if os.path.isdir(self.ckpt_dir):
            for fname in sorted(os.listdir(self.ckpt_dir)):
                if fname.endswith(".json"):
                    out.append({"name": fname[:-5], "arch": "checkpoint"})
        return out

    def has_checkpoints(self) -> bool:
        return any(spec["arch"] == "checkpoint" for spec in self.agent_specs())

    def _model(self, name: str):
        with self.lock:
            if name not in self.models:
                path = os.path.join(self.ckpt_dir, name + ".json")
                if not os.path.exists(path):
                    raise ApiError(400, f"unknown agent {name!r}")
                self.models[name] = models.load(path)
            return self.models[name]

    def build_agent(self, name: str, mode: str, simulations: int):
        if name == "random":
            return agents_mod.RandomAgent()
        model = self._model(name)
        if mode == "mcts":
            if not isinstance(model, models.GraphPVModel):
                raise ApiError(400, "mcts mode needs a policy/value checkpoint")
            return agents_mod.MctsAgent(agents_mod.NetEvaluator(model), simulations, name=name)
        return agents_mod.agent_for_model(model, name=name)

    # -- endpoint logic ------------------------------------------------

    def create_game(self, body: dict) -> dict:
        size = int(body.get("size", 7))
        agent_name = body.get("agent", "random")
        human = body.get("human_color", "red")
        mode = body.get("mode", "greedy")
        simulations = int(body.get("simulations", 200))
        if human not in ("red", "blue"):
            raise ApiError(400, "human_color must be 'red' or 'blue'")
        if mode not in ("greedy", "mcts"):
            raise ApiError(400, "mode must be 'greedy' or 'mcts'")
        try:
            agent = self.build_agent(agent_name, mode, simulations)
            session = GameSession(
                uuid.uuid4().hex[:12], size, agent_name, agent,
                Color.RED if human == "red" else Color.BLUE, mode, simulations)
        except ApiError:
            raise
        except HexgraphError as exc:
            raise ApiError(400, str(exc))
        with self.lock:
            self.sessions[session.game_id] = session
        with session.lock:
            agent_move = None
            if session.human_color is Color.BLUE:
                agent_move = session.agent_move()
            session.refresh_eval()
            return {"game_id": session.game_id, "agent_move": agent_move,
                    "state": session.state()}

    def get_session(self, game_id: str) -> GameSession:
        with self.lock:
            session = self.sessions.get(game_id)
        if session is None:
            raise ApiError(404, f"unknown game {game_id!r}")
        return session

    def human_move(self, game_id: str, body: dict) -> dict:
        session = self.get_session(game_id)
        with session.lock:
            if session.winner is not None:
                raise ApiError(409, "game is already decided")
            if session.board.to_move is not session.human_color:
                raise ApiError(409, "not the human player's turn")
            try:
                cell = hexboard.parse_cell(str(body.get("cell", "")))
                session.apply(cell)
            except (HexgraphError, IllegalMoveError) as exc:
                raise ApiError(409, str(exc))
            agent_move = session.agent_move()
            session.refresh_eval()
            return {"agent_move": agent_move, "state": session.state(),
                    "eval": session.eval}

    def delete_game(self, game_id: str) -> dict:
        self.get_session(game_id)
        with self.lock:
            del self.sessions[game_id]
        return {"deleted": True}


class Handler(BaseHTTPRequestHandler):
    server_version = "hexgraph"

    def log_message(self, fmt, *args):  # quiet by default
        if os.environ.get("HEXGRAPH_HTTP_LOG"):
            super().log_message(fmt, *args)

    def _send(self, status: int, payload: dict) -> None:
        raw = json.dumps(payload).encode()
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(raw)))
        self.send_header("Access-Control-Allow-Origin",
                         os.environ.get("HEXGRAPH_UI_ORIGIN", "*"))
        self.send_header("Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.end_headers()
        self.wfile.write(raw)

    def _body(self) -> dict:
        length = int(self.headers.get("Content-Length") or 0)
        if length == 0:
            return {}
        try:
            return json.loads(self.rfile.read(length) or b"{}")
        except json.JSONDecodeError:
            raise ApiError(400, "request body is not valid JSON")

    def _route(self, method: str) -> None:
        app: HexService = self.server.app  # type: ignore[attr-defined]
        try:
            if method == "OPTIONS":
                self._send(204, {})
                return
            path = self.path.rstrip("/")
            if method == "GET" and path == "/agents":
                self._send(200, {"agents": app.agent_specs()})
                return
            if method == "POST" and path == "/games":
                self._send(200, app.create_game(self._body()))
                return
            m = re.fullmatch(r"/games/([0-9a-f]+)/move", path)
            if method == "POST" and m:
                self._send(200, app.human_move(m.group(1), self._body()))
                return
            m = re.fullmatch(r"/games/([0-9a-f]+)", path)
            if m and method == "GET":
                session = app.get_session(m.group(1))
                with session.lock:
                    self._send(200, {"state": session.state()})
                return
            if m and method == "DELETE":
                self._send(200, app.delete_game(m.group(1)))
                return
            raise ApiError(404, f"no route {method} {self.path}")
        except ApiError as exc:
            self._send(exc.status, {"error": exc.message})
        except Exception as exc:  # pragma: no cover - last resort
            self._send(500, {"error": f"{type(exc).__name__}: {exc}"})

    def do_GET(self):
        self._route("GET")

    def do_POST(self):
        self._route("POST")

    def do_DELETE(self):
        self._route("DELETE")

    def do_OPTIONS(self):
        self._route("OPTIONS")


def create_server(port: int = 0, ckpt_dir: str = "checkpoints",
                  host: str = "127.0.0.1", require_checkpoints: bool = True):
    app = HexService(ckpt_dir)
    if require_checkpoints and not app.has_checkpoints():
        raise HexgraphError(f"no loadable checkpoints in {ckpt_dir!r}")
    server = ThreadingHTTPServer((host, port), Handler)
    server.app = app  # type: ignore[attr-defined]
    return server


def run(port: int, ckpt_dir: str, host: str = "127.0.0.1") -> int:
    server = create_server(port=port, ckpt_dir=ckpt_dir, host=host)
    print(f"serving on http://{host}:{server.server_address[1]} (checkpoints: {ckpt_dir})",
          flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0
