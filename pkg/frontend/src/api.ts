// Thin client for the game service. The fetch function is injectable so the
// tests can drive it without a network.

import type { AgentSpec, CreateResponse, GameState, MoveResponse } from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

export class GameClient {
  constructor(
    private baseUrl: string,
    private fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const resp = await this.fetchFn(this.baseUrl + path, {
      method,
      headers: { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const text = await resp.text();
    let doc: unknown = {};
    if (text) {
      try {
        doc = JSON.parse(text);
      } catch {
        throw new ApiError(resp.status, `invalid JSON from ${path}`);
      }
    }
    if (!resp.ok) {
      const message = (doc as { error?: string }).error ?? `HTTP ${resp.status}`;
      throw new ApiError(resp.status, message);
    }
    return doc as T;
  }

  listAgents(): Promise<{ agents: AgentSpec[] }> {
    return this.request("GET", "/agents");
  }

  createGame(options: {
    size: number;
    agent: string;
    human_color: "red" | "blue";
    mode: "greedy" | "mcts";
    simulations?: number;
  }): Promise<CreateResponse> {
    return this.request("POST", "/games", options);
  }

  move(gameId: string, cell: string): Promise<MoveResponse> {
    return this.request("POST", `/games/${gameId}/move`, { cell });
  }

  getGame(gameId: string): Promise<{ state: GameState }> {
    return this.request("GET", `/games/${gameId}`);
  }

  deleteGame(gameId: string): Promise<{ deleted: boolean }> {
    return this.request("DELETE", `/games/${gameId}`);
  }
}

export function cellName(row: number, col: number): string {
  return String.fromCharCode(97 + col) + String(row + 1);
}

export function parseCell(name: string): { row: number; col: number } {
  const col = name.charCodeAt(0) - 97;
  const row = parseInt(name.slice(1), 10) - 1;
  return { row, col };
}
