// Payload shapes of the game service API.

export type Stone = "." | "r" | "b";

export interface GraphNode {
  id: number;
  label: string;
  terminal: 0 | 1 | 2;
}

export interface GraphDump {
  nodes: GraphNode[];
  edges: [number, number][];
  to_move: "short" | "cut";
  perspective: "red" | "blue";
}

export interface EvalPayload {
  kind: "q" | "mcts" | "policy" | "none";
  q_cells?: Record<string, number>;
  q_nodes?: Record<string, number>;
  pi?: Record<string, number>;
  pi_nodes?: Record<string, number>;
  visits?: Record<string, number>;
  value?: number;
}

export interface GameState {
  game_id: string;
  size: number;
  board: Stone[][];
  to_move: "red" | "blue";
  winner: "red" | "blue" | null;
  moves: string[];
  human_color: "red" | "blue";
  agent: { name: string; mode: string; simulations: number };
  node_count: number;
  graph: GraphDump;
  eval: EvalPayload | null;
}

export interface CreateResponse {
  game_id: string;
  agent_move: string | null;
  state: GameState;
}

export interface MoveResponse {
  agent_move: string | null;
  state: GameState;
  eval: EvalPayload | null;
}

export interface AgentSpec {
  name: string;
  arch: string;
}
