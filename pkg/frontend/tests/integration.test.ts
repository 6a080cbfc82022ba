// Round-trip against the live service: spawn it, play a 7x7 game with a
// 200-simulation search agent, and check reply latency, heatmap argmax
// agreement, and board/graph lockstep. Skipped when python3 is unavailable.

import assert from "node:assert/strict";
import { spawn, spawnSync, type ChildProcess } from "node:child_process";
import { mkdtempSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import test from "node:test";

import { GameClient } from "../src/api.js";
import { argmaxCell } from "../src/heatmap.js";

function havePython(): boolean {
  const probe = spawnSync("python3", ["-c", "import hexgraph"], { timeout: 30_000 });
  return probe.status === 0;
}

async function startService(): Promise<{ proc: ChildProcess; url: string }> {
  const dir = mkdtempSync(join(tmpdir(), "hexgraph-ui-"));
  const make = spawnSync("python3", ["-c", [
    "from hexgraph import models",
    "m = models.build_model('graph_pv', {'body_layers': 2, 'width': 16,",
    "                                    'value_hidden': (16, 8)}, seed=0)",
    `models.save(m, r'${join(dir, "pv.json")}')`,
  ].join("\n")], { timeout: 120_000 });
  assert.equal(make.status, 0, String(make.stderr));

  const proc = spawn("python3", ["-u", "-m", "hexgraph.cli", "serve", "--port", "0",
                                 "--ckpt-dir", dir]);
  try {
    const url = await new Promise<string>((resolve, reject) => {
      let buffer = "";
      const timer = setTimeout(() => reject(new Error(`service never came up: ${buffer}`)),
                               60_000);
      proc.stdout!.on("data", (chunk: Buffer) => {
        buffer += chunk.toString();
        const m = buffer.match(/serving on (http:\/\/[\w.]+:\d+)/);
        if (m) {
          clearTimeout(timer);
          resolve(m[1]);
        }
      });
      proc.on("exit", (code) => reject(new Error(`service exited ${code}: ${buffer}`)));
    });
    return { proc, url };
  } catch (err) {
    proc.kill();
    throw err;
  }
}

test("UI round-trip on a served 7x7 game", { timeout: 300_000 }, async (t) => {
  if (!havePython()) {
    t.skip("python3 + hexgraph not importable");
    return;
  }
  const { proc, url } = await startService();
  try {
    const client = new GameClient(url);
    const created = await client.createGame({
      size: 7, agent: "pv", human_color: "red", mode: "mcts", simulations: 200,
    });
    let state = created.state;
    assert.equal(state.node_count, 51); // 49 tiles + 2 terminals
    assert.equal(state.graph.nodes.length, state.node_count);

    const humanMoves = ["d4", "c3", "e3"];
    for (const cell of humanMoves) {
      const before = state.moves.length;
      const t0 = Date.now();
      const resp = await client.move(state.game_id, cell);
      const elapsed = Date.now() - t0;
      assert.ok(elapsed < 2000, `agent reply took ${elapsed}ms`);
      state = resp.state;
      assert.ok(resp.agent_move, "agent must reply while the game is open");
      assert.equal(state.moves.length, before + 2);
      // lockstep: one graph node disappears per move
      assert.equal(state.node_count, 51 - state.moves.length);
      assert.equal(state.graph.nodes.length, state.node_count);
      // the rendered heatmap maximum is exactly the payload argmax
      const fromPayload = state.eval?.pi
        ? Object.entries(state.eval.pi).sort((a, b) => b[1] - a[1])[0][0]
        : null;
      assert.equal(argmaxCell(state.eval), fromPayload);
      if (state.winner) break;
    }
    await client.deleteGame(state.game_id);
  } finally {
    proc.kill();
  }
});
