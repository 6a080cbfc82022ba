import assert from "node:assert/strict";
import test from "node:test";

import { layoutGraph, NODE_RADIUS } from "../src/graphlayout.js";
import type { GraphDump } from "../src/types.js";

function smallDump(): GraphDump {
  return {
    nodes: [
      { id: 0, label: "top", terminal: 1 },
      { id: 1, label: "bottom", terminal: 2 },
      { id: 2, label: "a1", terminal: 0 },
      { id: 3, label: "b1", terminal: 0 },
      { id: 4, label: "a2", terminal: 0 },
      { id: 5, label: "b2", terminal: 0 },
    ],
    edges: [[0, 2], [0, 3], [2, 3], [2, 4], [3, 5], [4, 5], [4, 1], [5, 1]],
    to_move: "short",
    perspective: "red",
  };
}

test("layout is deterministic: same dump, same coordinates", () => {
  const a = layoutGraph(smallDump(), 2);
  const b = layoutGraph(smallDump(), 2);
  assert.deepEqual(a.nodes, b.nodes);
});

test("every node is placed inside the extent", () => {
  const layout = layoutGraph(smallDump(), 2);
  assert.equal(layout.nodes.length, 6);
  for (const n of layout.nodes) {
    assert.ok(n.x >= 0 && n.x <= layout.width);
    assert.ok(n.y >= 0 && n.y <= layout.height);
  }
});

test("terminals stay pinned at opposite sides", () => {
  const layout = layoutGraph(smallDump(), 2);
  const t1 = layout.nodes.find((n) => n.terminal === 1)!;
  const t2 = layout.nodes.find((n) => n.terminal === 2)!;
  assert.ok(t1.y < t2.y); // red perspective: top vs bottom
  const seeded = layoutGraph(smallDump(), 2, 0);
  const t1Seed = seeded.nodes.find((n) => n.terminal === 1)!;
  assert.deepEqual({ x: t1.x, y: t1.y }, { x: t1Seed.x, y: t1Seed.y });
});

test("relaxation separates overlapping playable nodes", () => {
  const dump = smallDump();
  const layout = layoutGraph(dump, 2, 40);
  for (let i = 0; i < layout.nodes.length; i++) {
    for (let j = i + 1; j < layout.nodes.length; j++) {
      const a = layout.nodes[i];
      const b = layout.nodes[j];
      if (a.terminal !== 0 || b.terminal !== 0) continue;
      const dist = Math.hypot(a.x - b.x, a.y - b.y);
      assert.ok(dist > NODE_RADIUS * 1.5, `${a.label} vs ${b.label}: ${dist}`);
    }
  }
});

test("edges are passed through untouched", () => {
  const dump = smallDump();
  const layout = layoutGraph(dump, 2);
  assert.deepEqual(layout.edges, dump.edges);
});
