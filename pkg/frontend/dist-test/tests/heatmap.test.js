import assert from "node:assert/strict";
import test from "node:test";
import { argmaxCell, evalScores, heatColor, heatOpacity, heatmap } from "../src/heatmap.js";
const qPayload = {
    kind: "q",
    q_cells: { a1: -0.5, b2: 0.75, c3: 0.1 },
    value: 0.75,
};
const mctsPayload = {
    kind: "mcts",
    pi: { a1: 0.1, b2: 0.6, c3: 0.3 },
    visits: { a1: 10, b2: 60, c3: 30 },
    value: 0.2,
};
test("scores come from q_cells for q payloads and pi for search payloads", () => {
    assert.deepEqual(evalScores(qPayload), qPayload.q_cells);
    assert.deepEqual(evalScores(mctsPayload), mctsPayload.pi);
    assert.deepEqual(evalScores(null), {});
    assert.deepEqual(evalScores({ kind: "none" }), {});
});
test("argmax picks the highest-valued cell verbatim", () => {
    assert.equal(argmaxCell(qPayload), "b2");
    assert.equal(argmaxCell(mctsPayload), "b2");
    assert.equal(argmaxCell(null), null);
});
test("heatmap normalizes into [0, 1] with extremes mapped to 0 and 1", () => {
    const entries = heatmap(qPayload);
    const byCell = new Map(entries.map((e) => [e.cell, e]));
    assert.equal(byCell.get("a1").norm, 0);
    assert.equal(byCell.get("b2").norm, 1);
    assert.equal(byCell.get("b2").value, 0.75); // raw value untouched
    for (const e of entries)
        assert.ok(e.norm >= 0 && e.norm <= 1);
});
test("uniform payloads normalize to full intensity without dividing by zero", () => {
    const flat = { kind: "q", q_cells: { a1: 0.4, b1: 0.4 } };
    for (const e of heatmap(flat))
        assert.equal(e.norm, 1);
});
test("color and opacity ramps stay in display range", () => {
    for (const norm of [0, 0.25, 0.5, 1]) {
        const op = heatOpacity(norm);
        assert.ok(op > 0 && op < 1);
        assert.match(heatColor(norm), /^hsl\(\d+, 85%, 55%\)$/);
    }
});
