import assert from "node:assert/strict";
import test from "node:test";
import { areNeighbors, boardExtent, cellCenter, hexCorners, polygonPoints, SQRT3 } from "../src/hexgeom.js";
test("cell centers shift half a hex per row", () => {
    const a = cellCenter(0, 0, 10);
    const b = cellCenter(1, 0, 10);
    assert.ok(Math.abs(b.x - a.x - 10 * SQRT3 / 2) < 1e-9);
    assert.ok(b.y > a.y);
});
test("centers are strictly increasing along rows and columns", () => {
    for (let r = 0; r < 4; r++) {
        for (let c = 0; c < 3; c++) {
            const here = cellCenter(r, c, 8);
            const right = cellCenter(r, c + 1, 8);
            assert.ok(right.x > here.x);
            assert.equal(right.y, here.y);
        }
    }
});
test("hexagons have six corners around the center", () => {
    const center = { x: 50, y: 40 };
    const corners = hexCorners(center, 12);
    assert.equal(corners.length, 6);
    for (const p of corners) {
        const d = Math.hypot(p.x - center.x, p.y - center.y);
        assert.ok(Math.abs(d - 12) < 1e-9);
    }
    assert.equal(polygonPoints(corners).split(" ").length, 6);
});
test("board extent covers the last cell", () => {
    const { width, height } = boardExtent(7, 10);
    const last = cellCenter(6, 6, 10);
    assert.ok(width >= last.x && height >= last.y);
});
test("adjacency matches the engine's six offsets", () => {
    const center = { row: 3, col: 3 };
    const expected = [
        { row: 2, col: 3 }, { row: 4, col: 3 }, { row: 3, col: 2 },
        { row: 3, col: 4 }, { row: 4, col: 2 }, { row: 2, col: 4 },
    ];
    for (const nb of expected)
        assert.ok(areNeighbors(center, nb));
    assert.ok(!areNeighbors(center, { row: 4, col: 4 }));
    assert.ok(!areNeighbors(center, { row: 2, col: 2 }));
});
