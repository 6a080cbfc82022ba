import assert from "node:assert/strict";
import test from "node:test";
import { ApiError, cellName, GameClient, parseCell } from "../src/api.js";
function fakeFetch(status, payload, log) {
    return async (url, init) => {
        log.push({ url, method: init?.method, body: init?.body });
        return new Response(JSON.stringify(payload), {
            status,
            headers: { "Content-Type": "application/json" },
        });
    };
}
test("createGame posts the options to /games", async () => {
    const log = [];
    const client = new GameClient("http://svc:1/", fakeFetch(200, { game_id: "x" }, log));
    await client.createGame({ size: 7, agent: "desk", human_color: "red", mode: "greedy" });
    assert.equal(log.length, 1);
    assert.equal(log[0].url, "http://svc:1/games");
    assert.equal(log[0].method, "POST");
    assert.deepEqual(JSON.parse(log[0].body), {
        size: 7, agent: "desk", human_color: "red", mode: "greedy",
    });
});
test("move posts the cell to /games/{id}/move", async () => {
    const log = [];
    const client = new GameClient("http://svc:1", fakeFetch(200, {}, log));
    await client.move("abc123", "c4");
    assert.equal(log[0].url, "http://svc:1/games/abc123/move");
    assert.deepEqual(JSON.parse(log[0].body), { cell: "c4" });
});
test("delete and get hit the session routes", async () => {
    const log = [];
    const client = new GameClient("http://svc:1", fakeFetch(200, { deleted: true }, log));
    await client.deleteGame("abc");
    await client.getGame("abc");
    assert.equal(log[0].method, "DELETE");
    assert.equal(log[1].method, "GET");
    assert.equal(log[1].url, "http://svc:1/games/abc");
});
test("service errors surface as ApiError with the server's reason", async () => {
    const log = [];
    const client = new GameClient("http://svc:1", fakeFetch(409, { error: "cell c4 is occupied" }, log));
    await assert.rejects(() => client.move("abc", "c4"), (err) => err instanceof ApiError && err.status === 409 &&
        err.message === "cell c4 is occupied");
});
test("cell names round-trip", () => {
    assert.equal(cellName(3, 2), "c4");
    assert.deepEqual(parseCell("c4"), { row: 3, col: 2 });
    for (const [r, c] of [[0, 0], [10, 10], [24, 24]]) {
        assert.deepEqual(parseCell(cellName(r, c)), { row: r, col: c });
    }
});
