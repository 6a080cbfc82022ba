// Thin client for the game service. The fetch function is injectable so the
// tests can drive it without a network.
export class ApiError extends Error {
    status;
    constructor(status, message) {
        super(message);
        this.status = status;
    }
}
export class GameClient {
    baseUrl;
    fetchFn;
    constructor(baseUrl, fetchFn = (url, init) => fetch(url, init)) {
        this.baseUrl = baseUrl;
        this.fetchFn = fetchFn;
        this.baseUrl = baseUrl.replace(/\/+$/, "");
    }
    async request(method, path, body) {
        const resp = await this.fetchFn(this.baseUrl + path, {
            method,
            headers: { "Content-Type": "application/json" },
            body: body === undefined ? undefined : JSON.stringify(body),
        });
        const text = await resp.text();
        let doc = {};
        if (text) {
            try {
                doc = JSON.parse(text);
            }
            catch {
                throw new ApiError(resp.status, `invalid JSON from ${path}`);
            }
        }
        if (!resp.ok) {
            const message = doc.error ?? `HTTP ${resp.status}`;
            throw new ApiError(resp.status, message);
        }
        return doc;
    }
    listAgents() {
        return this.request("GET", "/agents");
    }
    createGame(options) {
        return this.request("POST", "/games", options);
    }
    move(gameId, cell) {
        return this.request("POST", `/games/${gameId}/move`, { cell });
    }
    getGame(gameId) {
        return this.request("GET", `/games/${gameId}`);
    }
    deleteGame(gameId) {
        return this.request("DELETE", `/games/${gameId}`);
    }
}
export function cellName(row, col) {
    return String.fromCharCode(97 + col) + String(row + 1);
}
export function parseCell(name) {
    const col = name.charCodeAt(0) - 97;
    const row = parseInt(name.slice(1), 10) - 1;
    return { row, col };
}
