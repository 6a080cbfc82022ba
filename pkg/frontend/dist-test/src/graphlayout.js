// Node-link layout for the Shannon graph view. Nodes seed at their board
// cell position (terminals at the matching borders), then a fixed number of
// deterministic relaxation steps spread overlaps. No randomness: the layout
// is a pure function of the dump, so the view is stable move to move.
import { parseCell } from "./api.js";
import { cellCenter } from "./hexgeom.js";
const RADIUS = 16;
function seedPosition(label, terminal, size, perspective) {
    const span = RADIUS * Math.sqrt(3) * (size + 1.5);
    const mid = span / 2;
    if (terminal !== 0) {
        if (perspective === "red") {
            return { x: mid, y: terminal === 1 ? RADIUS : span + RADIUS * 2 };
        }
        return { x: terminal === 1 ? RADIUS : span + RADIUS * 2, y: mid };
    }
    const { row, col } = parseCell(label);
    const c = cellCenter(row, col, RADIUS);
    return { x: c.x, y: c.y + RADIUS * 1.2 };
}
export function layoutGraph(dump, size, iterations = 30) {
    const nodes = dump.nodes.map((n) => ({
        ...n,
        ...seedPosition(n.label, n.terminal, size, dump.perspective),
    }));
    const index = new Map(nodes.map((n, i) => [n.id, i]));
    const minDist = RADIUS * 1.9;
    for (let step = 0; step < iterations; step++) {
        // gentle attraction along edges
        for (const [a, b] of dump.edges) {
            const na = nodes[index.get(a)];
            const nb = nodes[index.get(b)];
            const dx = nb.x - na.x;
            const dy = nb.y - na.y;
            const dist = Math.hypot(dx, dy) || 1;
            const pull = 0.005 * (dist - minDist * 1.6);
            if (na.terminal === 0) {
                na.x += pull * dx;
                na.y += pull * dy;
            }
            if (nb.terminal === 0) {
                nb.x -= pull * dx;
                nb.y -= pull * dy;
            }
        }
        // pairwise overlap repulsion (deterministic order)
        for (let i = 0; i < nodes.length; i++) {
            for (let j = i + 1; j < nodes.length; j++) {
                const a = nodes[i];
                const b = nodes[j];
                const dx = b.x - a.x;
                const dy = b.y - a.y;
                const dist = Math.hypot(dx, dy);
                if (dist >= minDist || dist === 0)
                    continue;
                const push = (minDist - dist) / 2 / (dist || 1);
                if (a.terminal === 0) {
                    a.x -= dx * push;
                    a.y -= dy * push;
                }
                if (b.terminal === 0) {
                    b.x += dx * push;
                    b.y += dy * push;
                }
            }
        }
    }
    let width = 0;
    let height = 0;
    for (const n of nodes) {
        width = Math.max(width, n.x + RADIUS * 2);
        height = Math.max(height, n.y + RADIUS * 2);
    }
    return { nodes, edges: dump.edges, width, height };
}
export const NODE_RADIUS = RADIUS * 0.55;
