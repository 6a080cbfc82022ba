// Node-link view of the live Shannon graph. Terminals are squares, playable
// nodes circles; hovering links nodes with their board cells both ways, and
// the node count makes the one-node-per-move shrinkage visible.
import { NODE_RADIUS, layoutGraph } from "./graphlayout.js";
const SVG_NS = "http://www.w3.org/2000/svg";
export class GraphView {
    root;
    counter;
    callbacks;
    hovered = null;
    constructor(root, counter, callbacks) {
        this.root = root;
        this.counter = counter;
        this.callbacks = callbacks;
    }
    setHover(cell) {
        this.hovered = cell;
        for (const el of this.root.querySelectorAll("[data-cell]")) {
            el.classList.toggle("hovered", el.getAttribute("data-cell") === cell);
        }
    }
    render(state) {
        const layout = layoutGraph(state.graph, state.size);
        const svg = document.createElementNS(SVG_NS, "svg");
        svg.setAttribute("viewBox", `0 0 ${layout.width} ${layout.height}`);
        svg.classList.add("graph");
        const byId = new Map(layout.nodes.map((n) => [n.id, n]));
        for (const [a, b] of layout.edges) {
            const na = byId.get(a);
            const nb = byId.get(b);
            const line = document.createElementNS(SVG_NS, "line");
            line.setAttribute("x1", String(na.x));
            line.setAttribute("y1", String(na.y));
            line.setAttribute("x2", String(nb.x));
            line.setAttribute("y2", String(nb.y));
            line.classList.add("edge");
            svg.appendChild(line);
        }
        const nodeScores = this.nodeScores(state.eval);
        for (const node of layout.nodes) {
            let shape;
            if (node.terminal !== 0) {
                shape = document.createElementNS(SVG_NS, "rect");
                shape.setAttribute("x", String(node.x - NODE_RADIUS));
                shape.setAttribute("y", String(node.y - NODE_RADIUS));
                shape.setAttribute("width", String(NODE_RADIUS * 2));
                shape.setAttribute("height", String(NODE_RADIUS * 2));
                shape.classList.add("terminal");
            }
            else {
                shape = document.createElementNS(SVG_NS, "circle");
                shape.setAttribute("cx", String(node.x));
                shape.setAttribute("cy", String(node.y));
                shape.setAttribute("r", String(NODE_RADIUS));
                shape.classList.add("node");
                shape.setAttribute("data-cell", node.label);
                shape.addEventListener("mouseenter", () => this.callbacks.onHover(node.label));
                shape.addEventListener("mouseleave", () => this.callbacks.onHover(null));
            }
            svg.appendChild(shape);
            const text = document.createElementNS(SVG_NS, "text");
            text.setAttribute("x", String(node.x));
            text.setAttribute("y", String(node.y + 3));
            text.classList.add("node-label");
            text.textContent = node.label;
            svg.appendChild(text);
            const score = nodeScores.get(node.id);
            if (score !== undefined) {
                const tag = document.createElementNS(SVG_NS, "text");
                tag.setAttribute("x", String(node.x));
                tag.setAttribute("y", String(node.y + NODE_RADIUS * 1.9));
                tag.classList.add("node-score");
                tag.textContent = score.toFixed(2);
                svg.appendChild(tag);
            }
        }
        this.root.replaceChildren(svg);
        this.counter.textContent =
            `${state.node_count} nodes (${state.graph.perspective} perspective, ` +
                `${state.graph.to_move} to move)`;
        this.setHover(this.hovered);
    }
    nodeScores(ev) {
        const out = new Map();
        const source = ev?.q_nodes ?? ev?.pi_nodes;
        if (source) {
            for (const [id, value] of Object.entries(source)) {
                out.set(Number(id), value);
            }
        }
        return out;
    }
}
