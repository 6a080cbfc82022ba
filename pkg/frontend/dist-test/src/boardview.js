// SVG hex board: colored stones, click-to-move, last-move marker, and an
// optional evaluation heatmap overlay. All legality comes from the server.
import { cellName } from "./api.js";
import { boardExtent, cellCenter, hexCorners, polygonPoints } from "./hexgeom.js";
import { heatColor, heatOpacity, heatmap } from "./heatmap.js";
const SVG_NS = "http://www.w3.org/2000/svg";
const RADIUS = 22;
export class BoardView {
    root;
    callbacks;
    showHeatmap = true;
    hovered = null;
    constructor(root, callbacks) {
        this.root = root;
        this.callbacks = callbacks;
    }
    setHover(cell) {
        this.hovered = cell;
        for (const el of this.root.querySelectorAll("polygon[data-cell]")) {
            el.classList.toggle("hovered", el.dataset.cell === cell);
        }
    }
    render(state) {
        const n = state.size;
        const { width, height } = boardExtent(n, RADIUS);
        const svg = document.createElementNS(SVG_NS, "svg");
        svg.setAttribute("viewBox", `0 0 ${width + RADIUS * 2} ${height}`);
        svg.classList.add("board");
        this.drawBorders(svg, n);
        const heat = new Map(heatmap(state.eval).map((h) => [h.cell, h]));
        const lastMove = state.moves[state.moves.length - 1];
        for (let r = 0; r < n; r++) {
            for (let c = 0; c < n; c++) {
                const name = cellName(r, c);
                const stone = state.board[r][c];
                const center = cellCenter(r, c, RADIUS);
                const poly = document.createElementNS(SVG_NS, "polygon");
                poly.setAttribute("points", polygonPoints(hexCorners(center, RADIUS * 0.96)));
                poly.dataset.cell = name;
                poly.classList.add("cell");
                if (stone === "r")
                    poly.classList.add("stone-red");
                else if (stone === "b")
                    poly.classList.add("stone-blue");
                else
                    poly.classList.add("empty");
                const entry = heat.get(name);
                if (this.showHeatmap && stone === "." && entry) {
                    poly.style.fill = heatColor(entry.norm);
                    poly.style.fillOpacity = String(heatOpacity(entry.norm));
                    poly.classList.add("heat");
                }
                poly.addEventListener("click", () => {
                    if (stone === ".")
                        this.callbacks.onCellClick(name);
                });
                poly.addEventListener("mouseenter", () => this.callbacks.onHover(name));
                poly.addEventListener("mouseleave", () => this.callbacks.onHover(null));
                svg.appendChild(poly);
                if (name === lastMove) {
                    const mark = document.createElementNS(SVG_NS, "circle");
                    mark.setAttribute("cx", String(center.x));
                    mark.setAttribute("cy", String(center.y));
                    mark.setAttribute("r", String(RADIUS * 0.22));
                    mark.classList.add("last-move");
                    svg.appendChild(mark);
                }
                if (this.showHeatmap && entry) {
                    const label = document.createElementNS(SVG_NS, "text");
                    label.setAttribute("x", String(center.x));
                    label.setAttribute("y", String(center.y + 4));
                    label.classList.add("heat-label");
                    label.textContent = entry.value.toFixed(2);
                    svg.appendChild(label);
                }
            }
        }
        this.root.replaceChildren(svg);
        this.setHover(this.hovered);
    }
    drawBorders(svg, n) {
        const first = cellCenter(0, 0, RADIUS);
        const lastTop = cellCenter(0, n - 1, RADIUS);
        const firstBottom = cellCenter(n - 1, 0, RADIUS);
        const lastBottom = cellCenter(n - 1, n - 1, RADIUS);
        const strip = (x1, y1, x2, y2, cls) => {
            const line = document.createElementNS(SVG_NS, "line");
            line.setAttribute("x1", String(x1));
            line.setAttribute("y1", String(y1));
            line.setAttribute("x2", String(x2));
            line.setAttribute("y2", String(y2));
            line.classList.add("border", cls);
            svg.appendChild(line);
        };
        strip(first.x - RADIUS, first.y - RADIUS * 1.6, lastTop.x + RADIUS, lastTop.y - RADIUS * 1.6, "border-red");
        strip(firstBottom.x - RADIUS, firstBottom.y + RADIUS * 1.6, lastBottom.x + RADIUS, lastBottom.y + RADIUS * 1.6, "border-red");
        strip(first.x - RADIUS * 1.5, first.y - RADIUS, firstBottom.x - RADIUS * 1.5, firstBottom.y + RADIUS, "border-blue");
        strip(lastTop.x + RADIUS * 1.5, lastTop.y - RADIUS, lastBottom.x + RADIUS * 1.5, lastBottom.y + RADIUS, "border-blue");
    }
}
