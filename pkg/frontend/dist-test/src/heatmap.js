// Heatmap scaling for evaluation overlays. Values are displayed verbatim
// from the payload; only the color mapping normalizes.
/** Cell-keyed scores of the payload: Q values or visit-count policy. */
export function evalScores(ev) {
    if (!ev)
        return {};
    if (ev.kind === "q" && ev.q_cells)
        return ev.q_cells;
    if ((ev.kind === "mcts" || ev.kind === "policy") && ev.pi)
        return ev.pi;
    return {};
}
export function heatmap(ev) {
    const scores = evalScores(ev);
    const names = Object.keys(scores);
    if (names.length === 0)
        return [];
    let lo = Infinity;
    let hi = -Infinity;
    for (const name of names) {
        lo = Math.min(lo, scores[name]);
        hi = Math.max(hi, scores[name]);
    }
    const span = hi - lo;
    return names.map((cell) => ({
        cell,
        value: scores[cell],
        norm: span > 0 ? (scores[cell] - lo) / span : 1.0,
    }));
}
/** The payload's best cell: highest score, first in insertion order on ties. */
export function argmaxCell(ev) {
    const scores = evalScores(ev);
    let best = null;
    let bestValue = -Infinity;
    for (const [cell, value] of Object.entries(scores)) {
        if (value > bestValue) {
            best = cell;
            bestValue = value;
        }
    }
    return best;
}
/** Opacity ramp for overlay fills. */
export function heatOpacity(norm) {
    return 0.12 + 0.55 * norm;
}
export function heatColor(norm) {
    const hue = 240 - 240 * norm; // blue (cold) to red (hot)
    return `hsl(${hue.toFixed(0)}, 85%, 55%)`;
}
