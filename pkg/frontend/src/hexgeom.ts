// Pointy-top hexagon geometry for the rhombic Hex board. Cell (r, c) shifts
// half a hex right per row, matching the engine's adjacency:
// (±1,0), (0,±1), (+1,-1), (-1,+1).

export interface Point {
  x: number;
  y: number;
}

export const SQRT3 = Math.sqrt(3);

export function cellCenter(row: number, col: number, radius: number): Point {
  return {
    x: radius * SQRT3 * (col + row / 2) + radius * SQRT3,
    y: radius * 1.5 * row + radius * 2,
  };
}

export function hexCorners(center: Point, radius: number): Point[] {
  const pts: Point[] = [];
  for (let k = 0; k < 6; k++) {
    const angle = (Math.PI / 180) * (60 * k - 30);
    pts.push({
      x: center.x + radius * Math.cos(angle),
      y: center.y + radius * Math.sin(angle),
    });
  }
  return pts;
}

export function polygonPoints(corners: Point[]): string {
  return corners.map((p) => `${p.x.toFixed(2)},${p.y.toFixed(2)}`).join(" ");
}

export function boardExtent(size: number, radius: number): { width: number; height: number } {
  const last = cellCenter(size - 1, size - 1, radius);
  return { width: last.x + radius * 2, height: last.y + radius * 2 };
}

/** The six neighbor offsets used across the project. */
export const NEIGHBOR_OFFSETS: ReadonlyArray<readonly [number, number]> = [
  [-1, 0], [1, 0], [0, -1], [0, 1], [1, -1], [-1, 1],
];

export function areNeighbors(a: { row: number; col: number },
                             b: { row: number; col: number }): boolean {
  return NEIGHBOR_OFFSETS.some(([dr, dc]) => a.row + dr === b.row && a.col + dc === b.col);
}
