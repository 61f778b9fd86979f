/** Deterministic circular layout by vertex index (stable screenshots). */

export interface Point {
  x: number;
  y: number;
}

/** Vertex i of n (1-based) on a circle, vertex 1 at the top, clockwise. */
export function circularPosition(
  i: number,
  n: number,
  radius = 160,
  cx = 200,
  cy = 200,
): Point {
  const angle = (2 * Math.PI * (i - 1)) / n - Math.PI / 2;
  return {
    x: Math.round(cx + radius * Math.cos(angle)),
    y: Math.round(cy + radius * Math.sin(angle)),
  };
}
