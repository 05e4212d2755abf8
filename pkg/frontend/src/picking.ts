/** Click hit-testing: resolve a pointer position to a mark. */

import type { MarkDoc } from "./types.js";

/**
 * Nearest mark within `radius` of (x, y), all in data coordinates.
 *
 * Overlap rule: among equally near marks the topmost wins, i.e. the one
 * drawn last (highest array index). Returns null when nothing is in range.
 */
export function pickMark(
  marks: readonly MarkDoc[],
  x: number,
  y: number,
  radius: number,
): MarkDoc | null {
  const r2 = radius * radius;
  let best: MarkDoc | null = null;
  let bestD2 = Infinity;
  for (const mark of marks) {
    const dx = mark.x - x;
    const dy = mark.y - y;
    const d2 = dx * dx + dy * dy;
    // <= keeps the later (topmost) mark on exact ties
    if (d2 <= r2 && d2 <= bestD2) {
      best = mark;
      bestD2 = d2;
    }
  }
  return best;
}
