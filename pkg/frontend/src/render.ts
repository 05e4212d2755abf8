/** Canvas drawing: base scatterplot plus prediction/posterior overlays.

 Drawing is a pure function of (state, viewport): rendering the same state
 twice issues the identical command sequence, so re-renders are idempotent.
 The context parameter is the small structural subset of
 CanvasRenderingContext2D we use, which keeps the renderer testable with a
 recording stub. */

import type { ViewState } from "./state.js";

/** The 2D-context surface the renderer needs. */
export interface Draw2D {
  fillStyle: string | CanvasGradient | CanvasPattern;
  strokeStyle: string | CanvasGradient | CanvasPattern;
  lineWidth: number;
  globalAlpha: number;
  clearRect(x: number, y: number, w: number, h: number): void;
  fillRect(x: number, y: number, w: number, h: number): void;
  strokeRect(x: number, y: number, w: number, h: number): void;
  beginPath(): void;
  arc(x: number, y: number, r: number, a0: number, a1: number): void;
  fill(): void;
  stroke(): void;
}

export interface Viewport {
  width: number;
  height: number;
}

/** Categorical palette, color class k in 1..K -> CSS color. */
export const PALETTE = [
  "#4269d0", "#efb118", "#ff725c", "#6cc5b0", "#3ca951",
  "#ff8ab7", "#a463f2", "#97bbf5", "#9c6b4e", "#9498a0",
];

export function colorFor(k: number): string {
  return PALETTE[(k - 1) % PALETTE.length];
}

const MARK_RADIUS = 3;
const HALO_RADIUS = 5.5;
const PARTICLE_RADIUS = 1.2;

function toPx(v: number, extent: number): number {
  return v * extent;
}

/** Draw the full frame: marks, halos, trail, optional particle overlay. */
export function drawFrame(
  ctx: Draw2D,
  state: ViewState,
  view: Viewport,
): void {
  ctx.clearRect(0, 0, view.width, view.height);
  ctx.globalAlpha = 1;
  ctx.fillStyle = "#ffffff";
  ctx.fillRect(0, 0, view.width, view.height);

  // base marks, color-mapped
  for (const mark of state.space.marks) {
    ctx.beginPath();
    ctx.arc(
      toPx(mark.x, view.width),
      toPx(mark.y, view.height),
      MARK_RADIUS,
      0,
      2 * Math.PI,
    );
    ctx.fillStyle = colorFor(mark.color);
    ctx.fill();
  }

  // prediction halos: outline only, the base encoding stays visible
  const byId = new Map(state.space.marks.map((m) => [m.id, m]));
  ctx.strokeStyle = "#1a1a1a";
  ctx.lineWidth = 1.5;
  for (const id of state.highlighted) {
    const mark = byId.get(id);
    if (!mark) continue;
    ctx.beginPath();
    ctx.arc(
      toPx(mark.x, view.width),
      toPx(mark.y, view.height),
      HALO_RADIUS,
      0,
      2 * Math.PI,
    );
    ctx.stroke();
  }

  // click trail, fading toward older clicks
  for (let i = 0; i < state.trail.length; i++) {
    const mark = byId.get(state.trail[i].markId);
    if (!mark) continue;
    ctx.globalAlpha = (i + 1) / state.trail.length;
    ctx.strokeStyle = "#d62728";
    ctx.lineWidth = 2;
    ctx.beginPath();
    ctx.arc(
      toPx(mark.x, view.width),
      toPx(mark.y, view.height),
      HALO_RADIUS + 2.5,
      0,
      2 * Math.PI,
    );
    ctx.stroke();
  }
  ctx.globalAlpha = 1;

  if (state.showParticles && state.particles) {
    drawParticles(ctx, state, view);
  }
}

function drawParticles(ctx: Draw2D, state: ViewState, view: Viewport): void {
  const particles = state.particles!;
  ctx.globalAlpha = 0.35;
  for (const p of particles.points) {
    ctx.beginPath();
    ctx.arc(
      toPx(p.x, view.width),
      toPx(p.y, view.height),
      PARTICLE_RADIUS,
      0,
      2 * Math.PI,
    );
    ctx.fillStyle = colorFor(p.k);
    ctx.fill();
  }
  ctx.globalAlpha = 1;

  // bias histogram in the lower-left corner: left bars = color-driven,
  // right bars = location-driven attention
  const barW = 12;
  const maxH = 48;
  const x0 = 8;
  const y0 = view.height - 8;
  const peak = Math.max(...particles.pi_hist, 1e-9);
  ctx.fillStyle = "#555555";
  for (let i = 0; i < particles.pi_hist.length; i++) {
    const h = (particles.pi_hist[i] / peak) * maxH;
    ctx.fillRect(x0 + i * (barW + 1), y0 - h, barW, h);
  }
  ctx.strokeStyle = "#999999";
  ctx.lineWidth = 1;
  ctx.strokeRect(
    x0 - 2,
    y0 - maxH - 2,
    particles.pi_hist.length * (barW + 1) + 3,
    maxH + 4,
  );
}
