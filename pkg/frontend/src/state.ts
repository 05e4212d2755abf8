/** View state and the pure update rules the renderer draws from. */

import type {
  MarkDoc,
  ParticlesPayload,
  PredictionPayload,
  SpaceDoc,
} from "./types.js";

/** How many recent clicks the trail keeps visible. */
export const TRAIL_LENGTH = 8;

export interface TrailEntry {
  markId: number;
  t: number;
}

export interface ViewState {
  sessionId: string;
  space: SpaceDoc;
  /** Upper bound on highlight count, from session creation. */
  alpha: number;
  /** Server time: number of clicks applied so far. */
  t: number;
  /** "learning" until the warmup clicks are in, then "ready". */
  status: "learning" | "ready";
  /** Mark ids highlighted as the current prediction, newest response only. */
  highlighted: number[];
  /** Whether the previous prediction contained the latest click. */
  prevHit: boolean | null;
  /** Most recent clicks, oldest first. */
  trail: TrailEntry[];
  /** Posterior overlay toggle and latest snapshot. */
  showParticles: boolean;
  particles: ParticlesPayload | null;
}

export function makeViewState(
  sessionId: string,
  space: SpaceDoc,
  alpha: number,
): ViewState {
  return {
    sessionId,
    space,
    alpha,
    t: 0,
    status: "learning",
    highlighted: [],
    prevHit: null,
    trail: [],
    showParticles: false,
    particles: null,
  };
}

/**
 * Sanitize a server prediction into the ids the UI may highlight: unknown
 * marks are dropped and the list is truncated to alpha, so the rendered
 * set can never exceed alpha or point outside the space.
 */
export function highlightIds(
  state: Pick<ViewState, "space" | "alpha">,
  payload: PredictionPayload,
): number[] {
  if (payload.status !== "ok") {
    return [];
  }
  const known = new Set(state.space.marks.map((m) => m.id));
  return payload.prediction
    .map((entry) => entry.mark_id)
    .filter((id) => known.has(id))
    .slice(0, state.alpha);
}

/** Fold one click response into the view; pure, same inputs same output. */
export function applyClickResponse(
  state: ViewState,
  markId: number,
  payload: PredictionPayload,
): ViewState {
  const trail = [...state.trail, { markId, t: payload.t }].slice(-TRAIL_LENGTH);
  return {
    ...state,
    t: payload.t,
    status: payload.status === "ok" ? "ready" : "learning",
    highlighted: highlightIds(state, payload),
    prevHit: payload.prev_hit ?? null,
    trail,
  };
}

export function applyParticles(
  state: ViewState,
  payload: ParticlesPayload,
): ViewState {
  return { ...state, particles: payload };
}

export function toggleParticles(state: ViewState): ViewState {
  return { ...state, showParticles: !state.showParticles };
}

/** Count the highlighted marks per color class (1..K). */
export function highlightColorCounts(state: ViewState): Map<number, number> {
  const byId = new Map<number, MarkDoc>(
    state.space.marks.map((m) => [m.id, m]),
  );
  const counts = new Map<number, number>();
  for (const id of state.highlighted) {
    const mark = byId.get(id);
    if (mark) {
      counts.set(mark.color, (counts.get(mark.color) ?? 0) + 1);
    }
  }
  return counts;
}

/** Bounding-box area of the highlighted marks, in data units. */
export function highlightArea(state: ViewState): number {
  const byId = new Map(state.space.marks.map((m) => [m.id, m]));
  let minX = Infinity;
  let maxX = -Infinity;
  let minY = Infinity;
  let maxY = -Infinity;
  let n = 0;
  for (const id of state.highlighted) {
    const mark = byId.get(id);
    if (!mark) continue;
    minX = Math.min(minX, mark.x);
    maxX = Math.max(maxX, mark.x);
    minY = Math.min(minY, mark.y);
    maxY = Math.max(maxY, mark.y);
    n += 1;
  }
  return n < 2 ? 0 : (maxX - minX) * (maxY - minY);
}
