import { describe, expect, it } from "vitest";

import {
  applyClickResponse,
  applyParticles,
  highlightArea,
  highlightColorCounts,
  makeViewState,
  toggleParticles,
  TRAIL_LENGTH,
} from "../src/state.js";
import type {
  PredictionPayload,
  SpaceDoc,
} from "../src/types.js";

/** Two color clusters: blue (1) lower-left, green (2) upper-right. */
function clusteredSpace(): SpaceDoc {
  const marks = [];
  for (let i = 0; i < 10; i++) {
    marks.push({ id: i + 1, x: 0.2 + 0.01 * i, y: 0.2 + 0.012 * i, color: 1 });
    marks.push({ id: i + 11, x: 0.7 + 0.01 * i, y: 0.7 + 0.012 * i, color: 2 });
  }
  return { width: 1, height: 1, color_count: 2, marks };
}

function ok(t: number, ids: number[], prevHit?: boolean | null): PredictionPayload {
  return {
    t,
    status: "ok",
    prediction: ids.map((id, i) => ({ mark_id: id, score: 1 - i * 0.01 })),
    prev_hit: prevHit,
  };
}

const WARMUP: PredictionPayload = { t: 1, status: "warmup", prediction: [] };

describe("view state", () => {
  it("shows no highlights and a learning badge during warmup", () => {
    const state = makeViewState("s", clusteredSpace(), 5);
    const next = applyClickResponse(state, 1, WARMUP);
    expect(next.status).toBe("learning");
    expect(next.highlighted).toEqual([]);
    expect(next.t).toBe(1);
  });

  it("highlights exactly the returned set once predictions arrive", () => {
    const state = makeViewState("s", clusteredSpace(), 5);
    const next = applyClickResponse(state, 1, ok(3, [1, 2, 3, 4, 5]));
    expect(next.status).toBe("ready");
    expect(next.highlighted).toEqual([1, 2, 3, 4, 5]);
  });

  it("never highlights more than alpha marks", () => {
    const state = makeViewState("s", clusteredSpace(), 3);
    const next = applyClickResponse(state, 1, ok(3, [1, 2, 3, 4, 5, 6]));
    expect(next.highlighted).toEqual([1, 2, 3]);
  });

  it("drops prediction ids that are not in the space", () => {
    const state = makeViewState("s", clusteredSpace(), 5);
    const next = applyClickResponse(state, 1, ok(3, [1, 999, 2]));
    expect(next.highlighted).toEqual([1, 2]);
  });

  it("tracks hit/miss of the previous prediction", () => {
    const state = makeViewState("s", clusteredSpace(), 5);
    expect(state.prevHit).toBeNull();
    const hit = applyClickResponse(state, 1, ok(4, [1], true));
    expect(hit.prevHit).toBe(true);
    const miss = applyClickResponse(hit, 2, ok(5, [1], false));
    expect(miss.prevHit).toBe(false);
  });

  it("caps the click trail and keeps it oldest-first", () => {
    let state = makeViewState("s", clusteredSpace(), 5);
    for (let t = 1; t <= TRAIL_LENGTH + 3; t++) {
      state = applyClickResponse(state, t <= 10 ? t : 1, ok(t, [1]));
    }
    expect(state.trail.length).toBe(TRAIL_LENGTH);
    expect(state.trail[state.trail.length - 1].t).toBe(TRAIL_LENGTH + 3);
    expect(state.trail[0].t).toBe(4);
  });

  it("is idempotent: replaying the same response yields the same view", () => {
    const state = makeViewState("s", clusteredSpace(), 5);
    const a = applyClickResponse(state, 2, ok(4, [2, 3], true));
    const b = applyClickResponse(state, 2, ok(4, [2, 3], true));
    expect(a).toEqual(b);
  });

  it("stores particle snapshots and toggles the overlay", () => {
    let state = makeViewState("s", clusteredSpace(), 5);
    expect(state.showParticles).toBe(false);
    state = toggleParticles(state);
    expect(state.showParticles).toBe(true);
    state = applyParticles(state, {
      t: 0,
      n_particles: 100,
      points: [{ x: 0.5, y: 0.5, k: 1 }],
      pi_hist: Array(10).fill(0.1),
    });
    expect(state.particles?.points.length).toBe(1);
    expect(toggleParticles(state).showParticles).toBe(false);
  });

  it("reflects dwell-then-switch: converge on one color, then broaden", () => {
    // scripted responses mimicking the engine: three clicks in the blue
    // cluster narrow the set to blues; a green click widens the colors
    let state = makeViewState("s", clusteredSpace(), 6);
    state = applyClickResponse(state, 1, WARMUP);
    state = applyClickResponse(state, 2, { ...WARMUP, t: 2 });
    state = applyClickResponse(state, 3, ok(3, [1, 2, 3, 4, 5, 6]));

    const converged = highlightColorCounts(state);
    expect(converged.get(1)).toBe(6);
    expect(converged.get(2)).toBeUndefined();
    const tightArea = highlightArea(state);

    state = applyClickResponse(state, 11, ok(4, [1, 2, 3, 11, 12, 13]));
    const broadened = highlightColorCounts(state);
    expect(broadened.get(1)).toBe(3);
    expect(broadened.get(2)).toBe(3);
    expect(highlightArea(state)).toBeGreaterThan(tightArea);
  });
});
