import { describe, expect, it } from "vitest";

import { pickMark } from "../src/picking.js";
import type { MarkDoc } from "../src/types.js";

const marks: MarkDoc[] = [
  { id: 1, x: 0.2, y: 0.2, color: 1 },
  { id: 2, x: 0.5, y: 0.5, color: 2 },
  { id: 3, x: 0.52, y: 0.5, color: 3 },
];

describe("pickMark", () => {
  it("returns the nearest mark within the radius", () => {
    expect(pickMark(marks, 0.505, 0.5, 0.05)?.id).toBe(2);
    expect(pickMark(marks, 0.515, 0.5, 0.05)?.id).toBe(3);
  });

  it("returns null when nothing is in range", () => {
    expect(pickMark(marks, 0.9, 0.9, 0.05)).toBeNull();
    expect(pickMark([], 0.5, 0.5, 1)).toBeNull();
  });

  it("prefers the topmost (last drawn) mark on exact overlap", () => {
    const stacked: MarkDoc[] = [
      { id: 10, x: 0.3, y: 0.3, color: 1 },
      { id: 11, x: 0.3, y: 0.3, color: 2 },
    ];
    expect(pickMark(stacked, 0.3, 0.3, 0.1)?.id).toBe(11);
  });

  it("includes marks exactly on the radius boundary", () => {
    expect(pickMark(marks, 0.2 + 0.05, 0.2, 0.05)?.id).toBe(1);
  });

  it("resolves every mark of a study-sized cloud at its own position", () => {
    const cloud: MarkDoc[] = [];
    let seed = 42;
    const rand = () => {
      // small deterministic LCG so the fixture never shifts between runs
      seed = (seed * 1664525 + 1013904223) % 4294967296;
      return seed / 4294967296;
    };
    for (let i = 0; i < 1951; i++) {
      cloud.push({ id: i + 1, x: rand(), y: rand(), color: (i % 8) + 1 });
    }
    for (const mark of cloud) {
      const picked = pickMark(cloud, mark.x, mark.y, 1e-9);
      expect(picked).not.toBeNull();
      // overlapping coordinates resolve to the topmost mark at that spot
      expect(picked!.x).toBe(mark.x);
      expect(picked!.y).toBe(mark.y);
    }
  });
});
