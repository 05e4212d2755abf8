import { describe, expect, it } from "vitest";

import { ClickQueue, type QueueCallbacks } from "../src/queue.js";

const instantDelay = () => Promise.resolve();

function collector() {
  const results: Array<[number, string]> = [];
  const errors: number[] = [];
  const callbacks: QueueCallbacks<string> = {
    onResult: (markId, result) => results.push([markId, result]),
    onError: (markId) => errors.push(markId),
  };
  return { results, errors, callbacks };
}

describe("ClickQueue", () => {
  it("delivers responses in click order", async () => {
    const { results, callbacks } = collector();
    const queue = new ClickQueue<string>(
      async (markId) => `r${markId}`,
      callbacks,
      0,
      0,
      instantDelay,
    );
    queue.enqueue(7);
    queue.enqueue(8);
    queue.enqueue(9);
    await Promise.resolve();
    await new Promise((r) => setTimeout(r, 0));
    expect(results).toEqual([
      [7, "r7"],
      [8, "r8"],
      [9, "r9"],
    ]);
  });

  it("never runs two sends concurrently", async () => {
    let active = 0;
    let peak = 0;
    const { callbacks } = collector();
    const queue = new ClickQueue<string>(
      async (markId) => {
        active += 1;
        peak = Math.max(peak, active);
        await new Promise((r) => setTimeout(r, 2));
        active -= 1;
        return `r${markId}`;
      },
      callbacks,
      0,
      0,
      instantDelay,
    );
    for (let i = 0; i < 6; i++) {
      queue.enqueue(i);
    }
    expect(queue.pendingCount).toBe(6);
    await new Promise((r) => setTimeout(r, 50));
    expect(peak).toBe(1);
    expect(queue.pendingCount).toBe(0);
  });

  it("retries a failed send without losing order", async () => {
    const { results, errors, callbacks } = collector();
    let failures = 2;
    const queue = new ClickQueue<string>(
      async (markId) => {
        if (markId === 1 && failures > 0) {
          failures -= 1;
          throw new Error("network down");
        }
        return `r${markId}`;
      },
      callbacks,
      2,
      0,
      instantDelay,
    );
    queue.enqueue(1);
    queue.enqueue(2);
    await new Promise((r) => setTimeout(r, 10));
    expect(results).toEqual([
      [1, "r1"],
      [2, "r2"],
    ]);
    expect(errors).toEqual([]);
  });

  it("drops a click after exhausting retries and keeps going", async () => {
    const { results, errors, callbacks } = collector();
    const queue = new ClickQueue<string>(
      async (markId) => {
        if (markId === 5) {
          throw new Error("always fails");
        }
        return `r${markId}`;
      },
      callbacks,
      1,
      0,
      instantDelay,
    );
    queue.enqueue(5);
    queue.enqueue(6);
    await new Promise((r) => setTimeout(r, 10));
    expect(errors).toEqual([5]);
    expect(results).toEqual([[6, "r6"]]);
  });

  it("reports pending counts through onIdle", async () => {
    const seen: number[] = [];
    const queue = new ClickQueue<string>(
      async (markId) => `r${markId}`,
      {
        onResult: () => {},
        onError: () => {},
        onIdle: (pending) => seen.push(pending),
      },
      0,
      0,
      instantDelay,
    );
    queue.enqueue(1);
    queue.enqueue(2);
    await new Promise((r) => setTimeout(r, 10));
    expect(seen[seen.length - 1]).toBe(0);
    expect(Math.max(...seen)).toBeGreaterThanOrEqual(1);
  });
});
