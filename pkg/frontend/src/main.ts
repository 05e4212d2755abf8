/** Browser entry point: session bootstrap, input wiring, live rendering. */

import { ApiClient } from "./api.js";
import { pickMark } from "./picking.js";
import { ClickQueue } from "./queue.js";
import { drawFrame } from "./render.js";
import {
  applyClickResponse,
  applyParticles,
  makeViewState,
  toggleParticles,
  type ViewState,
} from "./state.js";
import type { PredictionPayload } from "./types.js";

/** Pick radius in CSS pixels; converted to data units per frame. */
const PICK_RADIUS_PX = 14;

function param(name: string, fallback: string): string {
  return new URLSearchParams(window.location.search).get(name) ?? fallback;
}

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing element #${id}`);
  }
  return node as T;
}

async function boot(): Promise<void> {
  const api = new ApiClient(param("api", "http://127.0.0.1:8000"));
  const canvas = el<HTMLCanvasElement>("plot");
  const ctx = canvas.getContext("2d");
  if (!ctx) {
    throw new Error("canvas 2d context unavailable");
  }

  const statusBadge = el<HTMLSpanElement>("status");
  const hitBadge = el<HTMLSpanElement>("prev-hit");
  const clickCount = el<HTMLSpanElement>("click-count");
  const pendingBadge = el<HTMLSpanElement>("pending");
  const overlayBox = el<HTMLInputElement>("overlay");
  const latencyBadge = el<HTMLSpanElement>("latency");

  const info = await api.createSession({
    dataset: {
      n_marks: Number(param("marks", "1951")),
      color_count: Number(param("colors", "8")),
      seed: Number(param("seed", "0")),
    },
    params: {
      particles: Number(param("particles", "1000")),
      alpha: Number(param("alpha", "100")),
      seed: Number(param("filterSeed", "0")),
    },
  });
  const space = await api.getSpace(info.id);
  let state: ViewState = makeViewState(info.id, space, info.alpha);

  const view = { width: canvas.clientWidth, height: canvas.clientHeight };
  const dpr = window.devicePixelRatio || 1;
  canvas.width = Math.round(view.width * dpr);
  canvas.height = Math.round(view.height * dpr);
  ctx.scale(dpr, dpr);

  const render = () => {
    drawFrame(ctx, state, view);
    statusBadge.textContent =
      state.status === "learning"
        ? `learning (${state.t}/${info.warmup} clicks)`
        : `predicting top ${state.highlighted.length}`;
    statusBadge.className = state.status;
    hitBadge.textContent =
      state.prevHit === null ? "-" : state.prevHit ? "hit" : "miss";
    hitBadge.className = state.prevHit === null ? "" : state.prevHit ? "hit" : "miss";
    clickCount.textContent = String(state.t);
  };

  let clickStarted = 0;
  const queue = new ClickQueue<PredictionPayload>(
    (markId) => {
      clickStarted = performance.now();
      return api.postClick(state.sessionId, markId);
    },
    {
      onResult: (markId, payload) => {
        state = applyClickResponse(state, markId, payload);
        render();
        latencyBadge.textContent = `${Math.round(performance.now() - clickStarted)} ms`;
        if (state.showParticles) {
          void refreshParticles();
        }
      },
      onError: (markId, error) => {
        console.error(`click on mark ${markId} dropped`, error);
        statusBadge.textContent = "connection trouble - click again";
      },
      onIdle: (pendingCount) => {
        pendingBadge.textContent = pendingCount > 0 ? `${pendingCount} queued` : "";
      },
    },
  );

  async function refreshParticles(): Promise<void> {
    const payload = await api.getParticles(state.sessionId);
    // a newer click may have landed while this request was out
    if (payload.t === state.t) {
      state = applyParticles(state, payload);
      render();
    }
  }

  canvas.addEventListener("pointerdown", (event) => {
    const rect = canvas.getBoundingClientRect();
    const x = (event.clientX - rect.left) / rect.width;
    const y = (event.clientY - rect.top) / rect.height;
    const mark = pickMark(space.marks, x, y, PICK_RADIUS_PX / rect.width);
    if (mark) {
      queue.enqueue(mark.id);
    }
  });

  overlayBox.addEventListener("change", () => {
    state = toggleParticles(state);
    if (state.showParticles) {
      void refreshParticles();
    } else {
      render();
    }
  });

  window.addEventListener("beforeunload", () => {
    void api.deleteSession(state.sessionId);
  });

  render();
}

boot().catch((error) => {
  console.error(error);
  el<HTMLSpanElement>("status").textContent =
    "failed to reach the prediction service - is `nextmark serve` running?";
});
