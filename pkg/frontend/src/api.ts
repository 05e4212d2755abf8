/** Thin typed client for the nextmark HTTP API. */

import type {
  CreateSessionRequest,
  ParticlesPayload,
  PredictionPayload,
  SessionInfo,
  SpaceDoc,
} from "./types.js";

/** Error raised for non-2xx responses, carrying the server's machine code. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  createSession(body: CreateSessionRequest): Promise<SessionInfo> {
    return this.request("POST", "/sessions", body);
  }

  getSpace(sessionId: string): Promise<SpaceDoc> {
    return this.request("GET", `/sessions/${sessionId}/space`);
  }

  postClick(sessionId: string, markId: number): Promise<PredictionPayload> {
    return this.request("POST", `/sessions/${sessionId}/clicks`, {
      mark_id: markId,
    });
  }

  getPrediction(sessionId: string): Promise<PredictionPayload> {
    return this.request("GET", `/sessions/${sessionId}/prediction`);
  }

  getParticles(sessionId: string): Promise<ParticlesPayload> {
    return this.request("GET", `/sessions/${sessionId}/particles`);
  }

  async deleteSession(sessionId: string): Promise<void> {
    await this.request("DELETE", `/sessions/${sessionId}`);
  }

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const resp = await this.fetchFn(this.baseUrl + path, init);
    if (!resp.ok) {
      let code = "HTTP_ERROR";
      let message = `${method} ${path} failed with ${resp.status}`;
      try {
        const payload = (await resp.json()) as {
          error?: { code?: string; message?: string };
        };
        if (payload.error) {
          code = payload.error.code ?? code;
          message = payload.error.message ?? message;
        }
      } catch {
        // non-JSON error body; keep the generic message
      }
      throw new ApiError(resp.status, code, message);
    }
    if (resp.status === 204) {
      return undefined as T;
    }
    return (await resp.json()) as T;
  }
}
