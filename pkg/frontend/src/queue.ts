/** Ordered click delivery: one request in flight, the rest queued. */

export interface QueueCallbacks<T> {
  /** Called with each response, in click order. */
  onResult: (markId: number, result: T) => void;
  /** Called when a click is dropped after exhausting its retries. */
  onError: (markId: number, error: unknown) => void;
  /** Called whenever the in-flight/pending state changes. */
  onIdle?: (pendingCount: number) => void;
}

/**
 * Serializes clicks to the session: at most one request is in flight and
 * later clicks wait their turn, so server-side t always advances in the
 * order the user clicked. A failed send is retried in place (the click
 * keeps its position) up to `maxRetries` times before being dropped.
 */
export class ClickQueue<T> {
  private pending: number[] = [];
  private inFlight = false;

  constructor(
    private readonly send: (markId: number) => Promise<T>,
    private readonly callbacks: QueueCallbacks<T>,
    private readonly maxRetries = 2,
    private readonly retryDelayMs = 250,
    private readonly delay: (ms: number) => Promise<void> = (ms) =>
      new Promise((resolve) => setTimeout(resolve, ms)),
  ) {}

  /** Number of clicks not yet answered (queued plus in flight). */
  get pendingCount(): number {
    return this.pending.length + (this.inFlight ? 1 : 0);
  }

  enqueue(markId: number): void {
    this.pending.push(markId);
    void this.pump();
  }

  private async pump(): Promise<void> {
    if (this.inFlight) {
      return;
    }
    this.inFlight = true;
    try {
      while (this.pending.length > 0) {
        const markId = this.pending.shift()!;
        await this.deliver(markId);
        this.callbacks.onIdle?.(this.pendingCount);
      }
    } finally {
      this.inFlight = false;
      this.callbacks.onIdle?.(this.pendingCount);
    }
  }

  private async deliver(markId: number): Promise<void> {
    for (let attempt = 0; ; attempt++) {
      try {
        const result = await this.send(markId);
        this.callbacks.onResult(markId, result);
        return;
      } catch (error) {
        if (attempt >= this.maxRetries) {
          this.callbacks.onError(markId, error);
          return;
        }
        await this.delay(this.retryDelayMs * (attempt + 1));
      }
    }
  }
}
