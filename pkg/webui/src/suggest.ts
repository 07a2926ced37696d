/** Debounced autosuggest scheduler.
 *
 * Guarantees: requests fire at least `delayMs` after the last keystroke,
 * at most one suggest request is in flight at any time (the previous one
 * is aborted), and stale responses are discarded by sequence number.
 */

import type { ApiClient } from "./api.js";

export class SuggestScheduler {
  private timer: ReturnType<typeof setTimeout> | null = null;
  private controller: AbortController | null = null;
  private seq = 0;
  inFlight = 0;

  constructor(
    private readonly client: ApiClient,
    readonly delayMs = 180,
  ) {}

  request(prefix: string, callback: (suggestions: string[]) => void): void {
    if (this.timer !== null) clearTimeout(this.timer);
    this.timer = setTimeout(() => {
      this.timer = null;
      this.fire(prefix, callback);
    }, this.delayMs);
  }

  private fire(prefix: string, callback: (suggestions: string[]) => void): void {
    if (this.controller !== null) this.controller.abort();
    const controller = new AbortController();
    this.controller = controller;
    const seq = ++this.seq;
    this.inFlight += 1;
    this.client
      .suggest(prefix, 10, controller.signal)
      .then((body) => {
        if (seq === this.seq) callback(body.suggestions);
      })
      .catch(() => {
        // aborted or failed: suggestions are best-effort
      })
      .finally(() => {
        this.inFlight -= 1;
        if (this.controller === controller) this.controller = null;
      });
  }

  cancel(): void {
    if (this.timer !== null) {
      clearTimeout(this.timer);
      this.timer = null;
    }
    if (this.controller !== null) {
      this.controller.abort();
      this.controller = null;
    }
    this.seq += 1;
  }
}
