// Selection flow: fetch the call path, then POST for summaries, feeding a
// panel sink.  Changing the selection aborts the in-flight request chain,
// so each settled selection completes at most one summaries POST.  Settled
// results are cached per node; re-selecting reuses them without another
// round trip.  Failures surface as a panel error without blanking
// whatever the panel already shows.

import type { ApiClient } from "./api.js";
import type { CallPath, SummaryEntry } from "./types.js";

export interface PanelSink {
  showPath(path: CallPath): void;
  showSummaries(path: CallPath, entries: SummaryEntry[]): void;
  showError(message: string): void;
}

export interface SettledSelection {
  path: CallPath;
  entries: SummaryEntry[];
}

function isAbort(err: unknown): boolean {
  return err instanceof DOMException
    ? err.name === "AbortError"
    : err instanceof Error && err.name === "AbortError";
}

export class SelectionController {
  private inflight: AbortController | null = null;
  private readonly cache = new Map<string, SettledSelection>();
  endpoint = "";

  constructor(
    private readonly api: ApiClient,
    private readonly panel: PanelSink,
  ) {}

  clearCache(): void {
    this.cache.clear();
  }

  /** Select a node; resolves when the selection settles or is superseded. */
  async select(nodeId: string): Promise<void> {
    if (this.inflight) {
      this.inflight.abort();
      this.inflight = null;
    }
    const cached = this.cache.get(nodeId);
    if (cached) {
      this.panel.showSummaries(cached.path, cached.entries);
      return;
    }
    const token = new AbortController();
    this.inflight = token;
    try {
      const path = await this.api.callpath(nodeId, token.signal);
      if (token.signal.aborted) return;
      this.panel.showPath(path);
      const entries = await this.api.summaries(nodeId, this.endpoint, token.signal);
      if (token.signal.aborted) return;
      this.cache.set(nodeId, { path, entries });
      this.panel.showSummaries(path, entries);
    } catch (err) {
      if (!isAbort(err)) {
        this.panel.showError(err instanceof Error ? err.message : String(err));
      }
    } finally {
      if (this.inflight === token) {
        this.inflight = null;
      }
    }
  }
}

/** Panel display order mirrors the API: parents, current, children. */
export function pathOrder(path: CallPath): string[] {
  return [...path.parents, path.current, ...path.children].map((n) => n.id);
}
