// Thin typed client over the service's JSON API.  The fetch function is
// injected so tests can drive the client without a network.

import type { CallPath, FlatRow, Meta, SummaryEntry, TreeNode, ViewName } from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
  }
}

export class ApiClient {
  constructor(
    private readonly base: string = "",
    private readonly fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async getJson<T>(path: string, signal?: AbortSignal): Promise<T> {
    const response = await this.fetchFn(this.base + path, { signal });
    if (!response.ok) {
      throw new ApiError(response.status, `GET ${path} -> ${response.status}`);
    }
    return (await response.json()) as T;
  }

  meta(): Promise<Meta> {
    return this.getJson("/api/meta");
  }

  tree(view: Exclude<ViewName, "flat">, metric: string): Promise<TreeNode> {
    const q = metric ? `&metric=${encodeURIComponent(metric)}` : "";
    return this.getJson(`/api/tree?view=${view}${q}`);
  }

  flat(metric: string): Promise<FlatRow[]> {
    const q = metric ? `?metric=${encodeURIComponent(metric)}` : "";
    return this.getJson(`/api/flat${q}`);
  }

  callpath(nodeId: string, signal?: AbortSignal): Promise<CallPath> {
    return this.getJson(`/api/node/${nodeId}/callpath`, signal);
  }

  async summaries(
    nodeId: string,
    endpoint: string,
    signal?: AbortSignal,
  ): Promise<SummaryEntry[]> {
    const headers: Record<string, string> = {};
    if (endpoint) {
      headers["X-Summarizer-Endpoint"] = endpoint;
    }
    const response = await this.fetchFn(`${this.base}/api/node/${nodeId}/summaries`, {
      method: "POST",
      headers,
      signal,
    });
    if (!response.ok) {
      throw new ApiError(response.status, `POST summaries -> ${response.status}`);
    }
    const body = (await response.json()) as { entries: SummaryEntry[] };
    return body.entries;
  }

  source(file: string, start: number, end: number): Promise<{ lines: string[] }> {
    const q = `file=${encodeURIComponent(file)}&start=${start}&end=${end}`;
    return this.getJson(`/api/source?${q}`);
  }
}
