/** Thin typed client over the documented endpoints. All server scoring and
 * ranking stays server-side; this module only shapes URLs and errors. */

import type {
  DocDetail,
  HealthResponse,
  Operator,
  ProjectionResponse,
  SearchResponse,
  SuggestResponse,
} from "./types.js";

export interface ResponseLike {
  ok: boolean;
  status: number;
  statusText: string;
  json(): Promise<unknown>;
}

export type FetchLike = (
  url: string,
  init?: { signal?: AbortSignal },
) => Promise<ResponseLike>;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

export class ApiClient {
  constructor(
    private readonly base: string,
    private readonly fetchFn: FetchLike,
  ) {}

  private async get<T>(path: string, signal?: AbortSignal): Promise<T> {
    const response = await this.fetchFn(this.base + path, { signal });
    if (!response.ok) {
      let code = "error";
      let message = response.statusText;
      try {
        const body = (await response.json()) as { error?: string; message?: string };
        if (body.error) code = body.error;
        if (body.message) message = body.message;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(response.status, code, message);
    }
    return (await response.json()) as T;
  }

  search(terms: string[], op: Operator, limit = 50): Promise<SearchResponse> {
    const params = new URLSearchParams();
    terms.forEach((term, i) => {
      params.set(i === 0 ? "keyword" : `keyword${i + 1}`, term);
    });
    params.set("op", op);
    params.set("limit", String(limit));
    return this.get<SearchResponse>(`/gp/api?${params.toString()}`);
  }

  suggest(prefix: string, k = 10, signal?: AbortSignal): Promise<SuggestResponse> {
    const params = new URLSearchParams({ q: prefix, k: String(k) });
    return this.get<SuggestResponse>(`/gp/api/suggest?${params.toString()}`, signal);
  }

  doc(docId: string): Promise<DocDetail> {
    return this.get<DocDetail>(`/gp/api/doc/${encodeURIComponent(docId)}`);
  }

  projection(): Promise<ProjectionResponse> {
    return this.get<ProjectionResponse>("/gp/api/projection");
  }

  health(): Promise<HealthResponse> {
    return this.get<HealthResponse>("/gp/api/health");
  }
}
