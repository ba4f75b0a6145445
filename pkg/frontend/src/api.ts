/** Typed client for the archive JSON API.
 *
 * The fetch function is injected so tests can record the exact URLs the UI
 * issues; everything the client sends is derivable from its arguments.
 */

import type {
  EntityProfile,
  NetworkView,
  QuotesResponse,
  SearchResponse,
  StatsResponse,
} from "./types.js";

export interface SpanQuery {
  from?: string | null;
  to?: string | null;
}

export interface FetchResponse {
  ok: boolean;
  status: number;
  json(): Promise<unknown>;
}

export type FetchLike = (url: string) => Promise<FetchResponse>;

export class ApiError extends Error {
  constructor(
    readonly code: string,
    message: string,
    readonly status: number,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

type ParamValue = string | number | boolean | null | undefined;

/** Serialize query parameters in argument order, dropping empty ones. */
export function buildQuery(params: Record<string, ParamValue>): string {
  const search = new URLSearchParams();
  for (const [key, value] of Object.entries(params)) {
    if (value === null || value === undefined || value === "") continue;
    search.set(key, String(value));
  }
  const text = search.toString();
  return text ? `?${text}` : "";
}

export class ApiClient {
  constructor(
    private readonly fetchFn: FetchLike,
    private readonly base = "",
  ) {}

  private async get<T>(path: string, params: Record<string, ParamValue> = {}): Promise<T> {
    const response = await this.fetchFn(this.base + path + buildQuery(params));
    if (!response.ok) {
      const body = (await response.json().catch(() => ({}))) as {
        code?: string;
        message?: string;
      };
      throw new ApiError(
        body.code ?? "error",
        body.message ?? `request failed with status ${response.status}`,
        response.status,
      );
    }
    return (await response.json()) as T;
  }

  search(q: string, span?: SpanQuery, limit?: number): Promise<SearchResponse> {
    return this.get("/api/search", { q, from: span?.from, to: span?.to, limit });
  }

  entity(id: string, span?: SpanQuery, granularity?: string): Promise<EntityProfile> {
    return this.get(`/api/entity/${encodeURIComponent(id)}`, {
      from: span?.from,
      to: span?.to,
      granularity,
    });
  }

  quotes(id: string, span?: SpanQuery): Promise<QuotesResponse> {
    return this.get(`/api/entity/${encodeURIComponent(id)}/quotes`, {
      from: span?.from,
      to: span?.to,
    });
  }

  network(options: {
    entityId?: string;
    span?: SpanQuery;
    maxNodes?: number;
    layout?: boolean;
  } = {}): Promise<NetworkView> {
    return this.get("/api/network", {
      entity_id: options.entityId,
      from: options.span?.from,
      to: options.span?.to,
      max_nodes: options.maxNodes,
      layout: options.layout ? "true" : undefined,
    });
  }

  stats(): Promise<StatsResponse> {
    return this.get("/api/stats");
  }
}
