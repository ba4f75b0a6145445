/** Canned API payloads and state builders shared by the contract tests. */

import type { FetchResponse } from "../src/api.js";
import type {
  EntityProfile,
  NetworkView,
  QuotesResponse,
  SearchResponse,
  StatsResponse,
} from "../src/types.js";
import { initialState, type AppState, type EntityState } from "../src/viewmodel.js";

export function searchResponse(): SearchResponse {
  return {
    query: "corrupção",
    span: { from: null, to: null },
    results: [
      {
        entity_id: "ana-silva",
        canonical_name: "Ana Silva",
        profession: "político",
        score: 2.31,
        snippet_count: 12,
      },
      {
        entity_id: "rui-alves",
        canonical_name: "Rui Alves",
        profession: "",
        score: 1.7,
        snippet_count: 8,
      },
      {
        entity_id: "pedro-costa",
        canonical_name: "Pedro Costa",
        profession: "economista",
        score: 0.9,
        snippet_count: 3,
      },
    ],
  };
}

export function entityProfile(): EntityProfile {
  return {
    entity_id: "ana-silva",
    canonical_name: "Ana Silva",
    aliases: ["Ana Silva", "Silva"],
    profession: "político",
    professions: [
      { name: "político", count: 4 },
      { name: "ministra", count: 1 },
    ],
    first_seen: "2011-03-02",
    last_seen: "2011-05-14",
    span: { from: null, to: null },
    articles: [
      {
        doc_id: "d1",
        source: "diario",
        category: "politics",
        title: "Parliament debates the budget",
        published_at: "2011-03-02T10:00:00+00:00",
      },
      {
        doc_id: "d2",
        source: "publico",
        category: "politics",
        title: "Committee hears the minister",
        published_at: "2011-05-14T09:00:00+00:00",
      },
    ],
    quotations: [
      {
        doc_id: "d2",
        sentence_index: 1,
        kind: "direct",
        text: "We move on",
        published_at: "2011-05-14T09:00:00+00:00",
      },
    ],
    related: [
      { entity_id: "rui-alves", canonical_name: "Rui Alves", weight: 3 },
      { entity_id: "pedro-costa", canonical_name: "Pedro Costa", weight: 1 },
    ],
    timeline: {
      granularity: "month",
      buckets: [
        { bucket: "2011-03", count: 2 },
        { bucket: "2011-04", count: 0 },
        { bucket: "2011-05", count: 1 },
      ],
    },
  };
}

export function quotesResponse(): QuotesResponse {
  return {
    entity_id: "ana-silva",
    canonical_name: "Ana Silva",
    span: { from: null, to: null },
    quotations: entityProfile().quotations,
  };
}

export function networkView(): NetworkView {
  return {
    span: { from: null, to: null },
    nodes: [
      {
        id: "ana-silva",
        label: "Ana Silva",
        weight: 4,
        color_key: "politics",
        pos: { x: 0, y: 0 },
      },
      {
        id: "rui-alves",
        label: "Rui Alves",
        weight: 1,
        color_key: "politics",
        pos: { x: 10, y: 0 },
      },
      {
        id: "pedro-costa",
        label: "Pedro Costa",
        weight: 2,
        color_key: "economy",
        pos: { x: 5, y: 6 },
      },
    ],
    edges: [
      { a: "ana-silva", b: "rui-alves", weight: 3 },
      { a: "rui-alves", b: "pedro-costa", weight: 1 },
    ],
  };
}

export function statsResponse(): StatsResponse {
  return {
    generation: 1,
    articles: 50,
    entities: 12,
    quotations: 9,
    span: { from: "2010-01-04", to: "2010-06-28" },
    top_entities: [
      {
        entity_id: "ana-silva",
        canonical_name: "Ana Silva",
        profession: "político",
        snippet_count: 21,
      },
      {
        entity_id: "pedro-costa",
        canonical_name: "Pedro Costa",
        profession: "economista",
        snippet_count: 14,
      },
    ],
  };
}

export function homeState(overrides: Partial<AppState> = {}): AppState {
  return { ...initialState(), home: { ...initialState().home, stats: statsResponse() }, ...overrides };
}

export function entityPageState(entity: Partial<EntityState> = {}, overrides: Partial<AppState> = {}): AppState {
  return {
    ...initialState(),
    route: { page: "entity", id: "ana-silva" },
    entity: {
      id: "ana-silva",
      profile: entityProfile(),
      quotes: quotesResponse(),
      network: null,
      networkOpen: false,
      notFound: false,
      ...entity,
    },
    ...overrides,
  };
}

export function deepFreeze<T>(value: T): T {
  if (value && typeof value === "object") {
    for (const child of Object.values(value)) deepFreeze(child);
    Object.freeze(value);
  }
  return value;
}

/** Fake fetch that answers from the fixtures by path and records every URL. */
export function fakeBackend(overrides: Record<string, (url: URL) => FetchResponse> = {}) {
  const urls: string[] = [];
  const ok = (body: unknown): FetchResponse => ({
    ok: true,
    status: 200,
    json: async () => body,
  });
  const fetchFn = async (raw: string): Promise<FetchResponse> => {
    urls.push(raw);
    const url = new URL(raw, "http://test");
    const custom = overrides[url.pathname];
    if (custom) return custom(url);
    if (url.pathname === "/api/stats") return ok(statsResponse());
    if (url.pathname === "/api/search") return ok(searchResponse());
    if (url.pathname === "/api/network") return ok(networkView());
    if (url.pathname.endsWith("/quotes")) return ok(quotesResponse());
    if (url.pathname.startsWith("/api/entity/")) {
      const id = decodeURIComponent(url.pathname.split("/")[3] ?? "");
      return ok({ ...entityProfile(), entity_id: id });
    }
    return {
      ok: false,
      status: 404,
      json: async () => ({ code: "unknown_entity", message: "no route" }),
    };
  };
  return { urls, fetchFn };
}
