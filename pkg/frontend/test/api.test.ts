import { describe, expect, it } from "vitest";

import { ApiClient, ApiError, buildQuery, type FetchResponse } from "../src/api.js";

function jsonResponse(body: unknown, status = 200): FetchResponse {
  return {
    ok: status >= 200 && status < 300,
    status,
    json: async () => body,
  };
}

function recordingClient(body: unknown = {}, status = 200) {
  const urls: string[] = [];
  const client = new ApiClient(async (url) => {
    urls.push(url);
    return jsonResponse(body, status);
  });
  return { client, urls };
}

describe("buildQuery", () => {
  it("serializes values in argument order", () => {
    expect(buildQuery({ q: "x", from: "2010-01-01", limit: 5 })).toBe(
      "?q=x&from=2010-01-01&limit=5",
    );
  });

  it("drops null, undefined, and empty values", () => {
    expect(buildQuery({ q: "x", from: null, to: undefined, g: "" })).toBe("?q=x");
  });

  it("returns an empty string when nothing survives", () => {
    expect(buildQuery({ from: null })).toBe("");
  });
});

describe("ApiClient urls", () => {
  it("search passes query, span, and limit", async () => {
    const { client, urls } = recordingClient();
    await client.search("corrupção", { from: "2010-01-01", to: "2010-06-30" }, 5);
    expect(urls).toEqual([
      "/api/search?q=corrup%C3%A7%C3%A3o&from=2010-01-01&to=2010-06-30&limit=5",
    ]);
  });

  it("search omits an absent span entirely", async () => {
    const { client, urls } = recordingClient();
    await client.search("ana silva");
    expect(urls).toEqual(["/api/search?q=ana+silva"]);
  });

  it("search omits half-open span sides independently", async () => {
    const { client, urls } = recordingClient();
    await client.search("x", { from: "2010-01-01", to: null });
    await client.search("x", { from: null, to: "2010-06-30" });
    expect(urls).toEqual([
      "/api/search?q=x&from=2010-01-01",
      "/api/search?q=x&to=2010-06-30",
    ]);
  });

  it("entity encodes the id into the path", async () => {
    const { client, urls } = recordingClient();
    await client.entity("joão-silva");
    expect(urls).toEqual(["/api/entity/jo%C3%A3o-silva"]);
  });

  it("entity passes span and granularity", async () => {
    const { client, urls } = recordingClient();
    await client.entity("ana-silva", { from: "2011-01-01", to: "2011-12-31" }, "day");
    expect(urls).toEqual([
      "/api/entity/ana-silva?from=2011-01-01&to=2011-12-31&granularity=day",
    ]);
  });

  it("quotes targets the quotes sub-resource", async () => {
    const { client, urls } = recordingClient();
    await client.quotes("ana-silva", { from: "2011-03-01", to: "2011-03-31" });
    expect(urls).toEqual(["/api/entity/ana-silva/quotes?from=2011-03-01&to=2011-03-31"]);
  });

  it("network without options hits the bare endpoint", async () => {
    const { client, urls } = recordingClient();
    await client.network();
    expect(urls).toEqual(["/api/network"]);
  });

  it("network passes ego, span, size, and layout parameters", async () => {
    const { client, urls } = recordingClient();
    await client.network({
      entityId: "ana-silva",
      span: { from: "2010-01-01", to: "2010-06-30" },
      maxNodes: 10,
      layout: true,
    });
    expect(urls).toEqual([
      "/api/network?entity_id=ana-silva&from=2010-01-01&to=2010-06-30&max_nodes=10&layout=true",
    ]);
  });

  it("stats takes no parameters", async () => {
    const { client, urls } = recordingClient();
    await client.stats();
    expect(urls).toEqual(["/api/stats"]);
  });

  it("a base prefix lands in front of every path", async () => {
    const urls: string[] = [];
    const client = new ApiClient(async (url) => {
      urls.push(url);
      return jsonResponse({});
    }, "http://127.0.0.1:8100");
    await client.stats();
    expect(urls).toEqual(["http://127.0.0.1:8100/api/stats"]);
  });
});

describe("ApiClient errors", () => {
  it("maps an error body onto ApiError fields", async () => {
    const { client } = recordingClient({ code: "unknown_entity", message: "no entity x" }, 404);
    const err = await client.entity("x").catch((e: unknown) => e);
    expect(err).toBeInstanceOf(ApiError);
    const apiErr = err as ApiError;
    expect(apiErr.code).toBe("unknown_entity");
    expect(apiErr.message).toBe("no entity x");
    expect(apiErr.status).toBe(404);
  });

  it("falls back to a generic code when the body is not json", async () => {
    const client = new ApiClient(async () => ({
      ok: false,
      status: 502,
      json: async () => {
        throw new Error("not json");
      },
    }));
    const err = await client.stats().catch((e: unknown) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect((err as ApiError).code).toBe("error");
    expect((err as ApiError).status).toBe(502);
  });

  it("resolves with the parsed payload on success", async () => {
    const { client } = recordingClient({ generation: 3 });
    const stats = await client.stats();
    expect(stats.generation).toBe(3);
  });
});
