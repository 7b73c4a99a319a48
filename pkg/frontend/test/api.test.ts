import { afterEach, describe, expect, it, vi } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";

interface Call {
  url: string;
  init?: RequestInit;
}

function stubFetch(status: number, body: unknown): Call[] {
  const calls: Call[] = [];
  vi.stubGlobal("fetch", async (url: string, init?: RequestInit) => {
    calls.push({ url, init });
    return new Response(JSON.stringify(body), {
      status,
      headers: { "Content-Type": "application/json" },
    });
  });
  return calls;
}

afterEach(() => {
  vi.unstubAllGlobals();
});

describe("ApiClient", () => {
  it("lists tasks from /v1/tasks", async () => {
    const calls = stubFetch(200, { tasks: [{ name: "x", family: "scale", category: "c" }] });
    const tasks = await new ApiClient().tasks();
    expect(calls[0]?.url).toBe("/v1/tasks");
    expect(tasks).toHaveLength(1);
  });

  it("URL-encodes task names (slashes included)", async () => {
    const calls = stubFetch(200, { name: "oxygenation ratio (PaO2/FiO2)" });
    await new ApiClient().task("oxygenation ratio (PaO2/FiO2)");
    expect(calls[0]?.url).toBe("/v1/tasks/oxygenation%20ratio%20(PaO2%2FFiO2)");
  });

  it("POSTs generation parameters as JSON", async () => {
    const calls = stubFetch(200, { cases: [] });
    await new ApiClient().generate({ count: 2, seed: 7, add_rule_ratio: 0.3 });
    expect(calls[0]?.url).toBe("/v1/cases:generate");
    expect(calls[0]?.init?.method).toBe("POST");
    expect(JSON.parse(String(calls[0]?.init?.body))).toEqual({
      count: 2,
      seed: 7,
      add_rule_ratio: 0.3,
    });
  });

  it("POSTs reviews with case_id, status, note", async () => {
    const calls = stubFetch(200, {
      case_id: "c1",
      status: "flagged",
      note: "n",
      reviewer: "",
      timestamp: "t",
    });
    const entry = await new ApiClient().review("c1", "flagged", "n");
    expect(JSON.parse(String(calls[0]?.init?.body))).toEqual({
      case_id: "c1",
      status: "flagged",
      note: "n",
    });
    expect(entry.status).toBe("flagged");
  });

  it("filters reviews by status via query string", async () => {
    const calls = stubFetch(200, { reviews: [] });
    await new ApiClient().reviews("flagged");
    expect(calls[0]?.url).toBe("/v1/reviews?status=flagged");
  });

  it("maps the service error envelope to ApiError", async () => {
    stubFetch(404, { code: "not_found", message: "unknown task 'nope'" });
    const err = await new ApiClient().task("nope").catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.code).toBe("not_found");
    expect(err.status).toBe(404);
    expect(err.message).toContain("nope");
  });

  it("maps network failures to ApiError(unreachable)", async () => {
    vi.stubGlobal("fetch", async () => {
      throw new TypeError("fetch failed");
    });
    const err = await new ApiClient().stats().catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.code).toBe("unreachable");
  });

  it("prefixes a configured base URL", async () => {
    const calls = stubFetch(200, { tasks: [] });
    await new ApiClient("http://127.0.0.1:8000").tasks();
    expect(calls[0]?.url).toBe("http://127.0.0.1:8000/v1/tasks");
  });
});
