import { describe, expect, it } from "vitest";

import { GatewayClient, GatewayError } from "../src/api.js";
import { fakeFetch } from "./fakes.js";

const BASE = "http://gw.test";

describe("GatewayClient", () => {
  it("posts the query payload with paging params", async () => {
    const { fetchFn, log } = fakeFetch(() => ({
      body: { entry_id: 1, total: 0, results: [] },
    }));
    const api = new GatewayClient(BASE, fetchFn);
    await api.query({ text: "horse", score_threshold: 0.5 }, 200, 50);
    expect(log[0].url).toBe(`${BASE}/query?offset=200&page_size=50`);
    expect(log[0].method).toBe("POST");
    expect(JSON.parse(log[0].body!)).toEqual({ text: "horse", score_threshold: 0.5 });
  });

  it("keeps the session id across requests", async () => {
    const { fetchFn, log } = fakeFetch(() => ({
      body: { entry_id: 1, total: 0, results: [] },
      headers: { "X-Session-Id": "sess-42" },
    }));
    const api = new GatewayClient(BASE, fetchFn);
    await api.query({ text: "a" });
    expect(api.sessionId).toBe("sess-42");
    await api.query({ text: "b" });
    expect(log[1].headers.get("X-Session-Id")).toBe("sess-42");
  });

  it("builds the exact submit query string", async () => {
    const { fetchFn, log } = fakeFetch(() => ({ body: { status: "CORRECT", score_so_far: 95 } }));
    const api = new GatewayClient(BASE, fetchFn);
    const verdict = await api.submit("team1", "v01", 4000, "kis-1");
    expect(log[0].url).toBe(`${BASE}/submit?team=team1&video=v01&frame_ms=4000&task=kis-1`);
    expect(verdict.status).toBe("CORRECT");
  });

  it("unwraps history entries and reload pages", async () => {
    const { fetchFn, log } = fakeFetch((url) =>
      url.includes("/history/7")
        ? { body: { entry_id: 7, total: 1, results: [] } }
        : { body: { entries: [{ entry_id: 7, issued_at: 0, spec: { text: "x" } }] } },
    );
    const api = new GatewayClient(BASE, fetchFn);
    const entries = await api.history();
    expect(entries).toHaveLength(1);
    const page = await api.reload(7);
    expect(page.entry_id).toBe(7);
    expect(log[1].url).toBe(`${BASE}/history/7?offset=0&page_size=100`);
  });

  it("throws GatewayError with the server's message", async () => {
    const { fetchFn } = fakeFetch(() => ({ status: 400, body: { error: "limit must be positive" } }));
    const api = new GatewayClient(BASE, fetchFn);
    await expect(api.query({ text: "x", limit: 0 })).rejects.toThrowError(GatewayError);
    await expect(api.query({ text: "x", limit: 0 })).rejects.toThrow("limit must be positive");
  });

  it("derives thumb and collab urls", () => {
    const api = new GatewayClient("http://127.0.0.1:8765");
    expect(api.thumbUrl("v a", "s1")).toBe("http://127.0.0.1:8765/thumb/v%20a/s1");
    expect(api.collabUrl()).toBe("ws://127.0.0.1:8765/collab");
  });
});
