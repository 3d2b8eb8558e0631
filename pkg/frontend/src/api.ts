import type { HistoryEntry, QueryPayload, ResultPage, SubmitResponse } from "./types.js";

const SESSION_HEADER = "X-Session-Id";

export class GatewayError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
    this.name = "GatewayError";
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

/**
 * Typed client for the gateway. Remembers the session id handed back by
 * the server so history stays pinned to this browser tab.
 */
export class GatewayClient {
  sessionId: string | null = null;

  constructor(
    readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request(path: string, init: RequestInit = {}): Promise<unknown> {
    const headers = new Headers(init.headers);
    if (this.sessionId) headers.set(SESSION_HEADER, this.sessionId);
    const response = await this.fetchFn(this.baseUrl + path, { ...init, headers });
    const echoed = response.headers.get(SESSION_HEADER);
    if (echoed) this.sessionId = echoed;
    const body = await response.json().catch(() => ({}));
    if (!response.ok) {
      const detail = (body as { error?: string }).error ?? `HTTP ${response.status}`;
      throw new GatewayError(response.status, detail);
    }
    return body;
  }

  async query(payload: QueryPayload, offset = 0, pageSize = 100): Promise<ResultPage> {
    return (await this.request(`/query?offset=${offset}&page_size=${pageSize}`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
    })) as ResultPage;
  }

  async history(): Promise<HistoryEntry[]> {
    const body = (await this.request("/history")) as { entries: HistoryEntry[] };
    return body.entries;
  }

  async reload(entryId: number, offset = 0, pageSize = 100): Promise<ResultPage> {
    return (await this.request(
      `/history/${entryId}?offset=${offset}&page_size=${pageSize}`,
    )) as ResultPage;
  }

  async submit(team: string, video: string, frameMs: number, task: string): Promise<SubmitResponse> {
    const params = new URLSearchParams({
      team,
      video,
      frame_ms: String(frameMs),
      task,
    });
    return (await this.request(`/submit?${params}`)) as SubmitResponse;
  }

  thumbUrl(video: string, shot: string): string {
    return `${this.baseUrl}/thumb/${encodeURIComponent(video)}/${encodeURIComponent(shot)}`;
  }

  collabUrl(): string {
    return this.baseUrl.replace(/^http/, "ws") + "/collab";
  }
}
