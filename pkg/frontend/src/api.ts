import type { EvaluateRequest, ModelDoc, QuoteDoc, QuoteRequestDraft } from "./types.js";

// Thin client over the /v1 endpoints. The fetch implementation is
// injectable so tests can intercept and assert request/response pairs.

export interface HttpResponse {
  status: number;
  json(): Promise<unknown>;
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<HttpResponse>;

export interface ApiResult<T> {
  status: number;
  body: T | null;
  error: string | null;
}

export class QuoteClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (u, i) => fetch(u, i),
  ) {}

  private async post<T>(path: string, payload: unknown): Promise<ApiResult<T>> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
    });
    const raw: unknown = await response.json().catch(() => null);
    if (response.status !== 200) {
      const detail =
        raw !== null && typeof raw === "object" && "detail" in raw
          ? JSON.stringify((raw as { detail: unknown }).detail)
          : `status ${response.status}`;
      return { status: response.status, body: null, error: detail };
    }
    return { status: response.status, body: raw as T, error: null };
  }

  health(): Promise<ApiResult<{ status: string }>> {
    return this.get("/v1/health");
  }

  model(): Promise<ApiResult<ModelDoc>> {
    return this.get("/v1/model");
  }

  quote(request: QuoteRequestDraft): Promise<ApiResult<QuoteDoc>> {
    return this.post("/v1/quote", request);
  }

  evaluate(request: EvaluateRequest): Promise<ApiResult<QuoteDoc>> {
    return this.post("/v1/evaluate", request);
  }

  private async get<T>(path: string): Promise<ApiResult<T>> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`);
    const body = (await response.json().catch(() => null)) as T | null;
    if (response.status !== 200) {
      return { status: response.status, body: null, error: `status ${response.status}` };
    }
    return { status: response.status, body, error: null };
  }
}
