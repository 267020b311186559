/** Thin fetch client for the /v1 endpoints. */

import type {
  ApiErrorBody,
  DriftRequest,
  DriftResponse,
  OracleDetailsResponse,
  OracleListResponse,
  QueryRequest,
  QueryResponse,
  WhatIfRequest,
  WhatIfResponse,
} from "./types.js";

export class ServiceError extends Error {
  constructor(
    readonly status: number,
    readonly kind: string,
    readonly detail: string,
  ) {
    super(`${kind}: ${detail}`);
    this.name = "ServiceError";
  }
}

async function parseError(res: Response): Promise<never> {
  let body: Partial<ApiErrorBody> = {};
  try {
    body = (await res.json()) as ApiErrorBody;
  } catch {
    // non-JSON error body; fall through to status text
  }
  throw new ServiceError(res.status, body.error ?? "http_error", body.detail ?? res.statusText);
}

export class ApiClient {
  constructor(
    readonly baseUrl: string = "",
    private readonly fetchImpl: typeof fetch = fetch,
  ) {}

  private async get<T>(path: string): Promise<T> {
    const res = await this.fetchImpl(`${this.baseUrl}${path}`);
    if (!res.ok) await parseError(res);
    return (await res.json()) as T;
  }

  private async post<T>(path: string, body: unknown): Promise<T> {
    const res = await this.fetchImpl(`${this.baseUrl}${path}`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!res.ok) await parseError(res);
    return (await res.json()) as T;
  }

  listOracles(): Promise<OracleListResponse> {
    return this.get("/v1/oracles");
  }

  oracleDetails(id: string): Promise<OracleDetailsResponse> {
    return this.get(`/v1/oracles/${encodeURIComponent(id)}`);
  }

  query(id: string, body: QueryRequest): Promise<QueryResponse> {
    return this.post(`/v1/oracles/${encodeURIComponent(id)}/query`, body);
  }

  drift(id: string, body: DriftRequest): Promise<DriftResponse> {
    return this.post(`/v1/oracles/${encodeURIComponent(id)}/drift`, body);
  }

  whatif(body: WhatIfRequest): Promise<WhatIfResponse> {
    return this.post("/v1/whatif", body);
  }
}
