/** Payload shapes of the /v1 JSON API. The UI never recomputes numbers that
 * appear in these; it only formats them. */

export interface OracleSummary {
  id: string;
  dims: number;
  placements: number;
}

export interface OracleListResponse {
  oracles: OracleSummary[];
}

export interface OracleDetailsResponse {
  id: string;
  clients: string[];
  placements: number;
  dims: number;
  build_config: unknown;
  build_report: unknown;
}

export interface QueryResponse {
  pair: [string, string];
  cost: number;
  placement_index: number;
}

export interface DriftResponse {
  unbounded: boolean;
  next_index: number | null;
  next_pair: [string, string] | null;
  param_next: number[] | null;
  cost_next: number | null;
  distance: number | null;
}

export interface WhatIfResponse {
  seed: number;
  mean_improvement: number;
  median_improvement: number;
  ci95: [number, number];
  samples_used: number;
  rejected: number;
}

export interface ApiErrorBody {
  error: string;
  detail: string;
}

export interface QueryRequest {
  w: number[];
  r: number[];
}

export interface DriftRequest {
  w: number[];
  r: number[];
  direction?: number[];
  mode?: "lifted" | "projected";
}

export interface WhatIfRequest {
  oracle_a: string;
  oracle_b: string;
  samples?: number;
  seed?: number;
  distribution?: string;
  low?: number;
  high?: number;
  trace_id?: string;
}
