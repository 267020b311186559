/** Scenario exploration state.
 *
 * One session tracks the selected oracle pair, the current workload, the
 * sampling settings, and an append-only history of completed requests.
 * Every number a view shows comes verbatim from a service response; the
 * session never derives new figures.  Concurrent requests are allowed:
 * each one carries a monotonically increasing id and a panel only accepts
 * the newest response for its action kind, so stale answers cannot
 * overwrite fresh ones (they still land in the history).
 */

import { ApiClient, ServiceError } from "./api.js";
import type {
  DriftRequest,
  DriftResponse,
  QueryRequest,
  QueryResponse,
  WhatIfRequest,
  WhatIfResponse,
} from "./types.js";

export type ExploreAction =
  | { kind: "set_workload"; w: number[]; r: number[] }
  | { kind: "run_query" }
  | {
      kind: "run_whatif";
      samples?: number;
      seed?: number;
      distribution?: string;
      low?: number;
      high?: number;
      traceId?: string;
    }
  | { kind: "run_drift"; direction?: number[]; mode?: "lifted" | "projected" }
  | { kind: "compare_history" };

export interface HistoryEntry {
  requestId: number;
  action: "run_query" | "run_whatif" | "run_drift";
  request: QueryRequest | DriftRequest | WhatIfRequest;
  result?: QueryResponse | DriftResponse | WhatIfResponse;
  error?: { kind: string; detail: string };
}

export interface SessionView {
  query?: QueryResponse;
  drift?: DriftResponse;
  whatif?: WhatIfResponse;
  error?: string;
  historyVisible: boolean;
}

export interface SampleSettings {
  samples: number;
  seed: number;
  distribution: string;
  low: number;
  high: number;
  traceId?: string;
}

function parseWorkloadCsv(text: string, nClients: number): { w: number[]; r: number[] } {
  const cells = text
    .split(/[\n,]/)
    .map((c) => c.trim())
    .filter((c) => c.length > 0);
  if (cells.length !== 2 * nClients) {
    throw new Error(`expected ${2 * nClients} values (w then r), got ${cells.length}`);
  }
  const values = cells.map((c) => {
    const v = Number(c);
    if (!Number.isFinite(v)) throw new Error(`not a number: ${c}`);
    return v;
  });
  return { w: values.slice(0, nClients), r: values.slice(nClients) };
}

export class ScenarioSession {
  readonly api: ApiClient;

  oracleA: string | null = null;
  oracleB: string | null = null;
  clients: string[] = [];
  w: number[] = [];
  r: number[] = [];
  samples: SampleSettings = { samples: 1000, seed: 0, distribution: "uniform", low: 0, high: 1 };

  private readonly entries: HistoryEntry[] = [];
  private nextRequestId = 1;
  private newestShown: Record<string, number> = {};
  private readonly view_: SessionView = { historyVisible: false };

  constructor(api: ApiClient) {
    this.api = api;
  }

  /** Append-only request log, most recent last. */
  get history(): readonly HistoryEntry[] {
    return this.entries;
  }

  get view(): Readonly<SessionView> {
    return this.view_;
  }

  async selectOracleA(id: string): Promise<void> {
    const details = await this.api.oracleDetails(id);
    this.oracleA = id;
    this.clients = details.clients;
    if (this.w.length !== this.clients.length) {
      this.w = this.clients.map(() => 0);
      this.r = this.clients.map(() => 0);
    }
  }

  selectOracleB(id: string): void {
    this.oracleB = id;
  }

  setWorkloadFromCsv(text: string): void {
    const parsed = parseWorkloadCsv(text, this.clients.length);
    this.w = parsed.w;
    this.r = parsed.r;
  }

  /** Drive the session; resolves to the updated view. */
  async explore(action: ExploreAction): Promise<Readonly<SessionView>> {
    switch (action.kind) {
      case "set_workload": {
        if (
          action.w.length !== this.clients.length ||
          action.r.length !== this.clients.length
        ) {
          this.view_.error = `workload must list ${this.clients.length} writes and reads`;
          return this.view_;
        }
        this.w = [...action.w];
        this.r = [...action.r];
        delete this.view_.error;
        return this.view_;
      }
      case "run_query": {
        const oracle = this.requireOracleA();
        const request: QueryRequest = { w: [...this.w], r: [...this.r] };
        return this.track("run_query", request, () => this.api.query(oracle, request), "query");
      }
      case "run_drift": {
        const oracle = this.requireOracleA();
        const request: DriftRequest = { w: [...this.w], r: [...this.r] };
        if (action.direction) request.direction = [...action.direction];
        if (action.mode) request.mode = action.mode;
        return this.track("run_drift", request, () => this.api.drift(oracle, request), "drift");
      }
      case "run_whatif": {
        const a = this.requireOracleA();
        const b = this.oracleB ?? a;
        const s = this.samples;
        const request: WhatIfRequest = { oracle_a: a, oracle_b: b };
        const traceId = action.traceId ?? s.traceId;
        if (traceId) {
          request.trace_id = traceId;
        } else {
          request.samples = action.samples ?? s.samples;
          request.seed = action.seed ?? s.seed;
          request.distribution = action.distribution ?? s.distribution;
          request.low = action.low ?? s.low;
          request.high = action.high ?? s.high;
        }
        return this.track("run_whatif", request, () => this.api.whatif(request), "whatif");
      }
      case "compare_history": {
        this.view_.historyVisible = true;
        return this.view_;
      }
    }
  }

  /** Re-issue a logged request verbatim (seeds included), for replay checks. */
  async replay(entry: HistoryEntry): Promise<Readonly<SessionView>> {
    switch (entry.action) {
      case "run_query": {
        const oracle = this.requireOracleA();
        const request = entry.request as QueryRequest;
        return this.track("run_query", request, () => this.api.query(oracle, request), "query");
      }
      case "run_drift": {
        const oracle = this.requireOracleA();
        const request = entry.request as DriftRequest;
        return this.track("run_drift", request, () => this.api.drift(oracle, request), "drift");
      }
      case "run_whatif": {
        const request = entry.request as WhatIfRequest;
        return this.track("run_whatif", request, () => this.api.whatif(request), "whatif");
      }
    }
  }

  private requireOracleA(): string {
    if (!this.oracleA) throw new Error("select an oracle first");
    return this.oracleA;
  }

  private async track<T extends QueryResponse | DriftResponse | WhatIfResponse>(
    action: HistoryEntry["action"],
    request: HistoryEntry["request"],
    run: () => Promise<T>,
    panel: "query" | "drift" | "whatif",
  ): Promise<Readonly<SessionView>> {
    const requestId = this.nextRequestId++;
    const entry: HistoryEntry = { requestId, action, request };
    try {
      const result = await run();
      entry.result = result;
      this.entries.push(entry);
      // only the newest outstanding request of a kind may update its panel
      if (requestId > (this.newestShown[panel] ?? 0)) {
        this.newestShown[panel] = requestId;
        if (panel === "query") this.view_.query = result as QueryResponse;
        else if (panel === "drift") this.view_.drift = result as DriftResponse;
        else this.view_.whatif = result as WhatIfResponse;
        delete this.view_.error;
      }
    } catch (err) {
      entry.error =
        err instanceof ServiceError
          ? { kind: err.kind, detail: err.detail }
          : { kind: "network", detail: String(err) };
      this.entries.push(entry);
      // keep every panel and the workload untouched; just surface the message
      this.view_.error = `${entry.error.kind}: ${entry.error.detail}`;
    }
    return this.view_;
  }
}
