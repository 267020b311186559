/** DOM view layer: renders session state and wires controls to explore(). */

import { ApiClient } from "./api.js";
import { fmtNumber, fmtPair, fmtVector } from "./format.js";
import { ScenarioSession } from "./session.js";
import type { DriftResponse, QueryResponse, WhatIfResponse } from "./types.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, v);
  if (text !== undefined) node.textContent = text;
  return node;
}

export class ExplorerApp {
  session: ScenarioSession;
  private root: HTMLElement;
  private sliderMax = 10;

  constructor(root: HTMLElement, baseUrl = "") {
    this.root = root;
    this.session = new ScenarioSession(new ApiClient(baseUrl));
    this.renderSkeleton();
  }

  private byId<T extends HTMLElement>(id: string): T {
    const node = this.root.querySelector(`#${id}`);
    if (!node) throw new Error(`missing element #${id}`);
    return node as T;
  }

  private renderSkeleton(): void {
    this.root.innerHTML = "";
    const wrap = el("div", { class: "app" });

    const header = el("header");
    header.append(el("h1", {}, "Placement oracle explorer"));
    const controls = el("div", { class: "row" });
    const selA = el("select", { id: "oracle-a", "aria-label": "scenario A oracle" });
    const selB = el("select", { id: "oracle-b", "aria-label": "scenario B oracle" });
    const reload = el("button", { id: "reload" }, "Load oracles");
    reload.addEventListener("click", () => void this.loadOracles());
    controls.append("A (current): ", selA, " B (candidate): ", selB, reload);
    header.append(controls);
    wrap.append(header);

    wrap.append(el("div", { id: "error", class: "error", hidden: "hidden" }));

    const workload = el("section", { id: "workload" });
    workload.append(el("h2", {}, "Workload"));
    workload.append(el("div", { id: "sliders" }));
    const csvRow = el("div", { class: "row" });
    const csv = el("textarea", {
      id: "csv",
      rows: "2",
      placeholder: "writes then reads, comma separated",
    });
    const applyCsv = el("button", { id: "apply-csv" }, "Apply CSV");
    applyCsv.addEventListener("click", () => this.applyCsv());
    csvRow.append(csv, applyCsv);
    workload.append(csvRow);
    wrap.append(workload);

    const actions = el("section", { class: "row" });
    const runQuery = el("button", { id: "run-query" }, "Run query");
    runQuery.addEventListener("click", () => void this.runQuery());
    const runWhatif = el("button", { id: "run-whatif" }, "Run what-if");
    runWhatif.addEventListener("click", () => void this.runWhatif());
    const runDrift = el("button", { id: "run-drift" }, "Run drift");
    runDrift.addEventListener("click", () => void this.runDrift());
    const showHistory = el("button", { id: "show-history" }, "Compare history");
    showHistory.addEventListener("click", () => void this.showHistory());
    actions.append(runQuery, runWhatif, runDrift, showHistory);

    const settings = el("div", { class: "row" });
    settings.append(
      "samples ", el("input", { id: "samples", type: "number", value: "1000", min: "1" }),
      " seed ", el("input", { id: "seed", type: "number", value: "0" }),
      " range ", el("input", { id: "low", type: "number", value: "0" }),
      "..", el("input", { id: "high", type: "number", value: "1" }),
      " drift direction ", el("input", { id: "direction", placeholder: "optional, 2|C| values" }),
      " mode ",
    );
    const mode = el("select", { id: "mode" });
    mode.append(el("option", { value: "lifted" }, "lifted"), el("option", { value: "projected" }, "projected"));
    settings.append(mode);
    actions.append(settings);
    wrap.append(actions);

    const panels = el("section", { class: "panels" });
    panels.append(
      this.panel("query-panel", "Optimal placement"),
      this.panel("whatif-panel", "What-if improvement"),
      this.panel("drift-panel", "Drift crossover"),
    );
    wrap.append(panels);

    const history = el("section", { id: "history", hidden: "hidden" });
    history.append(el("h2", {}, "History"));
    history.append(el("table", { id: "history-table" }));
    wrap.append(history);

    this.root.append(wrap);
  }

  private panel(id: string, title: string): HTMLElement {
    const box = el("div", { class: "panel", id });
    box.append(el("h2", {}, title));
    box.append(el("div", { class: "panel-body", id: `${id}-body` }, "no result yet"));
    return box;
  }

  async loadOracles(): Promise<void> {
    try {
      const list = await this.session.api.listOracles();
      const ids = list.oracles.map((o) => o.id);
      for (const selId of ["oracle-a", "oracle-b"]) {
        const sel = this.byId<HTMLSelectElement>(selId);
        sel.innerHTML = "";
        for (const id of ids) sel.append(el("option", { value: id }, id));
      }
      if (ids.length > 0) {
        await this.selectOracleA(ids[0]!);
        this.session.selectOracleB(ids[Math.min(1, ids.length - 1)]!);
        this.byId<HTMLSelectElement>("oracle-b").value = this.session.oracleB!;
      }
      this.byId<HTMLSelectElement>("oracle-a").addEventListener("change", (ev) => {
        void this.selectOracleA((ev.target as HTMLSelectElement).value);
      });
      this.byId<HTMLSelectElement>("oracle-b").addEventListener("change", (ev) => {
        this.session.selectOracleB((ev.target as HTMLSelectElement).value);
      });
      this.showError(undefined);
    } catch (err) {
      this.showError(String(err));
    }
  }

  async selectOracleA(id: string): Promise<void> {
    await this.session.selectOracleA(id);
    this.renderSliders();
  }

  private renderSliders(): void {
    const box = this.byId<HTMLDivElement>("sliders");
    box.innerHTML = "";
    this.session.clients.forEach((client, i) => {
      for (const half of ["w", "r"] as const) {
        const row = el("div", { class: "slider-row" });
        const label = el("label", {}, `${client} ${half === "w" ? "writes" : "reads"}`);
        const slider = el("input", {
          type: "range",
          min: "0",
          max: String(this.sliderMax),
          step: "0.01",
          value: String(this.session[half][i] ?? 0),
          id: `${half}-slider-${i}`,
        });
        const num = el("input", {
          type: "number",
          min: "0",
          step: "0.01",
          value: String(this.session[half][i] ?? 0),
          id: `${half}-value-${i}`,
        });
        const push = (value: string) => {
          const w = [...this.session.w];
          const r = [...this.session.r];
          (half === "w" ? w : r)[i] = Number(value);
          void this.session.explore({ kind: "set_workload", w, r });
          slider.value = value;
          num.value = value;
        };
        slider.addEventListener("input", () => push(slider.value));
        num.addEventListener("input", () => push(num.value));
        row.append(label, slider, num);
        box.append(row);
      }
    });
  }

  private applyCsv(): void {
    try {
      this.session.setWorkloadFromCsv(this.byId<HTMLTextAreaElement>("csv").value);
      this.renderSliders();
      this.showError(undefined);
    } catch (err) {
      this.showError(String(err));
    }
  }

  private showError(message: string | undefined): void {
    const banner = this.byId<HTMLDivElement>("error");
    if (message) {
      banner.textContent = message;
      banner.removeAttribute("hidden");
    } else {
      banner.textContent = "";
      banner.setAttribute("hidden", "hidden");
    }
  }

  private renderViewError(): void {
    this.showError(this.session.view.error);
  }

  async runQuery(): Promise<void> {
    const view = await this.session.explore({ kind: "run_query" });
    if (view.query) this.renderQuery(view.query);
    this.renderViewError();
  }

  private renderQuery(res: QueryResponse): void {
    const body = this.byId<HTMLDivElement>("query-panel-body");
    body.innerHTML = "";
    body.append(
      el("div", { class: "big", id: "query-pair" }, fmtPair(res.pair)),
      el("div", { id: "query-cost" }, `cost ${fmtNumber(res.cost)}`),
      el("div", { class: "muted" }, `plane #${res.placement_index}`),
    );
  }

  async runWhatif(): Promise<void> {
    this.session.samples = {
      samples: Number(this.byId<HTMLInputElement>("samples").value),
      seed: Number(this.byId<HTMLInputElement>("seed").value),
      distribution: "uniform",
      low: Number(this.byId<HTMLInputElement>("low").value),
      high: Number(this.byId<HTMLInputElement>("high").value),
    };
    const view = await this.session.explore({ kind: "run_whatif" });
    if (view.whatif) this.renderWhatif(view.whatif);
    this.renderViewError();
  }

  private renderWhatif(res: WhatIfResponse): void {
    const body = this.byId<HTMLDivElement>("whatif-panel-body");
    body.innerHTML = "";
    body.append(
      el("div", { class: "big", id: "whatif-mean" }, `mean ${fmtNumber(res.mean_improvement)}`),
      el("div", { id: "whatif-median" }, `median ${fmtNumber(res.median_improvement)}`),
      el(
        "div",
        { id: "whatif-ci" },
        `95% CI [${fmtNumber(res.ci95[0])}, ${fmtNumber(res.ci95[1])}]`,
      ),
      el("div", { class: "muted" }, `${res.samples_used} samples, ${res.rejected} rejected, seed ${res.seed}`),
    );
    // bar sized for presentation only; labels carry the exact values
    const bar = el("div", { class: "ci-bar" });
    const span = el("div", { class: "ci-span", id: "whatif-bar" });
    const scale = (x: number) => Math.max(0, Math.min(100, x * 50));
    span.style.left = `${scale(res.ci95[0])}%`;
    span.style.width = `${Math.max(0.5, scale(res.ci95[1]) - scale(res.ci95[0]))}%`;
    bar.append(span);
    body.append(bar);
  }

  async runDrift(): Promise<void> {
    const directionText = this.byId<HTMLInputElement>("direction").value.trim();
    const mode = this.byId<HTMLSelectElement>("mode").value as "lifted" | "projected";
    let direction: number[] | undefined;
    if (directionText) {
      direction = directionText.split(",").map((c) => Number(c.trim()));
      if (direction.some((x) => !Number.isFinite(x))) {
        this.showError("direction must be a comma-separated number list");
        return;
      }
    }
    const view = await this.session.explore({ kind: "run_drift", direction, mode });
    if (view.drift) this.renderDrift(view.drift);
    this.renderViewError();
  }

  private renderDrift(res: DriftResponse): void {
    const body = this.byId<HTMLDivElement>("drift-panel-body");
    body.innerHTML = "";
    if (res.unbounded) {
      body.append(el("div", { class: "big", id: "drift-unbounded" }, "no migration ever needed"));
      body.append(el("div", { class: "muted" }, "no plane crossing in this direction"));
      return;
    }
    body.append(
      el("div", { class: "big", id: "drift-next" }, `next ${fmtPair(res.next_pair)}`),
      el("div", { id: "drift-distance" }, `distance ${fmtNumber(res.distance)}`),
      el("div", { id: "drift-cost" }, `cost there ${fmtNumber(res.cost_next)}`),
      el("div", { class: "muted", id: "drift-param" }, `crossover at ${fmtVector(res.param_next)}`),
    );
  }

  async showHistory(): Promise<void> {
    await this.session.explore({ kind: "compare_history" });
    const section = this.byId<HTMLElement>("history");
    section.removeAttribute("hidden");
    const table = this.byId<HTMLTableElement>("history-table");
    table.innerHTML = "";
    const head = el("tr");
    for (const h of ["#", "action", "request", "result", ""]) head.append(el("th", {}, h));
    table.append(head);
    for (const entry of this.session.history) {
      const tr = el("tr");
      tr.append(el("td", {}, String(entry.requestId)));
      tr.append(el("td", {}, entry.action));
      tr.append(el("td", { class: "mono" }, JSON.stringify(entry.request)));
      tr.append(
        el(
          "td",
          { class: "mono" },
          entry.error ? `error ${entry.error.kind}` : JSON.stringify(entry.result),
        ),
      );
      const replayCell = el("td");
      const replayBtn = el("button", {}, "replay");
      replayBtn.addEventListener("click", () => void this.replay(entry.requestId));
      replayCell.append(replayBtn);
      tr.append(replayCell);
      table.append(tr);
    }
  }

  async replay(requestId: number): Promise<void> {
    const entry = this.session.history.find((e) => e.requestId === requestId);
    if (!entry) return;
    const view = await this.session.replay(entry);
    if (view.query) this.renderQuery(view.query);
    if (view.whatif) this.renderWhatif(view.whatif);
    if (view.drift) this.renderDrift(view.drift);
    this.renderViewError();
    await this.showHistory();
  }
}
