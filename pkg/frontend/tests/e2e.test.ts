/** End-to-end: real HTTP service on the reference topology, driven through
 * the rendered DOM. Requires the python package to be installed. */

import { spawn, spawnSync, type ChildProcess } from "node:child_process";
import { copyFileSync, mkdtempSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ExplorerApp } from "../src/ui.js";

const PORT = 18100 + (process.pid % 1800);
const BASE = `http://127.0.0.1:${PORT}`;

const DATACENTERS = JSON.stringify([
  { id: "d1", lat_deg: 0.0, lon_deg: 0.0, roles: ["storage"] },
  { id: "d2", lat_deg: 0.0, lon_deg: 10.0, roles: ["storage"] },
  { id: "d3", lat_deg: 10.0, lon_deg: 0.0, roles: ["storage"] },
  { id: "c1", lat_deg: 20.0, lon_deg: 0.0, roles: ["client"] },
  { id: "c2", lat_deg: -20.0, lon_deg: 0.0, roles: ["client"] },
]);
const LATENCY = "client_id,d1,d2,d3\nc1,10,20,30\nc2,30,20,10\n";

let workDir: string;
let server: ChildProcess | undefined;
let available = true;

async function waitForService(): Promise<void> {
  for (let i = 0; i < 120; i++) {
    try {
      const res = await fetch(`${BASE}/v1/oracles`);
      if (res.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((r) => setTimeout(r, 250));
  }
  throw new Error("service did not come up");
}

async function waitFor<T>(probe: () => T | null | undefined, what: string, ms = 15000): Promise<T> {
  const deadline = Date.now() + ms;
  for (;;) {
    const got = probe();
    if (got !== null && got !== undefined) return got;
    if (Date.now() > deadline) throw new Error(`timed out waiting for ${what}`);
    await new Promise((r) => setTimeout(r, 50));
  }
}

beforeAll(async () => {
  const probe = spawnSync("python3", ["-m", "placeoracle.cli", "--help"], { encoding: "utf-8" });
  if (probe.status !== 0) {
    available = false;
    return;
  }
  workDir = mkdtempSync(join(tmpdir(), "placeoracle-e2e-"));
  writeFileSync(join(workDir, "dc.json"), DATACENTERS);
  writeFileSync(join(workDir, "lat.csv"), LATENCY);
  const build = spawnSync(
    "python3",
    [
      "-m", "placeoracle.cli", "build",
      "--datacenters", join(workDir, "dc.json"),
      "--latency", join(workDir, "lat.csv"),
      "-o", join(workDir, "t3.oracle"),
    ],
    { encoding: "utf-8" },
  );
  if (build.status !== 0) throw new Error(`build failed: ${build.stderr}`);
  copyFileSync(join(workDir, "t3.oracle"), join(workDir, "t3b.oracle"));

  server = spawn(
    "python3",
    ["-m", "placeoracle.cli", "serve", "--port", String(PORT), "--oracle-dir", workDir],
    { stdio: "ignore" },
  );
  await waitForService();
});

afterAll(() => {
  server?.kill("SIGTERM");
  if (workDir) rmSync(workDir, { recursive: true, force: true });
});

describe.sequential("explorer against a live service", () => {
  let app: ExplorerApp;

  it("boots and lists both oracles", async () => {
    if (!available) return;
    document.body.innerHTML = '<div id="root"></div>';
    app = new ExplorerApp(document.getElementById("root")!, BASE);
    await app.loadOracles();
    const options = Array.from(document.querySelectorAll<HTMLOptionElement>("#oracle-a option"));
    expect(options.map((o) => o.value)).toEqual(["t3", "t3b"]);
    expect(document.querySelectorAll(".slider-row")).toHaveLength(4); // 2 clients x w/r
  });

  it("run_query shows pair d1-d2 at cost 20 for w=[1,0]", async () => {
    if (!available) return;
    const slider = document.querySelector<HTMLInputElement>("#w-value-0")!;
    slider.value = "1";
    slider.dispatchEvent(new Event("input", { bubbles: true }));
    document.querySelector<HTMLButtonElement>("#run-query")!.click();
    const pair = await waitFor(
      () => document.querySelector("#query-pair")?.textContent,
      "query result",
    );
    expect(pair).toBe("d1 – d2");
    expect(document.querySelector("#query-cost")?.textContent).toBe("cost 20");
  });

  it("run_whatif on identical oracles displays mean 1", async () => {
    if (!available) return;
    const selB = document.querySelector<HTMLSelectElement>("#oracle-b")!;
    selB.value = "t3b";
    selB.dispatchEvent(new Event("change", { bubbles: true }));
    document.querySelector<HTMLInputElement>("#samples")!.value = "64";
    document.querySelector<HTMLInputElement>("#low")!.value = "0.1";
    document.querySelector<HTMLButtonElement>("#run-whatif")!.click();
    const mean = await waitFor(
      () => document.querySelector("#whatif-mean")?.textContent,
      "what-if result",
    );
    expect(mean).toBe("mean 1");
    expect(document.querySelector("#whatif-ci")?.textContent).toBe("95% CI [1, 1]");
  });

  it("run_drift reports a crossover with verbatim distance", async () => {
    if (!available) return;
    document.querySelector<HTMLButtonElement>("#run-drift")!.click();
    const text = await waitFor(
      () =>
        document.querySelector("#drift-next")?.textContent ??
        document.querySelector("#drift-unbounded")?.textContent,
      "drift result",
    );
    expect(text).toBeTruthy();
    if (document.querySelector("#drift-next")) {
      const shown = document.querySelector("#drift-distance")!.textContent!;
      const res = await fetch(`${BASE}/v1/oracles/t3/drift`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ w: [1, 0], r: [0, 0] }),
      });
      const body = (await res.json()) as { distance: number };
      // the panel's number is a formatting of the service's, nothing else
      expect(Number(shown.replace("distance ", ""))).toBeCloseTo(body.distance, 4);
    }
  });

  it("history records every run and replays identically", async () => {
    if (!available) return;
    document.querySelector<HTMLButtonElement>("#show-history")!.click();
    await waitFor(() => document.querySelector("#history-table tr:nth-child(2)"), "history rows");
    const before = app.session.history.length;
    expect(before).toBeGreaterThanOrEqual(3);
    const whatifEntry = app.session.history.find((e) => e.action === "run_whatif")!;
    await app.session.replay(whatifEntry);
    const replayed = app.session.history[app.session.history.length - 1]!;
    expect(replayed.result).toEqual(whatifEntry.result);
  });

  it("service errors surface inline and leave the session alive", async () => {
    if (!available) return;
    const queryBefore = app.session.view.query;
    const bad = await app.session.api
      .query("nope", { w: [1, 0], r: [0, 0] })
      .catch((err) => err as Error);
    expect(bad).toBeInstanceOf(Error);
    // drive an error through the UI path: wrong-dimension direction
    document.querySelector<HTMLInputElement>("#direction")!.value = "1";
    document.querySelector<HTMLButtonElement>("#run-drift")!.click();
    await waitFor(() => {
      const banner = document.querySelector<HTMLDivElement>("#error");
      return banner && !banner.hasAttribute("hidden") ? banner : null;
    }, "error banner");
    expect(document.querySelector("#error")!.textContent).toMatch(/dimension/);
    expect(app.session.view.query).toBe(queryBefore);
  });
});
