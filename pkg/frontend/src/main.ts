import { ExplorerApp } from "./ui.js";

function boot(): void {
  const root = document.getElementById("root");
  if (!root) throw new Error("missing #root container");
  // same-origin by default; override with ?api=http://host:port for a
  // service running elsewhere
  const base = new URLSearchParams(window.location.search).get("api") ?? "";
  const app = new ExplorerApp(root, base);
  void app.loadOracles();
  (window as unknown as { explorer: ExplorerApp }).explorer = app;
}

if (document.readyState === "loading") {
  document.addEventListener("DOMContentLoaded", boot);
} else {
  boot();
}
