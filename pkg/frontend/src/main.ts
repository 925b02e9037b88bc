// Wires the pieces together against the serving origin.

import { ApiClient } from "./api.js";
import { SelectionController } from "./controller.js";
import { FlameGraph } from "./flame.js";
import { SummaryPanel } from "./panel.js";
import { ViewState } from "./state.js";
import type { FlatRow, ViewName } from "./types.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

async function boot(): Promise<void> {
  const api = new ApiClient("");
  const state = new ViewState();

  const canvas = el<HTMLCanvasElement>("flame");
  const flatTable = el<HTMLTableElement>("flat");
  const flame = new FlameGraph(canvas, el("tooltip"));
  const panel = new SummaryPanel(el("path-list"), el("panel-status"), el("source"), api);
  const controller = new SelectionController(api, panel);

  const viewSelect = el<HTMLSelectElement>("view");
  const metricSelect = el<HTMLSelectElement>("metric");
  const endpointInput = el<HTMLInputElement>("endpoint");
  const resetButton = el<HTMLButtonElement>("reset-zoom");
  const header = el("meta-line");

  const meta = await api.meta();
  for (const metric of meta.metrics) {
    const option = document.createElement("option");
    option.value = metric.name;
    option.textContent = `${metric.name} (${metric.unit})`;
    metricSelect.appendChild(option);
  }
  state.metric = meta.metrics[meta.default_metric]?.name ?? "";
  metricSelect.value = state.metric;
  header.textContent = `${meta.sample_count} samples`;

  function renderFlat(rows: FlatRow[]): void {
    const body = flatTable.tBodies[0] ?? flatTable.createTBody();
    body.replaceChildren();
    for (const row of rows) {
      const tr = body.insertRow();
      tr.insertCell().textContent = row.function;
      tr.insertCell().textContent = row.file ?? "";
      tr.insertCell().textContent = String(row.exclusive);
      tr.insertCell().textContent = String(row.inclusive);
    }
  }

  async function reload(): Promise<void> {
    controller.clearCache();
    if (state.view === "flat") {
      canvas.style.display = "none";
      flatTable.style.display = "table";
      renderFlat(await api.flat(state.metric));
      state.setTree(null);
      return;
    }
    canvas.style.display = "block";
    flatTable.style.display = "none";
    state.setTree(await api.tree(state.view, state.metric));
    flame.render(state.tree, state.zoomRoot, state.selectedNode);
  }

  viewSelect.addEventListener("change", () => {
    state.setView(viewSelect.value as ViewName);
    void reload();
  });
  metricSelect.addEventListener("change", () => {
    state.metric = metricSelect.value;
    void reload();
  });
  endpointInput.addEventListener("change", () => {
    state.backendEndpoint = endpointInput.value.trim();
    controller.endpoint = state.backendEndpoint;
    controller.clearCache();
  });
  resetButton.addEventListener("click", () => {
    state.zoomTo(null);
    flame.render(state.tree, state.zoomRoot, state.selectedNode);
  });

  flame.onSelect = (node) => {
    state.select(node.id);
    state.zoomTo(node.id); // zoom follows the selection
    flame.render(state.tree, state.zoomRoot, state.selectedNode);
    void controller.select(node.id);
  };
  flame.onZoomReset = () => {
    state.zoomTo(null);
    flame.render(state.tree, state.zoomRoot, state.selectedNode);
  };

  await reload();
}

boot().catch((err) => {
  const banner = document.getElementById("panel-status");
  if (banner) banner.textContent = `failed to load: ${err}`;
});
