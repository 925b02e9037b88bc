// Summary panel and source pane.  Panel rows keep the API's call-path
// order; the current node is highlighted; NOT FOUND entries are styled
// but still listed; clicking a resolved row opens the source window
// around its line.

import type { ApiClient } from "./api.js";
import type { CallPath, PathNode, SummaryEntry } from "./types.js";
import { NOT_FOUND } from "./types.js";
import type { PanelSink } from "./controller.js";

const SOURCE_CONTEXT = 12;

export class SummaryPanel implements PanelSink {
  constructor(
    private readonly list: HTMLElement,
    private readonly status: HTMLElement,
    private readonly sourcePane: HTMLElement,
    private readonly api: ApiClient,
  ) {}

  showPath(path: CallPath): void {
    this.status.textContent = "summarizing…";
    this.renderRows(path, null);
  }

  showSummaries(path: CallPath, entries: SummaryEntry[]): void {
    this.status.textContent = "";
    this.renderRows(path, entries);
  }

  showError(message: string): void {
    // keep whatever is listed; only the status line changes
    this.status.textContent = `summaries failed: ${message}`;
  }

  private renderRows(path: CallPath, entries: SummaryEntry[] | null): void {
    const nodes: PathNode[] = [...path.parents, path.current, ...path.children];
    this.list.replaceChildren();
    nodes.forEach((node, i) => {
      const row = document.createElement("li");
      row.dataset.nodeId = node.id;
      const isCurrent = node.id === path.current.id && i === path.parents.length;
      const isChild = i > path.parents.length;
      row.className = isCurrent ? "current" : isChild ? "child" : "parent";

      const label = document.createElement("span");
      label.className = "fn";
      label.textContent = node.line !== null ? `${node.name}:L${node.line}` : node.name;
      row.appendChild(label);

      const entry = entries?.[i];
      const summary = document.createElement("span");
      summary.className = "summary";
      if (entry) {
        summary.textContent = entry.summary;
        if (entry.summary === NOT_FOUND || entry.provenance === "unresolved") {
          summary.classList.add("missing");
        }
        if (entry.truncated_input) {
          summary.title = "input was truncated before summarization";
        }
      } else {
        summary.textContent = "…";
      }
      row.appendChild(summary);

      if (node.file) {
        row.classList.add("linked");
        row.addEventListener("click", () => this.openSource(node));
      }
      this.list.appendChild(row);
    });
  }

  private async openSource(node: PathNode): Promise<void> {
    if (!node.file) return;
    const line = node.line ?? 1;
    const start = Math.max(1, line - SOURCE_CONTEXT);
    try {
      const { lines } = await this.api.source(node.file, start, line + SOURCE_CONTEXT);
      const rendered = lines
        .map((text, i) => {
          const n = start + i;
          const marker = n === line ? ">" : " ";
          return `${marker}${String(n).padStart(5)}  ${text}`;
        })
        .join("\n");
      this.sourcePane.textContent = `${node.file}\n${rendered}`;
    } catch (err) {
      this.sourcePane.textContent =
        `${node.file}: ${err instanceof Error ? err.message : String(err)}`;
    }
  }
}
