// Canvas flame graph: rect layout from layout.ts, warm deterministic
// colors hashed from the function name, hover tooltip, click to select.

import { FlameRect, hitTest, layoutFlame } from "./layout.js";
import type { TreeNode } from "./types.js";

const ROW_HEIGHT = 19;

function colorFor(name: string, selected: boolean): string {
  let h = 2166136261;
  for (let i = 0; i < name.length; i++) {
    h = (h ^ name.charCodeAt(i)) * 16777619;
    h >>>= 0;
  }
  const hue = 22 + (h % 38);            // orange band
  const light = selected ? 72 : 52 + (h >>> 8) % 14;
  return `hsl(${hue} 85% ${light}%)`;
}

export class FlameGraph {
  private rects: FlameRect[] = [];
  private tree: TreeNode | null = null;
  private zoomRoot: string | null = null;
  private selected: string | null = null;
  private readonly ctx: CanvasRenderingContext2D;

  onSelect: (node: TreeNode) => void = () => undefined;
  onZoomReset: () => void = () => undefined;

  constructor(
    private readonly canvas: HTMLCanvasElement,
    private readonly tooltip: HTMLElement,
  ) {
    const ctx = canvas.getContext("2d");
    if (!ctx) throw new Error("canvas 2d context unavailable");
    this.ctx = ctx;
    canvas.addEventListener("click", (e) => this.handleClick(e));
    canvas.addEventListener("mousemove", (e) => this.handleHover(e));
    canvas.addEventListener("mouseleave", () => this.hideTooltip());
  }

  render(tree: TreeNode | null, zoomRoot: string | null, selected: string | null): void {
    this.tree = tree;
    this.zoomRoot = zoomRoot;
    this.selected = selected;
    this.redraw();
  }

  private redraw(): void {
    const width = this.canvas.clientWidth || this.canvas.width;
    if (!this.tree) {
      this.ctx.clearRect(0, 0, this.canvas.width, this.canvas.height);
      return;
    }
    this.rects = layoutFlame(this.tree, this.zoomRoot, width);
    const depth = this.rects.reduce((d, r) => Math.max(d, r.depth), 0);
    this.canvas.width = width;
    this.canvas.height = (depth + 1) * ROW_HEIGHT + 4;
    const ctx = this.ctx;
    ctx.clearRect(0, 0, this.canvas.width, this.canvas.height);
    ctx.font = "12px ui-monospace, monospace";
    ctx.textBaseline = "middle";
    for (const rect of this.rects) {
      const y = rect.depth * ROW_HEIGHT;
      ctx.fillStyle = colorFor(rect.node.name, rect.node.id === this.selected);
      ctx.fillRect(rect.x, y, Math.max(rect.width - 1, 1), ROW_HEIGHT - 2);
      if (rect.width > 40) {
        ctx.fillStyle = "#1b1b1b";
        const label = rect.node.name.split(".").pop() ?? rect.node.name;
        ctx.fillText(label, rect.x + 4, y + ROW_HEIGHT / 2, rect.width - 8);
      }
    }
  }

  private rectAt(e: MouseEvent): FlameRect | null {
    const bounds = this.canvas.getBoundingClientRect();
    return hitTest(this.rects, e.clientX - bounds.left, e.clientY - bounds.top, ROW_HEIGHT);
  }

  private handleClick(e: MouseEvent): void {
    const rect = this.rectAt(e);
    if (rect) {
      this.onSelect(rect.node);
    } else {
      this.onZoomReset();
    }
  }

  private handleHover(e: MouseEvent): void {
    const rect = this.rectAt(e);
    if (!rect) {
      this.hideTooltip();
      return;
    }
    const { node } = rect;
    const where = node.file ? ` ${node.file}:${node.line ?? "?"}` : "";
    this.tooltip.textContent =
      `${node.name}${where}  value ${node.value} (${rect.percent.toFixed(2)}%), self ${node.self}`;
    this.tooltip.style.display = "block";
    this.tooltip.style.left = `${e.pageX + 12}px`;
    this.tooltip.style.top = `${e.pageY + 12}px`;
  }

  private hideTooltip(): void {
    this.tooltip.style.display = "none";
  }
}
