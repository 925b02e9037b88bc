// View state with one structural invariant: whenever a zoom root is set,
// it is an ancestor-or-self of the selected node, otherwise the selection
// is cleared.

import { isAncestorOrSelf } from "./layout.js";
import type { SummaryEntry, TreeNode, ViewName } from "./types.js";

export class ViewState {
  view: ViewName = "topdown";
  metric = "";
  selectedNode: string | null = null;
  zoomRoot: string | null = null;
  summaries = new Map<string, SummaryEntry>();
  backendEndpoint = "";
  tree: TreeNode | null = null;

  setTree(tree: TreeNode | null): void {
    this.tree = tree;
    this.selectedNode = null;
    this.zoomRoot = null;
    this.summaries.clear();
  }

  setView(view: ViewName): void {
    if (view !== this.view) {
      this.view = view;
      this.selectedNode = null;
      this.zoomRoot = null;
      this.summaries.clear();
    }
  }

  select(id: string | null): void {
    this.selectedNode = id;
    this.enforceZoomInvariant();
  }

  zoomTo(id: string | null): void {
    this.zoomRoot = id;
    this.enforceZoomInvariant();
  }

  private enforceZoomInvariant(): void {
    if (!this.zoomRoot || !this.selectedNode) return;
    if (!this.tree) {
      this.selectedNode = null;
      return;
    }
    if (!isAncestorOrSelf(this.tree, this.zoomRoot, this.selectedNode)) {
      this.selectedNode = null;
    }
  }

  invariantHolds(): boolean {
    if (!this.zoomRoot || !this.selectedNode) return true;
    return this.tree !== null
      && isAncestorOrSelf(this.tree, this.zoomRoot, this.selectedNode);
  }
}
