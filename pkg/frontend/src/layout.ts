// Flame-graph geometry: pure functions from tree JSON to pixel rects.
//
// Child edges are placed by cumulative rounding against the parent's pixel
// span, so integer error never accumulates: the rendered children can
// never overflow the parent, and any rounding slack lands on the last
// child's right edge.

import type { TreeNode } from "./types.js";

export interface FlameRect {
  node: TreeNode;
  x: number;
  width: number;
  depth: number;
  percent: number;
}

export function findNode(root: TreeNode, id: string): TreeNode | null {
  if (root.id === id) return root;
  for (const child of root.children) {
    const hit = findNode(child, id);
    if (hit) return hit;
  }
  return null;
}

export function isAncestorOrSelf(root: TreeNode, ancestorId: string, nodeId: string): boolean {
  const ancestor = findNode(root, ancestorId);
  return ancestor !== null && findNode(ancestor, nodeId) !== null;
}

export function layoutFlame(
  root: TreeNode,
  zoomRootId: string | null,
  width: number,
): FlameRect[] {
  const zoom = zoomRootId ? findNode(root, zoomRootId) ?? root : root;
  const rects: FlameRect[] = [];
  if (zoom.value <= 0 || width <= 0) return rects;
  const total = zoom.value;

  const place = (node: TreeNode, x: number, w: number, depth: number) => {
    rects.push({ node, x, width: w, depth, percent: (100 * node.value) / total });
    if (node.value <= 0) return;
    let cumulative = 0;
    let edge = 0;
    for (const child of node.children) {
      cumulative += child.value;
      const nextEdge = Math.round((cumulative / node.value) * w);
      const childWidth = nextEdge - edge;
      if (childWidth > 0) {
        place(child, x + edge, childWidth, depth + 1);
      }
      edge = nextEdge;
    }
  };

  place(zoom, 0, width, 0);
  return rects;
}

export function hitTest(
  rects: FlameRect[],
  x: number,
  y: number,
  rowHeight: number,
): FlameRect | null {
  const depth = Math.floor(y / rowHeight);
  for (const rect of rects) {
    if (rect.depth === depth && x >= rect.x && x < rect.x + rect.width) {
      return rect;
    }
  }
  return null;
}
