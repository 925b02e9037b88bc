import { describe, expect, it } from "vitest";

import { ViewState } from "../src/state.js";
import { ROOT } from "./fixtures.js";

describe("ViewState", () => {
  it("keeps the zoom root an ancestor-or-self of the selection", () => {
    const state = new ViewState();
    state.setTree(ROOT);
    state.select("p10");
    state.zoomTo("foo"); // foo is an ancestor of p10
    expect(state.selectedNode).toBe("p10");
    expect(state.invariantHolds()).toBe(true);

    state.zoomTo("p11"); // not an ancestor of p10: selection must clear
    expect(state.selectedNode).toBeNull();
    expect(state.invariantHolds()).toBe(true);
  });

  it("allows zooming to the selection itself", () => {
    const state = new ViewState();
    state.setTree(ROOT);
    state.select("foo");
    state.zoomTo("foo");
    expect(state.selectedNode).toBe("foo");
    expect(state.zoomRoot).toBe("foo");
    expect(state.invariantHolds()).toBe(true);
  });

  it("clears selection, zoom and summaries when the view changes", () => {
    const state = new ViewState();
    state.setTree(ROOT);
    state.select("foo");
    state.zoomTo("foo");
    state.summaries.set("foo", {
      node_id: "foo", function: "demo.Demo.foo", line: 16,
      summary: "method: foo", provenance: "extractive", truncated_input: false,
    });
    state.setView("bottomup");
    expect(state.selectedNode).toBeNull();
    expect(state.zoomRoot).toBeNull();
    expect(state.summaries.size).toBe(0);
    state.setView("bottomup"); // same view is a no-op
    expect(state.view).toBe("bottomup");
  });

  it("clears a selection that survives into a treeless state", () => {
    const state = new ViewState();
    state.setTree(ROOT);
    state.select("foo");
    state.setTree(null);
    expect(state.selectedNode).toBeNull();
    expect(state.invariantHolds()).toBe(true);
  });
});
