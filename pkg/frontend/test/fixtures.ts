// The four-function call-chain profile as the service serializes it:
// main -> moo -> foo -> two print call sites weighted 5 and 4.

import type { CallPath, SummaryEntry, TreeNode } from "../src/types.js";

export const PRINT_10: TreeNode = {
  id: "p10", name: "demo.Demo.print", file: "Demo.java", line: 10,
  value: 5, self: 5, children: [],
};

export const PRINT_11: TreeNode = {
  id: "p11", name: "demo.Demo.print", file: "Demo.java", line: 11,
  value: 4, self: 4, children: [],
};

export const FOO: TreeNode = {
  id: "foo", name: "demo.Demo.foo", file: "Demo.java", line: 16,
  value: 9, self: 0, children: [PRINT_10, PRINT_11],
};

export const MOO: TreeNode = {
  id: "moo", name: "demo.Demo.moo", file: "Demo.java", line: 21,
  value: 9, self: 0, children: [FOO],
};

export const MAIN: TreeNode = {
  id: "main", name: "demo.Demo.main", file: "Demo.java", line: 25,
  value: 9, self: 0, children: [MOO],
};

export const ROOT: TreeNode = {
  id: "root", name: "VIRTUAL ROOT", file: null, line: null,
  value: 9, self: 0, children: [MAIN],
};

const strip = ({ id, name, file, line, value, self }: TreeNode) =>
  ({ id, name, file, line, value, self });

export const FOO_CALLPATH: CallPath = {
  parents: [strip(MAIN), strip(MOO)],
  current: strip(FOO),
  children: [strip(PRINT_10), strip(PRINT_11)],
};

export const FOO_SUMMARIES: SummaryEntry[] = [
  { node_id: "main", function: "demo.Demo.main", line: 25,
    summary: "method: main", provenance: "extractive", truncated_input: false },
  { node_id: "moo", function: "demo.Demo.moo", line: 21,
    summary: "method: moo", provenance: "extractive", truncated_input: false },
  { node_id: "foo", function: "demo.Demo.foo", line: 16,
    summary: "method: foo", provenance: "extractive", truncated_input: false },
  { node_id: "p10", function: "demo.Demo.print", line: 10,
    summary: "method: print", provenance: "extractive", truncated_input: false },
  { node_id: "p11", function: "demo.Demo.print", line: 11,
    summary: "method: print", provenance: "cache_hit", truncated_input: false },
];
