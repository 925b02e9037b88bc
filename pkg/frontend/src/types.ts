// DTOs mirroring the JSON the profile service emits.

export interface TreeNode {
  id: string;
  name: string;
  file: string | null;
  line: number | null;
  value: number;
  self: number;
  children: TreeNode[];
}

export interface PathNode {
  id: string;
  name: string;
  file: string | null;
  line: number | null;
  value: number;
  self: number;
}

export interface CallPath {
  parents: PathNode[];
  current: PathNode;
  children: PathNode[];
}

export interface SummaryEntry {
  node_id: string;
  function: string;
  line: number | null;
  summary: string;
  provenance: string;
  truncated_input: boolean;
}

export interface Meta {
  metrics: { name: string; unit: string }[];
  default_metric: number;
  sample_count: number;
}

export interface FlatRow {
  function: string;
  module: string;
  file: string | null;
  exclusive: number;
  inclusive: number;
}

export type ViewName = "topdown" | "bottomup" | "flat";

export const NOT_FOUND = "NOT FOUND";
