/**
 * Recompute a converted container's statistics and compare them to the
 * published figures for the citation benchmarks.
 */

import * as fs from "fs";
import * as path from "path";

export interface ReferenceRow {
  nodes: number;
  edges: number;
  features: number;
  classes: number;
  labelRate: number;
}

export const REFERENCE: Record<string, ReferenceRow> = {
  cora: { nodes: 2708, edges: 5429, features: 1433, classes: 7, labelRate: 0.052 },
  citeseer: { nodes: 3327, edges: 4732, features: 3703, classes: 6, labelRate: 0.036 },
  pubmed: { nodes: 19717, edges: 44338, features: 500, classes: 3, labelRate: 0.003 },
};

export interface Check {
  name: string;
  expected: string | number | boolean;
  actual: string | number | boolean;
  passed: boolean;
}

export interface VerifyReport {
  checks: Check[];
  passed: boolean;
}

function readLines(p: string): string[] {
  return fs
    .readFileSync(p, "utf8")
    .split("\n")
    .filter((l) => l.length > 0);
}

export function verifyContainer(dir: string, name: string): VerifyReport {
  const ref = REFERENCE[name];
  if (!ref) {
    throw new Error(`no reference statistics for ${name}; known: ${Object.keys(REFERENCE).join(", ")}`);
  }
  const meta = JSON.parse(fs.readFileSync(path.join(dir, "meta.json"), "utf8"));
  const checks: Check[] = [];
  const add = (name: string, expected: Check["expected"], actual: Check["actual"], passed: boolean) =>
    checks.push({ name, expected, actual, passed });

  add("nodes", ref.nodes, meta.n_nodes, meta.n_nodes === ref.nodes);
  add("edges", ref.edges, meta.n_edges_source, meta.n_edges_source === ref.edges);
  add("features", ref.features, meta.n_features, meta.n_features === ref.features);
  add("classes", ref.classes, meta.n_classes, meta.n_classes === ref.classes);

  const edges = readLines(path.join(dir, "edges.csv"));
  add("edges_file_matches_meta", meta.n_edges, edges.length, edges.length === meta.n_edges);
  const uniq = new Set(edges);
  add("edges_deduplicated", true, uniq.size === edges.length, uniq.size === edges.length);

  const train = readLines(path.join(dir, "splits", "train.txt"));
  const val = readLines(path.join(dir, "splits", "val.txt"));
  const test = readLines(path.join(dir, "splits", "test.txt"));
  const labelRate = train.length / meta.n_nodes;
  add(
    "label_rate",
    ref.labelRate,
    Math.round(labelRate * 1e6) / 1e6,
    Math.abs(labelRate - ref.labelRate) <= 1e-3
  );

  const all = [...train, ...val, ...test];
  const disjoint = new Set(all).size === all.length;
  add("splits_disjoint", true, disjoint, disjoint);

  const labeled = new Set(
    readLines(path.join(dir, "labels.csv")).map((l) => l.split(",")[0])
  );
  const covered = all.every((id) => labeled.has(id));
  add("splits_labeled", true, covered, covered);

  let maxCol = -1;
  for (const line of readLines(path.join(dir, "features.csv"))) {
    const col = Number(line.split(",")[1]);
    if (col > maxCol) maxCol = col;
  }
  add("feature_columns_in_range", true, maxCol < meta.n_features, maxCol < meta.n_features);

  return { checks, passed: checks.every((c) => c.passed) };
}
