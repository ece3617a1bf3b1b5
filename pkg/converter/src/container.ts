/**
 * Deterministic writer for the plain-text dataset container format consumed
 * by the training package (see that repo's docs/container-format.md).
 * Re-running the writer on the same input produces byte-identical files.
 */

import * as fs from "fs";
import * as path from "path";

import { Assembled } from "./planetoid";

export const CONTAINER_VERSION = 1;

/** JSON with lexicographically sorted keys, 2-space indent, trailing newline. */
export function stableJson(obj: Record<string, unknown>): string {
  const sorted: Record<string, unknown> = {};
  for (const key of Object.keys(obj).sort()) sorted[key] = obj[key];
  return JSON.stringify(sorted, null, 2) + "\n";
}

/** Decimal literal that parses back to the same IEEE double; integral values
 * are written without a decimal point. */
export function formatValue(v: number): string {
  if (!Number.isFinite(v)) throw new Error(`non-finite feature value ${v}`);
  return String(v);
}

export function writeContainer(a: Assembled, outDir: string): void {
  fs.mkdirSync(path.join(outDir, "splits"), { recursive: true });

  const meta = {
    class_names: Array.from({ length: a.nClasses }, (_, i) => `class_${i}`),
    feature_encoding: "sparse",
    format_version: CONTAINER_VERSION,
    n_classes: a.nClasses,
    n_edges: a.edges.length,
    n_edges_source: a.edgesSource,
    n_features: a.nFeatures,
    n_nodes: a.nNodes,
    name: a.name,
    raw_features: true,
  };
  fs.writeFileSync(path.join(outDir, "meta.json"), stableJson(meta));

  const edgeLines: string[] = [];
  for (const [u, v] of a.edges) edgeLines.push(`${u},${v}\n`);
  fs.writeFileSync(path.join(outDir, "edges.csv"), edgeLines.join(""));

  const featParts: string[] = [];
  for (let node = 0; node < a.nNodes; node++) {
    for (const { col, value } of a.featureRows[node]) {
      featParts.push(`${node},${col},${formatValue(value)}\n`);
    }
  }
  fs.writeFileSync(path.join(outDir, "features.csv"), featParts.join(""));

  const labelLines: string[] = [];
  for (let node = 0; node < a.nNodes; node++) {
    if (a.labels[node] >= 0) labelLines.push(`${node},${a.labels[node]}\n`);
  }
  fs.writeFileSync(path.join(outDir, "labels.csv"), labelLines.join(""));

  for (const [split, ids] of Object.entries(a.splits)) {
    fs.writeFileSync(
      path.join(outDir, "splits", `${split}.txt`),
      ids.map((i) => `${i}\n`).join("")
    );
  }
}
