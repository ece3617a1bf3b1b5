/**
 * Loading and canonical reassembly of a Planetoid citation-benchmark bundle.
 *
 * A bundle is eight files: ind.<name>.{x,y,tx,ty,allx,ally,graph,test.index}.
 * Features and labels of test nodes are stored shuffled; test.index maps the
 * i-th stored test row to its canonical node id. Citeseer's test index has
 * gaps (isolated papers nobody cites); those nodes get zero features and no
 * label, and they belong to no split.
 */

import * as fs from "fs";
import * as path from "path";

import { NDArray, SparseCsr, unpickle } from "./unpickle";

export interface Bundle {
  x: SparseCsr;
  y: NDArray;
  tx: SparseCsr;
  ty: NDArray;
  allx: SparseCsr;
  ally: NDArray;
  graph: Map<number, number[]>;
  testIndex: number[];
}

export interface SparseRow {
  col: number;
  value: number;
}

export interface Assembled {
  name: string;
  nNodes: number;
  nFeatures: number;
  nClasses: number;
  /** canonical node order; empty array for zero rows */
  featureRows: SparseRow[][];
  /** -1 where unlabeled */
  labels: Int32Array;
  /** deduplicated undirected edges, u < v, sorted */
  edges: Array<[number, number]>;
  /** half the directed adjacency entries, duplicates and self-loops included */
  edgesSource: number;
  splits: { train: number[]; val: number[]; test: number[] };
}

const BUNDLE_EXTS = ["x", "y", "tx", "ty", "allx", "ally", "graph", "test.index"] as const;

export function bundlePath(dir: string, name: string, ext: string): string {
  return path.join(dir, `ind.${name}.${ext}`);
}

export function loadBundle(dir: string, name: string): Bundle {
  for (const ext of BUNDLE_EXTS) {
    const p = bundlePath(dir, name, ext);
    if (!fs.existsSync(p)) {
      throw new Error(`missing bundle file: ${p}`);
    }
  }
  const pick = (ext: string) => unpickle(fs.readFileSync(bundlePath(dir, name, ext)));
  const x = pick("x") as SparseCsr;
  const y = pick("y") as NDArray;
  const tx = pick("tx") as SparseCsr;
  const ty = pick("ty") as NDArray;
  const allx = pick("allx") as SparseCsr;
  const ally = pick("ally") as NDArray;
  const rawGraph = pick("graph") as Map<number, number[]>;
  const testIndex = fs
    .readFileSync(bundlePath(dir, name, "test.index"), "utf8")
    .split(/\s+/)
    .filter((s) => s.length > 0)
    .map((s) => {
      const v = Number(s);
      if (!Number.isInteger(v) || v < 0) throw new Error(`bad test index entry ${s}`);
      return v;
    });
  if (new Set(testIndex).size !== testIndex.length) {
    throw new Error("test.index contains duplicate entries");
  }
  const bundle: Bundle = { x, y, tx, ty, allx, ally, graph: rawGraph, testIndex };
  checkShapes(bundle);
  return bundle;
}

function checkShapes(b: Bundle): void {
  const d = b.allx.shape[1];
  if (b.x.shape[1] !== d || b.tx.shape[1] !== d) {
    throw new Error("feature dimension mismatch between x/tx/allx");
  }
  const c = b.ally.shape[1];
  if (b.y.shape[1] !== c || b.ty.shape[1] !== c) {
    throw new Error("class count mismatch between y/ty/ally");
  }
  if (b.tx.shape[0] !== b.testIndex.length) {
    throw new Error("tx row count does not match test.index length");
  }
  if (b.x.shape[0] !== b.y.shape[0] || b.allx.shape[0] !== b.ally.shape[0]) {
    throw new Error("feature/label row count mismatch");
  }
}

function csrRow(m: SparseCsr, i: number): SparseRow[] {
  const indptr = m.indptr.values();
  const indices = m.indices.values();
  const data = m.data.values();
  const row: SparseRow[] = [];
  for (let p = indptr[i]; p < indptr[i + 1]; p++) {
    if (data[p] !== 0) row.push({ col: Number(indices[p]), value: Number(data[p]) });
  }
  row.sort((a, b) => a.col - b.col);
  return row;
}

function oneHotLabel(m: NDArray, i: number): number {
  const vals = m.values();
  const c = m.shape[1];
  let label = -1;
  for (let j = 0; j < c; j++) {
    if (vals[i * c + j] !== 0) {
      if (label >= 0) throw new Error(`label row ${i} is not one-hot`);
      label = j;
    }
  }
  return label;
}

export function assemble(bundle: Bundle, name: string): Assembled {
  const nAllx = bundle.allx.shape[0];
  const maxTest = Math.max(...bundle.testIndex);
  const nNodes = Math.max(nAllx + bundle.tx.shape[0], maxTest + 1);
  const nFeatures = bundle.allx.shape[1];
  const nClasses = bundle.ally.shape[1];

  const featureRows: SparseRow[][] = new Array(nNodes);
  const labels = new Int32Array(nNodes).fill(-1);
  for (let i = 0; i < nNodes; i++) featureRows[i] = [];
  for (let i = 0; i < nAllx; i++) {
    featureRows[i] = csrRow(bundle.allx, i);
    labels[i] = oneHotLabel(bundle.ally, i);
  }
  bundle.testIndex.forEach((nodeId, i) => {
    if (nodeId < nAllx) throw new Error(`test index ${nodeId} overlaps training rows`);
    featureRows[nodeId] = csrRow(bundle.tx, i);
    labels[nodeId] = oneHotLabel(bundle.ty, i);
  });

  let directed = 0;
  const seen = new Set<number>();
  const edges: Array<[number, number]> = [];
  for (const [u, nbrs] of bundle.graph) {
    if (u < 0 || u >= nNodes) throw new Error(`graph key ${u} out of range`);
    for (const v of nbrs) {
      if (v < 0 || v >= nNodes) throw new Error(`graph neighbor ${v} out of range`);
      directed += 1;
      if (u === v) continue;
      const lo = Math.min(u, v);
      const hi = Math.max(u, v);
      const key = lo * nNodes + hi;
      if (!seen.has(key)) {
        seen.add(key);
        edges.push([lo, hi]);
      }
    }
  }
  if (directed % 2 !== 0) {
    throw new Error("directed adjacency entry count is odd; graph is asymmetric");
  }
  edges.sort((a, b) => a[0] - b[0] || a[1] - b[1]);

  const nTrain = bundle.y.shape[0];
  const train = Array.from({ length: nTrain }, (_, i) => i);
  const val = Array.from({ length: 500 }, (_, i) => nTrain + i);
  const test = [...bundle.testIndex].sort((a, b) => a - b);

  for (const [splitName, ids] of Object.entries({ train, val, test })) {
    for (const i of ids) {
      if (labels[i] < 0) {
        throw new Error(`${splitName} split node ${i} has no label`);
      }
    }
  }

  return {
    name,
    nNodes,
    nFeatures,
    nClasses,
    featureRows,
    labels,
    edges,
    edgesSource: directed / 2,
    splits: { train, val, test },
  };
}
