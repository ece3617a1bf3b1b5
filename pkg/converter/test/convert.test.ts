import { execFileSync, spawnSync } from "child_process";
import * as fs from "fs";
import * as os from "os";
import * as path from "path";
import { afterAll, describe, expect, it } from "vitest";

import { formatValue, stableJson, writeContainer } from "../src/container";
import { assemble, loadBundle } from "../src/planetoid";
import { REFERENCE, verifyContainer } from "../src/verify";

const RAW = path.resolve(__dirname, "..", "..", "data", "planetoid-raw");
const tmpRoots: string[] = [];

function tmpDir(label: string): string {
  const dir = fs.mkdtempSync(path.join(os.tmpdir(), `conv-${label}-`));
  tmpRoots.push(dir);
  return dir;
}

afterAll(() => {
  for (const dir of tmpRoots) fs.rmSync(dir, { recursive: true, force: true });
});

function convert(name: string): string {
  const out = path.join(tmpDir(name), name);
  writeContainer(assemble(loadBundle(RAW, name), name), out);
  return out;
}

function readTree(dir: string): Map<string, Buffer> {
  const out = new Map<string, Buffer>();
  const walk = (rel: string) => {
    for (const entry of fs.readdirSync(path.join(dir, rel), { withFileTypes: true })) {
      const relPath = path.join(rel, entry.name);
      if (entry.isDirectory()) walk(relPath);
      else out.set(relPath, fs.readFileSync(path.join(dir, relPath)));
    }
  };
  walk(".");
  return out;
}

describe("conversion fidelity", () => {
  it("cora matches the published statistics", () => {
    const dir = convert("cora");
    const report = verifyContainer(dir, "cora");
    expect(report.checks.filter((c) => !c.passed)).toEqual([]);
    const meta = JSON.parse(fs.readFileSync(path.join(dir, "meta.json"), "utf8"));
    expect(meta.n_nodes).toBe(2708);
    expect(meta.n_edges).toBe(5278); // deduplicated
    expect(meta.n_edges_source).toBe(5429); // as counted by the source table
    expect(meta.raw_features).toBe(true);
    const labels = fs.readFileSync(path.join(dir, "labels.csv"), "utf8");
    expect(labels.startsWith("0,3\n")).toBe(true);
  });

  it("citeseer repairs the isolated test nodes", () => {
    const dir = convert("citeseer");
    expect(verifyContainer(dir, "citeseer").passed).toBe(true);
    const labeled = new Set(
      fs.readFileSync(path.join(dir, "labels.csv"), "utf8")
        .split("\n").filter(Boolean).map((l) => Number(l.split(",")[0]))
    );
    const holes = [];
    for (let i = 0; i < 3327; i++) if (!labeled.has(i)) holes.push(i);
    expect(holes).toEqual([
      2407, 2489, 2553, 2682, 2781, 2953, 3042, 3063, 3212, 3214, 3250, 3292,
      3305, 3306, 3309,
    ]);
    // repaired rows carry no features
    const withFeatures = new Set(
      fs.readFileSync(path.join(dir, "features.csv"), "utf8")
        .split("\n").filter(Boolean).map((l) => Number(l.split(",")[0]))
    );
    for (const hole of holes) expect(withFeatures.has(hole)).toBe(false);
    // and appear in no split
    for (const split of ["train", "val", "test"]) {
      const ids = new Set(
        fs.readFileSync(path.join(dir, "splits", `${split}.txt`), "utf8")
          .split("\n").filter(Boolean).map(Number)
      );
      for (const hole of holes) expect(ids.has(hole)).toBe(false);
    }
  });

  it("pubmed keeps full-precision tf-idf weights", () => {
    const dir = convert("pubmed");
    expect(verifyContainer(dir, "pubmed").passed).toBe(true);
    const first = fs.readFileSync(path.join(dir, "features.csv"), "utf8")
      .split("\n", 1)[0];
    expect(first).toBe("0,7,0.004999371245503426");
    // every stored literal round-trips to the same double
    const lines = fs.readFileSync(path.join(dir, "features.csv"), "utf8").split("\n");
    for (const line of lines.slice(0, 5000)) {
      if (!line) continue;
      const value = line.split(",")[2];
      expect(formatValue(Number(value))).toBe(value);
    }
  });

  it("splits follow the fixed protocol sizes", () => {
    const dir = convert("cora");
    const count = (f: string) =>
      fs.readFileSync(path.join(dir, "splits", f), "utf8").split("\n").filter(Boolean).length;
    expect(count("train.txt")).toBe(140);
    expect(count("val.txt")).toBe(500);
    expect(count("test.txt")).toBe(1000);
  });
});

describe("idempotence", () => {
  it("re-running the conversion is byte-identical", () => {
    const a = convert("cora");
    const b = convert("cora");
    const ta = readTree(a);
    const tb = readTree(b);
    expect([...ta.keys()].sort()).toEqual([...tb.keys()].sort());
    for (const [rel, buf] of ta) {
      expect(buf.equals(tb.get(rel)!), `${rel} differs`).toBe(true);
    }
  });

  it("matches the checked-in container byte for byte", () => {
    const fresh = readTree(convert("cora"));
    const checked = readTree(path.resolve(__dirname, "..", "..", "data", "cora"));
    expect([...fresh.keys()].sort()).toEqual([...checked.keys()].sort());
    for (const [rel, buf] of fresh) {
      expect(buf.equals(checked.get(rel)!), `${rel} differs`).toBe(true);
    }
  });
});

describe("verification failures", () => {
  it("flags a tampered edge file", () => {
    const dir = convert("cora");
    const edges = path.join(dir, "edges.csv");
    const lines = fs.readFileSync(edges, "utf8").split("\n");
    fs.writeFileSync(edges, lines.slice(0, lines.length - 10).join("\n") + "\n");
    const report = verifyContainer(dir, "cora");
    expect(report.passed).toBe(false);
    const failed = report.checks.find((c) => c.name === "edges_file_matches_meta");
    expect(failed?.passed).toBe(false);
  });

  it("rejects a bundle with missing files", () => {
    const dir = tmpDir("empty");
    expect(() => loadBundle(dir, "cora")).toThrow(/missing bundle file/);
  });
});

describe("cli", () => {
  const cli = path.resolve(__dirname, "..", "dist", "cli.js");

  it("convert then verify exits 0", () => {
    const out = path.join(tmpDir("cli"), "cora");
    execFileSync("node", [cli, "convert", RAW, "cora", out]);
    const res = spawnSync("node", [cli, "verify", out, "cora"], { encoding: "utf8" });
    expect(res.status).toBe(0);
    expect(res.stdout).toContain("ok   nodes");
  });

  it("bad usage exits 2", () => {
    const res = spawnSync("node", [cli, "convert", "onlyone"], { encoding: "utf8" });
    expect(res.status).toBe(2);
  });

  it("the training package accepts the converted container", () => {
    // integration through the primary's public CLI surface
    const out = path.join(tmpDir("integration"), "cora");
    execFileSync("node", [cli, "convert", RAW, "cora", out]);
    const res = spawnSync(
      "python3", ["-m", "bvat.cli", "validate", "--dataset", out, "--name", "cora"],
      { encoding: "utf8", cwd: path.resolve(__dirname, "..", "..") }
    );
    expect(res.status, res.stderr).toBe(0);
    const doc = JSON.parse(res.stdout);
    expect(doc.passed).toBe(true);
  });
});

describe("stable serialization helpers", () => {
  it("sorts meta keys", () => {
    expect(stableJson({ b: 1, a: 2 })).toBe('{\n  "a": 2,\n  "b": 1\n}\n');
  });

  it("writes integral values without a decimal point", () => {
    expect(formatValue(1)).toBe("1");
    expect(formatValue(0.5)).toBe("0.5");
    expect(() => formatValue(Infinity)).toThrow();
  });
});
