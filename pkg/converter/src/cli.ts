/**
 * Command line:
 *   convert <input_dir> <name> <output_dir>   write a container from a bundle
 *   verify <container_dir> <name>             recompute statistics and compare
 *
 * Exit codes: 0 success, 1 verification failure, 2 usage or input error.
 */

import { writeContainer } from "./container";
import { assemble, loadBundle } from "./planetoid";
import { verifyContainer } from "./verify";

export function main(argv: string[]): number {
  const [cmd, ...rest] = argv;
  try {
    if (cmd === "convert") {
      if (rest.length !== 3) {
        console.error("usage: convert <input_dir> <name> <output_dir>");
        return 2;
      }
      const [inputDir, name, outputDir] = rest;
      const assembled = assemble(loadBundle(inputDir, name), name);
      writeContainer(assembled, outputDir);
      console.log(
        `wrote ${name}: ${assembled.nNodes} nodes, ${assembled.edges.length} unique edges ` +
          `(${assembled.edgesSource} source links), ${assembled.nFeatures} features, ` +
          `${assembled.nClasses} classes -> ${outputDir}`
      );
      return 0;
    }
    if (cmd === "verify") {
      if (rest.length !== 2) {
        console.error("usage: verify <container_dir> <name>");
        return 2;
      }
      const [dir, name] = rest;
      const report = verifyContainer(dir, name);
      for (const c of report.checks) {
        const flag = c.passed ? "ok  " : "FAIL";
        console.log(`${flag} ${c.name}: expected ${c.expected}, got ${c.actual}`);
      }
      return report.passed ? 0 : 1;
    }
    console.error("usage: {convert|verify} ...");
    return 2;
  } catch (err) {
    console.error(`error: ${err instanceof Error ? err.message : err}`);
    return 2;
  }
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
