#!/usr/bin/env node
// CLI: fixturegen --manifest <path> --out <dir>

import * as path from "node:path";
import * as process from "node:process";
import { generate, loadManifest } from "./generate.js";

function parseArgs(argv: string[]): { manifest: string; out: string } {
  let manifest = "manifest.json";
  let out = path.join("..", "fixtures");
  for (let i = 0; i < argv.length; i++) {
    if (argv[i] === "--manifest") manifest = argv[++i];
    else if (argv[i] === "--out") out = argv[++i];
    else if (argv[i] === "--help" || argv[i] === "-h") {
      console.log("usage: fixturegen [--manifest manifest.json] [--out ../fixtures]");
      process.exit(0);
    } else {
      console.error(`unknown argument: ${argv[i]}`);
      process.exit(2);
    }
  }
  return { manifest, out };
}

function main(): void {
  const { manifest, out } = parseArgs(process.argv.slice(2));
  const specs = loadManifest(manifest).fixtures;
  let failures = 0;
  for (const spec of specs) {
    const stem = `${spec.molecule}_${spec.basis}_${spec.label}`;
    try {
      const res = generate(spec, out);
      const fci = res.eFci !== undefined ? ` e_fci=${res.eFci.toFixed(10)}` : "";
      console.log(`${stem} norb=${res.norb} e_hf=${res.eHf.toFixed(10)}${fci}`);
    } catch (err) {
      failures += 1;
      console.error(`${stem} FAILED: ${err instanceof Error ? err.message : err}`);
    }
  }
  process.exit(failures > 0 ? 1 : 0);
}

main();
