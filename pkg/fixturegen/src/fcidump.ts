// FCIDUMP text writer (8-fold permutational symmetry, chemist's notation)
// and the JSON metadata sidecar that accompanies each fixture.

import * as fs from "node:fs";
import { eriIndex } from "./integrals.js";
import { Matrix } from "./linalg.js";

// Fortran-style "%23.16E": 16 fraction digits, two-digit signed exponent.
export function formatE(v: number): string {
  const s = v.toExponential(16); // e.g. "-6.7459408432336732e-1"
  const [mant, exp] = s.split("e");
  const expNum = parseInt(exp, 10);
  const expStr = (expNum < 0 ? "-" : "+") + String(Math.abs(expNum)).padStart(2, "0");
  return (mant + "E" + expStr).padStart(23);
}

function indexed(v: number, p: number, q: number, r: number, s: number): string {
  const idx = [p, q, r, s].map((x) => String(x).padStart(4)).join(" ");
  return `${formatE(v)} ${idx}`;
}

export function fcidumpText(
  norb: number,
  nelec: number,
  ms2: number,
  h1: Matrix,
  eriMo: Float64Array,
  ecore: number,
  thresh = 1e-16,
): string {
  const lines: string[] = [
    `&FCI NORB=${norb},NELEC=${nelec},MS2=${ms2},`,
    " ORBSYM=" + "1,".repeat(norb),
    " ISYM=1,",
    "&END",
  ];
  for (let p = 0; p < norb; p++) {
    for (let q = 0; q <= p; q++) {
      for (let r = 0; r <= p; r++) {
        const smax = r === p ? q : r;
        for (let s = 0; s <= smax; s++) {
          const v = eriMo[eriIndex(norb, p, q, r, s)];
          if (Math.abs(v) > thresh) lines.push(indexed(v, p + 1, q + 1, r + 1, s + 1));
        }
      }
    }
  }
  for (let p = 0; p < norb; p++) {
    for (let q = 0; q <= p; q++) {
      if (Math.abs(h1[p][q]) > thresh) lines.push(indexed(h1[p][q], p + 1, q + 1, 0, 0));
    }
  }
  lines.push(indexed(ecore, 0, 0, 0, 0));
  return lines.join("\n") + "\n";
}

function sortKeysDeep(value: unknown): unknown {
  if (Array.isArray(value)) return value.map(sortKeysDeep);
  if (value !== null && typeof value === "object") {
    const out: Record<string, unknown> = {};
    for (const k of Object.keys(value as object).sort()) {
      out[k] = sortKeysDeep((value as Record<string, unknown>)[k]);
    }
    return out;
  }
  return value;
}

export function writeSidecar(path: string, sidecar: Record<string, unknown>): void {
  fs.writeFileSync(path, JSON.stringify(sortKeysDeep(sidecar), null, 2) + "\n");
}
