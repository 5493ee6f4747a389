import { describe, it, expect } from "vitest";
import { boys, buildBasis, computeIntegrals, eriIndex, Atom } from "../src/integrals.js";
import { eighSymmetric } from "../src/linalg.js";

function erf(x: number): number {
  // Maclaurin series; converges to full double precision for the small
  // arguments used here.
  const t = Math.abs(x);
  let sum = 0;
  let term = t;
  for (let k = 0; k < 200; k++) {
    sum += term / (2 * k + 1);
    term *= (-t * t) / (k + 1);
    if (Math.abs(term) < 1e-18) break;
  }
  const val = (2 / Math.sqrt(Math.PI)) * sum;
  return x < 0 ? -val : val;
}

describe("boys function", () => {
  it("matches the closed form at m=0", () => {
    // the series erf oracle cancels badly past x ~ 3, so stop at T = 5
    for (const T of [1e-3, 0.1, 1, 5]) {
      const exact = 0.5 * Math.sqrt(Math.PI / T) * erf(Math.sqrt(T));
      expect(boys(0, T)).toBeCloseTo(exact, 12);
    }
    // large T: erf(sqrt(T)) -> 1 to machine precision
    expect(boys(0, 30)).toBeCloseTo(0.5 * Math.sqrt(Math.PI / 30), 13);
  });

  it("satisfies the downward recursion F_{m+1} = ((2m+1)F_m - e^-T)/(2T)", () => {
    for (const T of [0.05, 0.7, 3, 12]) {
      for (let m = 0; m < 6; m++) {
        const lhs = boys(m + 1, T);
        const rhs = ((2 * m + 1) * boys(m, T) - Math.exp(-T)) / (2 * T);
        expect(Math.abs(lhs - rhs)).toBeLessThan(1e-13);
      }
    }
  });

  it("equals 1/(2m+1) at T=0", () => {
    for (let m = 0; m < 5; m++) expect(boys(m, 0)).toBeCloseTo(1 / (2 * m + 1), 14);
  });
});

const N2: Atom[] = [
  ["N", [0, 0, 0]],
  ["N", [0, 0, 2.06]],
];

describe("contracted integrals", () => {
  it("builds normalized basis functions (unit overlap diagonal)", () => {
    const ints = computeIntegrals(N2, "sto-3g");
    for (let i = 0; i < ints.n; i++) expect(ints.S[i][i]).toBeCloseTo(1, 12);
  });

  it("gives 10 functions for N2/STO-3G and 2 for H/6-31G", () => {
    expect(buildBasis(N2, "sto-3g")).toHaveLength(10);
    expect(buildBasis([["H", [0, 0, 0]]], "6-31g")).toHaveLength(2);
  });

  it("produces a symmetric positive-definite overlap", () => {
    const ints = computeIntegrals(N2, "sto-3g");
    for (let i = 0; i < ints.n; i++)
      for (let j = 0; j < ints.n; j++) expect(ints.S[i][j]).toBeCloseTo(ints.S[j][i], 13);
    const { values } = eighSymmetric(ints.S);
    expect(values[0]).toBeGreaterThan(0);
  });

  it("honors the 8-fold permutational symmetry of the ERIs", () => {
    const ints = computeIntegrals(N2, "sto-3g");
    const n = ints.n;
    const g = (i: number, j: number, k: number, l: number) => ints.eri[eriIndex(n, i, j, k, l)];
    const picks: [number, number, number, number][] = [
      [0, 1, 2, 3],
      [4, 2, 7, 1],
      [9, 0, 3, 3],
      [5, 6, 8, 2],
    ];
    for (const [i, j, k, l] of picks) {
      const ref = g(i, j, k, l);
      for (const v of [g(j, i, k, l), g(i, j, l, k), g(k, l, i, j), g(l, k, j, i)]) {
        expect(v).toBeCloseTo(ref, 12);
      }
    }
  });

  it("computes the N2 nuclear repulsion", () => {
    const ints = computeIntegrals(N2, "sto-3g");
    expect(ints.enuc).toBeCloseTo((7 * 7) / 2.06, 12);
  });
});

describe("eigensolver", () => {
  it("diagonalizes a known 2x2", () => {
    const { values, vectors } = eighSymmetric([
      [2, 1],
      [1, 2],
    ]);
    expect(values[0]).toBeCloseTo(1, 13);
    expect(values[1]).toBeCloseTo(3, 13);
    expect(Math.abs(vectors[0][0])).toBeCloseTo(Math.SQRT1_2, 12);
  });

  it("solves A v = lambda v on a seeded random symmetric matrix", () => {
    const n = 8;
    let s = 12345;
    const rand = () => ((s = (s * 1103515245 + 12345) % 2147483648), s / 2147483648 - 0.5);
    const A = Array.from({ length: n }, () => new Array(n).fill(0));
    for (let i = 0; i < n; i++)
      for (let j = 0; j <= i; j++) A[i][j] = A[j][i] = rand();
    const { values, vectors } = eighSymmetric(A);
    for (let k = 0; k < n; k++) {
      for (let i = 0; i < n; i++) {
        let av = 0;
        for (let j = 0; j < n; j++) av += A[i][j] * vectors[j][k];
        expect(av).toBeCloseTo(values[k] * vectors[i][k], 10);
      }
    }
    for (let k = 1; k < n; k++) expect(values[k]).toBeGreaterThanOrEqual(values[k - 1]);
  });
});
