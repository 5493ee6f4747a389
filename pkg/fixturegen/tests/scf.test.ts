import { describe, it, expect } from "vitest";
import { fciTwoOrbitalSinglet } from "../src/fci.js";
import { Atom, computeIntegrals, eriIndex } from "../src/integrals.js";
import { rhf, sadGuess, transformToMo } from "../src/scf.js";

const H2: Atom[] = [
  ["H", [0, 0, 0]],
  ["H", [0, 0, 1.4]],
];

describe("restricted Hartree-Fock", () => {
  it("reproduces the H2/STO-3G reference energy", () => {
    const ints = computeIntegrals(H2, "sto-3g");
    const scf = rhf(ints, 2, sadGuess(H2, "sto-3g", ints.n));
    expect(scf.energy).toBeCloseTo(-1.1167143250625697, 9);
  });

  it("produces orthonormal MOs (C^T S C = I)", () => {
    const ints = computeIntegrals(H2, "sto-3g");
    const { mo } = rhf(ints, 2, sadGuess(H2, "sto-3g", ints.n));
    for (let p = 0; p < ints.n; p++) {
      for (let q = 0; q < ints.n; q++) {
        let v = 0;
        for (let i = 0; i < ints.n; i++)
          for (let j = 0; j < ints.n; j++) v += mo[i][p] * ints.S[i][j] * mo[j][q];
        expect(v).toBeCloseTo(p === q ? 1 : 0, 11);
      }
    }
  });

  it("gives a lower energy in 6-31G than STO-3G for H2", () => {
    const small = computeIntegrals(H2, "sto-3g");
    const big = computeIntegrals(H2, "6-31g");
    const eSmall = rhf(small, 2, sadGuess(H2, "sto-3g", small.n)).energy;
    const eBig = rhf(big, 2, sadGuess(H2, "6-31g", big.n)).energy;
    expect(eBig).toBeLessThan(eSmall);
  });
});

describe("MO transformation", () => {
  it("preserves ERI permutational symmetry and the HF energy expression", () => {
    const ints = computeIntegrals(H2, "sto-3g");
    const scf = rhf(ints, 2, sadGuess(H2, "sto-3g", ints.n));
    const mo = transformToMo(ints, scf.mo);
    const n = mo.n;
    const g = (i: number, j: number, k: number, l: number) => mo.eri[eriIndex(n, i, j, k, l)];
    expect(g(0, 1, 0, 1)).toBeCloseTo(g(1, 0, 1, 0), 12);
    expect(g(0, 0, 1, 1)).toBeCloseTo(g(1, 1, 0, 0), 12);
    // closed-shell HF energy from MO integrals: 2 h_ii + (ii|jj)*2 - (ij|ji)
    const eElec = 2 * mo.h1[0][0] + g(0, 0, 0, 0);
    expect(eElec + ints.enuc).toBeCloseTo(scf.energy, 10);
  });
});

describe("two-electron FCI reference", () => {
  it("lies below HF and reproduces the H2 benchmark", () => {
    const ints = computeIntegrals(H2, "sto-3g");
    const scf = rhf(ints, 2, sadGuess(H2, "sto-3g", ints.n));
    const mo = transformToMo(ints, scf.mo);
    const eFci = fciTwoOrbitalSinglet(mo.h1, mo.eri, ints.enuc);
    expect(eFci).toBeLessThan(scf.energy);
    expect(eFci).toBeCloseTo(-1.1372759436170647, 9);
  });
});
