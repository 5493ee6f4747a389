// Restricted Hartree-Fock with symmetric orthogonalization, plus the AO->MO transform.

import { ATOMIC_OCCUPATIONS } from "./basis.js";
import { Atom, AoIntegrals, eriIndex } from "./integrals.js";
import { Matrix, eighSymmetric, invSqrtSymmetric, matmul, transpose, zeros } from "./linalg.js";

// Superposition-of-atomic-densities guess: diagonal density from spherically
// averaged atomic occupations. Symmetric per atom, so a symmetry-degenerate
// orbital shell is never split by the arbitrary gauge of the eigensolver.
export function sadGuess(geom: Atom[], basisName: string, n: number): Matrix {
  const table = ATOMIC_OCCUPATIONS[basisName];
  const D = zeros(n, n);
  let i = 0;
  for (const [sym] of geom) {
    const occ = table?.[sym];
    if (!occ) throw new Error(`no atomic occupations for '${sym}' in basis '${basisName}'`);
    for (const o of occ) D[i][i] = o, i++;
  }
  if (i !== n) throw new Error(`occupation table covers ${i} of ${n} basis functions`);
  return D;
}

export interface RhfResult {
  energy: number;
  mo: Matrix; // columns are MOs
  orbitalEnergies: number[];
  iterations: number;
}

function fockFromDensity(ints: AoIntegrals, D: Matrix): Matrix {
  const { n, hcore, eri } = ints;
  const F = zeros(n, n);
  for (let p = 0; p < n; p++) {
    for (let q = 0; q < n; q++) {
      let f = hcore[p][q];
      for (let r = 0; r < n; r++) {
        for (let s = 0; s < n; s++) {
          f += D[r][s] * (2 * eri[eriIndex(n, p, q, r, s)] - eri[eriIndex(n, p, r, q, s)]);
        }
      }
      F[p][q] = f;
    }
  }
  return F;
}

export function rhf(
  ints: AoIntegrals,
  nelec: number,
  guess: Matrix,
  maxIter = 200,
  tol = 1e-12,
): RhfResult {
  const { n, S, hcore, enuc } = ints;
  if (nelec % 2 !== 0) throw new Error("RHF needs an even electron count");
  const nocc = nelec / 2;
  const X = invSqrtSymmetric(S);
  const Xt = transpose(X);

  let F = fockFromDensity(ints, guess);
  let C: Matrix = zeros(n, n);
  let eps: number[] = new Array(n).fill(0);
  let eOld = 0;
  let energy = 0;
  let it = 0;
  for (it = 0; it < maxIter; it++) {
    const Fp = matmul(Xt, matmul(F, X));
    const eig = eighSymmetric(Fp);
    eps = eig.values;
    C = matmul(X, eig.vectors);

    const D = zeros(n, n);
    for (let p = 0; p < n; p++)
      for (let q = 0; q < n; q++) {
        let d = 0;
        for (let o = 0; o < nocc; o++) d += C[p][o] * C[q][o];
        D[p][q] = d;
      }

    F = fockFromDensity(ints, D);

    energy = enuc;
    for (let p = 0; p < n; p++)
      for (let q = 0; q < n; q++) energy += D[p][q] * (hcore[p][q] + F[p][q]);
    if (Math.abs(energy - eOld) < tol && it > 1) break;
    eOld = energy;
  }
  return { energy, mo: C, orbitalEnergies: eps, iterations: it + 1 };
}

export interface MoIntegrals {
  n: number;
  h1: Matrix;
  eri: Float64Array; // chemist's notation in the MO basis
}

export function transformToMo(ints: AoIntegrals, C: Matrix): MoIntegrals {
  const { n, hcore, eri } = ints;
  const h1 = matmul(transpose(C), matmul(hcore, C));

  // four quarter-transforms, O(n^5)
  let cur = eri;
  for (let stage = 0; stage < 4; stage++) {
    const next = new Float64Array(n * n * n * n);
    // transform the leading index, then rotate axes so each stage hits a new one
    for (let i = 0; i < n; i++) {
      for (let rest = 0; rest < n * n * n; rest++) {
        const v = cur[i * n * n * n + rest];
        if (v === 0) continue;
        for (let p = 0; p < n; p++) {
          // rotate: out[jkl, p] so after 4 stages the order is restored
          next[rest * n + p] += C[i][p] * v;
        }
      }
    }
    cur = next;
  }
  return { n, h1, eri: cur };
}
