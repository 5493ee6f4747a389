// Exact ground state for two electrons in two orbitals: dense diagonalization
// over the four (1 alpha, 1 beta) determinants. Used for H2 sidecar references.

import { eriIndex } from "./integrals.js";
import { Matrix, eighSymmetric, zeros } from "./linalg.js";

export function fciTwoOrbitalSinglet(h1: Matrix, eriMo: Float64Array, ecore: number): number {
  const n = 2;
  const dets: [number, number][] = [
    [0, 0],
    [0, 1],
    [1, 0],
    [1, 1],
  ]; // (alpha orbital, beta orbital)
  const g = (p: number, q: number, r: number, s: number) => eriMo[eriIndex(n, p, q, r, s)];
  const H = zeros(4, 4);
  for (let I = 0; I < 4; I++) {
    for (let J = 0; J < 4; J++) {
      const [pa, pb] = dets[I];
      const [qa, qb] = dets[J];
      if (pa === qa && pb === qb) {
        H[I][J] = h1[pa][pa] + h1[pb][pb] + g(pa, pa, pb, pb);
      } else if (pa === qa) {
        H[I][J] = h1[pb][qb] + g(pb, qb, pa, pa);
      } else if (pb === qb) {
        H[I][J] = h1[pa][qa] + g(pa, qa, pb, pb);
      } else {
        H[I][J] = g(pa, qa, pb, qb);
      }
    }
  }
  return eighSymmetric(H).values[0] + ecore;
}
