// McMurchie-Davidson Gaussian integrals for s/p shells.

import { BASES, NUCLEAR_CHARGE, Shell } from "./basis.js";
import { Matrix, zeros } from "./linalg.js";

export type Vec3 = [number, number, number];
export type Atom = [string, Vec3];

// --- special functions ---

function lnGamma(x: number): number {
  // Lanczos approximation, g=7, double precision.
  const c = [
    0.99999999999980993, 676.5203681218851, -1259.1392167224028, 771.32342877765313,
    -176.61502916214059, 12.507343278686905, -0.13857109526572012, 9.9843695780195716e-6,
    1.5056327351493116e-7,
  ];
  let xx = x - 1;
  let a = c[0];
  const t = xx + 7.5;
  for (let i = 1; i < 9; i++) a += c[i] / (xx + i);
  return 0.5 * Math.log(2 * Math.PI) + (xx + 0.5) * Math.log(t) - t + Math.log(a);
}

// Regularized lower incomplete gamma P(a, x).
function gammaP(a: number, x: number): number {
  if (x <= 0) return 0;
  if (x < a + 1) {
    // series representation
    let term = 1 / a;
    let sum = term;
    let ap = a;
    for (let i = 0; i < 500; i++) {
      ap += 1;
      term *= x / ap;
      sum += term;
      if (Math.abs(term) < Math.abs(sum) * 1e-16) break;
    }
    return sum * Math.exp(-x + a * Math.log(x) - lnGamma(a));
  }
  // continued fraction for Q(a, x), modified Lentz
  const tiny = 1e-300;
  let b = x + 1 - a;
  let c = 1 / tiny;
  let d = 1 / b;
  let h = d;
  for (let i = 1; i < 500; i++) {
    const an = -i * (i - a);
    b += 2;
    d = an * d + b;
    if (Math.abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (Math.abs(c) < tiny) c = tiny;
    d = 1 / d;
    const del = d * c;
    h *= del;
    if (Math.abs(del - 1) < 1e-16) break;
  }
  return 1 - h * Math.exp(-x + a * Math.log(x) - lnGamma(a));
}

export function boys(m: number, T: number): number {
  if (T < 1e-12) return 1 / (2 * m + 1);
  return (0.5 * Math.exp(lnGamma(m + 0.5)) * gammaP(m + 0.5, T)) / Math.pow(T, m + 0.5);
}

// --- Hermite expansion / Coulomb recursions ---

function hermiteE(i: number, j: number, t: number, Qx: number, a: number, b: number): number {
  const p = a + b;
  const q = (a * b) / p;
  if (t < 0 || t > i + j) return 0;
  if (i === 0 && j === 0 && t === 0) return Math.exp(-q * Qx * Qx);
  if (j === 0) {
    return (
      hermiteE(i - 1, j, t - 1, Qx, a, b) / (2 * p) -
      ((q * Qx) / a) * hermiteE(i - 1, j, t, Qx, a, b) +
      (t + 1) * hermiteE(i - 1, j, t + 1, Qx, a, b)
    );
  }
  return (
    hermiteE(i, j - 1, t - 1, Qx, a, b) / (2 * p) +
    ((q * Qx) / b) * hermiteE(i, j - 1, t, Qx, a, b) +
    (t + 1) * hermiteE(i, j - 1, t + 1, Qx, a, b)
  );
}

function hermiteR(t: number, u: number, v: number, n: number, p: number, PC: Vec3): number {
  if (t === 0 && u === 0 && v === 0) {
    const r2 = PC[0] * PC[0] + PC[1] * PC[1] + PC[2] * PC[2];
    return Math.pow(-2 * p, n) * boys(n, p * r2);
  }
  if (t < 0 || u < 0 || v < 0) return 0;
  if (t > 0) {
    return (
      (t - 1) * hermiteR(t - 2, u, v, n + 1, p, PC) + PC[0] * hermiteR(t - 1, u, v, n + 1, p, PC)
    );
  }
  if (u > 0) {
    return (
      (u - 1) * hermiteR(t, u - 2, v, n + 1, p, PC) + PC[1] * hermiteR(t, u - 1, v, n + 1, p, PC)
    );
  }
  return (v - 1) * hermiteR(t, u, v - 2, n + 1, p, PC) + PC[2] * hermiteR(t, u, v - 1, n + 1, p, PC);
}

// --- primitive integrals ---

type Ang = [number, number, number];

function overlapPrim(a: number, la: Ang, A: Vec3, b: number, lb: Ang, B: Vec3): number {
  const p = a + b;
  let out = 1;
  for (let x = 0; x < 3; x++) out *= hermiteE(la[x], lb[x], 0, A[x] - B[x], a, b);
  return out * Math.pow(Math.PI / p, 1.5);
}

function kineticPrim(a: number, la: Ang, A: Vec3, b: number, lb: Ang, B: Vec3): number {
  const lsum = lb[0] + lb[1] + lb[2];
  let term0 = b * (2 * lsum + 3) * overlapPrim(a, la, A, b, lb, B);
  let term1 = 0;
  let term2 = 0;
  for (let x = 0; x < 3; x++) {
    const lp: Ang = [...lb];
    lp[x] += 2;
    term1 += overlapPrim(a, la, A, b, lp, B);
    const lm: Ang = [...lb];
    lm[x] -= 2;
    if (lm[x] >= 0) term2 += lb[x] * (lb[x] - 1) * overlapPrim(a, la, A, b, lm, B);
  }
  return term0 - 2 * b * b * term1 - 0.5 * term2;
}

function nuclearPrim(a: number, la: Ang, A: Vec3, b: number, lb: Ang, B: Vec3, C: Vec3): number {
  const p = a + b;
  const P: Vec3 = [0, 0, 0];
  for (let x = 0; x < 3; x++) P[x] = (a * A[x] + b * B[x]) / p;
  const PC: Vec3 = [P[0] - C[0], P[1] - C[1], P[2] - C[2]];
  let val = 0;
  for (let t = 0; t <= la[0] + lb[0]; t++) {
    for (let u = 0; u <= la[1] + lb[1]; u++) {
      for (let v = 0; v <= la[2] + lb[2]; v++) {
        const c =
          hermiteE(la[0], lb[0], t, A[0] - B[0], a, b) *
          hermiteE(la[1], lb[1], u, A[1] - B[1], a, b) *
          hermiteE(la[2], lb[2], v, A[2] - B[2], a, b);
        if (c !== 0) val += c * hermiteR(t, u, v, 0, p, PC);
      }
    }
  }
  return ((2 * Math.PI) / p) * val;
}

function eriPrim(
  a: number, la: Ang, A: Vec3,
  b: number, lb: Ang, B: Vec3,
  c: number, lc: Ang, C: Vec3,
  d: number, ld: Ang, D: Vec3,
): number {
  const p = a + b;
  const q = c + d;
  const alpha = (p * q) / (p + q);
  const PQ: Vec3 = [0, 0, 0];
  for (let x = 0; x < 3; x++) {
    PQ[x] = (a * A[x] + b * B[x]) / p - (c * C[x] + d * D[x]) / q;
  }
  let val = 0;
  for (let t = 0; t <= la[0] + lb[0]; t++) {
    for (let u = 0; u <= la[1] + lb[1]; u++) {
      for (let v = 0; v <= la[2] + lb[2]; v++) {
        const c1 =
          hermiteE(la[0], lb[0], t, A[0] - B[0], a, b) *
          hermiteE(la[1], lb[1], u, A[1] - B[1], a, b) *
          hermiteE(la[2], lb[2], v, A[2] - B[2], a, b);
        if (c1 === 0) continue;
        for (let tau = 0; tau <= lc[0] + ld[0]; tau++) {
          for (let nu = 0; nu <= lc[1] + ld[1]; nu++) {
            for (let ph = 0; ph <= lc[2] + ld[2]; ph++) {
              const c2 =
                hermiteE(lc[0], ld[0], tau, C[0] - D[0], c, d) *
                hermiteE(lc[1], ld[1], nu, C[1] - D[1], c, d) *
                hermiteE(lc[2], ld[2], ph, C[2] - D[2], c, d);
              if (c2 === 0) continue;
              const sign = (tau + nu + ph) % 2 === 0 ? 1 : -1;
              val += c1 * c2 * sign * hermiteR(t + tau, u + nu, v + ph, 0, alpha, PQ);
            }
          }
        }
      }
    }
  }
  return (val * 2 * Math.pow(Math.PI, 2.5)) / (p * q * Math.sqrt(p + q));
}

// --- contracted basis functions ---

function doubleFactorial(n: number): number {
  let out = 1;
  for (let k = n; k > 1; k -= 2) out *= k;
  return out;
}

function primNorm(a: number, l: Ang): number {
  const lsum = l[0] + l[1] + l[2];
  const num = Math.pow((2 * a) / Math.PI, 0.75) * Math.pow(4 * a, lsum / 2);
  const den = Math.sqrt(
    doubleFactorial(2 * l[0] - 1) * doubleFactorial(2 * l[1] - 1) * doubleFactorial(2 * l[2] - 1),
  );
  return num / den;
}

export interface BasisFn {
  center: Vec3;
  l: Ang;
  exps: number[];
  coefs: number[];
}

function makeBasisFn(center: Vec3, l: Ang, exps: number[], coefs: number[]): BasisFn {
  const raw = exps.map((a, i) => coefs[i] * primNorm(a, l));
  let s = 0;
  for (let i = 0; i < exps.length; i++) {
    for (let j = 0; j < exps.length; j++) {
      s += raw[i] * raw[j] * overlapPrim(exps[i], l, center, exps[j], l, center);
    }
  }
  const norm = 1 / Math.sqrt(s);
  return { center, l, exps: [...exps], coefs: raw.map((c) => c * norm) };
}

export function buildBasis(geom: Atom[], basisName: string): BasisFn[] {
  const tab = BASES[basisName];
  if (!tab) throw new Error(`unknown basis '${basisName}'`);
  const fns: BasisFn[] = [];
  for (const [sym, xyz] of geom) {
    const shells = tab[sym];
    if (!shells) throw new Error(`basis '${basisName}' has no entry for element '${sym}'`);
    for (const shell of shells) {
      if (shell.kind === "S") {
        fns.push(makeBasisFn(xyz, [0, 0, 0], shell.exps, shell.coefs as number[]));
      } else {
        const [cs, cp] = shell.coefs as [number[], number[]];
        fns.push(makeBasisFn(xyz, [0, 0, 0], shell.exps, cs));
        for (let ax = 0; ax < 3; ax++) {
          const l: Ang = [0, 0, 0];
          l[ax] = 1;
          fns.push(makeBasisFn(xyz, l, shell.exps, cp));
        }
      }
    }
  }
  return fns;
}

// --- contracted integrals over the whole molecule ---

type Prim1 = (a: number, la: Ang, A: Vec3, b: number, lb: Ang, B: Vec3) => number;

function contract1(fa: BasisFn, fb: BasisFn, prim: Prim1): number {
  let out = 0;
  for (let i = 0; i < fa.exps.length; i++) {
    for (let j = 0; j < fb.exps.length; j++) {
      out += fa.coefs[i] * fb.coefs[j] * prim(fa.exps[i], fa.l, fa.center, fb.exps[j], fb.l, fb.center);
    }
  }
  return out;
}

export interface AoIntegrals {
  n: number;
  S: Matrix;
  hcore: Matrix;
  eri: Float64Array; // chemist's notation (ij|kl), index i*n^3 + j*n^2 + k*n + l
  enuc: number;
}

export function eriIndex(n: number, i: number, j: number, k: number, l: number): number {
  return ((i * n + j) * n + k) * n + l;
}

export function computeIntegrals(geom: Atom[], basisName: string): AoIntegrals {
  const fns = buildBasis(geom, basisName);
  const n = fns.length;
  const S = zeros(n, n);
  const hcore = zeros(n, n);
  const charges: [number, Vec3][] = geom.map(([sym, xyz]) => {
    const z = NUCLEAR_CHARGE[sym];
    if (z === undefined) throw new Error(`unknown element '${sym}'`);
    return [z, xyz];
  });

  for (let i = 0; i < n; i++) {
    for (let j = 0; j <= i; j++) {
      const s = contract1(fns[i], fns[j], overlapPrim);
      const t = contract1(fns[i], fns[j], kineticPrim);
      let v = 0;
      for (const [q, C] of charges) {
        v -= q * contract1(fns[i], fns[j], (a, la, A, b, lb, B) => nuclearPrim(a, la, A, b, lb, B, C));
      }
      S[i][j] = S[j][i] = s;
      hcore[i][j] = hcore[j][i] = t + v;
    }
  }

  const eri = new Float64Array(n * n * n * n);
  for (let i = 0; i < n; i++) {
    for (let j = 0; j <= i; j++) {
      const ij = (i * (i + 1)) / 2 + j;
      for (let k = 0; k < n; k++) {
        for (let l = 0; l <= k; l++) {
          const kl = (k * (k + 1)) / 2 + l;
          if (ij < kl) continue;
          let val = 0;
          const fi = fns[i], fj = fns[j], fk = fns[k], fl = fns[l];
          for (let pi = 0; pi < fi.exps.length; pi++)
            for (let pj = 0; pj < fj.exps.length; pj++)
              for (let pk = 0; pk < fk.exps.length; pk++)
                for (let pl = 0; pl < fl.exps.length; pl++)
                  val +=
                    fi.coefs[pi] * fj.coefs[pj] * fk.coefs[pk] * fl.coefs[pl] *
                    eriPrim(
                      fi.exps[pi], fi.l, fi.center,
                      fj.exps[pj], fj.l, fj.center,
                      fk.exps[pk], fk.l, fk.center,
                      fl.exps[pl], fl.l, fl.center,
                    );
          for (const [p, q] of [[i, j], [j, i]]) {
            for (const [r, s] of [[k, l], [l, k]]) {
              eri[eriIndex(n, p, q, r, s)] = val;
              eri[eriIndex(n, r, s, p, q)] = val;
            }
          }
        }
      }
    }
  }

  let enuc = 0;
  for (let a = 0; a < charges.length; a++) {
    for (let b = 0; b < a; b++) {
      const [qa, Ca] = charges[a];
      const [qb, Cb] = charges[b];
      const dx = Ca[0] - Cb[0], dy = Ca[1] - Cb[1], dz = Ca[2] - Cb[2];
      enuc += (qa * qb) / Math.sqrt(dx * dx + dy * dy + dz * dz);
    }
  }
  return { n, S, hcore, eri, enuc };
}
