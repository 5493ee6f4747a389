// Dense symmetric linear algebra for small (<= ~20x20) matrices.

export type Matrix = number[][];

export function zeros(n: number, m: number): Matrix {
  return Array.from({ length: n }, () => new Array<number>(m).fill(0));
}

export function matmul(a: Matrix, b: Matrix): Matrix {
  const n = a.length;
  const k = b.length;
  const m = b[0].length;
  const out = zeros(n, m);
  for (let i = 0; i < n; i++) {
    for (let p = 0; p < k; p++) {
      const aip = a[i][p];
      if (aip === 0) continue;
      for (let j = 0; j < m; j++) out[i][j] += aip * b[p][j];
    }
  }
  return out;
}

export function transpose(a: Matrix): Matrix {
  const n = a.length;
  const m = a[0].length;
  const out = zeros(m, n);
  for (let i = 0; i < n; i++) for (let j = 0; j < m; j++) out[j][i] = a[i][j];
  return out;
}

export interface EigResult {
  values: number[]; // ascending
  vectors: Matrix; // columns are eigenvectors
}

// Cyclic Jacobi rotations; plenty accurate and fast at these sizes.
export function eighSymmetric(mat: Matrix, tol = 1e-14, maxSweeps = 100): EigResult {
  const n = mat.length;
  const a = mat.map((row) => row.slice());
  const v = zeros(n, n);
  for (let i = 0; i < n; i++) v[i][i] = 1;

  for (let sweep = 0; sweep < maxSweeps; sweep++) {
    let off = 0;
    for (let p = 0; p < n; p++)
      for (let q = p + 1; q < n; q++) off += a[p][q] * a[p][q];
    if (Math.sqrt(off) < tol) break;
    for (let p = 0; p < n; p++) {
      for (let q = p + 1; q < n; q++) {
        if (a[p][q] === 0) continue;
        const theta = (a[q][q] - a[p][p]) / (2 * a[p][q]);
        const t = Math.sign(theta || 1) / (Math.abs(theta) + Math.sqrt(theta * theta + 1));
        const c = 1 / Math.sqrt(t * t + 1);
        const s = t * c;
        for (let k = 0; k < n; k++) {
          const akp = a[k][p];
          const akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (let k = 0; k < n; k++) {
          const apk = a[p][k];
          const aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (let k = 0; k < n; k++) {
          const vkp = v[k][p];
          const vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }

  const order = Array.from({ length: n }, (_, i) => i).sort((i, j) => a[i][i] - a[j][j]);
  const values = order.map((i) => a[i][i]);
  const vectors = zeros(n, n);
  for (let j = 0; j < n; j++) {
    const col = order[j];
    // fix the sign so results are deterministic across runs
    let piv = 0;
    for (let i = 1; i < n; i++) if (Math.abs(v[i][col]) > Math.abs(v[piv][col])) piv = i;
    const sgn = v[piv][col] < 0 ? -1 : 1;
    for (let i = 0; i < n; i++) vectors[i][j] = sgn * v[i][col];
  }
  return { values, vectors };
}

// X = U diag(w^-1/2) U^T, the symmetric inverse square root.
export function invSqrtSymmetric(s: Matrix): Matrix {
  const { values, vectors } = eighSymmetric(s);
  const n = s.length;
  const out = zeros(n, n);
  for (let k = 0; k < n; k++) {
    if (values[k] <= 0) throw new Error(`overlap matrix not positive definite (eig ${values[k]})`);
    const w = 1 / Math.sqrt(values[k]);
    for (let i = 0; i < n; i++)
      for (let j = 0; j < n; j++) out[i][j] += w * vectors[i][k] * vectors[j][k];
  }
  return out;
}
