// Contracted Gaussian basis data (EMSL exchange tabulations).

export type ShellKind = "S" | "SP";

export interface Shell {
  kind: ShellKind;
  exps: number[];
  // S: one coefficient list; SP: [s coefficients, p coefficients]
  coefs: number[] | [number[], number[]];
}

const S_CONTR = [0.15432897, 0.53532814, 0.44463454];
const SP_S = [-0.09996723, 0.39951283, 0.70011547];
const SP_P = [0.15591627, 0.60768372, 0.39195739];

const STO3G: Record<string, Shell[]> = {
  H: [{ kind: "S", exps: [3.42525091, 0.62391373, 0.1688554], coefs: S_CONTR }],
  Li: [
    { kind: "S", exps: [16.119575, 2.9362007, 0.7946505], coefs: S_CONTR },
    { kind: "SP", exps: [0.6362897, 0.1478601, 0.0480887], coefs: [SP_S, SP_P] },
  ],
  N: [
    { kind: "S", exps: [99.106169, 18.052312, 4.8856602], coefs: S_CONTR },
    { kind: "SP", exps: [3.7804559, 0.8784966, 0.2857144], coefs: [SP_S, SP_P] },
  ],
  O: [
    { kind: "S", exps: [130.70932, 23.808861, 6.4436083], coefs: S_CONTR },
    { kind: "SP", exps: [5.0331513, 1.1695961, 0.380389], coefs: [SP_S, SP_P] },
  ],
};

const G631: Record<string, Shell[]> = {
  H: [
    {
      kind: "S",
      exps: [18.731137, 2.8253937, 0.6401217],
      coefs: [0.0334946, 0.23472695, 0.81375733],
    },
    { kind: "S", exps: [0.1612778], coefs: [1.0] },
  ],
};

export const BASES: Record<string, Record<string, Shell[]>> = {
  "sto-3g": STO3G,
  "6-31g": G631,
};

export const NUCLEAR_CHARGE: Record<string, number> = { H: 1, Li: 3, N: 7, O: 8 };

export function basisWhitelist(): string[] {
  return Object.keys(BASES);
}

// Spherically averaged atomic RHF occupations (density-matrix diagonal,
// trace = electrons/2), aligned with the basis-function emission order.
// Used for the superposition-of-atomic-densities SCF guess, which keeps the
// molecular point-group symmetry intact.
export const ATOMIC_OCCUPATIONS: Record<string, Record<string, number[]>> = {
  "sto-3g": {
    H: [0.5],
    Li: [1, 0.5, 0, 0, 0],
    N: [1, 1, 0.5, 0.5, 0.5],
    O: [1, 1, 2 / 3, 2 / 3, 2 / 3],
  },
  "6-31g": {
    H: [0.5, 0],
  },
};
