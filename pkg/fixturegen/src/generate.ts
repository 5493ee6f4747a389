// Manifest-driven fixture generation: geometry construction, validation, and
// the FCIDUMP + sidecar emission for one FixtureSpec.

import * as fs from "node:fs";
import * as path from "node:path";
import { basisWhitelist } from "./basis.js";
import { fciTwoOrbitalSinglet } from "./fci.js";
import { fcidumpText, writeSidecar } from "./fcidump.js";
import { Atom, computeIntegrals } from "./integrals.js";
import { zeros } from "./linalg.js";
import { rhf, sadGuess, transformToMo } from "./scf.js";

export const GENERATOR = { name: "fixturegen", version: "0.1.0" };

export type Geometry =
  | { kind: "diatomic"; atoms: [string, string]; bond_bohr: number }
  | { kind: "chain"; atom: string; count: number; spacing_bohr: number }
  | { kind: "bent"; center: string; outer: string; bond_bohr: number; angle_deg: number };

export interface FixtureSpec {
  molecule: string;
  basis: string;
  orbital_type: "canonical" | "natural";
  nelec: number;
  label: string;
  geometry: Geometry;
}

export interface Manifest {
  fixtures: FixtureSpec[];
}

export function validateSpec(spec: FixtureSpec): void {
  if (!basisWhitelist().includes(spec.basis)) {
    throw new Error(`basis '${spec.basis}' is not whitelisted (${basisWhitelist().join(", ")})`);
  }
  if (spec.orbital_type !== "canonical") {
    throw new Error(`orbital_type '${spec.orbital_type}' is not supported; only 'canonical'`);
  }
  if (!Number.isInteger(spec.nelec) || spec.nelec <= 0) {
    throw new Error(`nelec must be a positive integer, got ${spec.nelec}`);
  }
  const g = spec.geometry;
  const params: [string, number][] =
    g.kind === "diatomic"
      ? [["bond_bohr", g.bond_bohr]]
      : g.kind === "chain"
        ? [["count", g.count], ["spacing_bohr", g.spacing_bohr]]
        : [["bond_bohr", g.bond_bohr], ["angle_deg", g.angle_deg]];
  for (const [name, v] of params) {
    if (!(v > 0)) throw new Error(`geometry parameter ${name} must be positive, got ${v}`);
  }
}

export function buildGeometry(g: Geometry): { atoms: Atom[]; meta: Record<string, number> } {
  switch (g.kind) {
    case "diatomic":
      return {
        atoms: [
          [g.atoms[0], [0, 0, 0]],
          [g.atoms[1], [0, 0, g.bond_bohr]],
        ],
        meta: { bond_length_bohr: g.bond_bohr },
      };
    case "chain":
      return {
        atoms: Array.from({ length: g.count }, (_, i): Atom => [g.atom, [0, 0, i * g.spacing_bohr]]),
        meta: { spacing_bohr: g.spacing_bohr },
      };
    case "bent": {
      const half = (g.angle_deg * Math.PI) / 180 / 2;
      const x = g.bond_bohr * Math.sin(half);
      const z = g.bond_bohr * Math.cos(half);
      return {
        atoms: [
          [g.center, [0, 0, 0]],
          [g.outer, [x, 0, z]],
          [g.outer, [-x, 0, z]],
        ],
        meta: { oh_bohr: g.bond_bohr, angle_deg: g.angle_deg },
      };
    }
  }
}

export interface GenerateResult {
  fcidumpPath: string;
  sidecarPath: string;
  eHf: number;
  eFci?: number;
  norb: number;
}

export function generate(spec: FixtureSpec, outRoot: string): GenerateResult {
  validateSpec(spec);
  const { atoms, meta } = buildGeometry(spec.geometry);
  const dir = path.join(outRoot, spec.molecule);
  fs.mkdirSync(dir, { recursive: true });
  const stem = `${spec.molecule}_${spec.basis}_${spec.label}`;
  const fcidumpPath = path.join(dir, `${stem}.fcidump`);
  const sidecarPath = path.join(dir, `${stem}.json`);

  try {
    const ints = computeIntegrals(atoms, spec.basis);
    // Stretched geometries have several RHF stationary points; run both
    // deterministic guesses (atomic superposition and bare core) and keep the
    // lower converged solution.
    const guesses = [sadGuess(atoms, spec.basis, ints.n), zeros(ints.n, ints.n)];
    const scf = guesses
      .map((g) => rhf(ints, spec.nelec, g))
      .reduce((a, b) => (b.energy < a.energy ? b : a));
    const mo = transformToMo(ints, scf.mo);
    const norb = mo.n;

    fs.writeFileSync(fcidumpPath, fcidumpText(norb, spec.nelec, 0, mo.h1, mo.eri, ints.enuc));

    const sidecar: Record<string, unknown> = {
      molecule: spec.molecule,
      basis: spec.basis,
      orbital_type: spec.orbital_type,
      geometry: {
        atoms: atoms.map(([sym, xyz]) => [sym, xyz]),
        units: "bohr",
        ...meta,
      },
      norb,
      nelec: spec.nelec,
      e_hf: scf.energy,
      generator: GENERATOR,
    };
    let eFci: number | undefined;
    if (norb === 2 && spec.nelec === 2) {
      eFci = fciTwoOrbitalSinglet(mo.h1, mo.eri, ints.enuc);
      sidecar.e_fci = eFci;
    }
    writeSidecar(sidecarPath, sidecar);
    return { fcidumpPath, sidecarPath, eHf: scf.energy, eFci, norb };
  } catch (err) {
    for (const p of [fcidumpPath, sidecarPath]) {
      if (fs.existsSync(p)) fs.rmSync(p);
    }
    throw err;
  }
}

export function loadManifest(manifestPath: string): Manifest {
  const raw = JSON.parse(fs.readFileSync(manifestPath, "utf-8")) as Manifest;
  if (!raw || !Array.isArray(raw.fixtures)) {
    throw new Error(`manifest ${manifestPath} must contain a 'fixtures' array`);
  }
  return raw;
}
