/** Series extraction: grouping, error bars, envelopes and fit overlays. */

import type { SweepRow } from "./csv.js";

export interface Point {
  p: number;
  pL: number;
  /** one-sigma absolute error, pL * stderr_rel */
  sigma: number;
}

export interface Series {
  label: string;
  points: Point[];
}

function toPoint(r: SweepRow): Point {
  const sigma = Number.isFinite(r.stderrRel) ? r.pL * r.stderrRel : 0;
  return { p: r.p, pL: r.pL, sigma };
}

function sortedByP(points: Point[]): Point[] {
  return [...points].sort((a, b) => a.p - b.p);
}

/** One series per code, points ordered by p. */
export function byCode(rows: SweepRow[], codes?: string[]): Series[] {
  const wanted = codes ?? [...new Set(rows.map((r) => r.code))].sort();
  return wanted.map((code) => ({
    label: code,
    points: sortedByP(rows.filter((r) => r.code === code).map(toPoint)),
  }));
}

/** One series per ancilla count for a single code, points ordered by p. */
export function byAncillas(rows: SweepRow[], code: string): Series[] {
  const mine = rows.filter((r) => r.code === code);
  const nas = [...new Set(mine.map((r) => r.nA))].sort((a, b) => a - b);
  return nas.map((nA) => ({
    label: `n_a=${nA}`,
    points: sortedByP(mine.filter((r) => r.nA === nA).map(toPoint)),
  }));
}

/**
 * Pointwise minimum across a family of codes: for each p value appearing in
 * the family, take the smallest p_l (the error bar of the winner is kept).
 */
export function envelope(rows: SweepRow[], family: string): Series {
  const fam = rows.filter((r) => r.family === family);
  const byP = new Map<number, SweepRow>();
  for (const r of fam) {
    const best = byP.get(r.p);
    if (best === undefined || r.pL < best.pL) {
      byP.set(r.p, r);
    }
  }
  const points = sortedByP([...byP.values()].map(toPoint));
  return { label: `min over ${family} codes`, points };
}

/** (code, p) pairs requested but absent from the rows. */
export function missingPairs(rows: SweepRow[], codes: string[], ps: number[]): string[] {
  const have = new Set(rows.map((r) => `${r.code}@${r.p}`));
  const missing: string[] = [];
  for (const code of codes) {
    for (const p of ps) {
      if (!have.has(`${code}@${p}`)) {
        missing.push(`(${code}, p=${p})`);
      }
    }
  }
  return missing;
}

/** p_L = c (p / p_th)^((d+1)/2) evaluated on a p grid. */
export function surfaceThresholdOverlay(
  c: number, pTh: number, d: number, ps: number[], label?: string): Series {
  const points = ps.map((p) => ({
    p,
    pL: c * Math.pow(p / pTh, (d + 1) / 2),
    sigma: 0,
  }));
  return { label: label ?? `fit d=${d}`, points: sortedByP(points) };
}

/** p_L = p^((d+1)/2) exp(c0 + c1 p + c2 p^2) evaluated on a p grid. */
export function polyExpOverlay(
  c0: number, c1: number, c2: number, d: number, ps: number[], label?: string): Series {
  const points = ps.map((p) => ({
    p,
    pL: Math.pow(p, (d + 1) / 2) * Math.exp(c0 + c1 * p + c2 * p * p),
    sigma: 0,
  }));
  return { label: label ?? `fit d=${d}`, points: sortedByP(points) };
}

/** Geometric p grid covering [min, max] with `steps` points, deterministic. */
export function logGrid(min: number, max: number, steps: number): number[] {
  const out: number[] = [];
  const ratio = Math.log(max / min);
  for (let i = 0; i < steps; i++) {
    out.push(min * Math.exp((ratio * i) / (steps - 1)));
  }
  return out;
}
