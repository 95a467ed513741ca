/**
 * Logical-error-rate comparison figure (per-code curves on log-log axes,
 * optional family envelope and fitted-curve overlays).
 *
 *   node dist/src/plot_ler.js results.csv out.svg \
 *       [--codes a,b,c] [--p 5e-4,1e-3] [--envelope bb6] \
 *       [--fit-surface c,p_th,d] [--fit-poly c0,c1,c2,d]
 */

import { readFileSync, writeFileSync } from "node:fs";

import { parseSweepCsv } from "./csv.js";
import {
  byCode, envelope, logGrid, missingPairs, polyExpOverlay,
  surfaceThresholdOverlay, Series,
} from "./series.js";
import { renderLogLogChart } from "./svg.js";

export function buildLerChart(csvText: string, args: Map<string, string>): string {
  const rows = parseSweepCsv(csvText);
  const codes = args.get("codes")?.split(",");
  const ps = args.get("p")?.split(",").map(Number);
  if (codes !== undefined && ps !== undefined) {
    const missing = missingPairs(rows, codes, ps);
    if (missing.length > 0) {
      throw new Error(`missing series points:\n  ${missing.join("\n  ")}`);
    }
  }
  const series: Series[] = byCode(rows, codes);
  const envFamily = args.get("envelope");
  if (envFamily !== undefined) {
    series.push(envelope(rows, envFamily));
  }
  const overlays: Series[] = [];
  const grid = logGrid(
    Math.min(...rows.map((r) => r.p)), Math.max(...rows.map((r) => r.p)), 40);
  const fitSurface = args.get("fit-surface");
  if (fitSurface !== undefined) {
    const [c, pTh, d] = fitSurface.split(",").map(Number);
    overlays.push(surfaceThresholdOverlay(c, pTh, d, grid));
  }
  const fitPoly = args.get("fit-poly");
  if (fitPoly !== undefined) {
    const [c0, c1, c2, d] = fitPoly.split(",").map(Number);
    overlays.push(polyExpOverlay(c0, c1, c2, d, grid));
  }
  return renderLogLogChart(series, {
    title: "Logical error rate per round per logical qubit",
    xLabel: "physical error rate p",
    yLabel: "p_L",
    overlays,
  });
}

export function parseArgs(argv: string[]): { csv: string; out: string; flags: Map<string, string> } {
  const positional: string[] = [];
  const flags = new Map<string, string>();
  for (let i = 0; i < argv.length; i++) {
    const a = argv[i];
    if (a.startsWith("--")) {
      const value = argv[++i];
      if (value === undefined) {
        throw new Error(`flag ${a} needs a value`);
      }
      flags.set(a.slice(2), value);
    } else {
      positional.push(a);
    }
  }
  if (positional.length !== 2) {
    throw new Error("usage: plot_ler <results.csv> <out.svg> [flags]");
  }
  return { csv: positional[0], out: positional[1], flags };
}

function main(): void {
  const { csv, out, flags } = parseArgs(process.argv.slice(2));
  const svg = buildLerChart(readFileSync(csv, "utf8"), flags);
  writeFileSync(out, svg);
  console.log(`wrote ${out}`);
}

if (process.argv[1]?.endsWith("plot_ler.js")) {
  main();
}
