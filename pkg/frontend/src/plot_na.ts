/**
 * Ancilla-count sweep panel: one p_L(p) curve per n_a for a single code.
 *
 *   node dist/src/plot_na.js sweep.csv out.svg --code bb6-30-4-4
 */

import { readFileSync, writeFileSync } from "node:fs";

import { parseSweepCsv } from "./csv.js";
import { byAncillas } from "./series.js";
import { renderLogLogChart } from "./svg.js";
import { parseArgs } from "./plot_ler.js";

export function buildNaChart(csvText: string, code: string): string {
  const rows = parseSweepCsv(csvText);
  const series = byAncillas(rows, code);
  if (series.length === 0) {
    const codes = [...new Set(rows.map((r) => r.code))].sort();
    throw new Error(`no rows for code ${code}; CSV has: ${codes.join(", ")}`);
  }
  return renderLogLogChart(series, {
    title: `${code}: syndrome extraction ancilla sweep`,
    xLabel: "physical error rate p",
    yLabel: "p_L",
  });
}

function main(): void {
  const { csv, out, flags } = parseArgs(process.argv.slice(2));
  const code = flags.get("code");
  if (code === undefined) {
    throw new Error("--code is required");
  }
  const svg = buildNaChart(readFileSync(csv, "utf8"), code);
  writeFileSync(out, svg);
  console.log(`wrote ${out}`);
}

if (process.argv[1]?.endsWith("plot_na.js")) {
  main();
}
