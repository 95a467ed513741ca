import assert from "node:assert/strict";
import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import test from "node:test";
import { fileURLToPath } from "node:url";

import { parseSweepCsv } from "../src/csv.js";
import {
  byAncillas, byCode, envelope, logGrid, missingPairs, polyExpOverlay,
  surfaceThresholdOverlay,
} from "../src/series.js";

const root = join(dirname(fileURLToPath(import.meta.url)), "..", "..");
const sample = readFileSync(join(root, "data", "sample.csv"), "utf8");
const sampleNa = readFileSync(join(root, "data", "sample_na.csv"), "utf8");

test("byCode groups and orders by p", () => {
  const rows = parseSweepCsv(sample);
  const series = byCode(rows, ["bb5-48-4-7"]);
  assert.equal(series.length, 1);
  const ps = series[0].points.map((q) => q.p);
  assert.deepEqual(ps, [...ps].sort((a, b) => a - b));
  assert.equal(series[0].points.length, 3);
});

test("envelope equals the pointwise minimum of the bb6 series", () => {
  const rows = parseSweepCsv(sample);
  const env = envelope(rows, "bb6");
  const bb6 = rows.filter((r) => r.family === "bb6");
  const ps = [...new Set(bb6.map((r) => r.p))].sort((a, b) => a - b);
  assert.equal(env.points.length, ps.length);
  for (const [i, p] of ps.entries()) {
    const min = Math.min(...bb6.filter((r) => r.p === p).map((r) => r.pL));
    assert.equal(env.points[i].p, p);
    assert.equal(env.points[i].pL, min); // exact equality on the sample CSV
  }
});

test("byAncillas splits the sweep panel into one series per n_a", () => {
  const rows = parseSweepCsv(sampleNa);
  const series = byAncillas(rows, "bb6-30-4-4");
  assert.deepEqual(series.map((s) => s.label),
    ["n_a=1", "n_a=2", "n_a=3", "n_a=4", "n_a=5", "n_a=10", "n_a=20"]);
  for (const s of series) {
    assert.equal(s.points.length, 3);
  }
  // monotone: more ancillas never hurts in the fixture
  for (let i = 1; i < series.length; i++) {
    for (let j = 0; j < 3; j++) {
      assert.ok(series[i].points[j].pL <= series[i - 1].points[j].pL);
    }
  }
});

test("error bars come from stderr_rel", () => {
  const rows = parseSweepCsv(sample);
  const s = byCode(rows, ["surface-3"])[0];
  for (const q of s.points) {
    assert.ok(Math.abs(q.sigma - q.pL * 0.06) < 1e-15);
  }
});

test("missingPairs lists absent (code, p) combinations", () => {
  const rows = parseSweepCsv(sample);
  const missing = missingPairs(rows, ["surface-3", "nope"], [1e-3, 9e-3]);
  assert.deepEqual(missing,
    ["(surface-3, p=0.009)", "(nope, p=0.001)", "(nope, p=0.009)"]);
});

test("fit overlays evaluate the published formulas", () => {
  const [pt] = surfaceThresholdOverlay(0.003, 0.0032, 3, [0.0032]).points;
  assert.ok(Math.abs(pt.pL - 0.003) < 1e-15);
  const [pe] = polyExpOverlay(1.0, 0.0, 0.0, 3, [0.01]).points;
  assert.ok(Math.abs(pe.pL - 0.0001 * Math.E) < 1e-12);
});

test("logGrid spans the requested range geometrically", () => {
  const g = logGrid(1e-4, 1e-2, 5);
  assert.equal(g.length, 5);
  assert.ok(Math.abs(g[0] - 1e-4) < 1e-18 && Math.abs(g[4] - 1e-2) < 1e-12);
  assert.ok(Math.abs(g[2] - 1e-3) / 1e-3 < 1e-9);
});
