/**
 * Deterministic log-log SVG charts: same input, same bytes.
 *
 * No timestamps, no randomness; every coordinate is formatted with a fixed
 * precision so re-renders are byte-identical.
 */

import type { Point, Series } from "./series.js";

export interface ChartOptions {
  title: string;
  xLabel: string;
  yLabel: string;
  width?: number;
  height?: number;
  /** series drawn as lines without markers or error bars (fit overlays) */
  overlays?: Series[];
}

const PALETTE = [
  "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
  "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#aec7e8", "#ffbb78",
  "#98df8a", "#ff9896", "#c5b0d5", "#c49c94",
];

const MARKERS = ["circle", "square", "diamond", "triangle"] as const;

function fmt(x: number): string {
  // fixed-precision coordinate formatting keeps output byte-stable
  return x.toFixed(2);
}

function decadesBetween(lo: number, hi: number): number[] {
  const out: number[] = [];
  for (let e = Math.ceil(Math.log10(lo) - 1e-9); Math.pow(10, e) <= hi * (1 + 1e-9); e++) {
    out.push(Math.pow(10, e));
  }
  return out;
}

function powLabel(v: number): string {
  const e = Math.round(Math.log10(v));
  return `1e${e}`;
}

export function renderLogLogChart(series: Series[], opts: ChartOptions): string {
  const width = opts.width ?? 640;
  const height = opts.height ?? 480;
  const m = { left: 70, right: 180, top: 40, bottom: 52 };
  const plotW = width - m.left - m.right;
  const plotH = height - m.top - m.bottom;
  const overlays = opts.overlays ?? [];

  const pts: Point[] = [...series, ...overlays].flatMap((s) => s.points);
  const finite = pts.filter((q) => q.pL > 0 && q.p > 0);
  if (finite.length === 0) {
    throw new Error("nothing to plot: no positive points");
  }
  const xMin = Math.min(...finite.map((q) => q.p)) / 1.3;
  const xMax = Math.max(...finite.map((q) => q.p)) * 1.3;
  const yLo = Math.min(...finite.map((q) => Math.max(q.pL - q.sigma, q.pL / 3)));
  const yHi = Math.max(...finite.map((q) => q.pL + q.sigma));
  const yMin = yLo / 1.5;
  const yMax = yHi * 1.5;

  const sx = (p: number) =>
    m.left + (plotW * Math.log(p / xMin)) / Math.log(xMax / xMin);
  const sy = (v: number) =>
    m.top + plotH - (plotH * Math.log(v / yMin)) / Math.log(yMax / yMin);

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
    `viewBox="0 0 ${width} ${height}" font-family="Helvetica,Arial,sans-serif">`);
  parts.push(`<rect width="${width}" height="${height}" fill="white"/>`);
  parts.push(
    `<rect x="${m.left}" y="${m.top}" width="${plotW}" height="${plotH}" ` +
    `fill="none" stroke="#333" stroke-width="1"/>`);

  for (const t of decadesBetween(xMin, xMax)) {
    const x = fmt(sx(t));
    parts.push(
      `<line x1="${x}" y1="${m.top}" x2="${x}" y2="${m.top + plotH}" ` +
      `stroke="#ddd" stroke-width="0.5"/>`);
    parts.push(
      `<text x="${x}" y="${m.top + plotH + 18}" text-anchor="middle" ` +
      `font-size="11">${powLabel(t)}</text>`);
  }
  for (const t of decadesBetween(yMin, yMax)) {
    const y = fmt(sy(t));
    parts.push(
      `<line x1="${m.left}" y1="${y}" x2="${m.left + plotW}" y2="${y}" ` +
      `stroke="#ddd" stroke-width="0.5"/>`);
    parts.push(
      `<text x="${m.left - 6}" y="${y}" text-anchor="end" dominant-baseline="middle" ` +
      `font-size="11">${powLabel(t)}</text>`);
  }

  parts.push(
    `<text x="${m.left + plotW / 2}" y="${height - 14}" text-anchor="middle" ` +
    `font-size="13">${escapeXml(opts.xLabel)}</text>`);
  parts.push(
    `<text x="18" y="${m.top + plotH / 2}" text-anchor="middle" font-size="13" ` +
    `transform="rotate(-90 18 ${m.top + plotH / 2})">${escapeXml(opts.yLabel)}</text>`);
  parts.push(
    `<text x="${m.left + plotW / 2}" y="24" text-anchor="middle" ` +
    `font-size="15">${escapeXml(opts.title)}</text>`);

  overlays.forEach((s, i) => {
    const color = "#555";
    const path = s.points
      .filter((q) => q.pL > 0)
      .map((q, j) => `${j === 0 ? "M" : "L"}${fmt(sx(q.p))} ${fmt(sy(q.pL))}`)
      .join(" ");
    parts.push(
      `<path d="${path}" fill="none" stroke="${color}" stroke-width="1" ` +
      `stroke-dasharray="5 3"/>`);
    const last = s.points[s.points.length - 1];
    if (last !== undefined && last.pL > 0) {
      parts.push(
        `<text x="${fmt(sx(last.p) + 4)}" y="${fmt(sy(last.pL))}" font-size="10" ` +
        `fill="${color}">${escapeXml(s.label)}</text>`);
    }
  });

  series.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length];
    const marker = MARKERS[i % MARKERS.length];
    const pts = s.points.filter((q) => q.pL > 0);
    const path = pts
      .map((q, j) => `${j === 0 ? "M" : "L"}${fmt(sx(q.p))} ${fmt(sy(q.pL))}`)
      .join(" ");
    parts.push(`<path d="${path}" fill="none" stroke="${color}" stroke-width="1.5"/>`);
    for (const q of pts) {
      const x = sx(q.p);
      if (q.sigma > 0) {
        const lo = Math.max(q.pL - q.sigma, yMin);
        const hi = q.pL + q.sigma;
        parts.push(
          `<line x1="${fmt(x)}" y1="${fmt(sy(lo))}" x2="${fmt(x)}" ` +
          `y2="${fmt(sy(hi))}" stroke="${color}" stroke-width="1"/>`);
        for (const v of [lo, hi]) {
          parts.push(
            `<line x1="${fmt(x - 3)}" y1="${fmt(sy(v))}" x2="${fmt(x + 3)}" ` +
            `y2="${fmt(sy(v))}" stroke="${color}" stroke-width="1"/>`);
        }
      }
      parts.push(markerShape(marker, x, sy(q.pL), color));
    }
    const ly = m.top + 14 + i * 16;
    const lx = m.left + plotW + 12;
    parts.push(markerShape(marker, lx + 5, ly - 4, color));
    parts.push(
      `<text x="${lx + 14}" y="${ly}" font-size="11">${escapeXml(s.label)}</text>`);
  });

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}

function markerShape(kind: (typeof MARKERS)[number], x: number, y: number,
                     color: string): string {
  const r = 3;
  switch (kind) {
    case "circle":
      return `<circle cx="${fmt(x)}" cy="${fmt(y)}" r="${r}" fill="${color}"/>`;
    case "square":
      return `<rect x="${fmt(x - r)}" y="${fmt(y - r)}" width="${2 * r}" ` +
        `height="${2 * r}" fill="${color}"/>`;
    case "diamond":
      return `<path d="M${fmt(x)} ${fmt(y - r - 1)} L${fmt(x + r + 1)} ${fmt(y)} ` +
        `L${fmt(x)} ${fmt(y + r + 1)} L${fmt(x - r - 1)} ${fmt(y)} Z" fill="${color}"/>`;
    case "triangle":
      return `<path d="M${fmt(x)} ${fmt(y - r - 1)} L${fmt(x + r + 1)} ${fmt(y + r)} ` +
        `L${fmt(x - r - 1)} ${fmt(y + r)} Z" fill="${color}"/>`;
  }
}

function escapeXml(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}
