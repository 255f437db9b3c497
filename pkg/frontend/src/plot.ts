/** Pure scatter-panel geometry: objective pairs, extents, pixel projection. */

import { anchors, nearestAnchor } from "./simplex";
import type { Archive, FrontRow, Solution } from "./types";

/** Pixel size of one square scatter panel, inclusive of margins. */
export const PANEL_SIZE = 260;
export const PANEL_MARGIN = 34;

export const ANCHOR_COLORS = [
  "#e05a4e",
  "#3f7fbf",
  "#3fa66b",
  "#c78f2f",
  "#8e6bbf",
];

export interface PanelSpec {
  i: number;
  j: number;
}

/**
 * Objective pairs to display: a single f1-f2 panel for two objectives,
 * linked 2D pair panels (f1-f2, f1-f3, f2-f3) for three.
 */
export function panelsFor(m: number): PanelSpec[] {
  if (m === 2) return [{ i: 0, j: 1 }];
  if (m === 3)
    return [
      { i: 0, j: 1 },
      { i: 0, j: 2 },
      { i: 1, j: 2 },
    ];
  throw new Error(`unsupported objective count: ${m}`);
}

export interface Extent {
  min: number;
  max: number;
}

/** Padded data extent; a degenerate (or empty) range widens to ±0.5. */
export function extentOf(values: number[], pad = 0.05): Extent {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (!Number.isFinite(v)) continue;
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (lo > hi) return { min: -0.5, max: 0.5 };
  if (hi - lo < 1e-12) return { min: lo - 0.5, max: hi + 0.5 };
  const span = hi - lo;
  return { min: lo - pad * span, max: hi + pad * span };
}

/** Affine map from data coordinates to panel pixels (y axis points up). */
export function project(
  v: number,
  e: Extent,
  axis: "x" | "y",
): number {
  const inner = PANEL_SIZE - 2 * PANEL_MARGIN;
  const t = (v - e.min) / (e.max - e.min);
  return axis === "x"
    ? PANEL_MARGIN + t * inner
    : PANEL_SIZE - PANEL_MARGIN - t * inner;
}

export interface PanelPoint {
  px: number;
  py: number;
  color: string;
  hollow: boolean;
}

export interface PanelView {
  i: number;
  j: number;
  xLabel: string;
  yLabel: string;
  xRange: [string, string];
  yRange: [string, string];
  front: PanelPoint[];
  archive: { px: number; py: number }[];
  trail: { px: number; py: number }[];
  marker: { px: number; py: number } | null;
}

function fmtAxis(v: number): string {
  return Number(v.toPrecision(3)).toString();
}

/**
 * Project one objective pair onto panel pixels.  Front points are colored
 * by the nearest of the fixed anchor preferences; dominated rows render
 * hollow.  The trail is the recent exploration history (predicted means)
 * and the marker is the latest solution.
 */
export function buildPanel(
  spec: PanelSpec,
  m: number,
  front: FrontRow[],
  archive: Archive,
  trailMeans: number[][],
  solution: Solution | null,
): PanelView {
  const anchorSet = anchors(m);
  const col = (rows: number[][], k: number) => rows.map((r) => r[k] ?? NaN);
  const frontMeans = front.map((r) => r.mean);
  const xs = [...col(frontMeans, spec.i), ...col(archive.Y, spec.i)];
  const ys = [...col(frontMeans, spec.j), ...col(archive.Y, spec.j)];
  if (solution) {
    xs.push(solution.mean[spec.i] ?? NaN);
    ys.push(solution.mean[spec.j] ?? NaN);
  }
  const ex = extentOf(xs);
  const ey = extentOf(ys);
  const px = (v: number) => project(v, ex, "x");
  const py = (v: number) => project(v, ey, "y");

  return {
    i: spec.i,
    j: spec.j,
    xLabel: `f${spec.i + 1}`,
    yLabel: `f${spec.j + 1}`,
    xRange: [fmtAxis(ex.min), fmtAxis(ex.max)],
    yRange: [fmtAxis(ey.min), fmtAxis(ey.max)],
    front: front.map((r) => ({
      px: px(r.mean[spec.i] ?? NaN),
      py: py(r.mean[spec.j] ?? NaN),
      color: ANCHOR_COLORS[nearestAnchor(r.lambda, anchorSet)] ?? "#888888",
      hollow: !r.non_dominated,
    })),
    archive: archive.Y.map((row) => ({
      px: px(row[spec.i] ?? NaN),
      py: py(row[spec.j] ?? NaN),
    })),
    trail: trailMeans.map((mean) => ({
      px: px(mean[spec.i] ?? NaN),
      py: py(mean[spec.j] ?? NaN),
    })),
    marker: solution
      ? {
          px: px(solution.mean[spec.i] ?? NaN),
          py: py(solution.mean[spec.j] ?? NaN),
        }
      : null,
  };
}

/** Render a panel view as a standalone SVG element string. */
export function panelSvg(panel: PanelView): string {
  const S = PANEL_SIZE;
  const M = PANEL_MARGIN;
  const parts: string[] = [];
  parts.push(
    `<svg class="panel" viewBox="0 0 ${S} ${S}" width="${S}" height="${S}">`,
  );
  parts.push(
    `<rect x="${M}" y="${M}" width="${S - 2 * M}" height="${S - 2 * M}" class="frame"/>`,
  );
  parts.push(
    `<text x="${S / 2}" y="${S - 8}" class="axis-label">${panel.xLabel}</text>`,
    `<text x="10" y="${S / 2}" class="axis-label" transform="rotate(-90 10 ${S / 2})">${panel.yLabel}</text>`,
    `<text x="${M}" y="${S - M + 14}" class="tick">${panel.xRange[0]}</text>`,
    `<text x="${S - M}" y="${S - M + 14}" class="tick" text-anchor="end">${panel.xRange[1]}</text>`,
    `<text x="${M - 4}" y="${S - M}" class="tick" text-anchor="end">${panel.yRange[0]}</text>`,
    `<text x="${M - 4}" y="${M + 4}" class="tick" text-anchor="end">${panel.yRange[1]}</text>`,
  );
  for (const p of panel.archive) {
    parts.push(
      `<circle cx="${p.px.toFixed(1)}" cy="${p.py.toFixed(1)}" r="2.4" class="archive-dot"/>`,
    );
  }
  for (const p of panel.front) {
    const style = p.hollow
      ? `fill="none" stroke="${p.color}"`
      : `fill="${p.color}"`;
    parts.push(
      `<circle cx="${p.px.toFixed(1)}" cy="${p.py.toFixed(1)}" r="2.1" class="front-dot" ${style}/>`,
    );
  }
  if (panel.trail.length > 1) {
    const pts = panel.trail
      .map((p) => `${p.px.toFixed(1)},${p.py.toFixed(1)}`)
      .join(" ");
    parts.push(`<polyline points="${pts}" class="trail"/>`);
  }
  for (const p of panel.trail) {
    parts.push(
      `<circle cx="${p.px.toFixed(1)}" cy="${p.py.toFixed(1)}" r="1.6" class="trail-dot"/>`,
    );
  }
  if (panel.marker) {
    parts.push(
      `<circle cx="${panel.marker.px.toFixed(1)}" cy="${panel.marker.py.toFixed(1)}" r="6" class="marker"/>`,
    );
  }
  parts.push("</svg>");
  return parts.join("");
}
