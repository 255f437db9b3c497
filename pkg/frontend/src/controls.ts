/** Preference-control geometry: λ1 slider for m=2, barycentric picker for m=3. */

import { clampToSimplex } from "./simplex";

export const TRI_SIZE = 280;

/**
 * Equilateral-ish triangle vertices in control pixels; vertex k carries
 * unit preference e_k (λ1 top, λ2 bottom-left, λ3 bottom-right).
 */
export const TRI_VERTICES: ReadonlyArray<readonly [number, number]> = [
  [TRI_SIZE / 2, 18],
  [16, TRI_SIZE - 22],
  [TRI_SIZE - 16, TRI_SIZE - 22],
];

/** Barycentric combination of the triangle vertices. */
export function lambdaToPoint(lam: number[]): { x: number; y: number } {
  let x = 0;
  let y = 0;
  for (let k = 0; k < 3; k++) {
    const [vx, vy] = TRI_VERTICES[k]!;
    const w = lam[k] ?? 0;
    x += w * vx;
    y += w * vy;
  }
  return { x, y };
}

/**
 * Invert a pointer position to barycentric coordinates; clicks outside the
 * triangle clamp back onto the simplex so the emitted preference is always
 * valid.  A click exactly on vertex k yields the unit vector e_k.
 */
export function pointToLambda(x: number, y: number): number[] {
  const [a, b, c] = TRI_VERTICES;
  const det =
    (b![1] - c![1]) * (a![0] - c![0]) + (c![0] - b![0]) * (a![1] - c![1]);
  const l1 =
    ((b![1] - c![1]) * (x - c![0]) + (c![0] - b![0]) * (y - c![1])) / det;
  const l2 =
    ((c![1] - a![1]) * (x - c![0]) + (a![0] - c![0]) * (y - c![1])) / det;
  return clampToSimplex([l1, l2, 1 - l1 - l2]);
}

/** Slider position v in [0,1] maps to the two-objective preference (v, 1-v). */
export function sliderToLambda(v: number): number[] {
  const t = Math.min(1, Math.max(0, v));
  return [t, 1 - t];
}

export function controlKind(m: number): "slider" | "triangle" {
  if (m === 2) return "slider";
  if (m === 3) return "triangle";
  throw new Error(`unsupported objective count: ${m}`);
}

/** SVG string for the barycentric picker with the handle at λ. */
export function triangleSvg(lam: number[]): string {
  const [a, b, c] = TRI_VERTICES;
  const handle = lambdaToPoint(lam);
  const outline = `${a![0]},${a![1]} ${b![0]},${b![1]} ${c![0]},${c![1]}`;
  return [
    `<svg id="triangle" viewBox="0 0 ${TRI_SIZE} ${TRI_SIZE}" width="${TRI_SIZE}" height="${TRI_SIZE}">`,
    `<polygon points="${outline}" class="tri-face"/>`,
    `<text x="${a![0]}" y="${a![1] - 6}" class="tri-label" text-anchor="middle">λ1</text>`,
    `<text x="${b![0] - 2}" y="${b![1] + 16}" class="tri-label" text-anchor="start">λ2</text>`,
    `<text x="${c![0] + 2}" y="${c![1] + 16}" class="tri-label" text-anchor="end">λ3</text>`,
    `<circle cx="${handle.x.toFixed(1)}" cy="${handle.y.toFixed(1)}" r="7" class="tri-handle"/>`,
    `</svg>`,
  ].join("");
}
