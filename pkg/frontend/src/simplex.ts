/** Preference-vector helpers: simplex validation, clamping, anchor palette. */

const EPS = 1e-12;

/** True when every component is finite and nonnegative and the sum is 1. */
export function isSimplex(lam: number[], tol = 1e-9): boolean {
  if (lam.length === 0) return false;
  let sum = 0;
  for (const v of lam) {
    if (!Number.isFinite(v) || v < -tol) return false;
    sum += v;
  }
  return Math.abs(sum - 1) <= tol;
}

/** Rescale a nonnegative vector to sum 1; throws if the sum is not positive. */
export function normalize(lam: number[]): number[] {
  const sum = lam.reduce((a, b) => a + b, 0);
  if (!Number.isFinite(sum) || sum <= EPS) {
    throw new Error("preference must have a positive finite sum");
  }
  return lam.map((v) => v / sum);
}

/**
 * Force an arbitrary vector onto the simplex: non-finite and negative
 * components are clamped to 0, then the result is renormalized.  An
 * all-zero input falls back to the uniform preference so the control can
 * never emit an invalid vector.
 */
export function clampToSimplex(lam: number[]): number[] {
  const clipped = lam.map((v) => (Number.isFinite(v) && v > 0 ? v : 0));
  const sum = clipped.reduce((a, b) => a + b, 0);
  if (sum <= EPS) return lam.map(() => 1 / lam.length);
  return clipped.map((v) => v / sum);
}

/**
 * Five fixed anchor preferences used for coloring front points by the
 * region of the simplex they came from.  The palette size is a fixed
 * presentation choice: unit vectors first, then the centroid, then
 * successive blends until five distinct anchors exist.
 */
export function anchors(m: number): number[][] {
  const out: number[][] = [];
  const push = (cand: number[]) => {
    if (out.length >= 5) return;
    const dup = out.some(
      (a) => Math.max(...a.map((v, i) => Math.abs(v - (cand[i] ?? 0)))) < 1e-9,
    );
    if (!dup) out.push(cand);
  };
  for (let i = 0; i < m; i++) {
    push(Array.from({ length: m }, (_, j) => (j === i ? 1 : 0)));
  }
  push(Array.from({ length: m }, () => 1 / m));
  // Pairwise midpoints, then 3:1 blends, in lexicographic pair order.
  for (let i = 0; i < m && out.length < 5; i++) {
    for (let j = i + 1; j < m && out.length < 5; j++) {
      const mid = Array.from({ length: m }, () => 0);
      mid[i] = 0.5;
      mid[j] = 0.5;
      push(mid);
    }
  }
  for (let i = 0; i < m && out.length < 5; i++) {
    for (let j = 0; j < m && out.length < 5; j++) {
      if (i === j) continue;
      const blend = Array.from({ length: m }, () => 0);
      blend[i] = 0.75;
      blend[j] = 0.25;
      push(blend);
    }
  }
  return out;
}

/** Index of the anchor closest in Euclidean distance; ties pick the lowest. */
export function nearestAnchor(lam: number[], anchorSet: number[][]): number {
  let best = 0;
  let bestDist = Infinity;
  for (let k = 0; k < anchorSet.length; k++) {
    const a = anchorSet[k]!;
    let d = 0;
    for (let i = 0; i < lam.length; i++) {
      const diff = (lam[i] ?? 0) - (a[i] ?? 0);
      d += diff * diff;
    }
    if (d < bestDist - 1e-15) {
      bestDist = d;
      best = k;
    }
  }
  return best;
}
