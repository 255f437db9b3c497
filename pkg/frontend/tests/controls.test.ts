import { describe, expect, it } from "vitest";

import {
  controlKind,
  lambdaToPoint,
  pointToLambda,
  sliderToLambda,
  triangleSvg,
  TRI_VERTICES,
} from "../src/controls";
import { isSimplex } from "../src/simplex";

describe("controlKind", () => {
  it("selects the slider for two objectives", () => {
    expect(controlKind(2)).toBe("slider");
  });

  it("selects the barycentric triangle for three objectives", () => {
    expect(controlKind(3)).toBe("triangle");
  });

  it("rejects unsupported dimensions", () => {
    expect(() => controlKind(4)).toThrow(/unsupported/);
  });
});

describe("sliderToLambda", () => {
  it("maps position v to (v, 1-v)", () => {
    expect(sliderToLambda(0.3)).toEqual([0.3, 0.7]);
    expect(sliderToLambda(1)).toEqual([1, 0]);
    expect(sliderToLambda(0)).toEqual([0, 1]);
  });

  it("clamps out-of-range positions", () => {
    expect(sliderToLambda(1.5)).toEqual([1, 0]);
    expect(sliderToLambda(-0.2)).toEqual([0, 1]);
  });
});

describe("triangle picker", () => {
  it("returns the exact unit basis vector at each vertex", () => {
    for (let k = 0; k < 3; k++) {
      const [vx, vy] = TRI_VERTICES[k]!;
      const lam = pointToLambda(vx, vy);
      const expected = [0, 0, 0];
      expected[k] = 1;
      for (let i = 0; i < 3; i++) {
        expect(lam[i]!).toBeCloseTo(expected[i]!, 9);
      }
    }
  });

  it("round-trips interior preferences through pixel space", () => {
    const cases = [
      [1 / 3, 1 / 3, 1 / 3],
      [0.6, 0.3, 0.1],
      [0.05, 0.9, 0.05],
    ];
    for (const lam of cases) {
      const p = lambdaToPoint(lam);
      const back = pointToLambda(p.x, p.y);
      for (let i = 0; i < 3; i++) {
        expect(back[i]!).toBeCloseTo(lam[i]!, 9);
      }
    }
  });

  it("clamps clicks outside the triangle to a valid simplex vector", () => {
    const outside = [
      [0, 0],
      [500, 500],
      [-40, 100],
      [140, -30],
    ];
    for (const [x, y] of outside) {
      const lam = pointToLambda(x!, y!);
      expect(isSimplex(lam)).toBe(true);
    }
  });

  it("renders the handle at the barycentric position", () => {
    const svg = triangleSvg([1, 0, 0]);
    const [vx, vy] = TRI_VERTICES[0]!;
    expect(svg).toContain(`cx="${vx.toFixed(1)}"`);
    expect(svg).toContain(`cy="${vy.toFixed(1)}"`);
    expect(svg).toContain("tri-handle");
  });
});
