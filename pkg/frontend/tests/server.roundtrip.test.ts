/**
 * Round-trip checks against a live campaign server.  Skipped unless
 * EXPLORER_SERVER_URL points at a running `serve` process; the CI-less
 * default suite stays hermetic.
 */

import { describe, expect, it } from "vitest";

import { Client, SolutionChannel } from "../src/api";
import { isSimplex } from "../src/simplex";

const url = process.env.EXPLORER_SERVER_URL;

describe.skipIf(!url)("live server round trip", () => {
  const client = new Client(url ?? "");

  it("reports a healthy snapshot", async () => {
    expect(await client.health()).toEqual({ status: "ok" });
  });

  it("serves meta with consistent dimensions", async () => {
    const meta = await client.meta();
    expect(meta.m).toBeGreaterThanOrEqual(2);
    expect(meta.bounds.lower).toHaveLength(meta.n);
    expect(meta.bounds.upper).toHaveLength(meta.n);
    expect(meta.reference_point).toHaveLength(meta.m);
  });

  it("returns a solution for a preference within the latency budget", async () => {
    const meta = await client.meta();
    const lam = Array.from({ length: meta.m }, () => 1 / meta.m);
    const start = performance.now();
    const sol = await client.solution(lam);
    const elapsed = performance.now() - start;
    expect(elapsed).toBeLessThan(200);
    expect(sol.x).toHaveLength(meta.n);
    expect(sol.mean).toHaveLength(meta.m);
    expect(sol.std).toHaveLength(meta.m);
    expect(isSimplex(sol.lambda)).toBe(true);
    for (let k = 0; k < meta.n; k++) {
      expect(sol.x[k]!).toBeGreaterThanOrEqual(meta.bounds.lower[k]!);
      expect(sol.x[k]!).toBeLessThanOrEqual(meta.bounds.upper[k]!);
    }
  });

  it("samples a front whose rows carry dominance flags", async () => {
    const rows = await client.front(64);
    expect(rows).toHaveLength(64);
    for (const row of rows.slice(0, 5)) {
      expect(isSimplex(row.lambda)).toBe(true);
      expect(typeof row.non_dominated).toBe("boolean");
    }
    expect(rows.some((r) => r.non_dominated)).toBe(true);
  });

  it("extreme preferences map near the matching end of the front", async () => {
    const meta = await client.meta();
    const e1 = [1, ...Array.from({ length: meta.m - 1 }, () => 0)];
    const sol = await client.solution(e1);
    const rows = await client.front(256);
    const best = Math.min(...rows.map((r) => r.mean[0]!));
    const worst = Math.max(...rows.map((r) => r.mean[0]!));
    // Favoring objective 1 lands in the better half of its observed range.
    expect(sol.mean[0]!).toBeLessThanOrEqual(best + 0.5 * (worst - best));
  });

  it("the latest-wins channel survives a burst against the live server", async () => {
    const meta = await client.meta();
    const channel = new SolutionChannel((lam, signal) =>
      client.solution(lam, signal),
    );
    const burst: Promise<unknown | null>[] = [];
    for (let k = 0; k < 8; k++) {
      const t = k / 7;
      const lam = [t, ...Array.from({ length: meta.m - 1 }, () => (1 - t) / (meta.m - 1))];
      burst.push(channel.request(lam).catch(() => null));
    }
    const results = await Promise.all(burst);
    const last = results[results.length - 1];
    expect(last).not.toBeNull();
    expect(results.slice(0, -1).every((r) => r === null)).toBe(true);
  });
});
