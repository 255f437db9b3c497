/** Typed client for the campaign server plus latest-wins /solution channel. */

import { clampToSimplex, isSimplex } from "./simplex";
import type { Archive, FrontRow, Meta, Solution } from "./types";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

/** Minimal fetch surface so tests can substitute a scripted transport. */
export type Fetcher = (
  url: string,
  init?: { signal?: AbortSignal },
) => Promise<{ ok: boolean; status: number; json(): Promise<unknown> }>;

async function getJson(
  fetcher: Fetcher,
  url: string,
  signal?: AbortSignal,
): Promise<unknown> {
  const res = await fetcher(url, { signal });
  let body: unknown = null;
  try {
    body = await res.json();
  } catch {
    // Non-JSON error bodies fall through to the status-based message.
  }
  if (!res.ok) {
    const detail =
      body && typeof body === "object" && "error" in body
        ? String((body as { error: unknown }).error)
        : `request failed with status ${res.status}`;
    throw new ApiError(res.status, detail);
  }
  return body;
}

export class Client {
  private fetcher: Fetcher;

  constructor(
    readonly base: string,
    fetcher?: Fetcher,
  ) {
    this.fetcher = fetcher ?? ((url, init) => fetch(url, init));
  }

  private url(path: string): string {
    return `${this.base}${path}`;
  }

  health(): Promise<unknown> {
    return getJson(this.fetcher, this.url("/health"));
  }

  meta(): Promise<Meta> {
    return getJson(this.fetcher, this.url("/meta")) as Promise<Meta>;
  }

  front(samples: number): Promise<FrontRow[]> {
    return getJson(this.fetcher, this.url(`/front?samples=${samples}`)) as Promise<
      FrontRow[]
    >;
  }

  archive(): Promise<Archive> {
    return getJson(this.fetcher, this.url("/archive")) as Promise<Archive>;
  }

  /**
   * Fetch the mapped solution for a preference.  The vector is clamped to
   * the simplex before transmission so the server only ever sees valid
   * preferences, whatever the control emitted.
   */
  solution(lam: number[], signal?: AbortSignal): Promise<Solution> {
    const safe = clampToSimplex(lam);
    if (!isSimplex(safe)) {
      return Promise.reject(new Error("preference is not a valid simplex vector"));
    }
    const query = safe.map((v) => v.toPrecision(17)).join(",");
    return getJson(
      this.fetcher,
      this.url(`/solution?lambda=${query}`),
      signal,
    ) as Promise<Solution>;
  }
}

/**
 * Serializes /solution traffic to at most one in-flight request.  A newer
 * request aborts the previous one, and a response is delivered only if it
 * is still the newest — stale responses and stale errors resolve to null
 * so the caller can simply ignore them.
 */
export class SolutionChannel {
  private seq = 0;
  private controller: AbortController | null = null;

  constructor(
    private fetchSolution: (lam: number[], signal: AbortSignal) => Promise<Solution>,
  ) {}

  async request(lam: number[]): Promise<Solution | null> {
    const ticket = ++this.seq;
    this.controller?.abort();
    const controller = new AbortController();
    this.controller = controller;
    try {
      const payload = await this.fetchSolution(lam, controller.signal);
      return ticket === this.seq ? payload : null;
    } catch (err) {
      if (ticket !== this.seq) return null; // superseded: outcome irrelevant
      throw err;
    }
  }
}
