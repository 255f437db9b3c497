/** Payload shapes of the read-only JSON API this client consumes. */

export interface Meta {
  problem: string;
  n: number;
  m: number;
  bounds: { lower: number[]; upper: number[] };
  reference_point: number[];
}

export interface Solution {
  lambda: number[];
  x: number[];
  mean: number[];
  std: number[];
}

export interface FrontRow {
  lambda: number[];
  x: number[];
  mean: number[];
  std: number[];
  non_dominated: boolean;
}

export interface Archive {
  X: number[][];
  Y: number[][];
}
