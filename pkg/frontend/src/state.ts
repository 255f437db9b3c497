/**
 * Application state and its pure transitions.
 *
 * The render model is a pure function of the last server payloads and the
 * control position: every reducer returns a fresh state object, and
 * buildViewModel derives everything the DOM shows from that state alone,
 * so identical event sequences always produce identical view models.
 */

import { buildPanel, panelsFor, type PanelView } from "./plot";
import type { Archive, FrontRow, Meta, Solution } from "./types";

export const HISTORY_LIMIT = 20;

export interface Toast {
  id: number;
  message: string;
}

export interface SessionData {
  meta: Meta;
  front: FrontRow[];
  archive: Archive;
}

export interface HistoryEntry {
  lambda: number[];
  mean: number[];
}

export interface AppState {
  phase: "connecting" | "unreachable" | "ready";
  session: SessionData | null;
  lambda: number[];
  solution: Solution | null;
  pending: boolean;
  history: HistoryEntry[];
  toasts: Toast[];
  nextToastId: number;
}

export function initialState(): AppState {
  return {
    phase: "connecting",
    session: null,
    lambda: [],
    solution: null,
    pending: false,
    history: [],
    toasts: [],
    nextToastId: 1,
  };
}

export function sessionLoaded(state: AppState, data: SessionData): AppState {
  const m = data.meta.m;
  return {
    ...state,
    phase: "ready",
    session: data,
    lambda: Array.from({ length: m }, () => 1 / m),
    solution: null,
    pending: false,
    history: [],
  };
}

export function sessionFailed(state: AppState): AppState {
  return { ...state, phase: "unreachable", session: null };
}

export function controlMoved(state: AppState, lambda: number[]): AppState {
  return { ...state, lambda: [...lambda], pending: true };
}

export function solutionArrived(state: AppState, payload: Solution): AppState {
  const entry: HistoryEntry = { lambda: payload.lambda, mean: payload.mean };
  const history = [...state.history, entry].slice(-HISTORY_LIMIT);
  return { ...state, solution: payload, pending: false, history };
}

/** A failed fetch surfaces a toast; the last good solution stays on screen. */
export function solutionFailed(state: AppState, message: string): AppState {
  const toast: Toast = { id: state.nextToastId, message };
  return {
    ...state,
    pending: false,
    toasts: [...state.toasts, toast],
    nextToastId: state.nextToastId + 1,
  };
}

export function dismissToast(state: AppState, id: number): AppState {
  return { ...state, toasts: state.toasts.filter((t) => t.id !== id) };
}

export interface ReadoutRow {
  label: string;
  mean: string;
  std: string;
}

export interface DecisionRow {
  index: number;
  value: string;
}

export type ControlModel =
  | { kind: "slider"; value: number }
  | { kind: "triangle"; lambda: number[] };

export interface ViewModel {
  screen: "connecting" | "retry" | "main";
  title: string;
  control: ControlModel | null;
  panels: PanelView[];
  readout: ReadoutRow[];
  decision: DecisionRow[];
  lambdaText: string;
  pending: boolean;
  frontCount: number;
  archiveCount: number;
  toasts: Toast[];
}

function fmt(v: number): string {
  if (!Number.isFinite(v)) return String(v);
  if (v !== 0 && (Math.abs(v) >= 1e4 || Math.abs(v) < 1e-3)) {
    return v.toExponential(3);
  }
  return Number(v.toPrecision(4)).toString();
}

export function controlFor(m: number, lambda: number[]): ControlModel {
  if (m === 2) return { kind: "slider", value: lambda[0] ?? 0.5 };
  if (m === 3) return { kind: "triangle", lambda: [...lambda] };
  throw new Error(`unsupported objective count: ${m}`);
}

export function buildViewModel(state: AppState): ViewModel {
  if (state.phase === "connecting") {
    return emptyView("connecting", "connecting…");
  }
  if (state.phase === "unreachable" || state.session === null) {
    return emptyView("retry", "server unreachable");
  }
  const { meta, front, archive } = state.session;
  const trail = state.history.map((h) => h.mean);
  const panels = panelsFor(meta.m).map((spec) =>
    buildPanel(spec, meta.m, front, archive, trail, state.solution),
  );
  const readout: ReadoutRow[] = (state.solution?.mean ?? []).map((mu, k) => ({
    label: `f${k + 1}`,
    mean: fmt(mu),
    std: fmt(state.solution?.std[k] ?? NaN),
  }));
  const decision: DecisionRow[] = (state.solution?.x ?? []).map((v, k) => ({
    index: k + 1,
    value: fmt(v),
  }));
  return {
    screen: "main",
    title: `${meta.problem} — ${meta.n} variables, ${meta.m} objectives`,
    control: controlFor(meta.m, state.lambda),
    panels,
    readout,
    decision,
    lambdaText: state.lambda.map((v) => fmt(v)).join(", "),
    pending: state.pending,
    frontCount: front.length,
    archiveCount: archive.Y.length,
    toasts: state.toasts,
  };
}

function emptyView(screen: "connecting" | "retry", title: string): ViewModel {
  return {
    screen,
    title,
    control: null,
    panels: [],
    readout: [],
    decision: [],
    lambdaText: "",
    pending: false,
    frontCount: 0,
    archiveCount: 0,
    toasts: [],
  };
}
