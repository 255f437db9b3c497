/** DOM shell: wires the pure state/plot/control modules to the browser. */

import { ApiError, Client, SolutionChannel } from "./api";
import { pointToLambda, sliderToLambda, triangleSvg } from "./controls";
import { debounce } from "./debounce";
import { panelSvg } from "./plot";
import {
  buildViewModel,
  controlMoved,
  dismissToast,
  initialState,
  sessionFailed,
  sessionLoaded,
  solutionArrived,
  solutionFailed,
  type AppState,
  type ViewModel,
} from "./state";

const DEBOUNCE_MS = 80;
const FRONT_SAMPLES = 1000;
const TOAST_TTL_MS = 4000;

const app = document.getElementById("app")!;
const base = new URLSearchParams(location.search).get("api") ?? "";
const client = new Client(base);
const channel = new SolutionChannel((lam, signal) => client.solution(lam, signal));

let state: AppState = initialState();
let shownScreen = "";

function setState(next: AppState): void {
  state = next;
  render(buildViewModel(state));
}

const requestSolution = debounce((lam: number[]) => {
  channel
    .request(lam)
    .then((payload) => {
      if (payload !== null) setState(solutionArrived(state, payload));
    })
    .catch((err: unknown) => {
      const message =
        err instanceof ApiError
          ? `server rejected request: ${err.message}`
          : "could not reach the server";
      const next = solutionFailed(state, message);
      setState(next);
      const id = next.nextToastId - 1;
      setTimeout(() => setState(dismissToast(state, id)), TOAST_TTL_MS);
    });
}, DEBOUNCE_MS);

function onPreference(lam: number[]): void {
  setState(controlMoved(state, lam));
  requestSolution(lam);
}

async function loadSession(): Promise<void> {
  setState(initialState());
  try {
    const [meta, front, archive] = await Promise.all([
      client.meta(),
      client.front(FRONT_SAMPLES),
      client.archive(),
    ]);
    setState(sessionLoaded(state, { meta, front, archive }));
    onPreference(state.lambda);
  } catch {
    setState(sessionFailed(state));
  }
}

function render(vm: ViewModel): void {
  if (vm.screen !== shownScreen) {
    shownScreen = vm.screen;
    app.innerHTML = skeleton(vm);
    wireStaticHandlers(vm);
  }
  if (vm.screen !== "main") return;

  byId("title").textContent = vm.title;
  byId("panels").innerHTML = vm.panels.map(panelSvg).join("");
  byId("lambda-text").textContent = `λ = (${vm.lambdaText})`;
  byId("status").textContent = vm.pending ? "fetching…" : "";
  byId("counts").textContent =
    `${vm.frontCount} front samples · ${vm.archiveCount} evaluated points`;
  byId("readout").innerHTML = vm.readout
    .map(
      (r) =>
        `<tr><td>${r.label}</td><td>${r.mean}</td><td>± ${r.std}</td></tr>`,
    )
    .join("");
  byId("decision").innerHTML = vm.decision
    .map((d) => `<tr><td>x${d.index}</td><td>${d.value}</td></tr>`)
    .join("");
  byId("toasts").innerHTML = vm.toasts
    .map((t) => `<div class="toast">${t.message}</div>`)
    .join("");

  if (vm.control?.kind === "slider") {
    const slider = byId("slider") as HTMLInputElement;
    const v = String(vm.control.value);
    if (slider.value !== v && document.activeElement !== slider) {
      slider.value = v;
    }
  } else if (vm.control?.kind === "triangle") {
    byId("triangle-box").innerHTML = triangleSvg(vm.control.lambda);
  }
}

function skeleton(vm: ViewModel): string {
  if (vm.screen === "connecting") {
    return `<div class="center-screen">connecting…</div>`;
  }
  if (vm.screen === "retry") {
    return [
      `<div class="center-screen">`,
      `<p>The campaign server is unreachable.</p>`,
      `<button id="retry">retry</button>`,
      `</div>`,
    ].join("");
  }
  const control =
    vm.control?.kind === "slider"
      ? [
          `<label class="control-label">preference λ1</label>`,
          `<input id="slider" type="range" min="0" max="1" step="0.001" value="${vm.control.value}"/>`,
        ].join("")
      : `<div id="triangle-box"></div>`;
  return [
    `<header><h1 id="title"></h1><span id="counts"></span></header>`,
    `<main>`,
    `<section class="controls">`,
    control,
    `<div id="lambda-text" class="lambda"></div>`,
    `<div id="status" class="status"></div>`,
    `<table class="readout"><caption>predicted objectives</caption><tbody id="readout"></tbody></table>`,
    `<table class="readout"><caption>decision variables</caption><tbody id="decision"></tbody></table>`,
    `</section>`,
    `<section id="panels" class="panels"></section>`,
    `</main>`,
    `<div id="toasts" class="toasts"></div>`,
  ].join("");
}

function wireStaticHandlers(vm: ViewModel): void {
  if (vm.screen === "retry") {
    byId("retry").addEventListener("click", () => void loadSession());
    return;
  }
  if (vm.screen !== "main") return;

  if (vm.control?.kind === "slider") {
    byId("slider").addEventListener("input", (ev) => {
      const v = Number((ev.target as HTMLInputElement).value);
      onPreference(sliderToLambda(v));
    });
  } else {
    const box = byId("triangle-box");
    let dragging = false;
    const emit = (ev: PointerEvent) => {
      const svg = box.querySelector("svg");
      if (!svg) return;
      const rect = svg.getBoundingClientRect();
      const sx = (ev.clientX - rect.left) * (280 / rect.width);
      const sy = (ev.clientY - rect.top) * (280 / rect.height);
      onPreference(pointToLambda(sx, sy));
    };
    box.addEventListener("pointerdown", (ev) => {
      dragging = true;
      box.setPointerCapture?.(ev.pointerId);
      emit(ev);
    });
    box.addEventListener("pointermove", (ev) => {
      if (dragging) emit(ev);
    });
    const stop = () => {
      dragging = false;
    };
    box.addEventListener("pointerup", stop);
    box.addEventListener("pointercancel", stop);
  }
}

function byId(id: string): HTMLElement {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el;
}

void loadSession();
