// Rendering and control wiring for the playground page.
//
// Pure helpers (colors, opacity, label text) live at the top so they can be
// unit tested; everything below touches the DOM or a canvas context and is
// exercised in the browser.

import { ForceLayout } from "./force.js";
import { CatalogEntry } from "./protocol.js";
import { SessionStore } from "./store.js";

// One color per node type, hue-grouped: constructors green/blue, fan-out
// family purple, boundary and cleanup types gray/warm.
const TYPE_COLORS: Record<string, string> = {
  L: "#2e9e55",
  A: "#3567b5",
  FI: "#b58935",
  FO: "#7a4fb5",
  FOE: "#9a4fb5",
  GAMMA: "#2e9e55",
  DELTA: "#7a4fb5",
  Arrow: "#57b8c9",
  T: "#d64550",
  E: "#d64550",
  FRIN: "#8a8a8a",
  FROUT: "#8a8a8a",
};

export function typeColor(nodeType: string): string {
  return TYPE_COLORS[nodeType] ?? "#444444";
}

/**
 * Age (steps since birth) to fill opacity.  Older nodes are drawn solid and
 * newborns faint, so under "older is first" the solid nodes are the ones
 * about to fire.
 */
export function ageOpacity(age: number, horizon = 30): number {
  const clamped = Math.max(0, Math.min(age, horizon));
  return 0.35 + 0.65 * (clamped / horizon);
}

export function describeConfig(store: SessionStore): string {
  const c = store.confirmed;
  const algorithm = c.algorithm === "older_first" ? "older is first" : "random";
  return `${c.chemistry} | ${algorithm} (${c.strategy}) | w=${c.weights.toFixed(2)}`;
}

export function catalogOptionLabel(entry: CatalogEntry): string {
  const period = entry.period === null ? "" : ` (period ${entry.period})`;
  return `${entry.name} [${entry.chemistry}]${period}`;
}

// -- canvas rendering ---------------------------------------------------------

export function renderGraph(ctx: CanvasRenderingContext2D, layout: ForceLayout): void {
  ctx.clearRect(0, 0, layout.width, layout.height);

  ctx.strokeStyle = "rgba(60, 60, 60, 0.45)";
  ctx.lineWidth = 1;
  for (const edge of layout.edges) {
    const a = layout.nodes.get(edge.source);
    const b = layout.nodes.get(edge.target);
    if (a === undefined || b === undefined) {
      continue;
    }
    ctx.beginPath();
    ctx.moveTo(a.x, a.y);
    ctx.lineTo(b.x, b.y);
    ctx.stroke();
  }

  for (const node of layout.nodes.values()) {
    ctx.globalAlpha = ageOpacity(node.age);
    ctx.fillStyle = typeColor(node.type);
    ctx.beginPath();
    ctx.arc(node.x, node.y, 8, 0, 2 * Math.PI);
    ctx.fill();
    ctx.globalAlpha = 1;
    ctx.fillStyle = "#111";
    ctx.font = "9px sans-serif";
    ctx.textAlign = "center";
    ctx.fillText(node.type, node.x, node.y + 3);
  }
}

// -- DOM wiring ---------------------------------------------------------------

export interface ControlElements {
  catalogMenu: HTMLSelectElement;
  algorithmToggle: HTMLButtonElement;
  chemistryToggle: HTMLButtonElement;
  strategyToggle: HTMLButtonElement;
  weightSlider: HTMLInputElement;
  weightReadout: HTMLElement;
  runButton: HTMLButtonElement;
  pauseButton: HTMLButtonElement;
  stepButton: HTMLButtonElement;
  resetButton: HTMLButtonElement;
  configLine: HTMLElement;
  banner: HTMLElement;
  overlay: HTMLElement;
  toast: HTMLElement;
}

export function grabControls(doc: Document): ControlElements {
  const get = <T extends HTMLElement>(id: string): T => {
    const el = doc.getElementById(id);
    if (el === null) {
      throw new Error(`missing element #${id}`);
    }
    return el as T;
  };
  return {
    catalogMenu: get<HTMLSelectElement>("catalog-menu"),
    algorithmToggle: get<HTMLButtonElement>("algorithm-toggle"),
    chemistryToggle: get<HTMLButtonElement>("chemistry-toggle"),
    strategyToggle: get<HTMLButtonElement>("strategy-toggle"),
    weightSlider: get<HTMLInputElement>("weight-slider"),
    weightReadout: get("weight-readout"),
    runButton: get<HTMLButtonElement>("run-button"),
    pauseButton: get<HTMLButtonElement>("pause-button"),
    stepButton: get<HTMLButtonElement>("step-button"),
    resetButton: get<HTMLButtonElement>("reset-button"),
    configLine: get("config-line"),
    banner: get("connection-banner"),
    overlay: get("death-overlay"),
    toast: get("error-toast"),
  };
}

/**
 * Push the store's confirmed state into the controls.  Called after every
 * event batch: controls show what the server acknowledged, never the value
 * the user last touched.
 */
export function syncControls(els: ControlElements, store: SessionStore): void {
  const c = store.confirmed;
  els.algorithmToggle.textContent =
    c.algorithm === "older_first" ? "older is first" : "random";
  els.chemistryToggle.textContent = c.chemistry;
  els.strategyToggle.textContent = `prefer ${c.strategy}`;
  els.weightSlider.value = String(c.weights);
  els.weightReadout.textContent = `w = ${c.weights.toFixed(2)}`;
  els.configLine.textContent = describeConfig(store);
  els.runButton.disabled = store.loaded === null || store.dead || store.running;
  els.pauseButton.disabled = !store.running;
  els.stepButton.disabled = store.loaded === null || store.dead;
  els.resetButton.disabled = store.loaded === null;
  els.overlay.style.display = store.dead ? "flex" : "none";
  if (store.dead && store.deathStep !== null) {
    els.overlay.textContent = `no more rewrites available (step ${store.deathStep})`;
  }
}

export function showToast(els: ControlElements, message: string): void {
  els.toast.textContent = message;
  els.toast.style.display = "block";
  setTimeout(() => {
    els.toast.style.display = "none";
  }, 4000);
}

export function showBanner(els: ControlElements, text: string | null): void {
  if (text === null) {
    els.banner.style.display = "none";
  } else {
    els.banner.textContent = text;
    els.banner.style.display = "block";
  }
}
