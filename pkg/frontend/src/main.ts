// Playground entry point: one socket, one store, one render loop.

import { drawStats } from "./chart.js";
import { PlaygroundClient } from "./client.js";
import { ForceLayout } from "./force.js";
import { CatalogEntry } from "./protocol.js";
import { SessionStore } from "./store.js";
import {
  catalogOptionLabel,
  grabControls,
  renderGraph,
  showBanner,
  showToast,
  syncControls,
} from "./ui.js";

const store = new SessionStore();
const els = grabControls(document);

const graphCanvas = document.getElementById("graph-canvas") as HTMLCanvasElement;
const statsCanvas = document.getElementById("stats-canvas") as HTMLCanvasElement;
const speedInput = document.getElementById("speed-input") as HTMLInputElement;
const graphCtx = graphCanvas.getContext("2d")!;
const statsCtx = statsCanvas.getContext("2d")!;

const layout = new ForceLayout(graphCanvas.width, graphCanvas.height, 7);

const wsScheme = location.protocol === "https:" ? "wss" : "ws";
const client = new PlaygroundClient(`${wsScheme}://${location.host}/ws`, store);

let catalog: CatalogEntry[] = [];

async function fillCatalogMenu(): Promise<void> {
  const response = await fetch("/catalog.json");
  const payload = (await response.json()) as { entries: CatalogEntry[] };
  catalog = payload.entries;
  els.catalogMenu.innerHTML = "";
  const placeholder = document.createElement("option");
  placeholder.value = "";
  placeholder.textContent = "load a molecule...";
  els.catalogMenu.appendChild(placeholder);
  for (const entry of catalog) {
    const option = document.createElement("option");
    option.value = entry.name;
    option.textContent = catalogOptionLabel(entry);
    option.title = entry.comments;
    els.catalogMenu.appendChild(option);
  }
}

function trySend(command: Parameters<PlaygroundClient["send"]>[0]): void {
  try {
    client.send(command);
  } catch (err) {
    showToast(els, (err as Error).message);
    syncControls(els, store);
  }
}

// -- control events -> commands ------------------------------------------------

els.catalogMenu.addEventListener("change", () => {
  const name = els.catalogMenu.value;
  if (name !== "") {
    trySend({ type: "load", catalog_name: name });
  }
});

els.algorithmToggle.addEventListener("click", () => {
  const next = store.confirmed.algorithm === "random" ? "older_first" : "random";
  trySend({ type: "set_algorithm", algorithm: next, strategy: store.confirmed.strategy });
});

els.strategyToggle.addEventListener("click", () => {
  const next = store.confirmed.strategy === "GROW" ? "SLIM" : "GROW";
  trySend({ type: "set_algorithm", algorithm: store.confirmed.algorithm, strategy: next });
});

els.chemistryToggle.addEventListener("click", () => {
  // cycle within the loaded molecule's family; the server rejects mismatches
  const order: Array<typeof store.confirmed.chemistry> = ["chemlambda", "diric", "ic"];
  const index = order.indexOf(store.confirmed.chemistry);
  trySend({ type: "set_chemistry", chemistry: order[(index + 1) % order.length] });
});

// slider drags settle to one command per release; the readout shows the
// acknowledged value, not the thumb position
els.weightSlider.addEventListener("change", () => {
  trySend({ type: "set_weights", w: Number(els.weightSlider.value) });
});

els.runButton.addEventListener("click", () => {
  trySend({ type: "run", steps_per_second: Number(speedInput.value) || 10 });
});
els.pauseButton.addEventListener("click", () => trySend({ type: "pause" }));
els.stepButton.addEventListener("click", () => trySend({ type: "step", n: 1 }));
els.resetButton.addEventListener("click", () => trySend({ type: "reset" }));

// -- server events -> view ------------------------------------------------------

client.onEvent = (event) => {
  if (event.type === "state") {
    layout.setGraph(event.nodes, event.edges);
  } else if (event.type === "error") {
    showToast(els, event.message);
  }
  syncControls(els, store);
};

client.onStateChange = (state) => {
  if (state === "connected") {
    showBanner(els, null);
  } else if (state === "connecting") {
    showBanner(els, "connecting...");
  } else {
    showBanner(els, "connection lost, retrying...");
  }
  syncControls(els, store);
};

function frame(): void {
  layout.tick(2);
  renderGraph(graphCtx, layout);
  drawStats(statsCtx, store.series, store.classTotals, {
    width: statsCanvas.width,
    height: statsCanvas.height,
    padding: 24,
  });
  requestAnimationFrame(frame);
}

syncControls(els, store);
client.connect();
fillCatalogMenu().catch((err) => showToast(els, `catalog: ${(err as Error).message}`));
requestAnimationFrame(frame);
