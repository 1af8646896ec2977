import type { ApiClient } from "./api.js";
import { buildHeatmapModel } from "./heatmap.js";
import type { ConsoleStore } from "./store.js";
import type { KeyName, Snapshot } from "./types.js";

const KEYPAD: KeyName[] = ["1", "2", "3", "4", "5", "0", "learn"];

const PAGE = `
<header>
  <h1>smartfan console</h1>
  <span id="status" class="badge">connecting</span>
</header>
<main>
  <section class="panel" id="gauges">
    <h2>Controller</h2>
    <dl>
      <dt>tick</dt><dd id="g-tick">-</dd>
      <dt>mode</dt><dd id="g-mode">-</dd>
      <dt>fan speed</dt><dd id="g-speed" class="big">-</dd>
      <dt>sensed temp</dt><dd id="g-temp">-</dd>
      <dt>epoch duration</dt><dd id="g-duration">-</dd>
      <dt>sensed humidity</dt><dd id="g-humidity">-</dd>
      <dt>room air</dt><dd id="g-air">-</dd>
    </dl>
  </section>
  <section class="panel" id="keypad-panel">
    <h2>Keypad</h2>
    <div id="keypad"></div>
    <p id="armed" class="hint">learn: off</p>
  </section>
  <section class="panel" id="env-panel">
    <h2>Environment</h2>
    <label>outside temp <output id="env-temp-out">30.0</output> C
      <input id="env-temp" type="range" min="-10" max="50" step="0.5" value="30">
    </label>
    <label>humidity target <output id="env-hum-out">85</output> %
      <input id="env-hum" type="range" min="0" max="100" step="1" value="85">
    </label>
  </section>
  <section class="panel wide" id="weights-panel">
    <h2>Weights <span id="weights-version" class="hint"></span></h2>
    <div id="heatmap"></div>
    <p>
      reset:
      <button id="reset-reference">reference</button>
      <button id="reset-zero">zero</button>
    </p>
  </section>
  <section class="panel wide">
    <h2>Recent ticks</h2>
    <ul id="log"></ul>
  </section>
</main>
`;

function el<T extends HTMLElement>(root: HTMLElement, id: string): T {
  const node = root.querySelector<T>(`#${id}`);
  if (!node) throw new Error(`missing element #${id}`);
  return node;
}

function logLine(snap: Snapshot): string {
  const r = snap.reading;
  return (
    `tick ${snap.tick}: ${r.temperature_c}C ${r.duration_min}min ` +
    `${r.humidity_pct}% -> speed ${snap.speed}`
  );
}

/**
 * Build the console inside `root` and keep it in sync with the store.
 * Returns a teardown function that detaches the store subscription.
 */
export function initUi(root: HTMLElement, store: ConsoleStore, client: ApiClient): () => void {
  root.innerHTML = PAGE;
  const doc = root.ownerDocument;

  const status = el(root, "status");
  const gTick = el(root, "g-tick");
  const gMode = el(root, "g-mode");
  const gSpeed = el(root, "g-speed");
  const gTemp = el(root, "g-temp");
  const gDuration = el(root, "g-duration");
  const gHumidity = el(root, "g-humidity");
  const gAir = el(root, "g-air");
  const armed = el(root, "armed");
  const heatmap = el(root, "heatmap");
  const weightsVersion = el(root, "weights-version");
  const log = el<HTMLUListElement>(root, "log");

  const keypad = el(root, "keypad");
  for (const key of KEYPAD) {
    const btn = doc.createElement("button");
    btn.textContent = key === "learn" ? "LEARN" : key;
    btn.className = key === "learn" ? "key key-learn" : "key";
    btn.dataset.key = key;
    btn.addEventListener("click", () => {
      void client.pressKey(key).catch(() => {
        // key rejected or connection down; next snapshot shows the truth
      });
    });
    keypad.appendChild(btn);
  }

  const envTemp = el<HTMLInputElement>(root, "env-temp");
  const envTempOut = el<HTMLOutputElement>(root, "env-temp-out");
  const envHum = el<HTMLInputElement>(root, "env-hum");
  const envHumOut = el<HTMLOutputElement>(root, "env-hum-out");
  envTemp.addEventListener("input", () => {
    envTempOut.textContent = Number(envTemp.value).toFixed(1);
  });
  envTemp.addEventListener("change", () => {
    void client.setEnv({ outside_temp: Number(envTemp.value) }).catch(() => {});
  });
  envHum.addEventListener("input", () => {
    envHumOut.textContent = envHum.value;
  });
  envHum.addEventListener("change", () => {
    void client.setEnv({ humidity_target: Number(envHum.value) }).catch(() => {});
  });

  el(root, "reset-reference").addEventListener("click", () => {
    void client.resetWeights("reference").catch(() => {});
  });
  el(root, "reset-zero").addEventListener("click", () => {
    void client.resetWeights("zero").catch(() => {});
  });

  let renderedWeightsVersion = -1;

  const render = () => {
    status.textContent = store.status;
    status.className = `badge badge-${store.status}`;

    const snap = store.snapshot;
    if (snap) {
      gTick.textContent = String(snap.tick);
      gMode.textContent = snap.mode.replace("_", " ");
      gSpeed.textContent = String(snap.speed);
      gTemp.textContent = `${snap.reading.temperature_c} C`;
      gDuration.textContent = `${snap.reading.duration_min} min`;
      gHumidity.textContent = `${snap.reading.humidity_pct} %`;
      gAir.textContent = `${snap.room.air_temp.toFixed(2)} C / ${snap.room.humidity.toFixed(0)} %`;
      armed.textContent = snap.learn_armed
        ? "learn: ARMED, next digit teaches"
        : "learn: off";
      armed.classList.toggle("armed", snap.learn_armed);
    }

    const weights = store.weights;
    if (weights && weights.weights_version !== renderedWeightsVersion) {
      renderedWeightsVersion = weights.weights_version;
      weightsVersion.textContent = `v${weights.weights_version}`;
      renderHeatmap(heatmap, weights);
    }

    log.replaceChildren(
      ...store.log.slice(-12).reverse().map((s) => {
        const li = doc.createElement("li");
        li.textContent = logLine(s);
        return li;
      }),
    );
  };

  const unsubscribe = store.subscribe(render);
  render();
  return unsubscribe;
}

function renderHeatmap(container: HTMLElement, weights: Parameters<typeof buildHeatmapModel>[0]): void {
  const model = buildHeatmapModel(weights);
  const doc = container.ownerDocument;
  const table = doc.createElement("table");
  table.className = "heatmap";

  const head = doc.createElement("tr");
  head.appendChild(doc.createElement("th"));
  for (const label of model.columnLabels) {
    const th = doc.createElement("th");
    th.textContent = label.replace("speed ", "");
    head.appendChild(th);
  }
  table.appendChild(head);

  for (const row of model.rows) {
    const tr = doc.createElement("tr");
    const th = doc.createElement("th");
    th.textContent = row.label;
    th.title = `${row.block} bit ${row.label.slice(1)}`;
    tr.appendChild(th);
    for (const cell of row.cells) {
      const td = doc.createElement("td");
      td.textContent = String(cell.value);
      td.style.backgroundColor = cell.color;
      td.title = cell.title;
      tr.appendChild(td);
    }
    table.appendChild(tr);
  }
  container.replaceChildren(table);
}
