// DOM and canvas rendering. Pure consumer of ClientState: no protocol
// decisions live here, only presentation.

import type { ClientState } from "./state.js";
import { displayName, isController } from "./state.js";
import { arrayAt, highlightedLine, describeStep, raceArrays, raceCosts, stripeMapping } from "./steps.js";

function esc(text: string): string {
  return text.replace(/[&<>"']/g, (c) => `&#${c.charCodeAt(0)};`);
}

function memberList(state: ClientState): string {
  const rows = state.members
    .map((m) => {
      const badges = [
        m.userId === state.controller ? '<span class="badge controller">in control</span>' : "",
        state.pending.includes(m.userId) ? '<span class="badge pending">wants control</span>' : "",
        m.userId === state.userId ? '<span class="badge you">you</span>' : "",
      ].join("");
      return `<li>${esc(m.name)} ${badges}</li>`;
    })
    .join("");
  return `<ul class="members">${rows}</ul>`;
}

function controlButtons(state: ClientState): string {
  if (isController(state)) {
    const grants = state.members
      .filter((m) => m.userId !== state.userId)
      .map(
        (m) =>
          `<button data-action="grant" data-user="${esc(m.userId)}">Grant to ${esc(m.name)}</button>`,
      )
      .join("");
    const release =
      state.members.length > 1
        ? '<button data-action="release">Release control</button>'
        : "";
    return `<div class="control-row">${grants}${release}</div>`;
  }
  const already = state.pending.includes(state.userId ?? "");
  return `<div class="control-row"><button data-action="request" ${already ? "disabled" : ""}>
    ${already ? "Control requested…" : "Request control"}</button></div>`;
}

function scoreboardPanel(state: ClientState): string {
  const entries = Object.entries(state.scoreboard).sort((a, b) => b[1] - a[1]);
  if (entries.length === 0) return '<p class="muted">No points yet.</p>';
  const rows = entries
    .map(([uid, pts]) => `<tr><td>${esc(displayName(state, uid))}</td><td>${pts}</td></tr>`)
    .join("");
  return `<table class="scoreboard"><thead><tr><th>player</th><th>points</th></tr></thead><tbody>${rows}</tbody></table>`;
}

function lobbyPanel(state: ClientState): string {
  const controller = isController(state);
  const options = state.catalog
    .map((a) => `<option value="${esc(a.id)}">${esc(a.display_name)}</option>`)
    .join("");
  const disabled = controller ? "" : "disabled";
  return `
  <section class="panel">
    <h2>Lobby</h2>
    ${controller ? "" : '<p class="muted">The member in control picks the experiment; ask for control to drive.</p>'}
    <form data-action="enter-detail" class="stack">
      <h3>Inspect one algorithm</h3>
      <label>Algorithm <select name="algorithm" ${disabled}>${options}</select></label>
      <label>Arrangement <select name="arrangement" ${disabled}>
        <option value="random">random</option><option value="reversed">reversed</option><option value="sorted">sorted</option>
      </select></label>
      <label>Size <input name="size" type="number" value="10" min="2" max="1000" ${disabled}></label>
      <label>Seed <input name="seed" type="number" value="1" ${disabled}></label>
      <button ${disabled}>Open detail view</button>
    </form>
    <form data-action="enter-battle" class="stack">
      <h3>Battle two algorithms</h3>
      <label>Left <select name="left" ${disabled}>${options}</select></label>
      <label>Right <select name="right" ${disabled}>${options}</select></label>
      <label>Arrangement <select name="arrangement" ${disabled}>
        <option value="random">random</option><option value="reversed">reversed</option><option value="sorted">sorted</option>
      </select></label>
      <label>Size <input name="size" type="number" value="100" min="2" max="1000" ${disabled}></label>
      <label>Seed <input name="seed" type="number" value="1" ${disabled}></label>
      <button ${disabled}>Open battle view</button>
    </form>
  </section>`;
}

function detailPanel(state: ClientState): string {
  if (state.view.kind !== "detail") return "";
  const view = state.view;
  const spec = state.catalog.find((a) => a.id === view.algorithm);
  const controller = isController(state);
  const disabled = controller ? "" : "disabled";
  const trace = view.trace;
  const total = trace ? trace.steps.length : 0;
  const line = trace ? highlightedLine(trace.steps, view.position) : null;
  const code = (spec?.pseudo_code ?? [])
    .map((text, idx) =>
      `<div class="code-line${idx === line ? " current" : ""}">${esc(text) || "&nbsp;"}</div>`,
    )
    .join("");
  const stepInfo =
    trace && view.position > 0 && view.position <= trace.steps.length
      ? `after step ${view.position}: ${esc(describeStep(trace.steps[view.position - 1]!))}`
      : "at the initial arrangement";
  const options = state.catalog
    .map(
      (a) =>
        `<option value="${esc(a.id)}" ${a.id === view.algorithm ? "selected" : ""}>${esc(a.display_name)}</option>`,
    )
    .join("");
  return `
  <section class="panel detail">
    <h2>${esc(spec?.display_name ?? view.algorithm)}</h2>
    <p class="description">${esc(spec?.description ?? "")}</p>
    <div class="detail-grid">
      <div>
        <canvas id="detail-canvas" width="640" height="320"></canvas>
        <div class="transport">
          <button data-action="step-backward" ${disabled || view.position <= 0 ? "disabled" : ""}>&#8592; back</button>
          <input id="seek-slider" data-action="seek" type="range" min="0" max="${total}"
                 value="${view.position}" ${disabled}>
          <button data-action="step-forward" ${disabled || view.position >= total ? "disabled" : ""}>forward &#8594;</button>
          <span class="muted">step ${view.position} / ${total}</span>
        </div>
        <p class="muted">${stepInfo}</p>
        <label>Switch algorithm (same input)
          <select data-action="select-algorithm" ${disabled}>${options}</select>
        </label>
        <button data-action="exit" ${disabled}>Back to lobby</button>
      </div>
      <pre class="code">${code}</pre>
    </div>
  </section>`;
}

function battlePanel(state: ClientState): string {
  if (state.view.kind !== "battle") return "";
  const view = state.view;
  const controller = isController(state);
  const named = (id: string) => state.catalog.find((a) => a.id === id)?.display_name ?? id;
  const myGuess = state.userId ? view.guesses[state.userId] : undefined;
  const guessCount = Object.keys(view.guesses).length;
  const costs = view.result
    ? raceCosts(view.result, view.position)
    : { left: 0, right: 0 };

  let phaseRow = "";
  if (view.phase === "guessing") {
    phaseRow = `
      <p>Which algorithm sorts this arrangement faster? Everyone may guess; guesses lock at the start.</p>
      <div class="control-row">
        <button data-action="guess" data-side="left" class="${myGuess === "left" ? "chosen" : ""}">
          ${esc(named(view.config.left))} (left)</button>
        <button data-action="guess" data-side="right" class="${myGuess === "right" ? "chosen" : ""}">
          ${esc(named(view.config.right))} (right)</button>
        <span class="muted">${guessCount} guess${guessCount === 1 ? "" : "es"} in</span>
        ${controller ? '<button data-action="start-race">Start the race</button>' : ""}
      </div>`;
  } else if (view.phase === "racing") {
    phaseRow = controller
      ? `<div class="control-row">
           <button data-action="play">Play</button>
           <button data-action="advance" data-ticks="25">+25 steps</button>
           <button data-action="advance" data-ticks="1000000000">To the finish</button>
         </div>`
      : '<p class="muted">Race in progress; the member in control drives playback.</p>';
  } else if (view.result) {
    const winnerName =
      view.result.winner === "draw"
        ? "a draw"
        : named(view.result.winner === "left" ? view.config.left : view.config.right);
    phaseRow = `<p class="winner">Finished: ${esc(winnerName)}${
      view.result.winner === "draw" ? "" : " wins"
    } (cost ${view.result.left_cost} vs ${view.result.right_cost}).</p>
    ${controller ? '<button data-action="exit">Back to lobby</button>' : ""}`;
  }

  return `
  <section class="panel battle">
    <h2>Battle: ${esc(named(view.config.left))} vs ${esc(named(view.config.right))}</h2>
    <p class="muted">${view.config.arrangement.kind} arrangement, ${view.config.size} stripes
      &middot; phase: ${view.phase} &middot; cost ${costs.left} vs ${costs.right}</p>
    ${phaseRow}
    <div class="race-grid">
      <figure><figcaption>${esc(named(view.config.left))}</figcaption>
        <canvas id="race-left" width="420" height="260"></canvas></figure>
      <figure><figcaption>${esc(named(view.config.right))}</figcaption>
        <canvas id="race-right" width="420" height="260"></canvas></figure>
    </div>
    <label class="muted">Stripe image (stays on this computer)
      <input type="file" id="stripe-image" accept="image/*"></label>
    <h3>Scoreboard</h3>
    ${scoreboardPanel(state)}
  </section>`;
}

export function connectForm(error: string | null): string {
  return `
  <section class="panel connect">
    <h1>sortlab</h1>
    <p>Join a shared sorting-algorithm lab session.</p>
    ${error ? `<p class="notice">${esc(error)}</p>` : ""}
    <form data-action="connect" class="stack">
      <label>Display name <input name="name" required maxlength="32"></label>
      <label>Server <input name="server" placeholder="leave empty for this host"></label>
      <label>Room <input name="room" value="lab-1" required></label>
      <button>Join</button>
    </form>
  </section>`;
}

export function renderApp(state: ClientState): string {
  const notice = state.notice
    ? `<div class="notice" data-action="dismiss">${esc(state.notice)}</div>`
    : "";
  const desync = state.desynced
    ? '<div class="notice">Connection out of sync; reload to rejoin.</div>'
    : "";
  const panel =
    state.view.kind === "lobby"
      ? lobbyPanel(state)
      : state.view.kind === "detail"
        ? detailPanel(state)
        : battlePanel(state);
  return `
  <header>
    <h1>sortlab <span class="muted">room ${esc(state.roomId ?? "")}</span></h1>
    ${memberList(state)}
    ${controlButtons(state)}
  </header>
  ${desync}${notice}
  ${panel}`;
}

// --- canvas painting ----------------------------------------------------

export function paintBars(canvas: HTMLCanvasElement, values: number[]): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  const { width, height } = canvas;
  ctx.clearRect(0, 0, width, height);
  const n = values.length;
  if (n === 0) return;
  const slot = width / n;
  const max = Math.max(...values);
  for (let p = 0; p < n; p++) {
    const value = values[p]!;
    const h = (value / max) * (height - 24);
    const hue = Math.round((value / max) * 200 + 10);
    ctx.fillStyle = `hsl(${hue} 70% 55%)`;
    ctx.fillRect(p * slot + 1, height - h, slot - 2, h);
    if (n <= 32) {
      ctx.fillStyle = "#223";
      ctx.font = "12px system-ui";
      ctx.textAlign = "center";
      ctx.fillText(String(value), p * slot + slot / 2, height - h - 4);
    }
  }
}

let defaultImage: HTMLCanvasElement | null = null;
let userImage: ImageBitmap | null = null;

export function setStripeImage(image: ImageBitmap | null): void {
  userImage = image;
}

function stripeSource(width: number, height: number): CanvasImageSource {
  if (userImage) return userImage;
  if (!defaultImage) {
    const canvas = document.createElement("canvas");
    canvas.width = width;
    canvas.height = height;
    const ctx = canvas.getContext("2d")!;
    const gradient = ctx.createLinearGradient(0, 0, width, height);
    gradient.addColorStop(0, "#2563eb");
    gradient.addColorStop(0.5, "#db2777");
    gradient.addColorStop(1, "#f59e0b");
    ctx.fillStyle = gradient;
    ctx.fillRect(0, 0, width, height);
    ctx.fillStyle = "rgba(255,255,255,0.85)";
    for (let k = 0; k < 5; k++) {
      ctx.beginPath();
      ctx.arc(((k + 1) * width) / 6, height / 2, height / 7, 0, Math.PI * 2);
      ctx.fill();
    }
    defaultImage = canvas;
  }
  return defaultImage;
}

export function paintStripes(canvas: HTMLCanvasElement, values: number[]): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  const { width, height } = canvas;
  ctx.clearRect(0, 0, width, height);
  const n = values.length;
  if (n === 0) return;
  const source = stripeSource(width, height);
  const sourceWidth =
    source instanceof ImageBitmap ? source.width : (source as HTMLCanvasElement).width;
  const sourceHeight =
    source instanceof ImageBitmap ? source.height : (source as HTMLCanvasElement).height;
  const mapping = stripeMapping(values);
  const slot = width / n;
  const stripeWidth = sourceWidth / n;
  for (let p = 0; p < n; p++) {
    ctx.drawImage(
      source,
      mapping[p]! * stripeWidth, 0, stripeWidth, sourceHeight,
      p * slot, 0, slot, height,
    );
  }
}

export function paintView(state: ClientState): void {
  if (state.view.kind === "detail" && state.view.trace) {
    const canvas = document.getElementById("detail-canvas") as HTMLCanvasElement | null;
    if (canvas) {
      paintBars(canvas, arrayAt(state.view.trace.initial, state.view.trace.steps, state.view.position));
    }
  } else if (state.view.kind === "battle") {
    const left = document.getElementById("race-left") as HTMLCanvasElement | null;
    const right = document.getElementById("race-right") as HTMLCanvasElement | null;
    if (!left || !right) return;
    if (state.view.result && state.view.phase !== "guessing") {
      const arrays = raceArrays(state.view.result, state.view.position);
      paintStripes(left, arrays.left);
      paintStripes(right, arrays.right);
    } else {
      paintStripes(left, state.view.input);
      paintStripes(right, state.view.input);
    }
  }
}
