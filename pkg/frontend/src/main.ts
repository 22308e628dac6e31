// Bootstrap: wire the socket, the store, and the DOM together.

import { actionRequest, hello } from "./protocol.js";
import type { ServerMessage } from "./protocol.js";
import { SocketClient, socketUrl } from "./net.js";
import { applyMessage, clearNotice, initialState, isController } from "./state.js";
import type { ClientState } from "./state.js";
import { connectForm, paintView, renderApp, setStripeImage } from "./render.js";

const app = document.getElementById("app")!;
const socket = new SocketClient();

let state: ClientState = initialState;
let connectError: string | null = null;
let joined = false;
let playTimer: number | null = null;

function update(next: ClientState): void {
  state = next;
  render();
}

function render(): void {
  if (!joined) {
    app.innerHTML = connectForm(connectError);
    return;
  }
  app.innerHTML = renderApp(state);
  paintView(state);
  const slider = document.getElementById("seek-slider") as HTMLInputElement | null;
  slider?.addEventListener("change", () => {
    socket.send(actionRequest({ kind: "seek", position: Number(slider.value) }));
  });
  const upload = document.getElementById("stripe-image") as HTMLInputElement | null;
  upload?.addEventListener("change", async () => {
    const file = upload.files?.[0];
    setStripeImage(file ? await createImageBitmap(file) : null);
    paintView(state);
  });
}

function stopPlayback(): void {
  if (playTimer !== null) {
    window.clearInterval(playTimer);
    playTimer = null;
  }
}

function startPlayback(): void {
  stopPlayback();
  playTimer = window.setInterval(() => {
    if (state.view.kind === "battle" && state.view.phase === "racing" && isController(state)) {
      socket.send(actionRequest({ kind: "advance_race", ticks: 25 }));
    } else {
      stopPlayback();
    }
  }, 120);
}

socket.onMessage = (msg: ServerMessage) => {
  update(applyMessage(state, msg));
};

socket.onClose = () => {
  joined = false;
  connectError = "Connection closed.";
  stopPlayback();
  update(initialState);
};

async function connect(form: HTMLFormElement): Promise<void> {
  const data = new FormData(form);
  const name = String(data.get("name") ?? "").trim();
  const room = String(data.get("room") ?? "").trim();
  const server = String(data.get("server") ?? "");
  if (!name || !room) return;
  try {
    await socket.connect(socketUrl(server));
  } catch (error) {
    connectError = error instanceof Error ? error.message : String(error);
    render();
    return;
  }
  joined = true;
  connectError = null;
  socket.send(hello(name, room));
  render();
}

app.addEventListener("submit", (event) => {
  const form = event.target as HTMLFormElement;
  const action = form.dataset.action;
  if (!action) return;
  event.preventDefault();
  const data = new FormData(form);
  if (action === "connect") {
    void connect(form);
  } else if (action === "enter-detail") {
    const arrangement: Record<string, unknown> = { kind: data.get("arrangement") };
    if (arrangement.kind === "random") arrangement.seed = Number(data.get("seed"));
    socket.send(actionRequest({
      kind: "enter_detail",
      algorithm: data.get("algorithm"),
      arrangement,
      size: Number(data.get("size")),
    }));
  } else if (action === "enter-battle") {
    const arrangement: Record<string, unknown> = { kind: data.get("arrangement") };
    if (arrangement.kind === "random") arrangement.seed = Number(data.get("seed"));
    socket.send(actionRequest({
      kind: "enter_battle",
      config: {
        left: data.get("left"),
        right: data.get("right"),
        arrangement,
        size: Number(data.get("size")),
      },
    }));
  }
});

app.addEventListener("click", (event) => {
  const target = (event.target as HTMLElement).closest<HTMLElement>("[data-action]");
  if (!target || target instanceof HTMLFormElement) return;
  const action = target.dataset.action;
  switch (action) {
    case "dismiss":
      update(clearNotice(state));
      break;
    case "request":
      socket.send(actionRequest({ kind: "request_control" }));
      break;
    case "grant":
      socket.send(actionRequest({ kind: "grant_control", to: target.dataset.user }));
      break;
    case "release":
      socket.send(actionRequest({ kind: "release_control" }));
      break;
    case "step-forward":
      socket.send(actionRequest({ kind: "step_forward" }));
      break;
    case "step-backward":
      socket.send(actionRequest({ kind: "step_backward" }));
      break;
    case "exit":
      socket.send(actionRequest({ kind: "exit_to_lobby" }));
      break;
    case "guess":
      socket.send(actionRequest({ kind: "submit_guess", side: target.dataset.side }));
      break;
    case "start-race":
      socket.send(actionRequest({ kind: "start_race" }));
      break;
    case "advance":
      socket.send(actionRequest({ kind: "advance_race", ticks: Number(target.dataset.ticks) }));
      break;
    case "play":
      startPlayback();
      break;
  }
});

app.addEventListener("change", (event) => {
  const target = event.target as HTMLSelectElement;
  if (target.dataset.action === "select-algorithm") {
    socket.send(actionRequest({ kind: "select_algorithm", algorithm: target.value }));
  }
});

render();
