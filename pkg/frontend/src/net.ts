// Websocket wrapper: JSON frames in/out plus the protocol heartbeat.

import { ping } from "./protocol.js";
import type { ServerMessage } from "./protocol.js";

const HEARTBEAT_MS = 10_000;

export class SocketClient {
  private socket: WebSocket | null = null;
  private heartbeat: number | null = null;

  onMessage: (msg: ServerMessage) => void = () => {};
  onClose: () => void = () => {};

  connect(url: string): Promise<void> {
    this.disconnect();
    return new Promise((resolve, reject) => {
      const socket = new WebSocket(url);
      socket.onopen = () => {
        this.socket = socket;
        this.heartbeat = window.setInterval(() => this.send(ping()), HEARTBEAT_MS);
        resolve();
      };
      socket.onerror = () => reject(new Error(`cannot reach ${url}`));
      socket.onmessage = (event) => {
        this.onMessage(JSON.parse(String(event.data)) as ServerMessage);
      };
      socket.onclose = () => {
        this.teardown();
        this.onClose();
      };
    });
  }

  send(doc: unknown): void {
    if (this.socket?.readyState === WebSocket.OPEN) {
      this.socket.send(JSON.stringify(doc));
    }
  }

  disconnect(): void {
    const socket = this.socket;
    this.teardown();
    socket?.close();
  }

  private teardown(): void {
    if (this.heartbeat !== null) {
      window.clearInterval(this.heartbeat);
      this.heartbeat = null;
    }
    this.socket = null;
  }
}

/** ws:// endpoint for a host the user typed (host[:port] or full URL). */
export function socketUrl(server: string): string {
  const trimmed = server.trim();
  if (trimmed.startsWith("ws://") || trimmed.startsWith("wss://")) {
    return trimmed.endsWith("/ws") ? trimmed : `${trimmed.replace(/\/$/, "")}/ws`;
  }
  if (trimmed.startsWith("http://") || trimmed.startsWith("https://")) {
    const url = new URL(trimmed);
    const scheme = url.protocol === "https:" ? "wss:" : "ws:";
    return `${scheme}//${url.host}/ws`;
  }
  if (trimmed === "") {
    const scheme = location.protocol === "https:" ? "wss:" : "ws:";
    return `${scheme}//${location.host}/ws`;
  }
  return `ws://${trimmed}/ws`;
}
