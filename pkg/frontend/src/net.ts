/** WebSocket client with auto-reconnect; last snapshot wins. */

import { ServerMessage, parseServerMessage } from "./protocol.js";

export class WsClient {
  private sock: WebSocket | null = null;
  private url: string;
  private closed = false;
  private retryMs = 500;

  onMessage: (msg: ServerMessage) => void = () => {};
  onStatus: (connected: boolean) => void = () => {};

  constructor(url?: string) {
    const proto = location.protocol === "https:" ? "wss:" : "ws:";
    this.url = url ?? `${proto}//${location.host}/ws`;
  }

  connect(): void {
    this.closed = false;
    const sock = new WebSocket(this.url);
    this.sock = sock;
    sock.onopen = () => {
      this.retryMs = 500;
      this.onStatus(true);
      sock.send(JSON.stringify({ type: "hello" }));
    };
    sock.onmessage = (ev) => {
      const msg = parseServerMessage(String(ev.data));
      if (msg) this.onMessage(msg);
    };
    sock.onclose = () => {
      this.onStatus(false);
      this.sock = null;
      if (!this.closed) {
        setTimeout(() => this.connect(), this.retryMs);
        this.retryMs = Math.min(this.retryMs * 2, 5000);
      }
    };
    sock.onerror = () => sock.close();
  }

  send(payload: string): boolean {
    if (this.sock && this.sock.readyState === WebSocket.OPEN) {
      this.sock.send(payload);
      return true;
    }
    return false;
  }

  close(): void {
    this.closed = true;
    this.sock?.close();
  }
}
