/** Pointer-lock mouse-as-head input plus two-button emulation.
 *
 * Relative mouse motion integrates into an absolute head orientation at
 * a configurable sensitivity; samples stream once per animation frame.
 * Z / left mouse button emit the left device button, X / right mouse
 * button the right one.
 */

import { WsClient } from "./net.js";
import { Edge, Side, encodeControl, encodeGaze, encodeInput } from "./protocol.js";

const DEG2RAD = Math.PI / 180;
const PITCH_LIMIT = 85 * DEG2RAD;

export class InputCapture {
  yaw = 0;
  pitch = 0;
  sensitivityDegPerPx = 0.05;
  captured = false;

  private ws: WsClient;
  private element: HTMLElement;
  private rafId = 0;
  private lastSent: [number, number] | null = null;
  private down = new Set<string>();

  onCaptureChange: (captured: boolean) => void = () => {};

  constructor(ws: WsClient, element: HTMLElement) {
    this.ws = ws;
    this.element = element;
  }

  attach(): void {
    this.element.addEventListener("click", () => {
      if (!this.captured) this.element.requestPointerLock();
    });
    document.addEventListener("pointerlockchange", () => {
      this.captured = document.pointerLockElement === this.element;
      this.onCaptureChange(this.captured);
    });
    document.addEventListener("mousemove", (ev) => {
      if (!this.captured) return;
      this.yaw += ev.movementX * this.sensitivityDegPerPx * DEG2RAD;
      this.pitch -= ev.movementY * this.sensitivityDegPerPx * DEG2RAD;
      this.pitch = Math.max(-PITCH_LIMIT, Math.min(PITCH_LIMIT, this.pitch));
    });
    document.addEventListener("keydown", (ev) => this.key(ev.code, "press"));
    document.addEventListener("keyup", (ev) => this.key(ev.code, "release"));
    this.element.addEventListener("mousedown", (ev) => this.mouse(ev.button, "press"));
    this.element.addEventListener("mouseup", (ev) => this.mouse(ev.button, "release"));
    this.element.addEventListener("contextmenu", (ev) => ev.preventDefault());
    const pump = () => {
      this.pumpGaze();
      this.rafId = requestAnimationFrame(pump);
    };
    this.rafId = requestAnimationFrame(pump);
  }

  detach(): void {
    cancelAnimationFrame(this.rafId);
  }

  private pumpGaze(): void {
    if (!this.captured) return;
    const cur: [number, number] = [this.yaw, this.pitch];
    // Timestamps must strictly increase; performance.now() guarantees it
    // as long as we only send when something changed or every frame.
    if (
      this.lastSent &&
      this.lastSent[0] === cur[0] &&
      this.lastSent[1] === cur[1]
    ) {
      // Still send keep-alive samples so averaging windows advance.
    }
    this.ws.send(encodeGaze(performance.now(), cur[0], cur[1]));
    this.lastSent = cur;
  }

  private key(code: string, edge: Edge): void {
    if (code === "KeyR" && edge === "press" && this.captured) {
      // Snap the scaled-mode reticle back under the view center.
      this.ws.send(encodeControl("recenter"));
      return;
    }
    let side: Side | null = null;
    if (code === "KeyZ") side = "left";
    else if (code === "KeyX") side = "right";
    if (!side || !this.captured) return;
    const token = `${side}`;
    if (edge === "press") {
      if (this.down.has(token)) return; // key auto-repeat
      this.down.add(token);
    } else {
      this.down.delete(token);
    }
    this.ws.send(encodeInput(performance.now(), side, edge));
  }

  private mouse(button: number, edge: Edge): void {
    if (!this.captured) return;
    const side: Side | null = button === 0 ? "left" : button === 2 ? "right" : null;
    if (!side) return;
    this.ws.send(encodeInput(performance.now(), side, edge));
  }
}
