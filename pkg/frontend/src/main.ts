/** Bootstrap: connect, capture input, render at display rate. */

import { InputCapture } from "./input.js";
import { WsClient } from "./net.js";
import { ViewConfig } from "./projection.js";
import { Snapshot, isSnapshot } from "./protocol.js";
import { drawScene, layoutScene } from "./render.js";
import { SyntheticDriver } from "./synthetic.js";
import { TrialRunner } from "./trial.js";

const canvas = document.getElementById("view") as HTMLCanvasElement;
const ctx = canvas.getContext("2d")!;
const overlay = document.getElementById("overlay")!;
const statusEl = document.getElementById("conn-status")!;

const view: ViewConfig = {
  width: canvas.width,
  height: canvas.height,
  pxPerDeg: 14,
  fovDeg: [34, 26],
};

let latest: Snapshot | null = null;
const images = new Map<string, HTMLImageElement>();
let video: HTMLVideoElement | null = null;

function imageFor(src: string): void {
  if (images.has(src) || src.startsWith("capture:")) return;
  const img = new Image();
  img.src = `/api/media?path=${encodeURIComponent(src)}`;
  images.set(src, img);
}

async function initVideo(): Promise<void> {
  const el = document.getElementById("webcam") as HTMLVideoElement;
  try {
    const stream = await navigator.mediaDevices.getUserMedia({ video: true });
    el.srcObject = stream;
    await el.play();
    video = el;
  } catch {
    video = null; // test pattern fallback until a file is chosen
  }
  const picker = document.getElementById("video-file") as HTMLInputElement | null;
  picker?.addEventListener("change", () => {
    const file = picker.files?.[0];
    if (!file) return;
    if (el.srcObject) {
      (el.srcObject as MediaStream).getTracks().forEach((t) => t.stop());
      el.srcObject = null;
    }
    el.src = URL.createObjectURL(file);
    el.loop = true;
    void el.play().then(() => {
      video = el;
    });
  });
}

const ws = new WsClient();
const input = new InputCapture(ws, canvas);
const trials = new TrialRunner(document.getElementById("trial-panel")!);
const params = new URLSearchParams(location.search);
const synthetic = params.get("synthetic") === "1" ? new SyntheticDriver(ws) : null;

ws.onStatus = (connected) => {
  statusEl.textContent = connected ? "connected" : "reconnecting...";
  statusEl.className = connected ? "ok" : "bad";
};

ws.onMessage = (msg) => {
  if (isSnapshot(msg)) {
    latest = msg;
    if (msg.browser.image) imageFor(msg.browser.image);
    trials.onSnapshot(msg);
    synthetic?.onSnapshot(msg);
  } else if (msg.type === "trial_complete") {
    trials.onTrialComplete(msg);
    synthetic?.onTrialComplete(msg);
  } else if (msg.type === "error") {
    console.warn("server:", msg.message);
  }
};

input.onCaptureChange = (captured) => {
  overlay.style.display = captured ? "none" : "flex";
};

function frame(): void {
  if (latest) {
    drawScene(ctx, layoutScene(latest, view), view, video, images);
  }
  requestAnimationFrame(frame);
}

ws.connect();
input.attach();
void initVideo();
void trials.load(Number(params.get("participant") ?? 0), params.get("design") ?? "within");
requestAnimationFrame(frame);

if (synthetic) {
  synthetic.log = (line) => {
    console.log(line);
    document.getElementById("trial-result")!.textContent = line;
  };
  setTimeout(() => void synthetic.run().catch((e) => synthetic.log(String(e))), 800);
}
