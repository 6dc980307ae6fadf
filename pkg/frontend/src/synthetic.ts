/** Synthetic pointer driver: completes one peg-easy trial without a human.
 *
 * Enabled with ?synthetic=1. Works under the immediate reticle condition
 * only (reticle == head), aiming with the same tangent-plane inverse the
 * engine uses. Mirrors the harness's scripted perfect user at the wire
 * level: start trial over HTTP, stream gaze + buttons over the socket,
 * wait for trial_complete, then cross-check the downloaded result.
 */

import { WsClient } from "./net.js";
import { panelUvToDir } from "./projection.js";
import {
  PanelInfo,
  Snapshot,
  TrialComplete,
  Vec2,
  encodeGaze,
  encodeInput,
} from "./protocol.js";

const TICK_MS = 1000 / 60;
const EDGE_GAP_MS = 40; // clear of the engine's 20 ms debounce window

export class SyntheticDriver {
  private ws: WsClient;
  private t = 0;
  private latest: Snapshot | null = null;
  private completed: TrialComplete | null = null;
  log: (line: string) => void = console.log;

  constructor(ws: WsClient) {
    this.ws = ws;
  }

  onSnapshot(snap: Snapshot): void {
    this.latest = snap;
  }

  onTrialComplete(msg: TrialComplete): void {
    this.completed = msg;
  }

  private async sleep(ms: number): Promise<void> {
    await new Promise((r) => setTimeout(r, ms));
  }

  private gazeTo(dir: Vec2): void {
    this.t += TICK_MS;
    this.ws.send(encodeGaze(this.t, dir[0], dir[1]));
  }

  private async click(side: "left" | "right" = "left"): Promise<void> {
    this.t += 1;
    this.ws.send(encodeInput(this.t, side, "press"));
    this.t += EDGE_GAP_MS;
    this.ws.send(encodeInput(this.t, side, "release"));
    this.t += EDGE_GAP_MS;
    await this.sleep(50);
  }

  private panel(id: string): PanelInfo {
    const p = this.latest?.panels.find((p) => p.id === id);
    if (!p) throw new Error(`panel ${id} missing from snapshot`);
    return p;
  }

  async run(): Promise<void> {
    this.log("synthetic: starting peg-easy trial (immediate condition)");
    const res = await fetch("/api/trial/start", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({
        condition: {
          mode: { kind: "immediate" },
          task_kind: "peg_transfer",
          level: "easy",
        },
        seed: 7,
      }),
    });
    if (!res.ok) throw new Error(`trial start failed: ${res.status}`);
    const task = (await res.json()).task as { targets: Vec2[] };
    await this.sleep(200);
    if (!this.latest) throw new Error("no snapshot received");

    const video = this.panel("video");
    const aspect = video.aspect;
    // Open the menu, choose the circle slice.
    this.gazeTo(panelUvToDir(video, 0.125, 0.95));
    await this.sleep(60);
    await this.click();
    this.gazeTo(panelUvToDir(video, 0.5, 0.45 + (0.18 * 0.6) / 1)); // down slice = circle
    await this.sleep(60);
    await this.click();

    for (const target of task.targets) {
      this.gazeTo(panelUvToDir(video, target[0] / aspect, target[1]));
      await this.sleep(60);
      this.t += 1;
      this.ws.send(encodeInput(this.t, "left", "press"));
      this.t += EDGE_GAP_MS;
      this.gazeTo(panelUvToDir(video, (target[0] + 0.04) / aspect, target[1]));
      await this.sleep(60);
      this.t += 1;
      this.ws.send(encodeInput(this.t, "left", "release"));
      this.t += EDGE_GAP_MS;
      await this.sleep(60);
    }

    // Screenshot ends the trial.
    this.gazeTo(panelUvToDir(video, 0.875, 0.95));
    await this.sleep(60);
    await this.click();

    for (let i = 0; i < 100 && !this.completed; i++) await this.sleep(50);
    if (!this.completed) throw new Error("trial never completed");
    const live = this.completed.result;
    const fetched = await (await fetch(`/api/trials/${live.trial_id}`)).json();
    const same = JSON.stringify(fetched) === JSON.stringify(live);
    this.log(
      `synthetic: accuracy=${live.accuracy} downloaded==live: ${same ? "yes" : "NO"}`,
    );
    if (!same) throw new Error("downloaded result differs from live result");
    if (live.accuracy !== 1.0) throw new Error(`accuracy ${live.accuracy} != 1.0`);
    this.log("synthetic: PASS");
  }
}
