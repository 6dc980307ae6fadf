/** Trial runner: walks the participant's condition schedule against the
 * service, shows progress and the post-trial result summary. */

import { Snapshot, TrialComplete } from "./protocol.js";

interface ConditionDoc {
  mode: { kind: string; window?: number; ratio?: number };
  task_kind: string;
  level: string;
}

function conditionLabel(c: ConditionDoc): string {
  const mode =
    c.mode.kind === "immediate"
      ? "immediate"
      : c.mode.kind === "average"
        ? `average-${c.mode.window}`
        : `scaled-${c.mode.ratio}`;
  return `${mode} / ${c.task_kind} / ${c.level}`;
}

export class TrialRunner {
  private schedule: ConditionDoc[] = [];
  private next = 0;
  private active: number | null = null;
  private statusEl: HTMLElement;
  private resultEl: HTMLElement;
  private buttonEl: HTMLButtonElement;
  private abortEl: HTMLButtonElement;

  constructor(root: HTMLElement) {
    this.statusEl = root.querySelector("#trial-status")!;
    this.resultEl = root.querySelector("#trial-result")!;
    this.buttonEl = root.querySelector("#trial-next")!;
    this.abortEl = root.querySelector("#trial-abort")!;
    this.buttonEl.addEventListener("click", () => void this.startNext());
    this.abortEl.addEventListener("click", () => void this.abort());
  }

  async load(participant: number, design: string): Promise<void> {
    const res = await fetch(`/api/schedule?participant=${participant}&design=${design}`);
    const doc = (await res.json()) as { conditions: ConditionDoc[] };
    this.schedule = doc.conditions;
    this.next = 0;
    this.render();
  }

  async startNext(): Promise<void> {
    if (this.next >= this.schedule.length) return;
    const condition = this.schedule[this.next];
    const res = await fetch("/api/trial/start", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ condition, seed: this.next + 1 }),
    });
    if (res.ok) {
      this.active = this.next;
      this.resultEl.textContent = "";
      this.render();
    } else {
      this.resultEl.textContent = `start failed: ${res.status}`;
    }
  }

  async abort(): Promise<void> {
    if (this.active === null) return;
    await fetch("/api/trial/abort", { method: "POST" });
  }

  onSnapshot(snap: Snapshot): void {
    if (snap.trial) {
      this.statusEl.textContent = `running: ${snap.trial.label}`;
    }
  }

  onTrialComplete(msg: TrialComplete): void {
    const r = msg.result;
    const prec =
      r["precision_mean"] === null
        ? "n/a"
        : (r["precision_mean"] as number).toFixed(4);
    const aborted = r["aborted"] ? " (aborted)" : "";
    this.resultEl.textContent =
      `trial ${r.trial_id}${aborted}: accuracy ${(r.accuracy as number).toFixed(2)}, ` +
      `precision ${prec}, time ${((r["time_ms"] as number) / 1000).toFixed(1)}s, ` +
      `head ${(r["head_path_deg"] as number).toFixed(0)} deg`;
    if (this.active !== null) {
      this.next = this.active + 1;
      this.active = null;
    }
    this.render();
  }

  private render(): void {
    const total = this.schedule.length;
    if (total === 0) {
      this.statusEl.textContent = "no schedule loaded";
      this.buttonEl.disabled = true;
      return;
    }
    if (this.next >= total) {
      this.statusEl.textContent = `all ${total} trials done`;
      this.buttonEl.disabled = true;
      this.resultEl.innerHTML += ' <a href="/api/results.csv" download>results.csv</a>';
      return;
    }
    if (this.active === null) {
      this.statusEl.textContent =
        `next ${this.next + 1}/${total}: ${conditionLabel(this.schedule[this.next])}`;
    }
    this.buttonEl.disabled = this.active !== null;
    this.abortEl.disabled = this.active === null;
  }
}
