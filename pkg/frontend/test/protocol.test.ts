import { describe, expect, it } from "vitest";

import {
  encodeControl,
  encodeGaze,
  encodeInput,
  isSnapshot,
  parseServerMessage,
} from "../src/protocol.js";

import fixture from "./snapshot_fixture.json";

describe("message parsing", () => {
  it("accepts a real engine snapshot", () => {
    const msg = parseServerMessage(JSON.stringify(fixture));
    expect(msg).not.toBeNull();
    expect(isSnapshot(msg!)).toBe(true);
    if (isSnapshot(msg!)) {
      expect(msg.panels.length).toBe(4);
      expect(msg.markers.length).toBeGreaterThan(0);
      expect(msg.video_aspect).toBeGreaterThan(1);
    }
  });

  it("rejects junk without throwing", () => {
    expect(parseServerMessage("{not json")).toBeNull();
    expect(parseServerMessage("42")).toBeNull();
    expect(parseServerMessage('{"type": "quux"}')).toBeNull();
  });

  it("passes through error and trial_complete frames", () => {
    expect(parseServerMessage('{"type":"error","message":"m"}')?.type).toBe("error");
    expect(
      parseServerMessage('{"type":"trial_complete","result":{"trial_id":1,"accuracy":1}}')
        ?.type,
    ).toBe("trial_complete");
  });
});

describe("message encoding", () => {
  it("gaze carries absolute radians and a timestamp", () => {
    const msg = JSON.parse(encodeGaze(12.5, 0.1, -0.2));
    expect(msg).toEqual({ type: "gaze", t: 12.5, yaw: 0.1, pitch: -0.2, source: "mouse" });
  });

  it("input events tag the remote source", () => {
    const msg = JSON.parse(encodeInput(3, "left", "press"));
    expect(msg).toEqual({ type: "input", t: 3, side: "left", edge: "press", source: "remote" });
  });

  it("control messages merge extra fields", () => {
    const msg = JSON.parse(encodeControl("recenter"));
    expect(msg).toEqual({ type: "control", action: "recenter" });
    const msg2 = JSON.parse(encodeControl("abort_trial", { reason: "x" }));
    expect(msg2.reason).toBe("x");
  });
});
