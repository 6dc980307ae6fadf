import { describe, expect, it } from "vitest";

import { ViewConfig, markerToCanvas, panelRect } from "../src/projection.js";
import type { Snapshot } from "../src/protocol.js";
import { MarkerCmd, layoutScene } from "../src/render.js";

import fixture from "./snapshot_fixture.json";

const snap = fixture as unknown as Snapshot;
const view: ViewConfig = { width: 1100, height: 700, pxPerDeg: 14, fovDeg: [34, 26] };

describe("layoutScene", () => {
  it("emits one panel command per snapshot panel", () => {
    const cmds = layoutScene(snap, view);
    const panels = cmds.filter((c) => c.kind === "panel");
    expect(panels.map((p: any) => p.id).sort()).toEqual(
      ["help_left", "help_right", "image", "video"],
    );
  });

  it("places every rendered marker exactly at the affine-mapped uv", () => {
    const cmds = layoutScene(snap, view);
    const markers = cmds.filter((c): c is MarkerCmd => c.kind === "marker");
    expect(markers.length).toBe(snap.markers.length);
    const video = snap.panels.find((p) => p.id === "video")!;
    const rect = panelRect(video, snap.head, view);
    for (let i = 0; i < snap.markers.length; i++) {
      const m = snap.markers[i];
      const pts =
        m.kind === "line"
          ? [m.p1, m.p2]
          : m.kind === "arrow"
            ? [m.head, m.tail]
            : [m.center, m.radius_point];
      const expectA = markerToCanvas(rect, pts[0][0], pts[0][1], snap.video_aspect);
      const expectB = markerToCanvas(rect, pts[1][0], pts[1][1], snap.video_aspect);
      expect(Math.abs(markers[i].a.x - expectA.x)).toBeLessThan(1);
      expect(Math.abs(markers[i].a.y - expectA.y)).toBeLessThan(1);
      expect(Math.abs(markers[i].b.x - expectB.x)).toBeLessThan(1);
      expect(Math.abs(markers[i].b.y - expectB.y)).toBeLessThan(1);
    }
  });

  it("marks the locked reference marker distinctly", () => {
    const cmds = layoutScene(snap, view);
    const locked = cmds.filter((c) => c.kind === "marker" && (c as MarkerCmd).locked);
    expect(locked.length).toBe(snap.markers.filter((m) => m.locked).length);
  });

  it("renders circle radii from the radius point distance", () => {
    const cmds = layoutScene(snap, view);
    const circles = cmds.filter(
      (c): c is MarkerCmd => c.kind === "marker" && c.marker === "circle",
    );
    for (const c of circles) {
      expect(c.radiusPx).toBeCloseTo(Math.hypot(c.b.x - c.a.x, c.b.y - c.a.y), 9);
    }
  });

  it("always draws the reticle and the video controls", () => {
    const cmds = layoutScene(snap, view);
    expect(cmds.some((c) => c.kind === "reticle")).toBe(true);
    const buttons = cmds.filter((c) => c.kind === "button");
    expect(buttons.length).toBeGreaterThanOrEqual(4);
  });

  it("shows the full image view with a back button", () => {
    expect(snap.browser.mode).toBe("full_image");
    const cmds = layoutScene(snap, view);
    const back = cmds.filter((c: any) => c.kind === "button" && c.text === "back");
    expect(back.length).toBe(1);
    expect(cmds.some((c) => c.kind === "image")).toBe(true);
  });
});
