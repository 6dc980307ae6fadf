/** Snapshot -> draw command layout, and the canvas renderer that executes it.
 *
 * Layout is pure (testable without a DOM): every marker/handle position
 * comes out of `markerToCanvas`, so pixel placement is exactly the
 * documented affine map of the snapshot's uv coordinates.
 */

import type { Marker, Snapshot, Vec2 } from "./protocol.js";
import {
  Rect,
  ViewConfig,
  dirToCanvas,
  fovRect,
  lengthToPx,
  markerToCanvas,
  panelRect,
  uvToCanvas,
} from "./projection.js";

export interface PanelCmd {
  kind: "panel";
  id: string;
  panelKind: string;
  rect: Rect;
  interactive: boolean;
}

export interface MarkerCmd {
  kind: "marker";
  marker: Marker["kind"];
  locked: boolean;
  // Endpoints in canvas px: a = anchor (line p1 / arrow head / circle center).
  a: { x: number; y: number };
  b: { x: number; y: number };
  radiusPx?: number;
}

export interface StrokeCmd {
  kind: "stroke";
  points: { x: number; y: number }[];
}

export interface LabelCmd {
  kind: "label";
  text: string;
  x: number;
  y: number;
  size: number;
}

export interface ButtonCmd {
  kind: "button";
  rect: Rect;
  text: string;
}

export interface MenuCmd {
  kind: "menu";
  cx: number;
  cy: number;
  radiusPx: number;
  options: string[];
}

export interface GridCmd {
  kind: "grid";
  cells: { rect: Rect; text: string }[];
}

export interface ReticleCmd {
  kind: "reticle";
  x: number;
  y: number;
  onPanel: boolean;
}

export interface VideoCmd {
  kind: "video";
  rect: Rect;
}

export interface ImageCmd {
  kind: "image";
  rect: Rect;
  src: string;
}

export type DrawCmd =
  | PanelCmd
  | VideoCmd
  | ImageCmd
  | MarkerCmd
  | StrokeCmd
  | LabelCmd
  | ButtonCmd
  | MenuCmd
  | GridCmd
  | ReticleCmd;

const VIDEO_BUTTONS = ["menu", "clear marks", "clear sketch", "screenshot"];
const MENU_OPTIONS = ["line", "arrow", "circle", "sketch"];
const VIDEO_STRIP_V = 0.9;
const IMAGE_STRIP_V = 0.12;
const IMAGE_CONTENT_V0 = 0.15;

export function markerCmd(marker: Marker, rect: Rect, aspect: number): MarkerCmd {
  let pa: Vec2;
  let pb: Vec2;
  if (marker.kind === "line") {
    pa = marker.p1;
    pb = marker.p2;
  } else if (marker.kind === "arrow") {
    pa = marker.head;
    pb = marker.tail;
  } else {
    pa = marker.center;
    pb = marker.radius_point;
  }
  const a = markerToCanvas(rect, pa[0], pa[1], aspect);
  const b = markerToCanvas(rect, pb[0], pb[1], aspect);
  const cmd: MarkerCmd = { kind: "marker", marker: marker.kind, locked: marker.locked, a, b };
  if (marker.kind === "circle") {
    cmd.radiusPx = Math.hypot(b.x - a.x, b.y - a.y);
  }
  return cmd;
}

export function layoutScene(snap: Snapshot, view: ViewConfig): DrawCmd[] {
  const cmds: DrawCmd[] = [];
  const head = snap.head;
  const rects = new Map<string, Rect>();

  for (const panel of snap.panels) {
    const rect = panelRect(panel, head, view);
    rects.set(panel.id, rect);
    cmds.push({
      kind: "panel",
      id: panel.id,
      panelKind: panel.kind,
      rect,
      interactive: panel.interactive,
    });
    if (panel.kind === "video") {
      cmds.push({
        kind: "video",
        rect: { x: rect.x, y: rect.y, w: rect.w, h: rect.h * VIDEO_STRIP_V },
      });
      // Bottom control strip.
      for (let i = 0; i < VIDEO_BUTTONS.length; i++) {
        const r: Rect = {
          x: rect.x + (i / VIDEO_BUTTONS.length) * rect.w,
          y: rect.y + VIDEO_STRIP_V * rect.h,
          w: rect.w / VIDEO_BUTTONS.length,
          h: (1 - VIDEO_STRIP_V) * rect.h,
        };
        cmds.push({ kind: "button", rect: r, text: VIDEO_BUTTONS[i] });
      }
      const aspect = snap.video_aspect;
      for (const stroke of snap.strokes) {
        cmds.push({
          kind: "stroke",
          points: stroke.points.map((p) => markerToCanvas(rect, p[0], p[1], aspect)),
        });
      }
      for (const marker of snap.markers) {
        cmds.push(markerCmd(marker, rect, aspect));
      }
      if (snap.tool.state === "dragging_create" && snap.tool.anchor && snap.tool.current) {
        const ghost: Marker =
          snap.tool.kind === "circle"
            ? {
                id: -1, kind: "circle", locked: false,
                center: snap.tool.anchor, radius_point: snap.tool.current,
              }
            : snap.tool.kind === "arrow"
              ? { id: -1, kind: "arrow", locked: false, head: snap.tool.anchor, tail: snap.tool.current }
              : { id: -1, kind: "line", locked: false, p1: snap.tool.anchor, p2: snap.tool.current };
        cmds.push(markerCmd(ghost, rect, aspect));
      }
      if (snap.tool.state === "sketching" && snap.tool.points) {
        cmds.push({
          kind: "stroke",
          points: snap.tool.points.map((p) => markerToCanvas(rect, p[0], p[1], aspect)),
        });
      }
      if (snap.tool.state === "menu_open") {
        const c = uvToCanvas(rect, 0.5, 0.45);
        cmds.push({
          kind: "menu",
          cx: c.x,
          cy: c.y,
          radiusPx: lengthToPx(rect, 0.18),
          options: MENU_OPTIONS,
        });
      }
      if (snap.trial) {
        cmds.push({
          kind: "label",
          text: `trial ${snap.trial.trial_id}: ${snap.trial.label}`,
          x: rect.x + 6,
          y: rect.y + 14,
          size: 12,
        });
      }
    } else if (panel.kind === "image") {
      cmds.push(...imagePanelCmds(snap, rect));
    } else {
      cmds.push(...helpPanelCmds(panel.kind, rect));
    }
  }

  const ret = dirToCanvas(snap.reticle, head, view);
  cmds.push({ kind: "reticle", x: ret.x, y: ret.y, onPanel: snap.hit !== null });
  return cmds;
}

function imagePanelCmds(snap: Snapshot, rect: Rect): DrawCmd[] {
  const cmds: DrawCmd[] = [];
  const b = snap.browser;
  const strip = (u0: number, u1: number): Rect => ({
    x: rect.x + u0 * rect.w,
    y: rect.y,
    w: (u1 - u0) * rect.w,
    h: IMAGE_STRIP_V * rect.h,
  });
  if (b.mode !== "folder_grid") {
    cmds.push({ kind: "button", rect: strip(0, 0.25), text: "back" });
  }
  if (b.mode !== "full_image") {
    cmds.push({ kind: "button", rect: strip(0.5, 0.75), text: "<" });
    cmds.push({ kind: "button", rect: strip(0.75, 1.0), text: ">" });
  }
  if (b.mode === "full_image") {
    const content: Rect = {
      x: rect.x,
      y: rect.y + IMAGE_CONTENT_V0 * rect.h,
      w: rect.w,
      h: (1 - IMAGE_CONTENT_V0) * rect.h,
    };
    if (b.image) {
      cmds.push({ kind: "image", rect: content, src: b.image });
    }
    cmds.push({
      kind: "label",
      text: `${b.folder ?? ""} ${b.index + 1}/${b.image_count ?? 0}`,
      x: rect.x + 0.28 * rect.w,
      y: rect.y + 0.08 * rect.h,
      size: 11,
    });
  } else {
    const cells: { rect: Rect; text: string }[] = [];
    for (let i = 0; i < b.visible.length; i++) {
      const row = Math.floor(i / 3);
      const col = i % 3;
      cells.push({
        rect: {
          x: rect.x + (col / 3) * rect.w,
          y: rect.y + (IMAGE_CONTENT_V0 + (row / 3) * (1 - IMAGE_CONTENT_V0)) * rect.h,
          w: rect.w / 3,
          h: ((1 - IMAGE_CONTENT_V0) / 3) * rect.h,
        },
        text: shortName(b.visible[i]),
      });
    }
    cmds.push({ kind: "grid", cells });
  }
  return cmds;
}

function helpPanelCmds(kind: string, rect: Rect): DrawCmd[] {
  const lines =
    kind === "help_left"
      ? ["CONTROLS", "Z / LMB: left button", "X / RMB: right button", "R: recenter reticle", "Esc: release pointer"]
      : ["LEFT: select, draw, prev", "RIGHT: follow-head, next", "strip: menu, clears,", "screenshot"];
  return lines.map((text, i) => ({
    kind: "label",
    text,
    x: rect.x + 8,
    y: rect.y + 18 + i * 16,
    size: 11,
  }));
}

function shortName(path: string): string {
  const parts = path.split("/");
  return parts[parts.length - 1] || path;
}

// -- canvas execution ---------------------------------------------------------

const PANEL_BG = "#141821";
const PANEL_EDGE = "#3a4256";
const MARKER_COLOR = "#e03030";
const LOCKED_COLOR = "#30c060";
const SKETCH_COLOR = "#f0dc3c";
const HANDLE_COLOR = "#ff5858";

export function drawScene(
  ctx: CanvasRenderingContext2D,
  cmds: DrawCmd[],
  view: ViewConfig,
  video: HTMLVideoElement | null,
  images: Map<string, HTMLImageElement>,
): void {
  ctx.clearRect(0, 0, view.width, view.height);
  ctx.fillStyle = "#06080c";
  ctx.fillRect(0, 0, view.width, view.height);

  // Everything inside the emulated headset FOV window only.
  const fov = fovRect(view);
  ctx.save();
  ctx.beginPath();
  ctx.rect(fov.x, fov.y, fov.w, fov.h);
  ctx.clip();

  for (const cmd of cmds) {
    switch (cmd.kind) {
      case "panel": {
        ctx.fillStyle = PANEL_BG;
        ctx.fillRect(cmd.rect.x, cmd.rect.y, cmd.rect.w, cmd.rect.h);
        ctx.strokeStyle = PANEL_EDGE;
        ctx.strokeRect(cmd.rect.x, cmd.rect.y, cmd.rect.w, cmd.rect.h);
        break;
      }
      case "video": {
        if (video && video.readyState >= 2) {
          ctx.drawImage(video, cmd.rect.x, cmd.rect.y, cmd.rect.w, cmd.rect.h);
        } else {
          testPattern(ctx, cmd.rect);
        }
        break;
      }
      case "image": {
        const img = images.get(cmd.src);
        if (img && img.complete) {
          ctx.drawImage(img, cmd.rect.x, cmd.rect.y, cmd.rect.w, cmd.rect.h);
        } else {
          ctx.fillStyle = "#202633";
          ctx.fillRect(cmd.rect.x, cmd.rect.y, cmd.rect.w, cmd.rect.h);
        }
        break;
      }
      case "button": {
        ctx.fillStyle = "#222a3a";
        ctx.fillRect(cmd.rect.x + 1, cmd.rect.y + 1, cmd.rect.w - 2, cmd.rect.h - 2);
        ctx.fillStyle = "#c6d0e2";
        ctx.font = "10px system-ui";
        ctx.textAlign = "center";
        ctx.textBaseline = "middle";
        ctx.fillText(cmd.text, cmd.rect.x + cmd.rect.w / 2, cmd.rect.y + cmd.rect.h / 2);
        break;
      }
      case "label": {
        ctx.fillStyle = "#c6d0e2";
        ctx.font = `${cmd.size}px system-ui`;
        ctx.textAlign = "left";
        ctx.textBaseline = "alphabetic";
        ctx.fillText(cmd.text, cmd.x, cmd.y);
        break;
      }
      case "grid": {
        for (const cell of cmd.cells) {
          ctx.strokeStyle = PANEL_EDGE;
          ctx.strokeRect(cell.rect.x + 2, cell.rect.y + 2, cell.rect.w - 4, cell.rect.h - 4);
          ctx.fillStyle = "#9aa7bd";
          ctx.font = "9px system-ui";
          ctx.textAlign = "center";
          ctx.textBaseline = "middle";
          ctx.fillText(
            cell.text.slice(0, 18),
            cell.rect.x + cell.rect.w / 2,
            cell.rect.y + cell.rect.h / 2,
            cell.rect.w - 8,
          );
        }
        break;
      }
      case "marker": {
        drawMarker(ctx, cmd);
        break;
      }
      case "stroke": {
        if (cmd.points.length < 2) break;
        ctx.strokeStyle = SKETCH_COLOR;
        ctx.lineWidth = 2;
        ctx.beginPath();
        ctx.moveTo(cmd.points[0].x, cmd.points[0].y);
        for (const p of cmd.points.slice(1)) ctx.lineTo(p.x, p.y);
        ctx.stroke();
        ctx.lineWidth = 1;
        break;
      }
      case "menu": {
        drawMenu(ctx, cmd);
        break;
      }
      case "reticle": {
        ctx.strokeStyle = cmd.onPanel ? "#ffffff" : "#808a9c";
        ctx.lineWidth = 2;
        ctx.beginPath();
        ctx.arc(cmd.x, cmd.y, 6, 0, 2 * Math.PI);
        ctx.stroke();
        ctx.beginPath();
        ctx.arc(cmd.x, cmd.y, 1, 0, 2 * Math.PI);
        ctx.stroke();
        ctx.lineWidth = 1;
        break;
      }
    }
  }

  ctx.restore();
  // FOV frame on top.
  ctx.strokeStyle = "#5a657d";
  ctx.setLineDash([6, 4]);
  ctx.strokeRect(fov.x, fov.y, fov.w, fov.h);
  ctx.setLineDash([]);
}

function drawMarker(ctx: CanvasRenderingContext2D, cmd: MarkerCmd): void {
  const color = cmd.locked ? LOCKED_COLOR : MARKER_COLOR;
  ctx.strokeStyle = color;
  ctx.lineWidth = 2;
  if (cmd.marker === "circle") {
    ctx.beginPath();
    ctx.arc(cmd.a.x, cmd.a.y, cmd.radiusPx ?? 0, 0, 2 * Math.PI);
    ctx.stroke();
  } else {
    ctx.beginPath();
    ctx.moveTo(cmd.a.x, cmd.a.y);
    ctx.lineTo(cmd.b.x, cmd.b.y);
    ctx.stroke();
    if (cmd.marker === "arrow") {
      const ang = Math.atan2(cmd.b.y - cmd.a.y, cmd.b.x - cmd.a.x);
      const len = 0.25 * Math.hypot(cmd.b.x - cmd.a.x, cmd.b.y - cmd.a.y);
      for (const s of [-1, 1]) {
        ctx.beginPath();
        ctx.moveTo(cmd.a.x, cmd.a.y);
        ctx.lineTo(
          cmd.a.x + len * Math.cos(ang + s * 0.52),
          cmd.a.y + len * Math.sin(ang + s * 0.52),
        );
        ctx.stroke();
      }
    }
  }
  ctx.lineWidth = 1;
  // Red picking dots on both defining points.
  ctx.fillStyle = HANDLE_COLOR;
  for (const p of [cmd.a, cmd.b]) {
    ctx.beginPath();
    ctx.arc(p.x, p.y, 3, 0, 2 * Math.PI);
    ctx.fill();
  }
}

function drawMenu(ctx: CanvasRenderingContext2D, cmd: MenuCmd): void {
  ctx.fillStyle = "rgba(16, 20, 30, 0.85)";
  ctx.beginPath();
  ctx.arc(cmd.cx, cmd.cy, cmd.radiusPx, 0, 2 * Math.PI);
  ctx.fill();
  ctx.strokeStyle = "#8a96ad";
  ctx.stroke();
  for (const s of [Math.PI / 4, (3 * Math.PI) / 4, (5 * Math.PI) / 4, (7 * Math.PI) / 4]) {
    ctx.beginPath();
    ctx.moveTo(cmd.cx, cmd.cy);
    ctx.lineTo(cmd.cx + cmd.radiusPx * Math.cos(s), cmd.cy + cmd.radiusPx * Math.sin(s));
    ctx.stroke();
  }
  ctx.fillStyle = "#e4e9f2";
  ctx.font = "11px system-ui";
  ctx.textAlign = "center";
  ctx.textBaseline = "middle";
  const r = cmd.radiusPx * 0.6;
  const slots: [number, number][] = [
    [0, -r],
    [r, 0],
    [0, r],
    [-r, 0],
  ];
  cmd.options.forEach((opt, i) => {
    ctx.fillText(opt, cmd.cx + slots[i][0], cmd.cy + slots[i][1]);
  });
}

function testPattern(ctx: CanvasRenderingContext2D, rect: Rect): void {
  ctx.fillStyle = "#1d2530";
  ctx.fillRect(rect.x, rect.y, rect.w, rect.h);
  ctx.strokeStyle = "#2d3845";
  for (let i = 1; i < 8; i++) {
    ctx.beginPath();
    ctx.moveTo(rect.x + (i / 8) * rect.w, rect.y);
    ctx.lineTo(rect.x + (i / 8) * rect.w, rect.y + rect.h);
    ctx.stroke();
    ctx.beginPath();
    ctx.moveTo(rect.x, rect.y + (i / 8) * rect.h);
    ctx.lineTo(rect.x + rect.w, rect.y + (i / 8) * rect.h);
    ctx.stroke();
  }
  ctx.fillStyle = "#57637a";
  ctx.font = "12px system-ui";
  ctx.textAlign = "center";
  ctx.textBaseline = "middle";
  ctx.fillText("no video source", rect.x + rect.w / 2, rect.y + rect.h / 2);
}
