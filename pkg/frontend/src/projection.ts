/** View math: angular projection of panels into the canvas and the
 * documented affine map from snapshot uv to canvas pixels.
 *
 * The display is a rectilinear-in-angle viewport: a direction offset of
 * one degree from the current head direction moves `pxPerDeg` pixels on
 * screen. Panels therefore render as axis-aligned rectangles and every
 * point stored in panel uv maps to pixels through `markerToCanvas`, an
 * affine function of (u, v):
 *
 *   x = rect.x + (u / aspect) * rect.w        (u in [0, aspect])
 *   y = rect.y + v * rect.h                   (v in [0, 1])
 */

import type { PanelInfo, Vec2 } from "./protocol.js";

export interface ViewConfig {
  width: number; // canvas px
  height: number;
  pxPerDeg: number;
  fovDeg: Vec2; // emulated display window, degrees
}

export interface Rect {
  x: number;
  y: number;
  w: number;
  h: number;
}

const RAD2DEG = 180 / Math.PI;

export function wrapRad(a: number): number {
  let r = a % (2 * Math.PI);
  if (r <= -Math.PI) r += 2 * Math.PI;
  else if (r > Math.PI) r -= 2 * Math.PI;
  return r;
}

/** Canvas position of a world direction, given the current head direction. */
export function dirToCanvas(dir: Vec2, head: Vec2, view: ViewConfig): { x: number; y: number } {
  const dyaw = wrapRad(dir[0] - head[0]) * RAD2DEG;
  const dpitch = (dir[1] - head[1]) * RAD2DEG;
  return {
    x: view.width / 2 + dyaw * view.pxPerDeg,
    y: view.height / 2 - dpitch * view.pxPerDeg,
  };
}

/** Screen rectangle of a panel for the current head direction. */
export function panelRect(panel: PanelInfo, head: Vec2, view: ViewConfig): Rect {
  const center = dirToCanvas([panel.yaw, panel.pitch], head, view);
  const w = panel.w_deg * view.pxPerDeg;
  const h = panel.h_deg * view.pxPerDeg;
  return { x: center.x - w / 2, y: center.y - h / 2, w, h };
}

/**
 * The documented affine uv -> pixel map for annotation geometry.
 * `u` is aspect-corrected (u in [0, aspect]); `v` in [0, 1].
 */
export function markerToCanvas(
  rect: Rect,
  u: number,
  v: number,
  aspect: number,
): { x: number; y: number } {
  return {
    x: rect.x + (u / aspect) * rect.w,
    y: rect.y + v * rect.h,
  };
}

/** Plain panel uv (both axes in [0,1]) to pixels; used for controls/grids. */
export function uvToCanvas(rect: Rect, u: number, v: number): { x: number; y: number } {
  return { x: rect.x + u * rect.w, y: rect.y + v * rect.h };
}

/** Marker distances are isotropic in corrected units: 1.0 == panel height. */
export function lengthToPx(rect: Rect, units: number): number {
  return units * rect.h;
}

/** The emulated narrow display window, centered in the canvas. */
export function fovRect(view: ViewConfig): Rect {
  const w = view.fovDeg[0] * view.pxPerDeg;
  const h = view.fovDeg[1] * view.pxPerDeg;
  return { x: view.width / 2 - w / 2, y: view.height / 2 - h / 2, w, h };
}

/** Inverse of the engine's panel-plane mapping: panel uv to a world
 * direction (radians), assuming an un-anchored (identity) scene. Matches
 * the engine's tangent-plane geometry so synthetic drivers can aim. */
export function panelUvToDir(panel: PanelInfo, u: number, v: number): Vec2 {
  const halfW = Math.tan(((panel.w_deg / 2) * Math.PI) / 180);
  const halfH = Math.tan(((panel.h_deg / 2) * Math.PI) / 180);
  const lu = (u - 0.5) * 2 * halfW;
  const lv = (v - 0.5) * 2 * halfH;

  // Panel frame at unit distance along its center direction.
  const cy = Math.cos(panel.yaw), sy = Math.sin(panel.yaw);
  const cp = Math.cos(panel.pitch), sp = Math.sin(panel.pitch);
  const n = [sy * cp, sp, cy * cp];
  const upCrossN = [cy, 0, -sy]; // normalize(cross(up, n)) for this frame
  const uAxis = upCrossN;
  const nCrossU = [
    n[1] * uAxis[2] - n[2] * uAxis[1],
    n[2] * uAxis[0] - n[0] * uAxis[2],
    n[0] * uAxis[1] - n[1] * uAxis[0],
  ];
  const vAxis = [-nCrossU[0], -nCrossU[1], -nCrossU[2]];
  const p = [
    n[0] + lu * uAxis[0] + lv * vAxis[0],
    n[1] + lu * uAxis[1] + lv * vAxis[1],
    n[2] + lu * uAxis[2] + lv * vAxis[2],
  ];
  const norm = Math.hypot(p[0], p[1], p[2]);
  return [Math.atan2(p[0], p[2]), Math.asin(p[1] / norm)];
}
