/** Wire protocol types and codecs for the engine's WebSocket channel. */

export type Vec2 = [number, number];

export interface LineMarker {
  id: number;
  kind: "line";
  p1: Vec2;
  p2: Vec2;
  locked: boolean;
}

export interface ArrowMarker {
  id: number;
  kind: "arrow";
  head: Vec2;
  tail: Vec2;
  locked: boolean;
}

export interface CircleMarker {
  id: number;
  kind: "circle";
  center: Vec2;
  radius_point: Vec2;
  locked: boolean;
}

export type Marker = LineMarker | ArrowMarker | CircleMarker;

export interface Stroke {
  id: number;
  points: Vec2[];
}

export interface PanelInfo {
  id: string;
  kind: string;
  yaw: number; // radians, world
  pitch: number;
  w_deg: number;
  h_deg: number;
  aspect: number;
  interactive: boolean;
}

export interface PanelHit {
  panel: string;
  kind: string;
  u: number;
  v: number;
}

export interface ToolInfo {
  state: string;
  kind?: string;
  anchor?: Vec2;
  current?: Vec2;
  points?: Vec2[];
  marker_id?: number;
  handle?: string;
}

export interface BrowserView {
  mode: string;
  folder: string | null;
  index: number;
  grid_page: number;
  visible: string[];
  image: string | null;
  image_count: number | null;
}

export interface TrialInfo {
  trial_id: number;
  label: string;
  condition: unknown;
  start_ms: number;
  task: { targets: Vec2[]; green_ring: Vec2 | null; kind: string; level: string };
}

export interface Snapshot {
  type: "snapshot";
  schema: number;
  tick: number;
  time_ms: number;
  head: Vec2;
  reticle: Vec2;
  mode: string;
  hit: PanelHit | null;
  tool: ToolInfo;
  markers: Marker[];
  strokes: Stroke[];
  browser: BrowserView;
  follow: boolean;
  anchor: Vec2;
  panels: PanelInfo[];
  video_aspect: number;
  captures: number;
  trial: TrialInfo | null;
  results: number;
}

export interface HelloAck {
  type: "hello_ack";
  client_id: number;
  role: "writer" | "observer";
  config: Record<string, unknown>;
}

export interface TrialComplete {
  type: "trial_complete";
  result: Record<string, unknown> & { trial_id: number; accuracy: number };
}

export interface ErrorMessage {
  type: "error";
  message: string;
}

export type ServerMessage = Snapshot | HelloAck | TrialComplete | ErrorMessage;

export function parseServerMessage(raw: string): ServerMessage | null {
  let data: unknown;
  try {
    data = JSON.parse(raw);
  } catch {
    return null;
  }
  if (typeof data !== "object" || data === null) return null;
  const type = (data as { type?: unknown }).type;
  if (
    type === "snapshot" ||
    type === "hello_ack" ||
    type === "trial_complete" ||
    type === "error"
  ) {
    return data as ServerMessage;
  }
  return null;
}

export function isSnapshot(msg: ServerMessage): msg is Snapshot {
  return msg.type === "snapshot";
}

/** Absolute head orientation sample (radians), millisecond timestamp. */
export function encodeGaze(t: number, yaw: number, pitch: number): string {
  return JSON.stringify({ type: "gaze", t, yaw, pitch, source: "mouse" });
}

export type Side = "left" | "right";
export type Edge = "press" | "release";

export function encodeInput(t: number, side: Side, edge: Edge): string {
  return JSON.stringify({ type: "input", t, side, edge, source: "remote" });
}

export function encodeControl(action: string, extra: Record<string, unknown> = {}): string {
  return JSON.stringify({ type: "control", action, ...extra });
}
