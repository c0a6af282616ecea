/**
 * Wire protocol types and frame-record construction.
 *
 * The dashboard speaks newline-delimited JSON messages over a WebSocket:
 * it sends `frame` and `end`, and receives `report`, `error`, and `summary`.
 * A frame message is exactly a session-file record plus the `type` field,
 * so a client-side copy of sent frames is replayable by the engine CLI.
 */

export const FACE_POINT_COUNT = 478;
export const HAND_POINT_COUNT = 21;
export const COORD_MIN = -0.5;
export const COORD_MAX = 1.5;

export type Point3 = [number, number, number];

export const CHANNELS = ["hand", "smile", "lip", "blink", "head", "gaze"] as const;
export type ChannelName = (typeof CHANNELS)[number];
export type Category = "High" | "Medium" | "Low";

export interface FrameRecord {
  type: "frame";
  t_ms: number;
  face: Point3[];
  left_hand: Point3[] | null;
  right_hand: Point3[] | null;
}

export interface ReportMessage {
  type: "report";
  t_ms: number;
  percentage: number;
  category: Category;
  weighted_total: number;
  channels: Record<ChannelName, number>;
  contributions: Record<ChannelName, number>;
  processing_us?: number;
  queue_depth?: number;
}

export interface ErrorMessage {
  type: "error";
  code: string;
  message: string;
}

export interface SummaryMessage {
  type: "summary";
  duration_ms: number;
  report_count: number;
  mean_percentage: number;
  min_percentage: number;
  max_percentage: number;
  mean_weighted_total: number;
  category_fractions: Record<Category, number>;
  total_blink_count: number;
  channel_means: Record<ChannelName, number>;
}

export type EngineMessage = ReportMessage | ErrorMessage | SummaryMessage;

/** Issues that would make the engine reject the record; empty = valid. */
export function frameIssues(record: FrameRecord): string[] {
  const issues: string[] = [];
  if (!Number.isInteger(record.t_ms) || record.t_ms < 0) {
    issues.push(`t_ms must be a non-negative integer, got ${record.t_ms}`);
  }
  checkPoints(record.face, FACE_POINT_COUNT, "face", issues);
  for (const side of ["left_hand", "right_hand"] as const) {
    const pts = record[side];
    if (pts !== null) checkPoints(pts, HAND_POINT_COUNT, side, issues);
  }
  return issues;
}

function checkPoints(points: Point3[], expected: number, name: string, issues: string[]): void {
  if (points.length !== expected) {
    issues.push(`${name} must have exactly ${expected} points, got ${points.length}`);
    return;
  }
  for (const [x, y, z] of points) {
    if (!Number.isFinite(x) || !Number.isFinite(y) || !Number.isFinite(z)) {
      issues.push(`${name} contains a non-finite coordinate`);
      return;
    }
    if (x < COORD_MIN || x > COORD_MAX || y < COORD_MIN || y > COORD_MAX) {
      issues.push(`${name} has x/y outside [${COORD_MIN}, ${COORD_MAX}]`);
      return;
    }
  }
}

/** Build a validated frame record; throws on schema issues. */
export function buildFrame(
  t_ms: number,
  face: Point3[],
  leftHand: Point3[] | null = null,
  rightHand: Point3[] | null = null,
): FrameRecord {
  const record: FrameRecord = {
    type: "frame",
    t_ms,
    face,
    left_hand: leftHand,
    right_hand: rightHand,
  };
  const issues = frameIssues(record);
  if (issues.length > 0) {
    throw new Error(`invalid frame record: ${issues.join("; ")}`);
  }
  return record;
}

export function encodeFrame(record: FrameRecord): string {
  return JSON.stringify(record);
}

export function encodeEnd(): string {
  return JSON.stringify({ type: "end" });
}

/** Decode one engine message; throws on garbage or unknown types. */
export function decodeEngineMessage(raw: string): EngineMessage {
  let obj: unknown;
  try {
    obj = JSON.parse(raw);
  } catch (e) {
    throw new Error(`engine sent invalid JSON: ${e}`);
  }
  if (typeof obj !== "object" || obj === null || Array.isArray(obj)) {
    throw new Error("engine message must be a JSON object");
  }
  const msg = obj as { type?: unknown };
  if (msg.type === "report" || msg.type === "error" || msg.type === "summary") {
    return obj as EngineMessage;
  }
  throw new Error(`unknown engine message type: ${String(msg.type)}`);
}
