/**
 * Client-side copy of every frame sent, downloadable as a `.pose.ndjson`
 * session file that the engine CLI replays directly.
 */

import { FACE_POINT_COUNT, FrameRecord, HAND_POINT_COUNT } from "./protocol.js";

export class SessionCopy {
  private frames: FrameRecord[] = [];
  private startedAt = "";

  begin(startedAt: string = new Date().toISOString()): void {
    this.frames = [];
    this.startedAt = startedAt;
  }

  add(record: FrameRecord): void {
    this.frames.push(record);
  }

  get frameCount(): number {
    return this.frames.length;
  }

  /** Header line plus one session-file record per frame (no type field). */
  toNdjson(source = "dashboard"): string {
    const header = JSON.stringify({
      format_version: 1,
      source,
      started_at: this.startedAt,
      face_point_count: FACE_POINT_COUNT,
      hand_point_count: HAND_POINT_COUNT,
    });
    const lines = this.frames.map((f) =>
      JSON.stringify({
        t_ms: f.t_ms,
        face: f.face,
        left_hand: f.left_hand,
        right_hand: f.right_hand,
      }),
    );
    return [header, ...lines].map((line) => line + "\n").join("");
  }
}

/** Trigger a browser download of the session copy. */
export function downloadSession(copy: SessionCopy, filename = "session.pose.ndjson"): void {
  const blob = new Blob([copy.toNdjson()], { type: "application/x-ndjson" });
  const url = URL.createObjectURL(blob);
  const anchor = document.createElement("a");
  anchor.href = url;
  anchor.download = filename;
  anchor.click();
  URL.revokeObjectURL(url);
}
