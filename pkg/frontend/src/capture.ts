/**
 * Frame capture: polls a landmark producer at camera rate and emits
 * schema-conformant frame records with session-clock timestamps.
 *
 * When the producer has no face (subject out of frame, model warming up)
 * the frame is skipped entirely: the schema requires all 478 points, so
 * no partial records are ever sent.
 */

import { SessionClock } from "./clock.js";
import { buildFrame, FrameRecord, Point3 } from "./protocol.js";

export interface LandmarkFrameData {
  face: Point3[] | null;
  leftHand: Point3[] | null;
  rightHand: Point3[] | null;
}

export type FrameProducer = (t_ms: number) => LandmarkFrameData;

export interface CaptureEvents {
  onFrame: (record: FrameRecord) => void;
  onFaceLost: (lost: boolean) => void;
}

export class CaptureLoop {
  private timer: ReturnType<typeof setInterval> | null = null;

  constructor(
    private readonly producer: FrameProducer,
    private readonly clock: SessionClock,
    private readonly events: CaptureEvents,
    private readonly fps = 30,
  ) {}

  get running(): boolean {
    return this.timer !== null;
  }

  start(): void {
    if (this.timer !== null) return;
    this.clock.reset();
    this.timer = setInterval(() => this.tick(), 1000 / this.fps);
  }

  stop(): void {
    if (this.timer !== null) {
      clearInterval(this.timer);
      this.timer = null;
    }
  }

  /** One capture step; exposed for tests and manual stepping. */
  tick(): void {
    const t_ms = this.clock.next();
    const data = this.producer(t_ms);
    if (data.face === null) {
      this.events.onFaceLost(true);
      return;
    }
    this.events.onFaceLost(false);
    this.events.onFrame(buildFrame(t_ms, data.face, data.leftHand, data.rightHand));
  }
}
