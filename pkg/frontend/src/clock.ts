/**
 * Session clock: millisecond timestamps starting at 0 on the first frame,
 * guaranteed strictly increasing integers (the engine rejects repeats).
 */

export class SessionClock {
  private origin: number | null = null;
  private last = -1;

  constructor(private readonly now: () => number = () => performance.now()) {}

  /** Timestamp for the next frame. */
  next(): number {
    const wall = this.now();
    if (this.origin === null) {
      this.origin = wall;
    }
    let t = Math.round(wall - this.origin);
    if (t <= this.last) {
      t = this.last + 1;
    }
    this.last = t;
    return t;
  }

  reset(): void {
    this.origin = null;
    this.last = -1;
  }
}
