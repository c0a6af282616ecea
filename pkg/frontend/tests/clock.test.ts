import { describe, expect, it } from "vitest";

import { SessionClock } from "../src/clock.js";

describe("session clock", () => {
  it("starts at zero on the first frame", () => {
    let wall = 12345.6;
    const clock = new SessionClock(() => wall);
    expect(clock.next()).toBe(0);
  });

  it("is strictly increasing even when wall time stalls", () => {
    let wall = 0;
    const clock = new SessionClock(() => wall);
    const a = clock.next();
    const b = clock.next(); // same wall instant
    wall = 0.2; // rounds to the same millisecond
    const c = clock.next();
    expect(b).toBeGreaterThan(a);
    expect(c).toBeGreaterThan(b);
  });

  it("tracks wall time at camera cadence", () => {
    let wall = 0;
    const clock = new SessionClock(() => wall);
    const ts: number[] = [];
    for (let i = 0; i < 5; i++) {
      wall = (i * 1000) / 30;
      ts.push(clock.next());
    }
    expect(ts).toEqual([0, 33, 67, 100, 133]);
  });

  it("reset starts a fresh session", () => {
    let wall = 100;
    const clock = new SessionClock(() => wall);
    clock.next();
    wall = 250;
    clock.reset();
    expect(clock.next()).toBe(0);
  });
});
