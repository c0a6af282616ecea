/**
 * Dashboard state and its pure update functions.
 *
 * Every displayed number originates in an engine message: the dashboard
 * performs no scoring of its own. Gauges mirror the latest report exactly,
 * and the timeline keeps a rolling window ordered by t_ms.
 */

import {
  Category,
  ChannelName,
  ErrorMessage,
  ReportMessage,
  SummaryMessage,
} from "./protocol.js";
import { ConnectionStatus } from "./socket.js";

export const TIMELINE_SPAN_MS = 60_000;

export interface TimelinePoint {
  t_ms: number;
  percentage: number;
  category: Category;
}

export interface DashboardState {
  connection: ConnectionStatus;
  running: boolean;
  stopRequested: boolean;
  insufficientData: boolean;
  framesSent: number;
  calibrationFrames: number;
  latestReport: ReportMessage | null;
  gauges: Record<ChannelName, number> | null;
  timeline: TimelinePoint[];
  summary: SummaryMessage | null;
  lastError: ErrorMessage | null;
  faceLost: boolean;
}

export function initialState(calibrationFrames = 30): DashboardState {
  return {
    connection: "disconnected",
    running: false,
    stopRequested: false,
    insufficientData: false,
    framesSent: 0,
    calibrationFrames,
    latestReport: null,
    gauges: null,
    timeline: [],
    summary: null,
    lastError: null,
    faceLost: false,
  };
}

export function applyStatus(state: DashboardState, connection: ConnectionStatus): DashboardState {
  return { ...state, connection };
}

export function applySessionStart(state: DashboardState): DashboardState {
  return {
    ...state,
    running: true,
    stopRequested: false,
    insufficientData: false,
    framesSent: 0,
    latestReport: null,
    gauges: null,
    timeline: [],
    summary: null,
    lastError: null,
  };
}

export function applyStopRequested(state: DashboardState): DashboardState {
  return { ...state, stopRequested: true };
}

export function applyFrameSent(state: DashboardState): DashboardState {
  return { ...state, framesSent: state.framesSent + 1 };
}

export function applyFaceLost(state: DashboardState, lost: boolean): DashboardState {
  return state.faceLost === lost ? state : { ...state, faceLost: lost };
}

/** Mirror a report into the gauges and append it to the rolling timeline. */
export function applyReport(state: DashboardState, report: ReportMessage): DashboardState {
  const point: TimelinePoint = {
    t_ms: report.t_ms,
    percentage: report.percentage,
    category: report.category,
  };
  const cutoff = report.t_ms - TIMELINE_SPAN_MS;
  const timeline = [...state.timeline.filter((p) => p.t_ms > cutoff), point];
  return {
    ...state,
    latestReport: report,
    gauges: { ...report.channels },
    timeline,
  };
}

export function applyError(state: DashboardState, error: ErrorMessage): DashboardState {
  // stopping before calibration completes yields no summary; mark the
  // session result as insufficient instead
  const tooShort =
    state.stopRequested &&
    (error.code === "NotCalibrated" || error.code === "EmptySession");
  return {
    ...state,
    lastError: error,
    running: tooShort ? false : state.running,
    insufficientData: tooShort || state.insufficientData,
  };
}

export function applySummary(state: DashboardState, summary: SummaryMessage): DashboardState {
  return { ...state, summary, running: false, insufficientData: false };
}

/** 0..1 progress through the engine's calibration window. */
export function calibrationProgress(state: DashboardState): number {
  if (state.latestReport !== null) return 1;
  return Math.min(1, state.framesSent / state.calibrationFrames);
}

export function isCalibrating(state: DashboardState): boolean {
  return state.running && state.latestReport === null;
}
