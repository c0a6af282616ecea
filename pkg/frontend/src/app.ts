/**
 * Dashboard wiring: connects the capture loop, engine socket, state store,
 * and DOM. All numbers on screen come from engine reports; this file only
 * moves them into elements.
 */

import { CaptureLoop, FrameProducer } from "./capture.js";
import { SessionClock } from "./clock.js";
import { demoProducer } from "./demo.js";
import { WebcamSource } from "./mediapipe.js";
import { CHANNELS, FrameRecord } from "./protocol.js";
import { downloadSession, SessionCopy } from "./recorder.js";
import { EngineSocket } from "./socket.js";
import {
  applyError,
  applyFaceLost,
  applyFrameSent,
  applyReport,
  applySessionStart,
  applyStatus,
  applyStopRequested,
  applySummary,
  calibrationProgress,
  DashboardState,
  initialState,
  isCalibrating,
} from "./state.js";
import {
  BAND_HEX,
  bandColor,
  categoryColor,
  formatDuration,
  formatPercentage,
  gaugeFraction,
} from "./view.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

let state: DashboardState = initialState();
let webcam: WebcamSource | null = null;
const clock = new SessionClock();
const copy = new SessionCopy();
let loop: CaptureLoop | null = null;

const socket = new EngineSocket({
  onStatus: (status) => update(applyStatus(state, status)),
  onReport: (report) => update(applyReport(state, report)),
  onError: (error) => {
    update(applyError(state, error));
    toast(`${error.code}: ${error.message}`);
  },
  onSummary: (summary) => update(applySummary(state, summary)),
  onProtocolProblem: (detail) => toast(detail),
});

function update(next: DashboardState): void {
  state = next;
  render();
}

function toast(text: string): void {
  const node = el<HTMLDivElement>("toast");
  node.textContent = text;
  node.classList.add("visible");
  window.setTimeout(() => node.classList.remove("visible"), 4000);
}

function sendFrame(record: FrameRecord): void {
  socket.sendFrame(record);
  copy.add(record);
  update(applyFrameSent(state));
}

function startSession(producer: FrameProducer): void {
  copy.begin();
  update(applySessionStart(state));
  loop?.stop();
  loop = new CaptureLoop(producer, clock, {
    onFrame: sendFrame,
    onFaceLost: (lost) => update(applyFaceLost(state, lost)),
  });
  loop.start();
}

async function startCamera(): Promise<void> {
  try {
    webcam = await WebcamSource.open(el<HTMLVideoElement>("preview"));
  } catch (e) {
    el<HTMLDivElement>("banner").textContent =
      `Camera or model unavailable: ${e}. Demo mode still works.`;
    el<HTMLDivElement>("banner").classList.add("visible");
    return;
  }
  startSession((t_ms) => webcam!.produce(t_ms));
}

function stopSession(): void {
  loop?.stop();
  loop = null;
  update(applyStopRequested(state));
  socket.end();
}

function render(): void {
  el<HTMLSpanElement>("status").textContent = state.connection;
  el<HTMLSpanElement>("status").dataset.state = state.connection;

  const report = state.latestReport;
  const headline = el<HTMLDivElement>("percentage");
  const category = el<HTMLDivElement>("category");
  if (report) {
    headline.textContent = formatPercentage(report.percentage);
    category.textContent = report.category;
    category.style.color = BAND_HEX[categoryColor(report.category)];
  } else {
    headline.textContent = "--";
    category.textContent = "";
  }

  const calibrating = isCalibrating(state);
  el<HTMLDivElement>("calibration").style.display = calibrating ? "block" : "none";
  el<HTMLDivElement>("calibration-fill").style.width =
    `${Math.round(calibrationProgress(state) * 100)}%`;

  el<HTMLDivElement>("face-lost").style.display = state.faceLost ? "block" : "none";

  for (const name of CHANNELS) {
    const fill = el<HTMLDivElement>(`gauge-${name}`);
    const label = el<HTMLSpanElement>(`gauge-${name}-value`);
    const score = state.gauges?.[name];
    if (score === undefined) {
      fill.style.width = "0%";
      label.textContent = "-";
    } else {
      fill.style.width = `${gaugeFraction(score) * 100}%`;
      fill.style.background = BAND_HEX[bandColor(score)];
      label.textContent = score.toFixed(2);
    }
  }

  drawTimeline();
  renderSummary();
}

function drawTimeline(): void {
  const canvas = el<HTMLCanvasElement>("timeline");
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const points = state.timeline;
  if (points.length < 2) return;
  const t0 = points[0].t_ms;
  const t1 = points[points.length - 1].t_ms;
  const span = Math.max(1, t1 - t0);
  ctx.beginPath();
  points.forEach((p, i) => {
    const x = ((p.t_ms - t0) / span) * canvas.width;
    const y = canvas.height - (p.percentage / 100) * canvas.height;
    if (i === 0) ctx.moveTo(x, y);
    else ctx.lineTo(x, y);
  });
  ctx.strokeStyle = "#1f5fa8";
  ctx.lineWidth = 2;
  ctx.stroke();
}

function renderSummary(): void {
  const card = el<HTMLDivElement>("summary");
  const stats = el<HTMLDivElement>("summary-stats");
  const insufficient = el<HTMLParagraphElement>("summary-insufficient");
  const summary = state.summary;
  if (state.insufficientData) {
    card.classList.add("visible");
    stats.style.display = "none";
    insufficient.style.display = "block";
    return;
  }
  insufficient.style.display = "none";
  if (!summary) {
    card.classList.remove("visible");
    return;
  }
  card.classList.add("visible");
  stats.style.display = "block";
  el<HTMLSpanElement>("summary-mean").textContent = formatPercentage(summary.mean_percentage);
  el<HTMLSpanElement>("summary-duration").textContent = formatDuration(summary.duration_ms);
  el<HTMLSpanElement>("summary-blinks").textContent = String(summary.total_blink_count);
  const fractions = summary.category_fractions;
  el<HTMLSpanElement>("summary-categories").textContent = (["High", "Medium", "Low"] as const)
    .map((c) => `${c} ${(fractions[c] * 100).toFixed(0)}%`)
    .join("  ");
}

function wireControls(): void {
  el<HTMLButtonElement>("connect").addEventListener("click", () => {
    socket.connect(el<HTMLInputElement>("engine-url").value);
  });
  el<HTMLButtonElement>("start-camera").addEventListener("click", () => void startCamera());
  el<HTMLButtonElement>("start-demo").addEventListener("click", () => startSession(demoProducer));
  el<HTMLButtonElement>("stop").addEventListener("click", stopSession);
  el<HTMLButtonElement>("download").addEventListener("click", () => downloadSession(copy));
}

wireControls();
render();
