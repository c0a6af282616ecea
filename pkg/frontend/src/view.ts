/**
 * Pure view-model helpers: formatting and band colors.
 *
 * Band thresholds mirror the engine's category rule (>= 0.9 High / green,
 * >= 0.6 Medium / amber, below Low / red) so visuals never drift from
 * engine semantics. Scores render on the engine's 0.4-1.2 scale.
 */

import { Category } from "./protocol.js";

export type BandColor = "green" | "amber" | "red";

export const BAND_HEX: Record<BandColor, string> = {
  green: "#2e9e4f",
  amber: "#e0a437",
  red: "#cc4433",
};

const SCALE_MIN = 0.4;
const SCALE_MAX = 1.2;

/** Percentage text exactly as the engine reports it, two decimals. */
export function formatPercentage(percentage: number): string {
  return `${percentage.toFixed(2)}%`;
}

export function bandColor(score: number): BandColor {
  if (score >= 0.9) return "green";
  if (score >= 0.6) return "amber";
  return "red";
}

export function categoryColor(category: Category): BandColor {
  if (category === "High") return "green";
  if (category === "Medium") return "amber";
  return "red";
}

/** Gauge fill fraction for a channel score on the 0.4-1.2 scale. */
export function gaugeFraction(score: number): number {
  const f = (score - SCALE_MIN) / (SCALE_MAX - SCALE_MIN);
  return Math.min(1, Math.max(0, f));
}

export function formatDuration(ms: number): string {
  const totalSeconds = Math.round(ms / 1000);
  const minutes = Math.floor(totalSeconds / 60);
  const seconds = totalSeconds % 60;
  return `${minutes}:${String(seconds).padStart(2, "0")}`;
}
