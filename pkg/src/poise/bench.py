"""Synthetic-trace benchmark of the per-frame processing budget.

Generates a scripted behavior preset, runs the full pipeline in-process,
and reports per-frame latency percentiles against the 30 ms frame budget
plus the resulting mean confidence. Frame generation happens up front so
only engine time is measured.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .config import EngineConfig
from .engine import SessionEngine
from .scoring import SessionSummary, categorize
from .synthetic import PRESETS, generate_preset

FRAME_BUDGET_MS = 30.0


@dataclass(frozen=True)
class BenchResult:
    preset: str
    duration_s: float
    fps: float
    frames: int
    reports: int
    p50_ms: float
    p95_ms: float
    p99_ms: float
    max_ms: float
    mean_ms: float
    sustained_fps: float
    budget_ms: float
    within_budget: bool
    mean_percentage: float
    mean_category: str
    samples_ms: tuple[float, ...]

    def to_obj(self) -> dict:
        return {
            "preset": self.preset,
            "duration_s": self.duration_s,
            "fps": self.fps,
            "frames": self.frames,
            "reports": self.reports,
            "latency_ms": {
                "p50": self.p50_ms,
                "p95": self.p95_ms,
                "p99": self.p99_ms,
                "max": self.max_ms,
                "mean": self.mean_ms,
            },
            "sustained_fps": self.sustained_fps,
            "budget_ms": self.budget_ms,
            "within_budget": self.within_budget,
            "mean_percentage": self.mean_percentage,
            "mean_category": self.mean_category,
        }


def run_bench(
    preset: str,
    duration_s: float,
    fps: float,
    config: EngineConfig,
) -> tuple[BenchResult, SessionSummary]:
    if preset not in PRESETS:
        raise ValueError(f"unknown preset {preset!r}; choose from {sorted(PRESETS)}")
    frames = list(generate_preset(preset, duration_s, fps, config.calibration_frames))
    engine = SessionEngine(config)
    samples_ms: list[float] = []
    for frame in frames:
        t0 = time.perf_counter_ns()
        engine.process(frame)
        samples_ms.append((time.perf_counter_ns() - t0) / 1e6)
    summary = engine.summary()
    arr = np.asarray(samples_ms)
    p50, p95, p99 = (float(v) for v in np.percentile(arr, [50, 95, 99]))
    mean_ms = float(arr.mean())
    result = BenchResult(
        preset=preset,
        duration_s=duration_s,
        fps=fps,
        frames=len(frames),
        reports=len(engine.reports),
        p50_ms=p50,
        p95_ms=p95,
        p99_ms=p99,
        max_ms=float(arr.max()),
        mean_ms=mean_ms,
        sustained_fps=1000.0 / mean_ms if mean_ms > 0 else float("inf"),
        budget_ms=FRAME_BUDGET_MS,
        within_budget=p95 < FRAME_BUDGET_MS,
        mean_percentage=summary.mean_percentage,
        mean_category=categorize(summary.mean_weighted_total),
        samples_ms=tuple(samples_ms),
    )
    return result, summary


def format_bench_table(result: BenchResult) -> str:
    rows = [
        ("preset", result.preset),
        ("frames", f"{result.frames} ({result.duration_s:g} s @ {result.fps:g} fps)"),
        ("reports", str(result.reports)),
        ("p50 latency", f"{result.p50_ms:.3f} ms"),
        ("p95 latency", f"{result.p95_ms:.3f} ms"),
        ("p99 latency", f"{result.p99_ms:.3f} ms"),
        ("max latency", f"{result.max_ms:.3f} ms"),
        ("mean latency", f"{result.mean_ms:.3f} ms"),
        ("max sustained fps", f"{result.sustained_fps:.0f}"),
        ("frame budget", f"{result.budget_ms:g} ms"),
        ("p95 within budget", "yes" if result.within_budget else "NO"),
        ("mean confidence", f"{result.mean_percentage:.2f}%"),
        ("mean category", result.mean_category),
    ]
    width = max(len(k) for k, _ in rows)
    return "\n".join(f"{k:<{width}}  {v}" for k, v in rows)
