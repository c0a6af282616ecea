"""Per-session scoring pipeline: validated frames in, confidence reports out.

One engine owns one session: its calibration, sliding windows, and summary.
Frames are processed strictly in timestamp order by a single logical worker;
a rejected frame (bad order, bad schema upstream) leaves the session state
untouched, so subsequent valid frames score as if it never arrived.
"""

from __future__ import annotations

from .config import EngineConfig
from .errors import DegenerateGeometry, EmptySession, NotCalibrated
from .geometry import FaceTemplate, extract_features, load_default_template
from .landmarks import (
    LandmarkFrame,
    ScaleCalibration,
    compute_scale,
    validate_stream_order,
)
from .scoring import ConfidenceReport, SessionSummary, build_report, summarize
from .temporal import TemporalAnalyzer


class SessionEngine:
    def __init__(self, config: EngineConfig, template: FaceTemplate | None = None):
        self.config = config
        self.template = template if template is not None else load_default_template()
        self.analyzer = TemporalAnalyzer(
            calibration_frames=config.calibration_frames,
            window_span_ms=config.window_span_ms,
            blink_window_span_ms=config.blink_window_ms,
            rate_floor_ms=config.rate_floor_ms,
            blink_close_threshold=config.blink_close_threshold,
            blink_open_threshold=config.blink_open_threshold,
            min_blink_frames=config.min_blink_frames,
            gaze_shift_threshold=config.gaze_shift_threshold,
            gaze_smoothing_frames=config.gaze_smoothing_frames,
            lip_activity_delta=config.lip_activity_delta,
            smile_lar_threshold=config.smile_lar_threshold,
            head_deviation_deg=config.head_deviation_deg,
        )
        self._prev_frame: LandmarkFrame | None = None
        self._prev_t: int | None = None
        self._smoothed_mpu: float | None = None
        self._scored_frames = 0
        self.frames_processed = 0
        self.reports: list[ConfidenceReport] = []

    @property
    def calibrated(self) -> bool:
        return self.analyzer.calibrated

    @property
    def calibration_progress(self) -> float:
        return self.analyzer.calibration_progress

    def _update_scale(self, frame: LandmarkFrame) -> ScaleCalibration | None:
        try:
            raw = compute_scale(frame, self.config.ipd_meters).meters_per_unit
        except DegenerateGeometry:
            raw = None
        if raw is not None:
            if self._smoothed_mpu is None:
                self._smoothed_mpu = raw
            else:
                alpha = self.config.scale_smoothing
                self._smoothed_mpu += alpha * (raw - self._smoothed_mpu)
        if self._smoothed_mpu is None:
            return None
        return ScaleCalibration(self._smoothed_mpu, self.config.ipd_meters)

    def process(self, frame: LandmarkFrame) -> ConfidenceReport | None:
        """Score one frame. Returns None during calibration and on decimated
        frames; raises (without state changes) on a non-monotonic timestamp.
        """
        validate_stream_order(self._prev_t, frame)
        scale = self._update_scale(frame)
        features = extract_features(self._prev_frame, frame, self.template, scale)

        self._prev_frame = frame
        self._prev_t = frame.t_ms
        self.frames_processed += 1

        was_calibrated = self.analyzer.calibrated
        self.analyzer.push(features)
        if not self.analyzer.calibrated:
            return None
        if not was_calibrated:
            # This frame completed calibration; scoring starts on the next.
            if self.config.smile_baseline_relative and self.analyzer.baseline_lar is not None:
                self.analyzer.smile_lar_threshold = (
                    self.analyzer.baseline_lar * self.config.smile_baseline_factor
                )
            return None

        self._scored_frames += 1
        if (self._scored_frames - 1) % self.config.report_every != 0:
            return None
        stats = self.analyzer.windowed_stats(frame.t_ms)
        report = build_report(
            frame.t_ms,
            stats,
            self.config.weights,
            smile_global_multiplier=self.config.smile_global_multiplier,
        )
        self.reports.append(report)
        return report

    def summary(self) -> SessionSummary:
        """Session summary over all emitted reports.

        Raises EmptySession when no frames arrived and NotCalibrated when the
        stream ended inside the calibration window.
        """
        if not self.reports:
            if self.frames_processed == 0:
                raise EmptySession("session contained no frames")
            raise NotCalibrated(
                f"session ended during calibration "
                f"({self.frames_processed}/{self.config.calibration_frames} frames)"
            )
        return summarize(self.reports, total_blinks=self.analyzer.blink.total_blinks)
