"""Sliding-window state over feature frames.

Produces the windowed statistics the scoring channels consume: blink rate,
head-deviation fraction, gaze-shift rate, lip stillness/activity, smile
fraction, smoothed hand speed. Everything is keyed on sender timestamps;
no wall-clock reads, so identical feature sequences produce identical stats.

One analyzer owns one session's state and is advanced frame-by-frame by a
single writer; distinct sessions are independent.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from statistics import median

from .errors import InsufficientFrames, NotCalibrated
from .geometry import FeatureFrame


@dataclass(frozen=True)
class NeutralPose:
    """Per-session neutral head orientation, the reference for deviation."""

    yaw0: float
    pitch0: float
    roll0: float


@dataclass(frozen=True)
class WindowStats:
    """Immutable snapshot of all windowed quantities at one instant."""

    now_ms: int
    window_span_ms: int
    blink_window_span_ms: int
    blink_rate_per_min: float
    head_deviation_fraction: float
    gaze_shift_rate_per_min: float
    smile_fraction: float
    lip_longest_still_ms: int
    lip_activity_fraction: float
    mean_hand_speed_mps: float | None


def calibrate_neutral(features: list[FeatureFrame]) -> NeutralPose:
    """Component-wise median pose over the calibration frames.

    Median, not mean: robust to startup jitter. Frames whose pose was
    degenerate are skipped.
    """
    yaws = [f.yaw_deg for f in features if f.yaw_deg is not None]
    pitches = [f.pitch_deg for f in features if f.pitch_deg is not None]
    rolls = [f.roll_deg for f in features if f.roll_deg is not None]
    if not yaws or not pitches or not rolls:
        raise InsufficientFrames("no usable pose frames for neutral calibration")
    return NeutralPose(yaw0=median(yaws), pitch0=median(pitches), roll0=median(rolls))


class BlinkDetector:
    """Two-threshold hysteresis blink detector.

    Enters ``closing`` when EAR drops below ``close_threshold``; emits one
    blink when at least ``min_blink_frames`` frames sat below the close
    threshold and EAR then rises above ``open_threshold``. Frames between
    the two thresholds hold the current state.
    """

    def __init__(
        self,
        close_threshold: float = 0.21,
        open_threshold: float = 0.25,
        min_blink_frames: int = 2,
    ):
        self.close_threshold = close_threshold
        self.open_threshold = open_threshold
        self.min_blink_frames = min_blink_frames
        self.phase = "open"
        self.frames_below = 0
        self.blink_events: deque[int] = deque()
        self.total_blinks = 0

    def update(self, ear: float, t_ms: int) -> int | None:
        """Advance one frame; returns the blink event timestamp, if any."""
        if self.phase == "open":
            if ear < self.close_threshold:
                self.phase = "closing"
                self.frames_below = 1
            return None
        if ear < self.close_threshold:
            self.frames_below += 1
            return None
        if ear > self.open_threshold:
            emitted = None
            if self.frames_below >= self.min_blink_frames:
                self.blink_events.append(t_ms)
                self.total_blinks += 1
                emitted = t_ms
            self.phase = "open"
            self.frames_below = 0
            return emitted
        return None


def window_rate_per_min(
    events: deque[int] | list[int],
    now: int,
    span_ms: int,
    session_start_ms: int,
    floor_ms: int = 10_000,
) -> float:
    """Events in (now - span, now] normalized to per-minute.

    Early in a session the rate extrapolates from elapsed time instead of the
    full span, floored at ``floor_ms`` so a single early event cannot read as
    a huge rate: rate = count * 60000 / min(span, max(elapsed, floor)).
    """
    count = sum(1 for t in events if now - span_ms < t <= now)
    elapsed = now - session_start_ms + 1
    effective = min(span_ms, max(elapsed, floor_ms))
    return count * 60_000.0 / effective


class GazeShiftDetector:
    """Counts rising edges of the smoothed gaze magnitude.

    Magnitude sqrt(h^2 + v^2) is smoothed with a trailing moving mean; a
    shift is the smoothed value crossing from <= threshold to > threshold.
    No re-trigger until it falls back below.
    """

    def __init__(self, threshold: float = 0.15, smoothing_frames: int = 3):
        self.threshold = threshold
        self._recent: deque[float] = deque(maxlen=smoothing_frames)
        self.high = False
        self.shift_events: deque[int] = deque()

    def update(self, gaze_h: float, gaze_v: float, t_ms: int) -> int | None:
        magnitude = (gaze_h * gaze_h + gaze_v * gaze_v) ** 0.5
        self._recent.append(magnitude)
        smoothed = sum(self._recent) / len(self._recent)
        now_high = smoothed > self.threshold
        emitted = None
        if now_high and not self.high:
            self.shift_events.append(t_ms)
            emitted = t_ms
        self.high = now_high
        return emitted


def lip_activity(entries: list[tuple[int, bool]]) -> tuple[int, float]:
    """(longest still run in ms, active fraction) over (t_ms, active) entries.

    A still run's duration is last-minus-first timestamp of the consecutive
    inactive entries; a lone inactive frame counts as 0 ms.
    """
    if not entries:
        return 0, 0.0
    longest = 0
    run_start: int | None = None
    run_end: int | None = None
    active_count = 0
    for t, active in entries:
        if active:
            active_count += 1
            if run_start is not None:
                longest = max(longest, run_end - run_start)
                run_start = None
        else:
            if run_start is None:
                run_start = t
            run_end = t
    if run_start is not None:
        longest = max(longest, run_end - run_start)
    return longest, active_count / len(entries)


def head_deviation_fraction(
    poses: list[tuple[int, float, float, float]],
    neutral: NeutralPose,
    threshold_deg: float = 10.0,
) -> float:
    """Fraction of windowed pose frames deviating beyond the threshold.

    A frame deviates when any of |yaw-yaw0|, |pitch-pitch0|, |roll-roll0|
    strictly exceeds the threshold; exactly-at-threshold is non-deviant.
    """
    if not poses:
        return 0.0
    deviant = 0
    for _, yaw, pitch, roll in poses:
        worst = max(
            abs(yaw - neutral.yaw0),
            abs(pitch - neutral.pitch0),
            abs(roll - neutral.roll0),
        )
        if worst > threshold_deg:
            deviant += 1
    return deviant / len(poses)


class TemporalAnalyzer:
    """Owns one session's sliding windows and emits WindowStats snapshots.

    The first ``calibration_frames`` frames establish the neutral pose;
    windowed_stats raises NotCalibrated until then. Window membership is
    t in (now - span, now].
    """

    def __init__(
        self,
        calibration_frames: int = 30,
        window_span_ms: int = 10_000,
        blink_window_span_ms: int = 60_000,
        rate_floor_ms: int = 10_000,
        blink_close_threshold: float = 0.21,
        blink_open_threshold: float = 0.25,
        min_blink_frames: int = 2,
        gaze_shift_threshold: float = 0.15,
        gaze_smoothing_frames: int = 3,
        lip_activity_delta: float = 0.002,
        smile_lar_threshold: float = 1.5,
        head_deviation_deg: float = 10.0,
    ):
        self.calibration_frames = calibration_frames
        self.window_span_ms = window_span_ms
        self.blink_window_span_ms = blink_window_span_ms
        self.rate_floor_ms = rate_floor_ms
        self.lip_activity_delta = lip_activity_delta
        self.smile_lar_threshold = smile_lar_threshold
        self.head_deviation_deg = head_deviation_deg

        self.blink = BlinkDetector(blink_close_threshold, blink_open_threshold, min_blink_frames)
        self.gaze = GazeShiftDetector(gaze_shift_threshold, gaze_smoothing_frames)

        self._calibration_buffer: list[FeatureFrame] = []
        self.neutral: NeutralPose | None = None
        self.session_start_ms: int | None = None
        self.frames_seen = 0
        self.baseline_lar: float | None = None

        self._poses: deque[tuple[int, float, float, float]] = deque()
        self._lars: deque[tuple[int, float]] = deque()
        self._speeds: deque[tuple[int, float]] = deque()
        self._lip_entries: deque[tuple[int, bool]] = deque()
        self._prev_gap: float | None = None

    @property
    def calibrated(self) -> bool:
        return self.neutral is not None

    @property
    def calibration_progress(self) -> float:
        return min(1.0, self.frames_seen / self.calibration_frames)

    def push(self, f: FeatureFrame) -> None:
        if self.session_start_ms is None:
            self.session_start_ms = f.t_ms
        self.frames_seen += 1

        ears = [e for e in (f.ear_left, f.ear_right) if e is not None]
        if ears:
            self.blink.update(sum(ears) / len(ears), f.t_ms)

        if f.gaze_h is not None and f.gaze_v is not None:
            self.gaze.update(f.gaze_h, f.gaze_v, f.t_ms)

        if f.yaw_deg is not None:
            self._poses.append((f.t_ms, f.yaw_deg, f.pitch_deg, f.roll_deg))
        if f.lar is not None:
            self._lars.append((f.t_ms, f.lar))
        if f.hand_speed_mps is not None:
            self._speeds.append((f.t_ms, f.hand_speed_mps))
        if f.lip_gap is not None:
            active = (
                self._prev_gap is not None
                and abs(f.lip_gap - self._prev_gap) > self.lip_activity_delta
            )
            self._lip_entries.append((f.t_ms, active))
            self._prev_gap = f.lip_gap

        if not self.calibrated:
            self._calibration_buffer.append(f)
            if len(self._calibration_buffer) >= self.calibration_frames:
                self.neutral = calibrate_neutral(self._calibration_buffer)
                lars = [x.lar for x in self._calibration_buffer if x.lar is not None]
                self.baseline_lar = median(lars) if lars else None
                self._calibration_buffer.clear()

        self._prune(f.t_ms)

    def _prune(self, now: int) -> None:
        while self._poses and self._poses[0][0] <= now - self.window_span_ms:
            self._poses.popleft()
        while self._lars and self._lars[0][0] <= now - self.window_span_ms:
            self._lars.popleft()
        while self._speeds and self._speeds[0][0] <= now - self.window_span_ms:
            self._speeds.popleft()
        while self._lip_entries and self._lip_entries[0][0] <= now - self.window_span_ms:
            self._lip_entries.popleft()
        while (
            self.gaze.shift_events
            and self.gaze.shift_events[0] <= now - self.window_span_ms
        ):
            self.gaze.shift_events.popleft()
        while (
            self.blink.blink_events
            and self.blink.blink_events[0] <= now - self.blink_window_span_ms
        ):
            self.blink.blink_events.popleft()

    def windowed_stats(self, now: int) -> WindowStats:
        if not self.calibrated:
            raise NotCalibrated(
                f"neutral pose needs {self.calibration_frames} frames, "
                f"have {self.frames_seen}"
            )
        start = self.session_start_ms
        blink_rate = window_rate_per_min(
            self.blink.blink_events, now, self.blink_window_span_ms, start, self.rate_floor_ms
        )
        shift_rate = window_rate_per_min(
            self.gaze.shift_events, now, self.window_span_ms, start, self.rate_floor_ms
        )
        poses = [p for p in self._poses if now - self.window_span_ms < p[0] <= now]
        deviation = head_deviation_fraction(poses, self.neutral, self.head_deviation_deg)
        lars = [v for t, v in self._lars if now - self.window_span_ms < t <= now]
        smile_fraction = (
            sum(1 for v in lars if v > self.smile_lar_threshold) / len(lars) if lars else 0.0
        )
        lip_entries = [
            e for e in self._lip_entries if now - self.window_span_ms < e[0] <= now
        ]
        longest_still, activity = lip_activity(lip_entries)
        speeds = [v for t, v in self._speeds if now - self.window_span_ms < t <= now]
        mean_speed = sum(speeds) / len(speeds) if speeds else None
        return WindowStats(
            now_ms=now,
            window_span_ms=self.window_span_ms,
            blink_window_span_ms=self.blink_window_span_ms,
            blink_rate_per_min=blink_rate,
            head_deviation_fraction=deviation,
            gaze_shift_rate_per_min=shift_rate,
            smile_fraction=smile_fraction,
            lip_longest_still_ms=longest_still,
            lip_activity_fraction=activity,
            mean_hand_speed_mps=mean_speed,
        )
