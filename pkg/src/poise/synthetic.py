"""Deterministic synthetic landmark traces with scripted behavior.

Builds full 478-point frames from a parametric face model so the whole
pipeline can be driven with known-answer inputs: blink cadence, head
excursions, gaze excursions, lip motion, smile state, and wrist speed are
all scripted. The same canonical metric geometry as the pose template is
used, so a neutral synthetic face recovers (0, 0, 0) Euler angles exactly.

Everything is a pure function of frame index and parameters; no clocks, no
RNG, so a preset trace is byte-identical on every run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .geometry import (
    DEFAULT_ANCHOR_INDICES,
    INNER_LIP_MIDS,
    LEFT_EYE,
    LEFT_EYE_CORNERS,
    OUTER_LIP_MIDS,
    RIGHT_EYE,
    RIGHT_EYE_CORNERS,
    load_default_template,
    rotation_matrix,
)
from .landmarks import (
    FACE_POINT_COUNT,
    HAND_POINT_COUNT,
    LEFT_IRIS,
    RIGHT_IRIS,
    LandmarkFrame,
)

# Projection scale for a speaker at typical laptop-webcam practice distance:
# the eye-corner span covers roughly a fifth of the frame width. Eye centers
# sit 0.0315 m off-axis, so the iris separation is exactly the default
# 0.063 m IPD and the measured metric scale of a neutral synthetic face is
# exactly 1/units_per_meter.
DESK_UNITS_PER_METER = 2.2

_EYE_LINE_Y = 0.04203333333333333
_EYE_Z = -0.007216666666666666
_EYE_OUTER_X = 0.0433  # equals the pose-anchor corner position
_EYE_INNER_X = 0.0197
_EYE_CENTER_X = (_EYE_OUTER_X + _EYE_INNER_X) / 2.0
_EYE_HALF_WIDTH = (_EYE_OUTER_X - _EYE_INNER_X) / 2.0
_EYE_HALF_GAP = 0.15 * (_EYE_OUTER_X - _EYE_INNER_X)  # EAR = 0.3 fully open
_MOUTH_Y = -0.019566666666666663
_MOUTH_Z = -0.0053166666666666675
_MOUTH_WIDTH = 0.0578


class SyntheticFace:
    """Parametric face in the canonical head frame, projected to image units."""

    def __init__(self, units_per_meter: float = DESK_UNITS_PER_METER):
        template = load_default_template()
        self.units_per_meter = units_per_meter
        self._anchors = dict(zip(template.anchor_indices, template.anchor_coords))
        self._filler = self._build_filler()

    @property
    def nominal_meters_per_unit(self) -> float:
        """Metric scale the engine measures from this face's iris separation."""
        return 1.0 / self.units_per_meter

    @staticmethod
    def _build_filler() -> np.ndarray:
        pts = np.empty((FACE_POINT_COUNT, 3))
        idx = np.arange(FACE_POINT_COUNT)
        theta = 2.0 * np.pi * idx / FACE_POINT_COUNT
        pts[:, 0] = 0.065 * np.cos(theta)
        pts[:, 1] = 0.085 * np.sin(theta)
        pts[:, 2] = -0.01 + 0.00005 * (idx % 11)
        return pts

    def frame(
        self,
        t_ms: int,
        *,
        yaw: float = 0.0,
        pitch: float = 0.0,
        roll: float = 0.0,
        eye_openness: float = 1.0,
        lar: float = 1.2,
        lip_gap_units: float = 0.01,
        gaze_h: float = 0.0,
        gaze_v: float = 0.0,
        left_wrist: tuple[float, float] | None = None,
        right_wrist: tuple[float, float] | None = None,
    ) -> LandmarkFrame:
        pts = self._filler.copy()

        for index, coords in self._anchors.items():
            pts[index] = coords

        # Eyes: corners, contour verticals, iris. All on one z-plane so gaze
        # offsets survive head rotation exactly. The per-eye contour order is
        # (p1 corner, p2 upper, p3 upper, p4 corner, p5 lower, p6 lower) with
        # p2/p6 and p3/p5 vertically paired.
        half_gap = _EYE_HALF_GAP * eye_openness
        width_third = (_EYE_OUTER_X - _EYE_INNER_X) / 3.0
        for sign, contour, corners, iris in (
            (-1.0, LEFT_EYE, LEFT_EYE_CORNERS, LEFT_IRIS),
            (1.0, RIGHT_EYE, RIGHT_EYE_CORNERS, RIGHT_IRIS),
        ):
            _, p2, p3, _, p5, p6 = contour
            # corners tuples are ordered (image-left index, image-right index)
            near_x, far_x = sorted((sign * _EYE_OUTER_X, sign * _EYE_INNER_X))
            pts[corners[0]] = (near_x, _EYE_LINE_Y, _EYE_Z)
            pts[corners[1]] = (far_x, _EYE_LINE_Y, _EYE_Z)
            for upper, lower, x in (
                (p2, p6, sign * (_EYE_OUTER_X - width_third)),
                (p3, p5, sign * (_EYE_INNER_X + width_third)),
            ):
                pts[upper] = (x, _EYE_LINE_Y + half_gap, _EYE_Z)
                pts[lower] = (x, _EYE_LINE_Y - half_gap, _EYE_Z)
            center_x = sign * _EYE_CENTER_X - gaze_h * _EYE_HALF_WIDTH
            center_y = _EYE_LINE_Y + gaze_v * _EYE_HALF_WIDTH
            offsets = [(0, 0), (0.002, 0), (-0.002, 0), (0, 0.002), (0, -0.002)]
            for index, (dx, dy) in zip(iris, offsets):
                pts[index] = (center_x + dx, center_y + dy, _EYE_Z)

        # Mouth: corners are pose anchors and stay put; smiling narrows the
        # outer-lip height so LAR rises without disturbing the rigid anchors.
        outer_half = _MOUTH_WIDTH / lar / 2.0
        pts[OUTER_LIP_MIDS[0]] = (0.0, _MOUTH_Y + outer_half, _MOUTH_Z)
        pts[OUTER_LIP_MIDS[1]] = (0.0, _MOUTH_Y - outer_half, _MOUTH_Z)
        inner_half = lip_gap_units / self.units_per_meter / 2.0
        pts[INNER_LIP_MIDS[0]] = (0.0, _MOUTH_Y + inner_half, _MOUTH_Z)
        pts[INNER_LIP_MIDS[1]] = (0.0, _MOUTH_Y - inner_half, _MOUTH_Z)

        if yaw or pitch or roll:
            pts = pts @ rotation_matrix(yaw, pitch, roll).T

        u = self.units_per_meter
        face = np.empty_like(pts)
        face[:, 0] = 0.5 + pts[:, 0] * u
        face[:, 1] = 0.5 - pts[:, 1] * u
        face[:, 2] = -pts[:, 2] * u
        face.setflags(write=False)

        return LandmarkFrame(
            t_ms=t_ms,
            face=face,
            left_hand=_hand_points(left_wrist),
            right_hand=_hand_points(right_wrist),
        )


def _hand_points(wrist: tuple[float, float] | None) -> np.ndarray | None:
    if wrist is None:
        return None
    pts = np.empty((HAND_POINT_COUNT, 3))
    for j in range(HAND_POINT_COUNT):
        pts[j] = (wrist[0] + 0.003 * (j % 5), wrist[1] + 0.003 * (j // 5), 0.0)
    pts.setflags(write=False)
    return pts


@dataclass(frozen=True)
class PresetSpec:
    """Targets for one scripted behavior profile."""

    blink_interval_s: float | None
    hand_speed_mps: float | None
    head_duty: float
    head_yaw_deg: float
    gaze_interval_s: float | None
    smile_duty: float
    lip_pattern: str  # talking | still | pauses

    cycle_ms: int = 10_000


PRESETS: dict[str, PresetSpec] = {
    # Steady speaker: every channel pinned inside its high band.
    "calm": PresetSpec(
        blink_interval_s=None,
        hand_speed_mps=0.3,
        head_duty=0.0,
        head_yaw_deg=0.0,
        gaze_interval_s=None,
        smile_duty=1.0,
        lip_pattern="talking",
    ),
    # Stressed speaker: rapid blinking and gestures, wandering head and gaze,
    # frozen lips, no smile. Every channel pinned at its low anchor.
    "nervous": PresetSpec(
        blink_interval_s=3.0,
        hand_speed_mps=0.9,
        head_duty=0.6,
        head_yaw_deg=15.0,
        gaze_interval_s=5.0,
        smile_duty=0.0,
        lip_pattern="still",
    ),
    # Mildly restless speaker: everything sits in the medium bands.
    "distracted": PresetSpec(
        blink_interval_s=60.0 / 13.5,
        hand_speed_mps=0.6,
        head_duty=0.25,
        head_yaw_deg=15.0,
        gaze_interval_s=9.0,
        smile_duty=0.2,
        lip_pattern="pauses",
    ),
}


def _lip_talking(cycle_ms: int, rel_ms: int, pattern: str) -> bool:
    if pattern == "talking":
        return True
    if pattern == "still":
        return False
    cyc = rel_ms % cycle_ms
    return cyc < 3000 or 7500 <= cyc < 8000


def generate_preset(
    name: str,
    duration_s: float,
    fps: float,
    calibration_frames: int = 30,
) -> Iterator[LandmarkFrame]:
    """Frames for a behavior preset; patterns begin after the calibration
    window so the neutral pose is captured clean.
    """
    if name not in PRESETS:
        raise ValueError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    if duration_s <= 0 or fps <= 0:
        raise ValueError("duration and fps must be positive")
    spec = PRESETS[name]
    face = SyntheticFace()
    n_frames = round(duration_s * fps)
    pattern_start_ms = math.ceil((calibration_frames + 2) * 1000 / fps)

    lip_phase = 0
    prev_t = None
    hands = {
        "left": {"x": 0.2, "dir": 1.0, "run": 0},
        "right": {"x": 0.7, "dir": 1.0, "run": 0},
    }
    hand_y = 0.95

    for k in range(n_frames):
        t_ms = round(k * 1000 / fps)
        rel = t_ms - pattern_start_ms
        active_phase = rel >= 0

        openness = 1.0
        if spec.blink_interval_s is not None and active_phase:
            if (rel / 1000.0) % spec.blink_interval_s < 3.0 / fps:
                openness = 0.4

        yaw = 0.0
        if spec.head_duty > 0 and active_phase:
            if rel % spec.cycle_ms < spec.head_duty * spec.cycle_ms:
                yaw = spec.head_yaw_deg

        gaze_h = 0.0
        if spec.gaze_interval_s is not None and active_phase:
            if (rel / 1000.0) % spec.gaze_interval_s < 1.0:
                gaze_h = 0.3

        lar = 1.2
        if spec.smile_duty >= 1.0:
            lar = 1.8
        elif spec.smile_duty > 0 and active_phase:
            if rel % spec.cycle_ms < spec.smile_duty * spec.cycle_ms:
                lar = 1.8

        talking = _lip_talking(spec.cycle_ms, max(rel, 0), spec.lip_pattern)
        if talking:
            lip_phase += 1
        phase = lip_phase % 16
        gap = 0.005 + 0.0025 * (phase if phase <= 8 else 16 - phase)

        wrists: dict[str, tuple[float, float] | None] = {"left": None, "right": None}
        if spec.hand_speed_mps is not None:
            mpu = face.nominal_meters_per_unit
            dt_ms = 0 if prev_t is None else t_ms - prev_t
            step = spec.hand_speed_mps * (dt_ms / 1000.0) / mpu if dt_ms else 0.0
            nominal_step = spec.hand_speed_mps / fps / mpu
            flip_every = max(2, round(0.1 / nominal_step))
            for side, state in hands.items():
                state["x"] += state["dir"] * step
                state["run"] += 1
                if state["run"] >= flip_every:
                    state["dir"] *= -1.0
                    state["run"] = 0
                wrists[side] = (state["x"], hand_y)

        prev_t = t_ms
        yield face.frame(
            t_ms,
            yaw=yaw,
            eye_openness=openness,
            lar=lar,
            lip_gap_units=gap,
            gaze_h=gaze_h,
            left_wrist=wrists["left"],
            right_wrist=wrists["right"],
        )
