"""Landmark frame data model, session file format, and scale calibration.

A frame is one timestamped observation: 478 face points (the 468-point mesh
plus 10 iris points) and optionally 21 points per hand. Coordinates are
normalized image units: x, y relative to frame width/height, z on the same
scale as x (relative depth). One parser instance per stream; frames are
immutable values safe to share across threads.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import IO, Iterator

import numpy as np

from .errors import (
    DegenerateGeometry,
    MalformedRecord,
    NonFiniteCoordinate,
    NonMonotonicTimestamp,
    SchemaViolation,
)

FACE_POINT_COUNT = 478
HAND_POINT_COUNT = 21
LEFT_IRIS = tuple(range(468, 473))
RIGHT_IRIS = tuple(range(473, 478))

# Landmarks may slightly exit the camera frame.
COORD_MIN = -0.5
COORD_MAX = 1.5

FORMAT_VERSION = 1

_FRAME_KEYS = {"t_ms", "face", "left_hand", "right_hand", "type"}


@dataclass(frozen=True)
class LandmarkFrame:
    """One validated observation. Arrays are read-only float64, shape (n, 3)."""

    t_ms: int
    face: np.ndarray
    left_hand: np.ndarray | None = None
    right_hand: np.ndarray | None = None

    def hands(self) -> dict[str, np.ndarray]:
        out = {}
        if self.left_hand is not None:
            out["left"] = self.left_hand
        if self.right_hand is not None:
            out["right"] = self.right_hand
        return out


@dataclass(frozen=True)
class SessionHeader:
    """First line of a ``.pose.ndjson`` session file."""

    format_version: int = FORMAT_VERSION
    source: str = ""
    started_at: str = ""
    face_point_count: int = FACE_POINT_COUNT
    hand_point_count: int = HAND_POINT_COUNT

    def validate(self) -> None:
        if self.format_version != FORMAT_VERSION:
            raise SchemaViolation(
                f"unsupported format_version {self.format_version!r}, expected {FORMAT_VERSION}"
            )
        if self.face_point_count != FACE_POINT_COUNT:
            raise SchemaViolation(
                f"face_point_count must be {FACE_POINT_COUNT}, got {self.face_point_count!r}"
            )
        if self.hand_point_count != HAND_POINT_COUNT:
            raise SchemaViolation(
                f"hand_point_count must be {HAND_POINT_COUNT}, got {self.hand_point_count!r}"
            )


@dataclass(frozen=True)
class ScaleCalibration:
    """Conversion from normalized landmark units to meters.

    Derived from interpupillary distance: the only near-constant facial
    measurement recoverable from the landmarks alone. Uses x,y distance only
    (monocular z is unreliable).
    """

    meters_per_unit: float
    ipd_meters: float = 0.063

    def __post_init__(self):
        if not (math.isfinite(self.meters_per_unit) and self.meters_per_unit > 0):
            raise ValueError(f"meters_per_unit must be finite and > 0, got {self.meters_per_unit}")
        if not (math.isfinite(self.ipd_meters) and self.ipd_meters > 0):
            raise ValueError(f"ipd_meters must be finite and > 0, got {self.ipd_meters}")


def _coerce_points(raw, expected: int, name: str) -> np.ndarray:
    if not isinstance(raw, list):
        raise SchemaViolation(f"{name} must be a list of points")
    if len(raw) != expected:
        raise SchemaViolation(f"{name} must have exactly {expected} points, got {len(raw)}")
    for i, p in enumerate(raw):
        if not isinstance(p, list) or len(p) != 3:
            raise SchemaViolation(f"{name}[{i}] must be a [x, y, z] triple")
        for c in p:
            if isinstance(c, bool) or not isinstance(c, (int, float)):
                raise SchemaViolation(f"{name}[{i}] has a non-numeric coordinate")
    pts = np.asarray(raw, dtype=np.float64)
    if not np.all(np.isfinite(pts)):
        raise NonFiniteCoordinate(f"{name} contains a non-finite coordinate")
    xy = pts[:, :2]
    if xy.min() < COORD_MIN or xy.max() > COORD_MAX:
        raise SchemaViolation(
            f"{name} has x/y outside [{COORD_MIN}, {COORD_MAX}]"
        )
    pts.setflags(write=False)
    return pts


def parse_frame(line: str) -> LandmarkFrame:
    """Parse one NDJSON frame record (file line or wire message) into a frame.

    Wire messages may carry ``"type": "frame"``; session-file records omit it.
    """
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as e:
        raise MalformedRecord(f"invalid JSON: {e}") from e
    if not isinstance(obj, dict):
        raise MalformedRecord("frame record must be a JSON object")
    return frame_from_obj(obj)


def frame_from_obj(obj: dict) -> LandmarkFrame:
    """Validate an already-decoded frame record."""
    unknown = set(obj) - _FRAME_KEYS
    if unknown:
        raise SchemaViolation(f"unknown frame keys: {sorted(unknown)}")
    if obj.get("type", "frame") != "frame":
        raise SchemaViolation(f"record type must be 'frame', got {obj.get('type')!r}")
    if "t_ms" not in obj:
        raise SchemaViolation("missing t_ms")
    t_ms = obj["t_ms"]
    if isinstance(t_ms, bool) or not isinstance(t_ms, int):
        raise SchemaViolation(f"t_ms must be an integer, got {t_ms!r}")
    if t_ms < 0:
        raise SchemaViolation(f"t_ms must be >= 0, got {t_ms}")
    if "face" not in obj:
        raise SchemaViolation("missing face points")
    face = _coerce_points(obj["face"], FACE_POINT_COUNT, "face")
    hands = {}
    for key in ("left_hand", "right_hand"):
        raw = obj.get(key)
        hands[key] = None if raw is None else _coerce_points(raw, HAND_POINT_COUNT, key)
    return LandmarkFrame(t_ms=t_ms, face=face, **hands)


def serialize_frame(frame: LandmarkFrame, *, type_field: bool = False) -> str:
    """Canonical one-line JSON for a frame; inverse of :func:`parse_frame`.

    Float coordinates use shortest round-trip repr, so parse(serialize(f))
    reproduces f bit-exactly.
    """
    obj: dict = {}
    if type_field:
        obj["type"] = "frame"
    obj["t_ms"] = frame.t_ms
    obj["face"] = frame.face.tolist()
    obj["left_hand"] = None if frame.left_hand is None else frame.left_hand.tolist()
    obj["right_hand"] = None if frame.right_hand is None else frame.right_hand.tolist()
    return json.dumps(obj, separators=(",", ":"))


def validate_stream_order(prev_t: int | None, frame: LandmarkFrame) -> None:
    """Accept the frame iff its timestamp strictly increases (or is first)."""
    if prev_t is not None and frame.t_ms <= prev_t:
        raise NonMonotonicTimestamp(
            f"t_ms {frame.t_ms} does not increase past {prev_t}"
        )


def iris_centers(frame: LandmarkFrame) -> tuple[np.ndarray, np.ndarray]:
    """Mean of each eye's 5 iris points, full xyz."""
    left = frame.face[list(LEFT_IRIS)].mean(axis=0)
    right = frame.face[list(RIGHT_IRIS)].mean(axis=0)
    return left, right


def compute_scale(frame: LandmarkFrame, ipd_meters: float = 0.063) -> ScaleCalibration:
    """Metric scale from the distance between iris centers (x,y only)."""
    left, right = iris_centers(frame)
    d = float(np.hypot(left[0] - right[0], left[1] - right[1]))
    if d < 1e-6:
        raise DegenerateGeometry(
            f"iris centers {d:.3g} units apart; cannot calibrate scale", feature="scale"
        )
    return ScaleCalibration(meters_per_unit=ipd_meters / d, ipd_meters=ipd_meters)


def write_session_header(fp: IO[str], header: SessionHeader) -> None:
    header.validate()
    obj = {
        "format_version": header.format_version,
        "source": header.source,
        "started_at": header.started_at,
        "face_point_count": header.face_point_count,
        "hand_point_count": header.hand_point_count,
    }
    fp.write(json.dumps(obj, separators=(",", ":")) + "\n")


def parse_session_header(line: str) -> SessionHeader:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as e:
        raise MalformedRecord(f"invalid session header: {e}") from e
    if not isinstance(obj, dict):
        raise MalformedRecord("session header must be a JSON object")
    try:
        header = SessionHeader(
            format_version=obj["format_version"],
            source=obj.get("source", ""),
            started_at=obj.get("started_at", ""),
            face_point_count=obj["face_point_count"],
            hand_point_count=obj["hand_point_count"],
        )
    except KeyError as e:
        raise SchemaViolation(f"session header missing key {e.args[0]!r}") from e
    header.validate()
    return header


def read_session(fp: IO[str]) -> tuple[SessionHeader, Iterator[LandmarkFrame]]:
    """Read a ``.pose.ndjson`` stream: header line, then one frame per line.

    Frame timestamps are validated to be strictly increasing. Blank trailing
    lines are ignored.
    """
    first = fp.readline()
    if not first.strip():
        raise MalformedRecord("missing session header line")
    header = parse_session_header(first)

    def frames() -> Iterator[LandmarkFrame]:
        prev_t: int | None = None
        for line in fp:
            if not line.strip():
                continue
            frame = parse_frame(line)
            validate_stream_order(prev_t, frame)
            prev_t = frame.t_ms
            yield frame

    return header, frames()
