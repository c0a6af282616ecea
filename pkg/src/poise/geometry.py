"""Per-frame geometric measurements: aspect ratios, head pose, gaze, hand speed.

Coordinate conventions, fixed here and used everywhere downstream:

* Image frame (as streamed): x grows toward the viewer's right, y grows
  downward, z into the screen (away from the camera).
* Head frame (for pose): X = +x (toward the subject's left), Y = -y (up),
  Z = -z (toward the camera). Right-handed.
* Euler angles are intrinsic yaw(Y) - pitch(X) - roll(Z), in degrees:
  +yaw turns the head toward the subject's left, +pitch tips it down
  (chin toward chest), +roll tilts the top of the head toward the
  subject's right shoulder.
* +gaze_h looks toward the subject's right, +gaze_v looks up. Both are
  iris offsets normalized by the eye half-width.

Ratio features (EAR, LAR, lip gap, gaze) use x,y distances only; monocular
z is unreliable. Head pose uses full xyz, where 3D structure is essential.
All functions are pure; extract_features degrades per-feature (absent field
plus a quality flag) rather than dropping a frame on a transient glitch.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .errors import DegenerateGeometry, ZeroInterval
from .landmarks import LandmarkFrame, ScaleCalibration, iris_centers

# Six-point eye contours, ordered (outer corner, upper-outer, upper-inner,
# inner corner, lower-inner, lower-outer). "Left" is the image-left eye.
LEFT_EYE = (33, 160, 158, 133, 153, 144)
RIGHT_EYE = (362, 385, 387, 263, 373, 380)
LEFT_EYE_CORNERS = (33, 133)
RIGHT_EYE_CORNERS = (362, 263)

MOUTH_CORNERS = (61, 291)
OUTER_LIP_MIDS = (0, 17)
INNER_LIP_MIDS = (13, 14)

WRIST = 0

DEFAULT_ANCHOR_INDICES = (1, 199, 33, 263, 61, 291)

_TEMPLATE_RESOURCE = "face_template_v1.csv"


@dataclass(frozen=True)
class FaceTemplate:
    """Rigid anchor geometry for pose alignment.

    ``anchor_coords`` are meters in the canonical head frame (centroid at the
    origin); shipped as a versioned data file, see ``data/face_template_v1.csv``.
    """

    anchor_indices: tuple[int, ...]
    anchor_coords: np.ndarray

    def __post_init__(self):
        if len(self.anchor_indices) != 6 or self.anchor_coords.shape != (6, 3):
            raise ValueError("template requires exactly 6 anchors")
        centered = self.anchor_coords - self.anchor_coords.mean(axis=0)
        s = np.linalg.svd(centered, compute_uv=False)
        if s[2] < 1e-6 * s[0]:
            raise ValueError("template anchors are coplanar or collinear")
        self.anchor_coords.setflags(write=False)


def load_default_template() -> FaceTemplate:
    """Load the shipped anchor template (nose, chin, eye and mouth corners)."""
    text = resources.files("poise.data").joinpath(_TEMPLATE_RESOURCE).read_text()
    indices: list[int] = []
    coords: list[list[float]] = []
    for row in csv.reader(text.splitlines()):
        if not row or row[0].lstrip().startswith("#"):
            continue
        indices.append(int(row[0]))
        coords.append([float(row[1]), float(row[2]), float(row[3])])
    return FaceTemplate(anchor_indices=tuple(indices), anchor_coords=np.array(coords))


def _xy_dist(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.hypot(a[0] - b[0], a[1] - b[1]))


def eye_aspect_ratio(points: np.ndarray) -> float:
    """EAR over six contour points: (|p2-p6| + |p3-p5|) / (2 |p1-p4|), x,y only.

    Near zero when the eye is closed; ~0.3 open.
    """
    p1, p2, p3, p4, p5, p6 = points
    span = _xy_dist(p1, p4)
    if span < 1e-6:
        raise DegenerateGeometry("eye corners coincident", feature="ear")
    return (_xy_dist(p2, p6) + _xy_dist(p3, p5)) / (2.0 * span)


def lip_aspect_ratio(frame: LandmarkFrame) -> float:
    """Mouth width / outer-lip height, x,y only. Rises when smiling."""
    width = _xy_dist(frame.face[MOUTH_CORNERS[0]], frame.face[MOUTH_CORNERS[1]])
    height = _xy_dist(frame.face[OUTER_LIP_MIDS[0]], frame.face[OUTER_LIP_MIDS[1]])
    if height < 1e-6:
        raise DegenerateGeometry("outer lip midpoints coincident", feature="lar")
    return width / height


def lip_gap(frame: LandmarkFrame) -> float:
    """Inner-lip vertical gap in normalized units, x,y only."""
    return _xy_dist(frame.face[INNER_LIP_MIDS[0]], frame.face[INNER_LIP_MIDS[1]])


def _to_head_frame(points: np.ndarray) -> np.ndarray:
    out = points.copy()
    out[:, 1] *= -1.0
    out[:, 2] *= -1.0
    return out


def rotation_matrix(yaw_deg: float, pitch_deg: float, roll_deg: float) -> np.ndarray:
    """Compose intrinsic yaw(Y)-pitch(X)-roll(Z) into a head-frame rotation."""
    a, b, g = (math.radians(v) for v in (yaw_deg, pitch_deg, roll_deg))
    ca, sa = math.cos(a), math.sin(a)
    cb, sb = math.cos(b), math.sin(b)
    cg, sg = math.cos(g), math.sin(g)
    ry = np.array([[ca, 0, sa], [0, 1, 0], [-sa, 0, ca]])
    rx = np.array([[1, 0, 0], [0, cb, -sb], [0, sb, cb]])
    rz = np.array([[cg, -sg, 0], [sg, cg, 0], [0, 0, 1]])
    return ry @ rx @ rz


def euler_from_matrix(r: np.ndarray) -> tuple[float, float, float]:
    """Invert :func:`rotation_matrix`; exact away from |pitch| = 90°.

    At gimbal lock (|cos pitch| ~ 0) roll is fixed to 0 and yaw absorbs the
    remaining in-plane rotation.
    """
    sb = -r[1, 2]
    pitch = math.asin(min(1.0, max(-1.0, sb)))
    if abs(math.cos(pitch)) > 1e-9:
        yaw = math.atan2(r[0, 2], r[2, 2])
        roll = math.atan2(r[1, 0], r[1, 1])
    else:
        yaw = math.atan2(-r[2, 0], r[0, 0])
        roll = 0.0
    return math.degrees(yaw), math.degrees(pitch), math.degrees(roll)


def kabsch_rotation(source: np.ndarray, target: np.ndarray) -> np.ndarray:
    """Best proper rotation R (det +1) aligning centered source onto target.

    Orthogonal Procrustes via SVD of the cross-covariance; uniform scale and
    translation of either point set do not affect the result.
    """
    src = source - source.mean(axis=0)
    tgt = target - target.mean(axis=0)
    s_tgt = np.linalg.svd(tgt, compute_uv=False)
    if s_tgt[0] < 1e-12 or s_tgt[2] < 1e-7 * s_tgt[0]:
        raise DegenerateGeometry("observed anchors are rank-deficient", feature="pose")
    h = src.T @ tgt
    u, _, vt = np.linalg.svd(h)
    d = np.sign(np.linalg.det(vt.T @ u.T))
    if d == 0:
        raise DegenerateGeometry("cross-covariance is singular", feature="pose")
    correction = np.diag([1.0, 1.0, d])
    return vt.T @ correction @ u.T


def head_pose(frame: LandmarkFrame, template: FaceTemplate) -> tuple[float, float, float]:
    """Euler angles of the head, degrees, via rigid anchor alignment.

    Gathers the six observed anchor points (full xyz), finds the rotation
    aligning the template onto them, and decomposes it in intrinsic
    yaw-pitch-roll order. Scale-free and translation-free.
    """
    observed = _to_head_frame(frame.face[list(template.anchor_indices)])
    r = kabsch_rotation(template.anchor_coords, observed)
    return euler_from_matrix(r)


def gaze_offset(frame: LandmarkFrame) -> tuple[float, float]:
    """Mean iris offset over both eyes, normalized by eye half-width.

    Per eye: (iris center - corner midpoint) / half corner span, x,y only.
    Signs follow the module convention (+h subject's right, +v up).
    """
    left_iris, right_iris = iris_centers(frame)
    offsets = []
    for corners, iris in ((LEFT_EYE_CORNERS, left_iris), (RIGHT_EYE_CORNERS, right_iris)):
        c1 = frame.face[corners[0]]
        c2 = frame.face[corners[1]]
        half_width = _xy_dist(c1, c2) / 2.0
        if half_width < 1e-6:
            raise DegenerateGeometry("eye corners coincident", feature="gaze")
        center = (c1 + c2) / 2.0
        offsets.append(((iris[0] - center[0]) / half_width, (iris[1] - center[1]) / half_width))
    mean_x = (offsets[0][0] + offsets[1][0]) / 2.0
    mean_y = (offsets[0][1] + offsets[1][1]) / 2.0
    return float(-mean_x), float(-mean_y)


def hand_speed(
    prev: LandmarkFrame, cur: LandmarkFrame, scale: ScaleCalibration
) -> float | None:
    """Max wrist speed in m/s over hands visible in both frames; None if none."""
    dt_s = (cur.t_ms - prev.t_ms) / 1000.0
    if dt_s <= 0:
        raise ZeroInterval(f"non-positive frame interval {cur.t_ms - prev.t_ms} ms")
    prev_hands = prev.hands()
    speeds = []
    for side, pts in cur.hands().items():
        before = prev_hands.get(side)
        if before is None:
            continue
        dist_units = _xy_dist(pts[WRIST], before[WRIST])
        speeds.append(dist_units * scale.meters_per_unit / dt_s)
    return max(speeds) if speeds else None


@dataclass(frozen=True)
class FeatureFrame:
    """Scalar measurements for one frame.

    A field is None when its geometry was degenerate that frame (the feature
    name is then listed in ``flags``) or, for hand_speed, when no hand was
    visible in both of the two frames.
    """

    t_ms: int
    ear_left: float | None
    ear_right: float | None
    lar: float | None
    lip_gap: float | None
    yaw_deg: float | None
    pitch_deg: float | None
    roll_deg: float | None
    gaze_h: float | None
    gaze_v: float | None
    hand_speed_mps: float | None
    flags: tuple[str, ...] = ()


def extract_features(
    prev: LandmarkFrame | None,
    cur: LandmarkFrame,
    template: FaceTemplate,
    scale: ScaleCalibration | None,
) -> FeatureFrame:
    """Measure one frame (plus the previous one, for velocity).

    Degenerate single features become absent-with-flag; the temporal layer
    tolerates the gaps. A 30 fps stream must survive transient glitches.
    """
    flags: list[str] = []

    def attempt(name: str, fn):
        try:
            return fn()
        except DegenerateGeometry:
            flags.append(name)
            return None

    ear_left = attempt("ear_left", lambda: eye_aspect_ratio(cur.face[list(LEFT_EYE)]))
    ear_right = attempt("ear_right", lambda: eye_aspect_ratio(cur.face[list(RIGHT_EYE)]))
    lar = attempt("lar", lambda: lip_aspect_ratio(cur))
    gap = attempt("lip_gap", lambda: lip_gap(cur))
    pose = attempt("pose", lambda: head_pose(cur, template))
    gaze = attempt("gaze", lambda: gaze_offset(cur))

    speed = None
    if prev is not None and scale is not None:
        speed = hand_speed(prev, cur, scale)

    return FeatureFrame(
        t_ms=cur.t_ms,
        ear_left=ear_left,
        ear_right=ear_right,
        lar=lar,
        lip_gap=gap,
        yaw_deg=pose[0] if pose else None,
        pitch_deg=pose[1] if pose else None,
        roll_deg=pose[2] if pose else None,
        gaze_h=gaze[0] if gaze else None,
        gaze_v=gaze[1] if gaze else None,
        hand_speed_mps=speed,
        flags=tuple(flags),
    )
