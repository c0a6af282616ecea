import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from poise.errors import DegenerateGeometry, ZeroInterval
from poise.geometry import (
    LEFT_EYE,
    RIGHT_EYE,
    euler_from_matrix,
    extract_features,
    eye_aspect_ratio,
    gaze_offset,
    hand_speed,
    head_pose,
    kabsch_rotation,
    lip_aspect_ratio,
    lip_gap,
    rotation_matrix,
)
from poise.landmarks import HAND_POINT_COUNT, LEFT_IRIS, RIGHT_IRIS, ScaleCalibration

from conftest import frame_with


def make_rotation(yaw_deg, pitch_deg, roll_deg):
    """Independent intrinsic yaw(Y)-pitch(X)-roll(Z) composition for tests."""
    a, b, g = map(math.radians, (yaw_deg, pitch_deg, roll_deg))
    ry = np.array(
        [
            [math.cos(a), 0.0, math.sin(a)],
            [0.0, 1.0, 0.0],
            [-math.sin(a), 0.0, math.cos(a)],
        ]
    )
    rx = np.array(
        [
            [1.0, 0.0, 0.0],
            [0.0, math.cos(b), -math.sin(b)],
            [0.0, math.sin(b), math.cos(b)],
        ]
    )
    rz = np.array(
        [
            [math.cos(g), -math.sin(g), 0.0],
            [math.sin(g), math.cos(g), 0.0],
            [0.0, 0.0, 1.0],
        ]
    )
    return ry @ rx @ rz


class TestEyeAspectRatio:
    def test_hand_computed(self):
        # vertical gaps 0.02 each, horizontal span 0.08 -> (0.02+0.02)/(2*0.08)
        pts = np.array(
            [
                [0.40, 0.50, 0.0],
                [0.42, 0.49, 0.0],
                [0.46, 0.49, 0.0],
                [0.48, 0.50, 0.0],
                [0.46, 0.51, 0.0],
                [0.42, 0.51, 0.0],
            ]
        )
        assert eye_aspect_ratio(pts) == pytest.approx(0.25, abs=1e-12)

    def test_closed_eye_zero(self):
        pts = np.array(
            [
                [0.40, 0.50, 0.0],
                [0.42, 0.50, 0.0],
                [0.46, 0.50, 0.0],
                [0.48, 0.50, 0.0],
                [0.46, 0.50, 0.0],
                [0.42, 0.50, 0.0],
            ]
        )
        assert eye_aspect_ratio(pts) == 0.0

    def test_coincident_corners_degenerate(self):
        pts = np.full((6, 3), 0.5)
        with pytest.raises(DegenerateGeometry):
            eye_aspect_ratio(pts)


class TestLipFeatures:
    def test_lar_smiling(self):
        frame = frame_with(
            overrides={
                61: (0.455, 0.60, 0.0),
                291: (0.545, 0.60, 0.0),
                0: (0.50, 0.575, 0.0),
                17: (0.50, 0.625, 0.0),
            }
        )
        assert lip_aspect_ratio(frame) == pytest.approx(1.8, abs=1e-12)

    def test_lar_neutral(self):
        frame = frame_with(
            overrides={
                61: (0.47, 0.60, 0.0),
                291: (0.53, 0.60, 0.0),
                0: (0.50, 0.575, 0.0),
                17: (0.50, 0.625, 0.0),
            }
        )
        assert lip_aspect_ratio(frame) == pytest.approx(1.2, abs=1e-12)

    def test_lar_zero_height_degenerate(self):
        frame = frame_with(
            overrides={
                61: (0.47, 0.60, 0.0),
                291: (0.53, 0.60, 0.0),
                0: (0.50, 0.60, 0.0),
                17: (0.50, 0.60, 0.0),
            }
        )
        with pytest.raises(DegenerateGeometry):
            lip_aspect_ratio(frame)

    def test_lip_gap(self):
        frame = frame_with(overrides={13: (0.5, 0.60, 0.0), 14: (0.5, 0.63, 0.0)})
        assert lip_gap(frame) == pytest.approx(0.03, abs=1e-12)

    def test_lip_gap_closed(self):
        frame = frame_with(overrides={13: (0.5, 0.60, 0.0), 14: (0.5, 0.60, 0.0)})
        assert lip_gap(frame) == 0.0

    def test_lip_gap_rotation_invariant(self, face):
        base = face.frame(0, lip_gap_units=0.02)
        rolled = face.frame(0, lip_gap_units=0.02, roll=25.0)
        assert lip_gap(rolled) == pytest.approx(lip_gap(base), abs=1e-12)


class TestHeadPose:
    def test_identity_any_scale_translation(self, template):
        pts = template.anchor_coords * 3.7 + np.array([0.2, -0.1, 0.05])
        observed_img = np.stack([pts[:, 0], -pts[:, 1], -pts[:, 2]], axis=1)
        overrides = {
            idx: observed_img[i] for i, idx in enumerate(template.anchor_indices)
        }
        # keep coordinates in range: recentre x,y around 0.5
        for idx, p in overrides.items():
            overrides[idx] = (0.5 + p[0] * 0.5, 0.5 + p[1] * 0.5, p[2] * 0.5)
        frame = frame_with(overrides=overrides)
        yaw, pitch, roll = head_pose(frame, template)
        assert abs(yaw) < 1e-9 and abs(pitch) < 1e-9 and abs(roll) < 1e-9

    def test_pure_yaw(self, face, template):
        yaw, pitch, roll = head_pose(face.frame(0, yaw=10.0), template)
        assert yaw == pytest.approx(10.0, abs=1e-6)
        assert pitch == pytest.approx(0.0, abs=1e-6)
        assert roll == pytest.approx(0.0, abs=1e-6)

    def test_composed_rotation_recovered(self, face, template):
        yaw, pitch, roll = head_pose(
            face.frame(0, yaw=20.0, pitch=-5.0, roll=3.0), template
        )
        assert yaw == pytest.approx(20.0, abs=1e-6)
        assert pitch == pytest.approx(-5.0, abs=1e-6)
        assert roll == pytest.approx(3.0, abs=1e-6)

    def test_collinear_anchors_degenerate(self, template):
        overrides = {
            idx: (0.4 + 0.02 * i, 0.5, 0.0)
            for i, idx in enumerate(template.anchor_indices)
        }
        with pytest.raises(DegenerateGeometry):
            head_pose(frame_with(overrides=overrides), template)

    def test_thousand_random_rotations_exact(self, face, template):
        rng = np.random.default_rng(7)
        worst = 0.0
        for i in range(1000):
            yaw, pitch, roll = rng.uniform(-60, 60, size=3)
            got = head_pose(face.frame(i, yaw=yaw, pitch=pitch, roll=roll), template)
            worst = max(
                worst, abs(got[0] - yaw), abs(got[1] - pitch), abs(got[2] - roll)
            )
        assert worst <= 1e-6

    def test_rotation_matches_independent_composition(self, face, template):
        # the engine's forward composition must agree with a from-scratch one
        rng = np.random.default_rng(11)
        for _ in range(50):
            angles = rng.uniform(-60, 60, size=3)
            assert np.allclose(
                rotation_matrix(*angles), make_rotation(*angles), atol=1e-12
            )


class TestEulerRoundTrip:
    @given(
        yaw=st.floats(-179, 179),
        pitch=st.floats(-84, 84),
        roll=st.floats(-179, 179),
    )
    @settings(max_examples=200, deadline=None)
    def test_compose_decompose(self, yaw, pitch, roll):
        r = make_rotation(yaw, pitch, roll)
        recomposed = rotation_matrix(*euler_from_matrix(r))
        assert np.linalg.norm(recomposed - r) < 1e-9

    def test_determinant_positive_even_for_reflected_noise(self, template):
        rng = np.random.default_rng(3)
        src = template.anchor_coords
        for _ in range(200):
            noisy = src @ make_rotation(*rng.uniform(-40, 40, 3)).T
            noisy = noisy + rng.normal(0, 0.02, size=noisy.shape)
            r = kabsch_rotation(src, noisy)
            assert np.linalg.det(r) == pytest.approx(1.0, abs=1e-9)


class TestGaze:
    def test_centered_iris_zero(self, face):
        h, v = gaze_offset(face.frame(0))
        assert h == pytest.approx(0.0, abs=1e-12)
        assert v == pytest.approx(0.0, abs=1e-12)

    def test_displacement_sign_convention(self):
        # both irises displaced 30% of half-width toward image-right (+x):
        # +x is the subject's left, so gaze_h is negative under the
        # subject-right-positive convention.
        overrides = {}
        for corners, iris_center in (
            (((33, (0.40, 0.5, 0.0)), (133, (0.44, 0.5, 0.0))), (0.42, 0.5)),
            (((362, (0.56, 0.5, 0.0)), (263, (0.60, 0.5, 0.0))), (0.58, 0.5)),
        ):
            for idx, coords in corners:
                overrides[idx] = coords
        half_width = 0.02
        for iris, center_x in ((LEFT_IRIS, 0.42), (RIGHT_IRIS, 0.58)):
            for idx in iris:
                overrides[idx] = (center_x + 0.3 * half_width, 0.5, 0.0)
        h, v = gaze_offset(frame_with(overrides=overrides))
        assert h == pytest.approx(-0.3, abs=1e-9)
        assert v == pytest.approx(0.0, abs=1e-9)

    def test_synthetic_gaze_parameter_round_trip(self, face):
        h, v = gaze_offset(face.frame(0, gaze_h=0.25, gaze_v=-0.1))
        assert h == pytest.approx(0.25, abs=1e-9)
        assert v == pytest.approx(-0.1, abs=1e-9)

    def test_gaze_survives_head_rotation(self, face):
        h, v = gaze_offset(face.frame(0, gaze_h=0.2, yaw=15.0))
        assert h == pytest.approx(0.2, abs=1e-9)

    def test_coincident_corners_degenerate(self):
        overrides = {33: (0.4, 0.5, 0.0), 133: (0.4, 0.5, 0.0)}
        with pytest.raises(DegenerateGeometry):
            gaze_offset(frame_with(overrides=overrides))


def hand_at(x, y):
    pts = np.zeros((HAND_POINT_COUNT, 3))
    pts[:, 0] = x
    pts[:, 1] = y
    return pts


class TestHandSpeed:
    def test_stationary(self):
        scale = ScaleCalibration(0.63)
        a = frame_with(t_ms=0, left_hand=hand_at(0.3, 0.8))
        b = frame_with(t_ms=33, left_hand=hand_at(0.3, 0.8))
        assert hand_speed(a, b, scale) == 0.0

    def test_hand_computed_speed(self):
        scale = ScaleCalibration(0.63)
        a = frame_with(t_ms=0, left_hand=hand_at(0.3, 0.8))
        b = frame_with(t_ms=33, left_hand=hand_at(0.3165, 0.8))
        assert hand_speed(a, b, scale) == pytest.approx(0.315, abs=1e-9)

    def test_no_shared_hand_absent(self):
        scale = ScaleCalibration(0.63)
        a = frame_with(t_ms=0)
        b = frame_with(t_ms=33, left_hand=hand_at(0.3, 0.8))
        assert hand_speed(a, b, scale) is None

    def test_max_over_hands(self):
        scale = ScaleCalibration(1.0)
        a = frame_with(t_ms=0, left_hand=hand_at(0.3, 0.8), right_hand=hand_at(0.7, 0.8))
        b = frame_with(
            t_ms=1000, left_hand=hand_at(0.31, 0.8), right_hand=hand_at(0.75, 0.8)
        )
        assert hand_speed(a, b, scale) == pytest.approx(0.05, abs=1e-12)

    def test_scales_linearly_with_meters_per_unit(self):
        a = frame_with(t_ms=0, left_hand=hand_at(0.3, 0.8))
        b = frame_with(t_ms=100, left_hand=hand_at(0.35, 0.8))
        v1 = hand_speed(a, b, ScaleCalibration(0.5))
        v2 = hand_speed(a, b, ScaleCalibration(1.0))
        assert v2 == pytest.approx(2 * v1, rel=1e-12)

    def test_zero_interval_rejected(self):
        scale = ScaleCalibration(0.63)
        a = frame_with(t_ms=50, left_hand=hand_at(0.3, 0.8))
        b = frame_with(t_ms=50, left_hand=hand_at(0.3, 0.8))
        with pytest.raises(ZeroInterval):
            hand_speed(a, b, scale)


class TestExtractFeatures:
    def test_first_frame_no_hand_speed(self, face, template):
        f = extract_features(None, face.frame(0, left_wrist=(0.3, 0.9)), template, None)
        assert f.hand_speed_mps is None
        assert f.flags == ()

    def test_neutral_face_values(self, face, template):
        # lip gap zero needs coincident inner lips
        frame = face.frame(0, lip_gap_units=0.0)
        f = extract_features(None, frame, template, None)
        assert f.yaw_deg == pytest.approx(0.0, abs=1e-9)
        assert f.pitch_deg == pytest.approx(0.0, abs=1e-9)
        assert f.roll_deg == pytest.approx(0.0, abs=1e-9)
        assert f.gaze_h == pytest.approx(0.0, abs=1e-9)
        assert f.gaze_v == pytest.approx(0.0, abs=1e-9)
        assert f.lip_gap == pytest.approx(0.0, abs=1e-12)
        assert f.ear_left == pytest.approx(0.3, abs=1e-9)
        assert f.ear_right == pytest.approx(0.3, abs=1e-9)

    def test_closed_eyes(self, face, template):
        f = extract_features(None, face.frame(0, eye_openness=0.0), template, None)
        assert f.ear_left == pytest.approx(0.0, abs=1e-12)
        assert f.ear_right == pytest.approx(0.0, abs=1e-12)

    def test_degenerate_feature_flagged_not_fatal(self, face, template):
        frame = face.frame(0)
        pts = frame.face.copy()
        # collapse the left eye corners: EAR and gaze become degenerate
        pts[33] = pts[133]
        pts.setflags(write=False)
        broken = type(frame)(t_ms=0, face=pts)
        f = extract_features(None, broken, template, None)
        assert f.ear_left is None
        assert "ear_left" in f.flags
        assert f.gaze_h is None and "gaze" in f.flags
        # everything else still measured
        assert f.lar is not None and f.yaw_deg is not None

    def test_ratio_features_scale_and_translation_invariant(self, face, template):
        base = face.frame(0, lar=1.5, lip_gap_units=0.02, gaze_h=0.1)
        ref = extract_features(None, base, template, None)
        pts = (base.face - np.array([0.5, 0.5, 0.0])) * 0.6 + np.array([0.55, 0.45, 0.0])
        scaled = type(base)(t_ms=0, face=pts)
        got = extract_features(None, scaled, template, None)
        assert got.ear_left == pytest.approx(ref.ear_left, rel=1e-9)
        assert got.lar == pytest.approx(ref.lar, rel=1e-9)
        assert got.gaze_h == pytest.approx(ref.gaze_h, rel=1e-9)
        assert got.yaw_deg == pytest.approx(ref.yaw_deg, abs=1e-6)
