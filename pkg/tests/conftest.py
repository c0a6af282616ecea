import numpy as np
import pytest

from poise.config import default_config
from poise.geometry import load_default_template
from poise.landmarks import FACE_POINT_COUNT, LandmarkFrame
from poise.replay import write_session
from poise.synthetic import SyntheticFace, generate_preset


@pytest.fixture(scope="session")
def template():
    return load_default_template()


@pytest.fixture(scope="session")
def face():
    return SyntheticFace()


@pytest.fixture()
def config():
    return default_config()


@pytest.fixture(scope="session")
def calm_session_file(tmp_path_factory):
    """The calm 60 s golden input, regenerated deterministically per run."""
    path = tmp_path_factory.mktemp("fixtures") / "calm_60s.pose.ndjson"
    write_session(
        path,
        generate_preset("calm", 60, 30),
        source="synthetic:calm",
        started_at="2025-01-01T00:00:00+00:00",
    )
    return path


def blank_face(fill=0.5):
    pts = np.full((FACE_POINT_COUNT, 3), fill, dtype=np.float64)
    pts[:, 2] = 0.0
    return pts


def frame_with(t_ms=0, face_points=None, overrides=None, left_hand=None, right_hand=None):
    """Hand-built frame: all face points at a neutral fill, with specific
    indices overridden; used for spec-example checks with exact coordinates.
    """
    pts = blank_face() if face_points is None else np.array(face_points, dtype=np.float64)
    for index, coords in (overrides or {}).items():
        pts[int(index)] = coords
    pts.setflags(write=False)
    return LandmarkFrame(t_ms=t_ms, face=pts, left_hand=left_hand, right_hand=right_hand)
