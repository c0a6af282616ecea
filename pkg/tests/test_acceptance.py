"""Acceptance suite: one test per contract criterion, each printing a
PASS/FAIL line (run with ``pytest tests/test_acceptance.py -s`` to see them).

Tolerances are pinned here, not calibrated elsewhere.
"""

import hashlib
import io
import random
import time
from contextlib import contextmanager
from pathlib import Path

import numpy as np

from poise.bench import run_bench
from poise.config import default_config
from poise.engine import SessionEngine
from poise.geometry import head_pose
from poise.landmarks import LandmarkFrame
from poise.replay import SessionRecorder, replay_file
from poise.scoring import (
    CHANNELS,
    ChannelScores,
    Weights,
    aggregate,
    categorize,
    score_blink,
    score_gaze,
    score_hand,
    score_head,
    score_lip,
    score_smile,
    to_percentage,
)
from poise.synthetic import generate_preset
from poise.temporal import BlinkDetector, WindowStats
from poise.wire import report_obj

import oracles

DATA = Path(__file__).parent / "data"


@contextmanager
def criterion(num, title):
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE {num:02d} FAIL  {title}")
        raise
    print(f"ACCEPTANCE {num:02d} PASS  {title}")


def test_01_gaze_contribution_example():
    with criterion(1, "gaze 0.9 x weight 0.15 contributes exactly 0.135"):
        channels = ChannelScores(hand=1.0, smile=1.0, lip=1.0, blink=1.0, head=1.0, gaze=0.9)
        contributions, _ = aggregate(channels, Weights(gaze=0.15))
        assert abs(contributions["gaze"] - 0.135) <= 1e-12


def test_02_weight_table_fidelity():
    with criterion(2, "default weights (0.30,0.10,0.10,0.10,0.15,0.10), sum 0.85"):
        w = default_config().weights
        assert (w.hand, w.smile, w.lip, w.blink, w.head, w.gaze) == (
            0.30, 0.10, 0.10, 0.10, 0.15, 0.10,
        )
        assert abs(w.total - 0.85) <= 1e-12
        # aggregation divides by exactly that sum
        channels = ChannelScores(**{c: 1.0 for c in CHANNELS})
        contributions, total = aggregate(channels, w)
        assert abs(total - sum(contributions.values()) / 0.85) <= 1e-12


def test_03_band_anchors():
    with criterion(3, "printed band anchors reproduced exactly"):
        assert score_blink(16) == 0.4
        assert score_hand(1.0) == 0.4
        assert score_lip(6000, 0.0) == 0.5
        assert score_gaze(0) == 1.2
        assert score_head(0) == 1.0
        assert score_smile(1) == 1.2


def test_04_percentage_display():
    with criterion(4, "weighted total 0.9077 renders as 90.77%"):
        assert round(to_percentage(0.9077), 2) == 90.77


def test_05_latency_budget(config):
    with criterion(5, "calm 60 s @ 30 fps: p95 frame time < 30 ms"):
        result, _ = run_bench("calm", 60, 30, config)
        print(f"  p50={result.p50_ms:.3f} ms  p95={result.p95_ms:.3f} ms  "
              f"p99={result.p99_ms:.3f} ms")
        assert result.p95_ms < 30.0


def test_06_pose_recovery(face, template):
    with criterion(6, "1000 random rotations: exact noiseless, >=95% within 2 deg noisy"):
        started = time.perf_counter()
        rng = np.random.default_rng(20250810)
        worst_clean = 0.0
        within = 0
        n = 1000
        for i in range(n):
            yaw, pitch, roll = rng.uniform(-45, 45, size=3)
            frame = face.frame(i, yaw=yaw, pitch=pitch, roll=roll)
            got = head_pose(frame, template)
            worst_clean = max(
                worst_clean,
                abs(got[0] - yaw), abs(got[1] - pitch), abs(got[2] - roll),
            )
            noisy_points = frame.face + rng.normal(0.0, 0.002, size=frame.face.shape)
            noisy = LandmarkFrame(t_ms=i, face=noisy_points)
            got = head_pose(noisy, template)
            err = max(abs(got[0] - yaw), abs(got[1] - pitch), abs(got[2] - roll))
            if err <= 2.0:
                within += 1
        elapsed = time.perf_counter() - started
        print(f"  worst noiseless: {worst_clean:.2e} deg; "
              f"noisy within 2 deg: {within/10:.1f}%; runtime {elapsed:.1f} s")
        assert worst_clean <= 1e-6
        assert within >= 950
        assert elapsed < 10.0


def test_07_preset_categories(config):
    with criterion(7, "presets score their designed categories, deterministically"):
        expected = {"calm": "High", "nervous": "Low", "distracted": "Medium"}
        for preset, want in expected.items():
            runs = [run_bench(preset, 15, 30, config)[0] for _ in range(2)]
            for result in runs:
                assert result.mean_category == want, (preset, result.mean_category)
            assert runs[0].mean_percentage == runs[1].mean_percentage


def test_08_blink_oracle():
    with criterion(8, "100 random EAR traces: streaming count == brute-force scan"):
        rng = random.Random(424242)
        for _ in range(100):
            n = rng.randrange(10, 400)
            ears = []
            ear = 0.3
            for _ in range(n):
                # random walk with occasional hard dips, mid-zone visits included
                r = rng.random()
                if r < 0.08:
                    ear = rng.uniform(0.0, 0.20)
                elif r < 0.16:
                    ear = rng.uniform(0.21, 0.25)
                else:
                    ear = rng.uniform(0.26, 0.40)
                ears.append(ear)
            det = BlinkDetector()
            for i, e in enumerate(ears):
                det.update(e, i * 33)
            assert det.total_blinks == oracles.blink_count_offline(ears)


def test_09_scoring_oracle():
    with criterion(9, "1000 random stats: engine matches reference maps to 1e-12"):
        rng = random.Random(99)
        weights = Weights()
        wdict = weights.as_dict()
        for _ in range(1000):
            stats = WindowStats(
                now_ms=0,
                window_span_ms=10_000,
                blink_window_span_ms=60_000,
                blink_rate_per_min=rng.uniform(0, 40),
                head_deviation_fraction=rng.uniform(0, 1),
                gaze_shift_rate_per_min=rng.uniform(0, 25),
                smile_fraction=rng.uniform(0, 1),
                lip_longest_still_ms=rng.randrange(0, 15_000),
                lip_activity_fraction=rng.uniform(0, 1),
                mean_hand_speed_mps=None if rng.random() < 0.1 else rng.uniform(0, 2),
            )
            got = {
                "hand": score_hand(stats.mean_hand_speed_mps),
                "smile": score_smile(stats.smile_fraction),
                "lip": score_lip(stats.lip_longest_still_ms, stats.lip_activity_fraction),
                "blink": score_blink(stats.blink_rate_per_min),
                "head": score_head(stats.head_deviation_fraction),
                "gaze": score_gaze(stats.gaze_shift_rate_per_min),
            }
            want = {
                "hand": oracles.hand_map(stats.mean_hand_speed_mps),
                "smile": oracles.smile_map(stats.smile_fraction),
                "lip": oracles.lip_map(stats.lip_longest_still_ms, stats.lip_activity_fraction),
                "blink": oracles.blink_map(stats.blink_rate_per_min),
                "head": oracles.head_map(stats.head_deviation_fraction),
                "gaze": oracles.gaze_map(stats.gaze_shift_rate_per_min),
            }
            for name in CHANNELS:
                assert abs(got[name] - want[name]) <= 1e-12, name
            contributions, total = aggregate(ChannelScores(**got), weights)
            ref_contrib, ref_total = oracles.aggregate_ref(want, wdict)
            for name in CHANNELS:
                assert abs(contributions[name] - ref_contrib[name]) <= 1e-12
            assert abs(total - ref_total) <= 1e-12


def test_10_replay_determinism(calm_session_file, config, tmp_path):
    with criterion(10, "golden replay byte-identical; record->replay == live"):
        out1, out2 = io.StringIO(), io.StringIO()
        replay_file(calm_session_file, config, out_fp=out1)
        replay_file(calm_session_file, config, out_fp=out2)
        assert out1.getvalue() == out2.getvalue() and out1.getvalue()
        digest = hashlib.sha256(out1.getvalue().encode()).hexdigest()
        assert digest == (DATA / "calm_60s.reports.sha256").read_text().strip()

        frames = list(generate_preset("distracted", 5, 30))
        engine = SessionEngine(config)
        live = [report_obj(r) for r in filter(None, map(engine.process, frames))]
        path = tmp_path / "roundtrip.pose.ndjson"
        with SessionRecorder(path) as rec:
            for frame in frames:
                rec.add(frame)
        replayed = replay_file(path, config)
        assert [report_obj(r) for r in replayed.reports] == live


def test_11_invariant_suites():
    with criterion(11, "map ranges, monotonicity, convexity, weight scaling"):
        # ranges over dense input grids
        for fn, hi in ((score_hand, 1.5), (score_blink, 40.0), (score_gaze, 25.0)):
            for i in range(1001):
                v = fn(hi * i / 1000)
                assert 0.4 <= v <= 1.2, fn.__name__
        for i in range(1001):
            f = i / 1000
            assert 0.4 <= score_smile(f) <= 1.2
            assert 0.4 <= score_head(f) <= 1.2
            assert 0.4 <= score_lip(int(12_000 * f), f) <= 1.2
        # monotonicity on grids
        grid = [i / 1000 for i in range(1001)]
        for fn, scale_, sign in (
            (score_blink, 40.0, -1),
            (score_gaze, 25.0, -1),
            (score_head, 1.0, -1),
            (score_smile, 1.0, +1),
        ):
            values = [fn(x * scale_) for x in grid]
            deltas = [b - a for a, b in zip(values, values[1:])]
            assert all(sign * d >= -1e-12 for d in deltas), fn.__name__
        # convexity and weight-scale invariance
        rng = random.Random(17)
        for _ in range(300):
            scores = {c: rng.uniform(0.4, 1.2) for c in CHANNELS}
            raw = {c: rng.uniform(0.0, 3.0) for c in CHANNELS}
            if sum(raw.values()) <= 1e-9:
                raw["hand"] = 1.0
            k = rng.uniform(0.1, 20.0)
            channels = ChannelScores(**scores)
            _, total = aggregate(channels, Weights(**raw))
            _, scaled = aggregate(channels, Weights(**{c: v * k for c, v in raw.items()}))
            assert min(scores.values()) - 1e-9 <= total <= max(scores.values()) + 1e-9
            assert abs(total - scaled) <= 1e-9
            assert categorize(total) == categorize(scaled)
            assert abs(to_percentage(total) - to_percentage(scaled)) <= 1e-7
