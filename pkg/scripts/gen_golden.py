#!/usr/bin/env python3
"""Regenerate the checked-in golden expectations for the calm fixture.

Run after an intentional engine change:

    python scripts/gen_golden.py

Writes tests/data/: the first report lines (human-inspectable), the SHA-256
of the full report stream, and the session summary line.
"""

import hashlib
import tempfile
from pathlib import Path

from poise.config import default_config
from poise.replay import replay_file, write_session
from poise.synthetic import generate_preset
from poise.wire import report_line, summary_line

HEAD_LINES = 60


def main() -> int:
    data_dir = Path(__file__).resolve().parent.parent / "tests" / "data"
    data_dir.mkdir(parents=True, exist_ok=True)

    with tempfile.TemporaryDirectory() as tmp:
        session_path = Path(tmp) / "calm_60s.pose.ndjson"
        write_session(
            session_path,
            generate_preset("calm", 60, 30),
            source="synthetic:calm",
            started_at="2025-01-01T00:00:00+00:00",
        )
        result = replay_file(session_path, default_config())

    lines = [report_line(r) for r in result.reports]
    stream = "".join(line + "\n" for line in lines)

    (data_dir / "calm_60s.reports.head.ndjson").write_text(
        "".join(line + "\n" for line in lines[:HEAD_LINES])
    )
    digest = hashlib.sha256(stream.encode("utf-8")).hexdigest()
    (data_dir / "calm_60s.reports.sha256").write_text(digest + "\n")
    (data_dir / "calm_60s.summary.json").write_text(summary_line(result.summary) + "\n")

    print(f"{len(lines)} report lines, sha256 {digest}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
