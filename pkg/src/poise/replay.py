"""Deterministic offline scoring of recorded session files.

The same engine as the live service, driven from a ``.pose.ndjson`` file.
Output is one report line per scored frame (no timing fields) followed by
nothing else on that stream, so two replays of the same file with the same
config produce byte-identical report streams.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import IO, Callable

from .config import EngineConfig
from .engine import SessionEngine
from .landmarks import LandmarkFrame, SessionHeader, read_session, serialize_frame, write_session_header
from .scoring import ConfidenceReport, SessionSummary
from .wire import report_line


@dataclass
class ReplayResult:
    header: SessionHeader
    reports: list[ConfidenceReport]
    summary: SessionSummary


def replay_stream(
    fp: IO[str],
    config: EngineConfig,
    on_report: Callable[[str], None] | None = None,
) -> ReplayResult:
    """Score every frame of an open session stream.

    ``on_report`` receives each canonical report line as it is produced.
    """
    header, frames = read_session(fp)
    engine = SessionEngine(config)
    for frame in frames:
        report = engine.process(frame)
        if report is not None and on_report is not None:
            on_report(report_line(report))
    return ReplayResult(header=header, reports=engine.reports, summary=engine.summary())


def replay_file(
    path: str | Path,
    config: EngineConfig,
    out_fp: IO[str] | None = None,
) -> ReplayResult:
    """Replay a session file, writing report lines to ``out_fp`` if given."""
    sink = None
    if out_fp is not None:
        sink = lambda line: out_fp.write(line + "\n")
    with open(path, encoding="utf-8") as fp:
        return replay_stream(fp, config, on_report=sink)


class SessionRecorder:
    """Writes a header plus frames to a session file as they arrive.

    Replaying the recorded file reproduces live scoring report-for-report.
    """

    def __init__(self, path: str | Path, source: str = "", started_at: str = ""):
        self.path = Path(path)
        try:
            self._fp = open(self.path, "w", encoding="utf-8", newline="\n")
        except OSError as e:
            raise OSError(f"cannot open session file {self.path}: {e}") from e
        write_session_header(
            self._fp, SessionHeader(source=source, started_at=started_at)
        )
        self.frames_written = 0

    def add(self, frame: LandmarkFrame) -> None:
        self._fp.write(serialize_frame(frame) + "\n")
        self.frames_written += 1

    def close(self) -> None:
        if not self._fp.closed:
            self._fp.close()

    def __enter__(self) -> "SessionRecorder":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def write_session(
    path: str | Path,
    frames,
    source: str = "",
    started_at: str = "",
) -> int:
    """Write a whole frame sequence to a session file; returns frame count."""
    with SessionRecorder(path, source=source, started_at=started_at) as rec:
        for frame in frames:
            rec.add(frame)
        return rec.frames_written
