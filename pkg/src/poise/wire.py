"""Newline-delimited JSON message encoding for the live protocol and replay.

Message types: ``frame`` (inbound), ``report``, ``error``, ``end``,
``summary``. Every message is one JSON object with a ``type`` field; frames
reuse the session-file record schema. Encoding is canonical (fixed key
order, shortest-repr floats) so a replayed report stream is byte-identical
across runs.
"""

from __future__ import annotations

import json

from .errors import MalformedRecord, PoiseError, SchemaViolation
from .landmarks import LandmarkFrame, frame_from_obj
from .scoring import CHANNELS, ConfidenceReport, SessionSummary

FRAME = "frame"
REPORT = "report"
ERROR = "error"
END = "end"
SUMMARY = "summary"


def _dumps(obj: dict) -> str:
    return json.dumps(obj, separators=(",", ":"), allow_nan=False)


def report_obj(
    report: ConfidenceReport,
    processing_us: int | None = None,
    queue_depth: int | None = None,
) -> dict:
    """Wire form of a report. Timing fields are live-only telemetry and are
    omitted from replay output so replays stay byte-deterministic.
    """
    obj = {
        "type": REPORT,
        "t_ms": report.t_ms,
        "percentage": report.display_percentage,
        "category": report.category,
        "weighted_total": float(report.weighted_total),
        "channels": {name: float(v) for name, v in report.channels.as_dict().items()},
        "contributions": {name: float(report.contributions[name]) for name in CHANNELS},
    }
    if processing_us is not None:
        obj["processing_us"] = int(processing_us)
    if queue_depth is not None:
        obj["queue_depth"] = int(queue_depth)
    return obj


def report_line(
    report: ConfidenceReport,
    processing_us: int | None = None,
    queue_depth: int | None = None,
) -> str:
    return _dumps(report_obj(report, processing_us, queue_depth))


def summary_obj(summary: SessionSummary) -> dict:
    return {
        "type": SUMMARY,
        "duration_ms": summary.duration_ms,
        "report_count": summary.report_count,
        "mean_percentage": float(summary.mean_percentage),
        "min_percentage": float(summary.min_percentage),
        "max_percentage": float(summary.max_percentage),
        "mean_weighted_total": float(summary.mean_weighted_total),
        "category_fractions": {k: float(v) for k, v in summary.category_fractions.items()},
        "total_blink_count": summary.total_blink_count,
        "channel_means": {name: float(summary.channel_means[name]) for name in CHANNELS},
    }


def summary_line(summary: SessionSummary) -> str:
    return _dumps(summary_obj(summary))


def error_line(error: PoiseError | str, message: str | None = None) -> str:
    if isinstance(error, PoiseError):
        code, message = error.code, str(error)
    else:
        code = error
    return _dumps({"type": ERROR, "code": code, "message": message or ""})


def end_line() -> str:
    return _dumps({"type": END})


def decode_message(raw: str) -> tuple[str, dict]:
    """Classify one inbound message into (type, decoded object).

    Raises MalformedRecord for non-JSON input and SchemaViolation for an
    unknown message type; frame payloads are validated by the caller.
    """
    try:
        obj = json.loads(raw)
    except json.JSONDecodeError as e:
        raise MalformedRecord(f"invalid JSON message: {e}") from e
    if not isinstance(obj, dict):
        raise MalformedRecord("message must be a JSON object")
    msg_type = obj.get("type", FRAME)
    if msg_type not in (FRAME, END):
        raise SchemaViolation(f"unsupported inbound message type {msg_type!r}")
    return msg_type, obj


def decode_frame(obj: dict) -> LandmarkFrame:
    return frame_from_obj(obj)
