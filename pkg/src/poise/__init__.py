"""Real-time speaker-confidence scoring from streamed face and hand landmarks.

The pipeline: validated landmark frames -> per-frame geometric features ->
sliding-window statistics -> six weighted channel scores -> a confidence
percentage and category. A replay/bench CLI and a newline-delimited JSON
WebSocket service wrap the same engine.
"""

from .config import EngineConfig, default_config, load_config
from .engine import SessionEngine
from .errors import PoiseError
from .geometry import FaceTemplate, FeatureFrame, extract_features, load_default_template
from .landmarks import (
    LandmarkFrame,
    ScaleCalibration,
    SessionHeader,
    compute_scale,
    parse_frame,
    serialize_frame,
    validate_stream_order,
)
from .scoring import (
    ChannelScores,
    ConfidenceReport,
    SessionSummary,
    Weights,
    aggregate,
    categorize,
    summarize,
    to_percentage,
)
from .temporal import NeutralPose, TemporalAnalyzer, WindowStats, calibrate_neutral

__version__ = "0.1.0"

__all__ = [
    "ChannelScores",
    "ConfidenceReport",
    "EngineConfig",
    "FaceTemplate",
    "FeatureFrame",
    "LandmarkFrame",
    "NeutralPose",
    "PoiseError",
    "ScaleCalibration",
    "SessionEngine",
    "SessionHeader",
    "SessionSummary",
    "TemporalAnalyzer",
    "Weights",
    "WindowStats",
    "aggregate",
    "calibrate_neutral",
    "categorize",
    "compute_scale",
    "default_config",
    "extract_features",
    "load_config",
    "load_default_template",
    "parse_frame",
    "serialize_frame",
    "summarize",
    "to_percentage",
    "validate_stream_order",
]
