"""Channel score maps, weighted aggregation, and session summaries.

Each channel maps a windowed statistic to a confidence value in [0.4, 1.2]
through a piecewise-linear curve pinned to fixed band anchors: the high band
is 0.9-1.2, the medium band 0.6-0.8, the low floor 0.4. Interior slopes are
straight lines between anchors; there are no free parameters. The maps step
down at band boundaries by construction.

Aggregation keeps the raw weights (summing to 0.85 by default) and divides
by their sum, so per-channel contributions are reported pre-normalization
while the total stays a convex combination of the channel scores.

Everything here is pure and stateless.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import AllWeightsZero, EmptySession, NegativeRate, NegativeSpeed
from .temporal import WindowStats

CHANNELS = ("hand", "smile", "lip", "blink", "head", "gaze")

HIGH = "High"
MEDIUM = "Medium"
LOW = "Low"


@dataclass(frozen=True)
class Weights:
    """Relative channel importance. Defaults: hand 30%, head 15%, others 10%."""

    hand: float = 0.30
    smile: float = 0.10
    lip: float = 0.10
    blink: float = 0.10
    head: float = 0.15
    gaze: float = 0.10

    def __post_init__(self):
        values = self.as_dict()
        for name, v in values.items():
            if v < 0:
                raise ValueError(f"weight {name} must be >= 0, got {v}")
        if all(v == 0 for v in values.values()):
            raise AllWeightsZero("at least one weight must be > 0")

    def as_dict(self) -> dict[str, float]:
        return {name: getattr(self, name) for name in CHANNELS}

    @property
    def total(self) -> float:
        return sum(self.as_dict().values())


@dataclass(frozen=True)
class ChannelScores:
    """Six per-channel confidence values, each in [0.4, 1.2]."""

    hand: float
    smile: float
    lip: float
    blink: float
    head: float
    gaze: float

    def as_dict(self) -> dict[str, float]:
        return {name: getattr(self, name) for name in CHANNELS}


def score_hand(mean_speed: float | None) -> float:
    """Hand-gesture channel from mean wrist speed in m/s.

    Moderate speeds (0.2-0.5) score high, peaking at 1.2 at 0.35; above
    0.5 the score drops to the medium band and past 0.7 to the floor.
    No visible hand is neutral.
    """
    if mean_speed is None:
        return 0.6
    v = mean_speed
    if v < 0:
        raise NegativeSpeed(f"hand speed {v} < 0")
    if v <= 0.05:
        return 0.6
    if v < 0.2:
        return 0.6 + (v - 0.05) / 0.15 * 0.3
    if v <= 0.5:
        return 1.2 - 2.0 * abs(v - 0.35)
    if v <= 0.7:
        return 0.8 - (v - 0.5) / 0.2 * 0.2
    return 0.4


def score_smile(smile_fraction: float) -> float:
    """Smile channel: 0.6 base up to 1.2 when smiling the whole window."""
    if not 0.0 <= smile_fraction <= 1.0:
        raise ValueError(f"smile fraction {smile_fraction} outside [0, 1]")
    return 0.6 + 0.6 * smile_fraction


def score_blink(rate_per_min: float) -> float:
    """Blink channel: 1.0 at rest, medium band at 12-15/min, 0.4 past 15."""
    r = rate_per_min
    if r < 0:
        raise NegativeRate(f"blink rate {r} < 0")
    if r <= 12:
        return 1.0 - (r / 12.0) * 0.2
    if r <= 15:
        return 0.8 - (r - 12.0) / 3.0 * 0.2
    return 0.4


def score_head(deviation_fraction: float) -> float:
    """Head channel from the fraction of frames deviating beyond threshold."""
    f = deviation_fraction
    if not 0.0 <= f <= 1.0:
        raise ValueError(f"deviation fraction {f} outside [0, 1]")
    if f <= 0.1:
        return 1.0 - f
    if f <= 0.4:
        return 0.8 - (f - 0.1) / 0.3 * 0.2
    return 0.4


def score_lip(longest_still_ms: int, activity_fraction: float) -> float:
    """Lip channel: stillness beyond 5 s pins 0.5; otherwise scales with activity."""
    if longest_still_ms > 5000:
        return 0.5
    return min(1.2, 0.6 + 0.6 * activity_fraction)


def score_gaze(shift_rate_per_min: float) -> float:
    """Gaze channel: 1.2 for a steady gaze, medium band to 10/min, then 0.4."""
    c = shift_rate_per_min
    if c < 0:
        raise NegativeRate(f"gaze shift rate {c} < 0")
    if c <= 3:
        return 1.2 - 0.1 * c
    if c <= 10:
        return 0.8 - (c - 3.0) / 7.0 * 0.2
    return 0.4


def score_channels(stats: WindowStats) -> ChannelScores:
    return ChannelScores(
        hand=score_hand(stats.mean_hand_speed_mps),
        smile=score_smile(stats.smile_fraction),
        lip=score_lip(stats.lip_longest_still_ms, stats.lip_activity_fraction),
        blink=score_blink(stats.blink_rate_per_min),
        head=score_head(stats.head_deviation_fraction),
        gaze=score_gaze(stats.gaze_shift_rate_per_min),
    )


def aggregate(
    channels: ChannelScores, weights: Weights
) -> tuple[dict[str, float], float]:
    """Per-channel contributions (score x raw weight) and the weighted total.

    The total divides by the raw weight sum, so scaling all weights by a
    positive constant leaves it unchanged.
    """
    w = weights.as_dict()
    total_weight = weights.total
    if total_weight <= 0:
        raise AllWeightsZero("weights sum to zero")
    scores = channels.as_dict()
    contributions = {name: scores[name] * w[name] for name in CHANNELS}
    weighted_total = sum(contributions.values()) / total_weight
    return contributions, weighted_total


def to_percentage(weighted_total: float) -> float:
    """Confidence percentage, capped at 100. Full precision; round for display."""
    return 100.0 * min(1.0, weighted_total)


def categorize(weighted_total: float) -> str:
    """High at >= 0.9, Medium at >= 0.6, Low below."""
    if weighted_total >= 0.9:
        return HIGH
    if weighted_total >= 0.6:
        return MEDIUM
    return LOW


@dataclass(frozen=True)
class ConfidenceReport:
    """One frame's scored output."""

    t_ms: int
    channels: ChannelScores
    contributions: dict[str, float]
    weighted_total: float
    percentage: float
    category: str

    @property
    def display_percentage(self) -> float:
        return round(self.percentage, 2)


def build_report(
    t_ms: int,
    stats: WindowStats,
    weights: Weights,
    smile_global_multiplier: bool = False,
) -> ConfidenceReport:
    """Score one frame's window stats into a report.

    With ``smile_global_multiplier`` the smile signal acts as a whole-score
    multiplier instead of a channel: smile weight is dropped from the
    aggregation and a >50% smile fraction boosts the total by 1.2x (capped
    at 1.2). Off by default; the channel formulation is the primary mode.
    """
    channels = score_channels(stats)
    if smile_global_multiplier:
        weights = Weights(**{**weights.as_dict(), "smile": 0.0})
        contributions, total = aggregate(channels, weights)
        if stats.smile_fraction > 0.5:
            total = min(1.2, total * 1.2)
    else:
        contributions, total = aggregate(channels, weights)
    return ConfidenceReport(
        t_ms=t_ms,
        channels=channels,
        contributions=contributions,
        weighted_total=total,
        percentage=to_percentage(total),
        category=categorize(total),
    )


@dataclass(frozen=True)
class SessionSummary:
    """Whole-session aggregates, weighted by inter-frame time."""

    duration_ms: int
    report_count: int
    mean_percentage: float
    min_percentage: float
    max_percentage: float
    mean_weighted_total: float
    category_fractions: dict[str, float]
    total_blink_count: int
    channel_means: dict[str, float]


def summarize(reports: list[ConfidenceReport], total_blinks: int = 0) -> SessionSummary:
    """Time-weighted session summary.

    Each report is weighted by the interval since the previous report (the
    first gets zero weight); a single-report session falls back to the
    report's own values.
    """
    if not reports:
        raise EmptySession("no reports to summarize")
    duration = reports[-1].t_ms - reports[0].t_ms
    if duration <= 0:
        only = reports[0]
        return SessionSummary(
            duration_ms=0,
            report_count=len(reports),
            mean_percentage=only.percentage,
            min_percentage=min(r.percentage for r in reports),
            max_percentage=max(r.percentage for r in reports),
            mean_weighted_total=only.weighted_total,
            category_fractions={
                c: (1.0 if c == only.category else 0.0) for c in (HIGH, MEDIUM, LOW)
            },
            total_blink_count=total_blinks,
            channel_means=reports[0].channels.as_dict(),
        )
    mean_pct = 0.0
    mean_total = 0.0
    cat_weight = {HIGH: 0.0, MEDIUM: 0.0, LOW: 0.0}
    channel_sums = {name: 0.0 for name in CHANNELS}
    for prev, cur in zip(reports, reports[1:]):
        w = cur.t_ms - prev.t_ms
        mean_pct += w * cur.percentage
        mean_total += w * cur.weighted_total
        cat_weight[cur.category] += w
        for name, v in cur.channels.as_dict().items():
            channel_sums[name] += w * v
    return SessionSummary(
        duration_ms=duration,
        report_count=len(reports),
        mean_percentage=mean_pct / duration,
        min_percentage=min(r.percentage for r in reports),
        max_percentage=max(r.percentage for r in reports),
        mean_weighted_total=mean_total / duration,
        category_fractions={c: cat_weight[c] / duration for c in (HIGH, MEDIUM, LOW)},
        total_blink_count=total_blinks,
        channel_means={name: channel_sums[name] / duration for name in CHANNELS},
    )
