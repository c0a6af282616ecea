"""Figure rendering for the report paths: session timeline, channel means,
and bench latency distribution. Written as files next to the delimited
output; uses matplotlib's object API so no global backend state is touched.
"""

from __future__ import annotations

from pathlib import Path

from matplotlib.figure import Figure

from .scoring import CHANNELS, ConfidenceReport, SessionSummary

# Band colors follow the category thresholds: >= 0.9 green, >= 0.6 amber, red.
_BAND_GREEN = "#2e9e4f"
_BAND_AMBER = "#e0a437"
_BAND_RED = "#cc4433"


def _band_color(score: float) -> str:
    if score >= 0.9:
        return _BAND_GREEN
    if score >= 0.6:
        return _BAND_AMBER
    return _BAND_RED


def render_timeline(reports: list[ConfidenceReport], path: str | Path) -> Path:
    """Confidence percentage over the session, with category bands shaded."""
    path = Path(path)
    fig = Figure(figsize=(9, 3.2), dpi=120)
    ax = fig.subplots()
    t = [r.t_ms / 1000.0 for r in reports]
    pct = [r.percentage for r in reports]
    ax.axhspan(90, 100, color=_BAND_GREEN, alpha=0.12)
    ax.axhspan(60, 90, color=_BAND_AMBER, alpha=0.10)
    ax.axhspan(0, 60, color=_BAND_RED, alpha=0.08)
    ax.plot(t, pct, lw=1.2, color="#1f5fa8")
    ax.set_xlabel("session time (s)")
    ax.set_ylabel("confidence (%)")
    ax.set_ylim(0, 105)
    if t:
        ax.set_xlim(t[0], max(t[-1], t[0] + 1))
    ax.set_title("Confidence timeline")
    fig.tight_layout()
    fig.savefig(path)
    return path


def render_channel_means(summary: SessionSummary, path: str | Path) -> Path:
    """Bar chart of per-channel session means on the 0.4-1.2 scale."""
    path = Path(path)
    fig = Figure(figsize=(6, 3.2), dpi=120)
    ax = fig.subplots()
    means = [summary.channel_means[name] for name in CHANNELS]
    colors = [_band_color(v) for v in means]
    ax.bar(range(len(CHANNELS)), means, color=colors)
    ax.set_xticks(range(len(CHANNELS)), CHANNELS)
    ax.axhline(0.9, color=_BAND_GREEN, lw=0.8, ls="--")
    ax.axhline(0.6, color=_BAND_RED, lw=0.8, ls="--")
    ax.set_ylim(0.0, 1.25)
    ax.set_ylabel("mean channel score")
    ax.set_title("Channel means")
    fig.tight_layout()
    fig.savefig(path)
    return path


def render_session_figures(
    reports: list[ConfidenceReport],
    summary: SessionSummary,
    out_dir: str | Path,
    stem: str = "session",
) -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    return [
        render_timeline(reports, out_dir / f"{stem}_timeline.png"),
        render_channel_means(summary, out_dir / f"{stem}_channels.png"),
    ]


def render_latency_histogram(
    samples_ms: list[float], budget_ms: float, path: str | Path
) -> Path:
    """Per-frame processing time distribution against the frame budget."""
    path = Path(path)
    fig = Figure(figsize=(6, 3.2), dpi=120)
    ax = fig.subplots()
    ax.hist(samples_ms, bins=60, color="#1f5fa8")
    ax.axvline(budget_ms, color=_BAND_RED, lw=1.2, ls="--", label=f"budget {budget_ms:g} ms")
    ax.set_xlabel("per-frame processing time (ms)")
    ax.set_ylabel("frames")
    ax.set_yscale("log")
    ax.legend()
    ax.set_title("Engine frame latency")
    fig.tight_layout()
    fig.savefig(path)
    return path
