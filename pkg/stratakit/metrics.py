from __future__ import annotations

from pathlib import Path

from prometheus_client import CollectorRegistry, Counter, Histogram, generate_latest

REGISTRY = CollectorRegistry()

RESOLUTION_STAGES = Counter(
    "stratakit_resolution_stages_total", "Projective cover stages computed", registry=REGISTRY
)
CERTIFICATES = Counter(
    "stratakit_certificates_total", "Periodicity certificates emitted", ["kind"], registry=REGISTRY
)
ISO_SEARCHES = Counter(
    "stratakit_iso_searches_total", "Module isomorphism searches", ["outcome"], registry=REGISTRY
)
ANALYSIS_LATENCY = Histogram(
    "stratakit_analysis_seconds", "Wall time per CLI command", ["command"], registry=REGISTRY
)


def metrics_text() -> str:
    return generate_latest(REGISTRY).decode("utf-8")


def write_metrics(path: str | Path) -> None:
    Path(path).write_text(metrics_text(), encoding="utf-8")
