"""Static reporting: CSV exports plus rendered figures.

The report path writes delimited data (entities, timeline, network edges)
and renders the matching matplotlib figures next to them, so an archive can
be inspected without running the HTTP service.
"""

from __future__ import annotations

import csv
import math
from datetime import timedelta
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .errors import UnknownEntity
from .layout import LayoutParams, run_layout
from .service import ArchiveState, _in_span, layout_seed


def _article_timeline(state: ArchiveState, granularity: str, span) -> list[tuple[str, int]]:
    """Articles per bucket over the archive (zero buckets included)."""
    days = [m.published_at.date() for m in state.articles.values()]
    days = [d for d in days if _in_span(d, span)]
    if not days:
        return []
    lo = (span[0] if span and span[0] else min(days))
    hi = (span[1] if span and span[1] else max(days))
    out: list[tuple[str, int]] = []
    if granularity == "day":
        day = lo
        while day <= hi:
            out.append((day.isoformat(), sum(1 for d in days if d == day)))
            day += timedelta(days=1)
    elif granularity == "month":
        y, m = lo.year, lo.month
        while (y, m) <= (hi.year, hi.month):
            count = sum(1 for d in days if (d.year, d.month) == (y, m))
            out.append((f"{y:04d}-{m:02d}", count))
            m += 1
            if m > 12:
                y, m = y + 1, 1
    elif granularity == "year":
        for y in range(lo.year, hi.year + 1):
            out.append((f"{y:04d}", sum(1 for d in days if d.year == y)))
    else:
        raise ValueError(f"bad granularity: {granularity}")
    return out


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _timeline_figure(path: Path, buckets: list[tuple[str, int]], title: str) -> None:
    fig, ax = plt.subplots(figsize=(9, 4))
    if buckets:
        keys = [k for k, _ in buckets]
        counts = [c for _, c in buckets]
        ax.bar(range(len(keys)), counts, color="#3572b0")
        step = max(1, len(keys) // 12)
        ax.set_xticks(range(0, len(keys), step))
        ax.set_xticklabels(keys[::step], rotation=45, ha="right", fontsize=8)
    else:
        ax.text(0.5, 0.5, "no data in span", ha="center", va="center")
    ax.set_title(title)
    ax.set_ylabel("count")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def _network_figure(path: Path, view, positions: dict, title: str) -> None:
    fig, ax = plt.subplots(figsize=(7, 7))
    if view.nodes:
        max_edge = max((e.weight for e in view.edges), default=1)
        max_node = max((n.weight for n in view.nodes), default=1) or 1
        for edge in view.edges:
            (x1, y1), (x2, y2) = positions[edge.a], positions[edge.b]
            ax.plot(
                [x1, x2], [y1, y2],
                color="#999999",
                linewidth=0.5 + 2.5 * edge.weight / max_edge,
                zorder=1,
            )
        xs = [positions[n.id][0] for n in view.nodes]
        ys = [positions[n.id][1] for n in view.nodes]
        sizes = [40 + 360 * math.sqrt(max(n.weight, 0) / max_node) for n in view.nodes]
        ax.scatter(xs, ys, s=sizes, c="#3572b0", edgecolors="white", zorder=2)
        for node in view.nodes:
            x, y = positions[node.id]
            ax.annotate(node.label, (x, y), fontsize=7, ha="center", va="bottom",
                        xytext=(0, 6), textcoords="offset points")
    else:
        ax.text(0.5, 0.5, "no entities in span", ha="center", va="center")
    ax.set_title(title)
    ax.set_axis_off()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def write_report(
    state: ArchiveState,
    out_dir,
    entity_id: str | None = None,
    span=None,
    granularity: str = "month",
    max_nodes: int | None = None,
    top: int = 50,
) -> list[Path]:
    """Write entities.csv, timeline.{csv,png} and network.{csv,png} and
    return the paths written.

    With entity_id the timeline and network are entity-centric; without,
    they cover the whole archive.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    ranked = []
    for eid, counts in state.index.snippet_counts.items():
        count = sum(n for bucket, n in counts.items() if _in_span(bucket, span))
        if count >= 1:
            ranked.append((eid, count))
    ranked.sort(key=lambda ec: (-ec[1], ec[0]))
    rows = []
    for rank, (eid, count) in enumerate(ranked[:top], start=1):
        profile = state.registry.get(eid)
        rows.append(
            [
                rank,
                eid,
                profile.canonical_name if profile else eid,
                profile.top_profession() if profile else "",
                count,
            ]
        )
    entities_csv = out / "entities.csv"
    _write_csv(entities_csv, ["rank", "entity_id", "canonical_name", "profession", "snippets"], rows)
    written.append(entities_csv)

    if entity_id is not None:
        profile = state.registry.get(entity_id)
        if profile is None:
            raise UnknownEntity(f"unknown entity: {entity_id}")
        buckets = state.index.timeline(entity_id, granularity, span)
        timeline_title = f"Mentions of {profile.canonical_name} per {granularity}"
    else:
        buckets = _article_timeline(state, granularity, span)
        timeline_title = f"Articles per {granularity}"
    timeline_csv = out / "timeline.csv"
    _write_csv(timeline_csv, ["bucket", "count"], [[k, c] for k, c in buckets])
    written.append(timeline_csv)
    timeline_png = out / "timeline.png"
    _timeline_figure(timeline_png, buckets, timeline_title)
    written.append(timeline_png)

    labels = {eid: p.canonical_name for eid, p in state.registry.profiles.items()}
    if entity_id is not None:
        view = state.graph.ego_network(entity_id, span, max_nodes or 25, labels)
        network_title = f"Entities co-occurring with {labels.get(entity_id, entity_id)}"
    else:
        view = state.graph.global_network(span, max_nodes or 50, labels)
        network_title = "Entity co-occurrence network"
    network_csv = out / "network.csv"
    _write_csv(
        network_csv,
        ["entity_a", "entity_b", "weight"],
        [[e.a, e.b, e.weight] for e in view.edges],
    )
    written.append(network_csv)
    result = run_layout(view, LayoutParams(seed=layout_seed(entity_id, span, max_nodes)))
    network_png = out / "network.png"
    _network_figure(network_png, view, result.positions, network_title)
    written.append(network_png)

    return written
