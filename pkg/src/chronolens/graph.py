"""Incremental entity co-occurrence graph and time-sliced network views.

Counting is article-level: per article each entity counts once and each
unordered entity pair once, under the article's UTC-day bucket. Node topic
counts come from the article category field.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import date
from itertools import combinations
from typing import Iterable, Mapping

from .errors import UnknownEntity
from .ingest import NewsArticle


def _in_span(bucket: date, span) -> bool:
    if span is None:
        return True
    lo, hi = span
    if lo is not None and bucket < lo:
        return False
    if hi is not None and bucket > hi:
        return False
    return True


@dataclass
class NetworkNode:
    id: str
    label: str
    weight: int
    color_key: str


@dataclass
class NetworkEdge:
    a: str
    b: str
    weight: int


@dataclass
class NetworkView:
    """Wire-format network slice: nodes, edges and the span they cover."""

    nodes: list[NetworkNode]
    edges: list[NetworkEdge]
    span: tuple[date | None, date | None] | None = None
    positions: dict[str, tuple[float, float]] | None = None

    def validate(self) -> None:
        ids = {n.id for n in self.nodes}
        if len(ids) != len(self.nodes):
            raise ValueError("duplicate node ids in view")
        for e in self.edges:
            if e.a not in ids or e.b not in ids:
                raise ValueError(f"edge endpoint missing from nodes: {e.a}--{e.b}")
            if e.weight < 1:
                raise ValueError("edge weight below 1")
        for n in self.nodes:
            if n.weight < 0:
                raise ValueError("negative node weight")

    def to_json(self) -> dict:
        lo, hi = self.span if self.span is not None else (None, None)
        out = {
            "nodes": [
                {
                    "id": n.id,
                    "label": n.label,
                    "weight": n.weight,
                    "color_key": n.color_key,
                    **(
                        {"pos": {"x": self.positions[n.id][0], "y": self.positions[n.id][1]}}
                        if self.positions is not None and n.id in self.positions
                        else {}
                    ),
                }
                for n in self.nodes
            ],
            "edges": [{"a": e.a, "b": e.b, "weight": e.weight} for e in self.edges],
            "span": {
                "from": lo.isoformat() if lo else None,
                "to": hi.isoformat() if hi else None,
            },
        }
        return out


class CoocGraph:
    """Per-day entity mention counts and unordered pair co-occurrence counts."""

    FORMAT = "chronolens-graph/1"

    def __init__(self) -> None:
        self.node_counts: dict[str, dict[date, int]] = {}
        self.node_categories: dict[str, dict[str, int]] = {}
        self.edge_counts: dict[tuple[str, str], dict[date, int]] = {}

    def update(self, bucket: date, category: str, entity_ids: Iterable[str]) -> int:
        """Count one article: +1 per entity node and unordered pair.

        Returns the number of edges touched.
        """
        entities = sorted(set(entity_ids))
        for eid in entities:
            counts = self.node_counts.setdefault(eid, {})
            counts[bucket] = counts.get(bucket, 0) + 1
            if category:
                cats = self.node_categories.setdefault(eid, {})
                cats[category] = cats.get(category, 0) + 1
        touched = 0
        for a, b in combinations(entities, 2):
            counts = self.edge_counts.setdefault((a, b), {})
            counts[bucket] = counts.get(bucket, 0) + 1
            touched += 1
        return touched

    def node_weight(self, entity_id: str, span=None) -> int:
        counts = self.node_counts.get(entity_id, {})
        return sum(n for b, n in counts.items() if _in_span(b, span))

    def edge_weight(self, a: str, b: str, span=None) -> int:
        key = (a, b) if a <= b else (b, a)
        counts = self.edge_counts.get(key, {})
        return sum(n for bk, n in counts.items() if _in_span(bk, span))

    def color_key(self, entity_id: str) -> str:
        cats = self.node_categories.get(entity_id)
        if not cats:
            return ""
        return min(cats, key=lambda c: (-cats[c], c))

    def neighbors(self, entity_id: str) -> set[str]:
        out = set()
        for a, b in self.edge_counts:
            if a == entity_id:
                out.add(b)
            elif b == entity_id:
                out.add(a)
        return out

    def _view(self, ordered_ids: list[str], span, labels: Mapping[str, str] | None) -> NetworkView:
        labels = labels or {}
        nodes = [
            NetworkNode(
                id=eid,
                label=labels.get(eid, eid),
                weight=self.node_weight(eid, span),
                color_key=self.color_key(eid),
            )
            for eid in ordered_ids
        ]
        edges = []
        for a, b in combinations(sorted(ordered_ids), 2):
            w = self.edge_weight(a, b, span)
            if w >= 1:
                edges.append(NetworkEdge(a, b, w))
        view = NetworkView(nodes=nodes, edges=edges, span=span)
        view.validate()
        return view

    def ego_network(
        self,
        entity_id: str,
        span=None,
        max_nodes: int = 25,
        labels: Mapping[str, str] | None = None,
    ) -> NetworkView:
        """Center entity plus its strongest in-span neighbors and the edges
        among the selected set."""
        if entity_id not in self.node_counts:
            raise UnknownEntity(entity_id)
        ranked = []
        for other in self.neighbors(entity_id):
            w = self.edge_weight(entity_id, other, span)
            if w >= 1:
                ranked.append((other, w))
        ranked.sort(key=lambda nw: (-nw[1], nw[0]))
        selected = [entity_id] + [other for other, _ in ranked[: max(0, max_nodes - 1)]]
        return self._view(selected, span, labels)

    def global_network(
        self,
        span=None,
        top_k: int = 50,
        labels: Mapping[str, str] | None = None,
    ) -> NetworkView:
        """The top_k most-mentioned in-span entities and all edges among them."""
        if top_k < 1:
            raise ValueError("top_k must be >= 1")
        ranked = []
        for eid in self.node_counts:
            w = self.node_weight(eid, span)
            if w >= 1:
                ranked.append((eid, w))
        ranked.sort(key=lambda nw: (-nw[1], nw[0]))
        return self._view([eid for eid, _ in ranked[:top_k]], span, labels)

    # -- persistence -------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "format": self.FORMAT,
            "node_counts": {
                eid: {b.isoformat(): n for b, n in sorted(c.items())}
                for eid, c in self.node_counts.items()
            },
            "node_categories": {
                eid: dict(sorted(c.items())) for eid, c in self.node_categories.items()
            },
            "edge_counts": {
                f"{a}|{b}": {bk.isoformat(): n for bk, n in sorted(c.items())}
                for (a, b), c in self.edge_counts.items()
            },
        }

    @classmethod
    def from_json(cls, obj: dict) -> "CoocGraph":
        if obj.get("format") != cls.FORMAT:
            raise ValueError(f"unsupported graph format: {obj.get('format')!r}")
        g = cls()
        g.node_counts = {
            eid: {date.fromisoformat(b): n for b, n in c.items()}
            for eid, c in obj["node_counts"].items()
        }
        g.node_categories = {eid: dict(c) for eid, c in obj["node_categories"].items()}
        g.edge_counts = {
            tuple(key.split("|", 1)): {date.fromisoformat(b): n for b, n in c.items()}
            for key, c in obj["edge_counts"].items()
        }
        return g

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, ensure_ascii=False)


def update_graph(graph: CoocGraph, article: NewsArticle, entity_ids: Iterable[str]) -> int:
    """Record one article's resolved entity set into the graph."""
    return graph.update(article.published_at.date(), article.category, entity_ids)
