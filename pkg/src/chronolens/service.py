"""Archive assembly: pipeline orchestration, snapshots and API payloads.

An ArchiveState bundles every derived store (entity registry, search index,
co-occurrence graph, quotations, article metadata) together with the
configuration that produced it, under one generation counter. Ingestion
builds a new state from the current one and publishes it atomically; API
builders are pure functions from a state to JSON-ready dictionaries, so
every response is derived from a single consistent snapshot.
"""

from __future__ import annotations

import copy
import json
import os
import shutil
import tempfile
import threading
import zlib
from dataclasses import dataclass, field
from datetime import date, datetime, timedelta
from pathlib import Path

from .errors import (
    ChronolensError,
    InvalidParameter,
    InvalidSpan,
    MalformedInput,
    UnknownEntity,
)
from .graph import CoocGraph, update_graph
from .index import EntityIndex, QuerySpec, extract_snippets
from .ingest import RawDocument, clean_article, parse_corpus, sentence_views
from .layout import LayoutParams, run_layout
from .ner import (
    EntityRegistry,
    Gazetteer,
    SequenceModel,
    dictionary_annotate,
    disambiguate,
    dump_gazetteer,
    dump_model,
    mentions_from_tags,
    merge_annotations,
    parse_gazetteer,
    parse_model,
    tag,
)
from .quotes import (
    QuotePatterns,
    Quotation,
    default_patterns,
    dump_patterns,
    extract_quotations,
    parse_patterns,
)

DATA_ENV_VAR = "CHRONOLENS_DATA"

META_FORMAT = "chronolens-archive/1"
QUOTES_FORMAT = "chronolens-quotes/1"


def _in_span(bucket: date, span) -> bool:
    if span is None:
        return True
    lo, hi = span
    if lo is not None and bucket < lo:
        return False
    if hi is not None and bucket > hi:
        return False
    return True


def parse_span(from_str: str | None, to_str: str | None):
    """Turn optional ISO date strings into an inclusive span tuple.

    Raises InvalidSpan on unparsable dates or an inverted range.
    """
    bounds = []
    for value in (from_str, to_str):
        if value is None or value == "":
            bounds.append(None)
            continue
        try:
            bounds.append(date.fromisoformat(value))
        except ValueError:
            raise InvalidSpan(f"not an ISO date: {value!r}")
    lo, hi = bounds
    if lo is not None and hi is not None and lo > hi:
        raise InvalidSpan(f"span start {lo} is after span end {hi}")
    if lo is None and hi is None:
        return None
    return (lo, hi)


def span_json(span) -> dict:
    if span is None:
        return {"from": None, "to": None}
    lo, hi = span
    return {"from": lo.isoformat() if lo else None, "to": hi.isoformat() if hi else None}


@dataclass
class ArticleMeta:
    """What the archive remembers about an ingested article."""

    doc_id: str
    source: str
    category: str
    title: str
    published_at: datetime

    def to_json(self) -> dict:
        return {
            "doc_id": self.doc_id,
            "source": self.source,
            "category": self.category,
            "title": self.title,
            "published_at": self.published_at.isoformat(),
        }


@dataclass
class IngestIssue:
    """One rejected corpus line; the batch carries on past it."""

    line_no: int | None
    doc_id: str | None
    code: str
    message: str

    def to_json(self) -> dict:
        return {
            "line_no": self.line_no,
            "doc_id": self.doc_id,
            "code": self.code,
            "message": self.message,
        }


@dataclass
class IngestReport:
    articles: int = 0
    skipped_duplicates: int = 0
    mentions: int = 0
    entities_created: int = 0
    quotations: int = 0
    edges_touched: int = 0
    errors: list[IngestIssue] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "articles": self.articles,
            "skipped_duplicates": self.skipped_duplicates,
            "mentions": self.mentions,
            "entities_created": self.entities_created,
            "quotations": self.quotations,
            "edges_touched": self.edges_touched,
            "errors": [e.to_json() for e in self.errors],
        }


@dataclass
class ArchiveState:
    """Everything derived from one ingested article set, plus the config
    (gazetteer, tagger model, quote patterns) that derived it.

    All stores share the generation counter; a state is never mutated after
    publication.
    """

    registry: EntityRegistry
    index: EntityIndex
    graph: CoocGraph
    quotations: list[Quotation]
    articles: dict[str, ArticleMeta]
    gazetteer: Gazetteer
    model: SequenceModel | None
    patterns: QuotePatterns
    generation: int = 0

    @classmethod
    def empty(
        cls,
        gazetteer: Gazetteer | None = None,
        model: SequenceModel | None = None,
        patterns: QuotePatterns | None = None,
    ) -> "ArchiveState":
        return cls(
            registry=EntityRegistry(),
            index=EntityIndex(),
            graph=CoocGraph(),
            quotations=[],
            articles={},
            gazetteer=gazetteer or Gazetteer(),
            model=model,
            patterns=patterns or default_patterns(),
        )

    def article_span(self) -> tuple[date, date] | None:
        days = [meta.published_at.date() for meta in self.articles.values()]
        if not days:
            return None
        return min(days), max(days)


def _process_article(state: ArchiveState, raw: RawDocument) -> tuple[int, int, int, int]:
    """Run one article through the pipeline, mutating the (private) state.

    Returns (mentions, entities_created, quotations, edges_touched).
    """
    article = clean_article(raw)
    views = sentence_views(article)
    tagged = dictionary_annotate(article, state.gazetteer)
    mentions = []
    for view, seq in zip(views, tagged):
        tags = seq.tags
        if state.model is not None:
            tags = merge_annotations(tag(state.model, view.tokens), tags)
        mentions.extend(mentions_from_tags(article.doc_id, view, tags))
    before = len(state.registry)
    mentions = disambiguate(
        mentions, views, state.registry, article.doc_id, article.published_at, state.gazetteer
    )
    created = len(state.registry) - before
    snippets = extract_snippets(article, mentions)
    state.index.add_snippets(snippets)
    quotations = extract_quotations(article, mentions, state.patterns)
    state.quotations.extend(quotations)
    resolved = {m.entity_id for m in mentions if m.resolved}
    touched = update_graph(state.graph, article, resolved)
    state.articles[article.doc_id] = ArticleMeta(
        doc_id=article.doc_id,
        source=article.source,
        category=article.category,
        title=article.title,
        published_at=article.published_at,
    )
    return len(mentions), created, len(quotations), touched


def ingest_batch(
    state: ArchiveState, payload: str | bytes | os.PathLike
) -> tuple[ArchiveState, IngestReport]:
    """Ingest a JSONL batch, returning the successor state and a report.

    str/bytes payloads are the corpus text itself; path-like payloads name a
    file. Malformed lines and duplicate doc_ids are reported per line without
    aborting the batch. If nothing was ingested the input state is returned
    unchanged (same object, same generation).
    """
    if isinstance(payload, bytes):
        text = payload.decode("utf-8")
    elif isinstance(payload, str):
        text = payload
    else:
        text = Path(payload).read_text(encoding="utf-8")
    report = IngestReport()
    new_state = copy.deepcopy(state)
    for line_no, item in parse_corpus(text.splitlines()):
        if isinstance(item, MalformedInput):
            report.errors.append(IngestIssue(line_no, None, item.code, str(item)))
            continue
        if item.doc_id in new_state.articles:
            report.skipped_duplicates += 1
            report.errors.append(
                IngestIssue(
                    line_no, item.doc_id, "duplicate_doc", f"doc_id already ingested: {item.doc_id}"
                )
            )
            continue
        try:
            mentions, created, quotations, touched = _process_article(new_state, item)
        except ChronolensError as exc:
            # clean_article validates before any store is touched, so the
            # partially built state stays consistent.
            report.errors.append(IngestIssue(line_no, item.doc_id, exc.code, str(exc)))
            continue
        report.articles += 1
        report.mentions += mentions
        report.entities_created += created
        report.quotations += quotations
        report.edges_touched += touched
    if report.articles == 0:
        return state, report
    new_state.generation = state.generation + 1
    return new_state, report


# ---------------------------------------------------------------------------
# Snapshot persistence
#
# DATA_DIR/CURRENT names the live snapshot directory; a snapshot is written
# into a temp dir, renamed into place, and then CURRENT is atomically
# replaced, so readers always see either the old or the new snapshot.

POINTER_NAME = "CURRENT"


def _write_snapshot_files(state: ArchiveState, into: Path) -> None:
    meta = {
        "format": META_FORMAT,
        "generation": state.generation,
        "articles": [state.articles[doc_id].to_json() for doc_id in sorted(state.articles)],
    }
    quotes = {
        "format": QUOTES_FORMAT,
        "quotations": [
            {
                "entity_id": q.entity_id,
                "doc_id": q.doc_id,
                "sentence_index": q.sentence_index,
                "kind": q.kind,
                "text": q.text,
                "published_at": q.published_at.isoformat(),
            }
            for q in state.quotations
        ],
    }
    (into / "meta.json").write_text(
        json.dumps(meta, sort_keys=True, ensure_ascii=False) + "\n", encoding="utf-8"
    )
    (into / "registry.json").write_text(state.registry.dumps() + "\n", encoding="utf-8")
    (into / "index.json").write_text(state.index.dumps() + "\n", encoding="utf-8")
    (into / "graph.json").write_text(state.graph.dumps() + "\n", encoding="utf-8")
    (into / "quotes.json").write_text(
        json.dumps(quotes, sort_keys=True, ensure_ascii=False) + "\n", encoding="utf-8"
    )
    (into / "gazetteer.txt").write_text(dump_gazetteer(state.gazetteer), encoding="utf-8")
    (into / "patterns.cfg").write_text(dump_patterns(state.patterns), encoding="utf-8")
    if state.model is not None:
        (into / "model.txt").write_text(dump_model(state.model), encoding="utf-8")


def save_state(state: ArchiveState, data_dir) -> Path:
    """Persist a snapshot atomically and point CURRENT at it.

    Older snapshot directories are pruned after the pointer moves.
    """
    data = Path(data_dir)
    data.mkdir(parents=True, exist_ok=True)
    tmp = Path(tempfile.mkdtemp(prefix=".tmp-", dir=data))
    try:
        _write_snapshot_files(state, tmp)
        final = data / f"snap-{state.generation:06d}"
        n = 2
        while final.exists():
            final = data / f"snap-{state.generation:06d}-{n}"
            n += 1
        os.rename(tmp, final)
    except BaseException:
        shutil.rmtree(tmp, ignore_errors=True)
        raise
    pointer_tmp = data / (POINTER_NAME + ".tmp")
    pointer_tmp.write_text(final.name + "\n", encoding="utf-8")
    os.replace(pointer_tmp, data / POINTER_NAME)
    for entry in data.iterdir():
        if entry == final:
            continue
        if entry.name.startswith("snap-") or entry.name.startswith(".tmp-"):
            shutil.rmtree(entry, ignore_errors=True)
    return final


def load_state(data_dir) -> ArchiveState:
    """Load the snapshot CURRENT points at; a missing pointer means a fresh,
    empty archive."""
    data = Path(data_dir)
    pointer = data / POINTER_NAME
    if not pointer.exists():
        return ArchiveState.empty()
    snap = data / pointer.read_text(encoding="utf-8").strip()
    meta = json.loads((snap / "meta.json").read_text(encoding="utf-8"))
    if meta.get("format") != META_FORMAT:
        raise ValueError(f"unsupported snapshot format: {meta.get('format')!r}")
    articles = {}
    for entry in meta["articles"]:
        articles[entry["doc_id"]] = ArticleMeta(
            doc_id=entry["doc_id"],
            source=entry["source"],
            category=entry["category"],
            title=entry["title"],
            published_at=datetime.fromisoformat(entry["published_at"]),
        )
    quotes_obj = json.loads((snap / "quotes.json").read_text(encoding="utf-8"))
    if quotes_obj.get("format") != QUOTES_FORMAT:
        raise ValueError(f"unsupported quotes format: {quotes_obj.get('format')!r}")
    quotations = [
        Quotation(
            entity_id=entry["entity_id"],
            doc_id=entry["doc_id"],
            sentence_index=entry["sentence_index"],
            kind=entry["kind"],
            text=entry["text"],
            published_at=datetime.fromisoformat(entry["published_at"]),
        )
        for entry in quotes_obj["quotations"]
    ]
    model_path = snap / "model.txt"
    return ArchiveState(
        registry=EntityRegistry.from_json(
            json.loads((snap / "registry.json").read_text(encoding="utf-8"))
        ),
        index=EntityIndex.from_json(json.loads((snap / "index.json").read_text(encoding="utf-8"))),
        graph=CoocGraph.from_json(json.loads((snap / "graph.json").read_text(encoding="utf-8"))),
        quotations=quotations,
        articles=articles,
        gazetteer=parse_gazetteer((snap / "gazetteer.txt").read_text(encoding="utf-8")),
        model=parse_model(model_path.read_text(encoding="utf-8")) if model_path.exists() else None,
        patterns=parse_patterns((snap / "patterns.cfg").read_text(encoding="utf-8")),
        generation=meta["generation"],
    )


class Archive:
    """The live archive: readers take the current state reference, the single
    writer ingests under a lock and swaps the reference after persisting."""

    def __init__(self, data_dir) -> None:
        self.data_dir = Path(data_dir)
        self._write_lock = threading.Lock()
        self.state = load_state(self.data_dir)

    def snapshot(self) -> ArchiveState:
        return self.state

    def ingest(self, payload) -> IngestReport:
        with self._write_lock:
            new_state, report = ingest_batch(self.state, payload)
            if new_state is not self.state:
                save_state(new_state, self.data_dir)
                self.state = new_state
            return report

    def configure(
        self,
        gazetteer: Gazetteer | None = None,
        model: SequenceModel | None = None,
        patterns: QuotePatterns | None = None,
    ) -> None:
        """Install new pipeline configuration; affects future ingests only,
        already-derived data is left as is."""
        with self._write_lock:
            state = copy.deepcopy(self.state)
            if gazetteer is not None:
                state.gazetteer = gazetteer
            if model is not None:
                state.model = model
            if patterns is not None:
                state.patterns = patterns
            save_state(state, self.data_dir)
            self.state = state


# ---------------------------------------------------------------------------
# API payload builders (pure functions of one state)


def _display_name(state: ArchiveState, entity_id: str) -> str:
    profile = state.registry.get(entity_id)
    return profile.canonical_name if profile else entity_id


def _snippets_in_span(state: ArchiveState, entity_id: str, span) -> int:
    counts = state.index.snippet_counts.get(entity_id, {})
    return sum(n for bucket, n in counts.items() if _in_span(bucket, span))


def api_search(state: ArchiveState, q: str, span=None, limit: int = 10) -> dict:
    """Ranked entity hits for a keyword query, optionally span-restricted."""
    spec = QuerySpec(text=q, span=span, limit=limit)
    results = []
    for entity_id, score in state.index.search(spec):
        profile = state.registry.get(entity_id)
        results.append(
            {
                "entity_id": entity_id,
                "canonical_name": _display_name(state, entity_id),
                "profession": profile.top_profession() if profile else "",
                "score": score,
                "snippet_count": _snippets_in_span(state, entity_id, span),
            }
        )
    return {"query": q, "span": span_json(span), "results": results}


def related_entities(state: ArchiveState, entity_id: str, span=None, limit: int = 10) -> list[dict]:
    """Strongest co-occurring entities, ranked like the ego network ranks its
    neighbors: by in-span edge weight, ties by entity id."""
    if entity_id not in state.graph.node_counts:
        return []
    ranked = []
    for other in state.graph.neighbors(entity_id):
        weight = state.graph.edge_weight(entity_id, other, span)
        if weight >= 1:
            ranked.append((other, weight))
    ranked.sort(key=lambda ow: (-ow[1], ow[0]))
    return [
        {"entity_id": other, "canonical_name": _display_name(state, other), "weight": weight}
        for other, weight in ranked[:limit]
    ]


def api_entity(
    state: ArchiveState,
    entity_id: str,
    span=None,
    granularity: str = "month",
    related_limit: int = 10,
) -> dict:
    """Profile payload: names, professions, in-span articles, quotations,
    related entities and a timeline."""
    profile = state.registry.get(entity_id)
    if profile is None:
        raise UnknownEntity(f"unknown entity: {entity_id}")
    if granularity not in ("day", "month", "year"):
        raise InvalidParameter(f"bad granularity: {granularity!r}")
    refs = state.index.snippet_refs.get(entity_id, set())
    doc_ids = {doc_id for doc_id, _, bucket in refs if _in_span(bucket, span)}
    articles = [state.articles[d].to_json() for d in doc_ids if d in state.articles]
    articles.sort(key=lambda a: (a["published_at"], a["doc_id"]))
    try:
        buckets = state.index.timeline(entity_id, granularity, span)
    except UnknownEntity:
        buckets = []
    return {
        "entity_id": entity_id,
        "canonical_name": profile.canonical_name,
        "aliases": sorted(profile.known_aliases),
        "profession": profile.top_profession(),
        "professions": [
            {"name": name, "count": profile.professions[name]}
            for name in sorted(profile.professions, key=lambda p: (-profile.professions[p], p))
        ],
        "first_seen": profile.first_seen.isoformat() if profile.first_seen else None,
        "last_seen": profile.last_seen.isoformat() if profile.last_seen else None,
        "span": span_json(span),
        "articles": articles,
        "quotations": _quotations_json(state, entity_id, span),
        "related": related_entities(state, entity_id, span, related_limit),
        "timeline": {
            "granularity": granularity,
            "buckets": [{"bucket": key, "count": count} for key, count in buckets],
        },
    }


def _quotations_json(state: ArchiveState, entity_id: str, span) -> list[dict]:
    rows = [
        {
            "doc_id": q.doc_id,
            "sentence_index": q.sentence_index,
            "kind": q.kind,
            "text": q.text,
            "published_at": q.published_at.isoformat(),
        }
        for q in state.quotations
        if q.entity_id == entity_id and _in_span(q.published_at.date(), span)
    ]
    rows.sort(key=lambda r: (r["published_at"], r["doc_id"], r["sentence_index"], r["kind"]))
    return rows


def api_quotes(state: ArchiveState, entity_id: str, span=None) -> dict:
    if state.registry.get(entity_id) is None:
        raise UnknownEntity(f"unknown entity: {entity_id}")
    return {
        "entity_id": entity_id,
        "canonical_name": _display_name(state, entity_id),
        "span": span_json(span),
        "quotations": _quotations_json(state, entity_id, span),
    }


def layout_seed(entity_id: str | None, span, max_nodes: int | None) -> int:
    """Deterministic seed derived from the request shape, so identical
    network requests place nodes identically."""
    desc = "|".join(
        (
            entity_id or "",
            span_json(span)["from"] or "",
            span_json(span)["to"] or "",
            str(max_nodes or 0),
        )
    )
    return zlib.crc32(desc.encode("utf-8"))


def api_network(
    state: ArchiveState,
    entity_id: str | None = None,
    span=None,
    max_nodes: int | None = None,
    with_layout: bool = False,
) -> dict:
    """Ego network when entity_id is given, otherwise the global network."""
    labels = {eid: p.canonical_name for eid, p in state.registry.profiles.items()}
    if entity_id is not None:
        if state.registry.get(entity_id) is None and entity_id not in state.graph.node_counts:
            raise UnknownEntity(f"unknown entity: {entity_id}")
        view = state.graph.ego_network(entity_id, span, max_nodes or 25, labels)
    else:
        view = state.graph.global_network(span, max_nodes or 50, labels)
    if with_layout:
        result = run_layout(view, LayoutParams(seed=layout_seed(entity_id, span, max_nodes)))
        view.positions = result.positions
    return view.to_json()


def api_stats(state: ArchiveState, top: int = 10, window_days: int = 30) -> dict:
    """Archive totals plus the most-mentioned entities of the trailing window
    (relative to the newest article, so fixture archives stay stable)."""
    span = state.article_span()
    recent = None
    if span is not None:
        recent = (span[1] - timedelta(days=window_days - 1), span[1])
    ranked = []
    for entity_id in state.index.snippet_counts:
        count = _snippets_in_span(state, entity_id, recent)
        if count >= 1:
            ranked.append((entity_id, count))
    ranked.sort(key=lambda ec: (-ec[1], ec[0]))
    return {
        "generation": state.generation,
        "articles": len(state.articles),
        "entities": len(state.registry),
        "quotations": len(state.quotations),
        "span": span_json(span),
        "top_entities": [
            {
                "entity_id": entity_id,
                "canonical_name": _display_name(state, entity_id),
                "profession": (
                    state.registry.get(entity_id).top_profession()
                    if state.registry.get(entity_id)
                    else ""
                ),
                "snippet_count": count,
            }
            for entity_id, count in ranked[:top]
        ],
    }
