"""Entity documents and ranked, time-filtered entity retrieval.

Every sentence mentioning an entity becomes a timestamped snippet; the
concatenation of an entity's snippets is the unit scored at query time.
Term frequencies are kept per UTC-day bucket so a query can be restricted
to any date span, while document lengths and IDF stay archive-global
(narrowing a span therefore never raises a score).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from datetime import date, datetime, timedelta
from importlib import resources
from typing import Iterable, Sequence

from .errors import EmptyQuery, UnknownEntity
from .ingest import NewsArticle, sentence_views, token_texts
from .ner import Mention

BM25_K1 = 1.2
BM25_B = 0.75


def default_stopwords() -> frozenset[str]:
    words: set[str] = set()
    for name in ("stopwords_en.txt", "stopwords_pt.txt"):
        text = resources.files("chronolens.data").joinpath(name).read_text("utf-8")
        words.update(parse_stopwords(text))
    return frozenset(words)


def parse_stopwords(text: str) -> frozenset[str]:
    out = set()
    for line in text.splitlines():
        word = line.split("#", 1)[0].strip().lower()
        if word:
            out.add(word)
    return frozenset(out)


def load_stopwords(path) -> frozenset[str]:
    with open(path, encoding="utf-8") as fh:
        return parse_stopwords(fh.read())


def content_tokens(text: str) -> list[str]:
    """Lowercased tokens containing at least one letter or digit."""
    return [t.lower() for t in token_texts(text) if any(c.isalnum() for c in t)]


@dataclass
class Snippet:
    """One sentence mentioning an entity, stamped with the article's time."""

    entity_id: str
    doc_id: str
    sentence_index: int
    text: str
    published_at: datetime

    @property
    def bucket(self) -> date:
        return self.published_at.date()


@dataclass
class QuerySpec:
    """Keyword/phrase query with an optional inclusive date span."""

    text: str
    span: tuple[date | None, date | None] | None = None
    limit: int = 10

    def __post_init__(self) -> None:
        if self.limit < 1:
            raise ValueError("limit must be >= 1")
        if self.span is not None:
            lo, hi = self.span
            if lo is not None and hi is not None and lo > hi:
                raise ValueError("span start is after span end")


def _in_span(bucket: date, span: tuple[date | None, date | None] | None) -> bool:
    if span is None:
        return True
    lo, hi = span
    if lo is not None and bucket < lo:
        return False
    if hi is not None and bucket > hi:
        return False
    return True


class EntityIndex:
    """Term -> (entity, day-bucket) frequency postings over entity documents."""

    FORMAT = "chronolens-index/1"

    def __init__(
        self,
        stopwords: frozenset[str] | None = None,
        k1: float = BM25_K1,
        b: float = BM25_B,
        adjacency_bonus: float = 0.0,
    ) -> None:
        self.stopwords = default_stopwords() if stopwords is None else frozenset(stopwords)
        self.k1 = k1
        self.b = b
        self.adjacency_bonus = adjacency_bonus
        self.postings: dict[str, dict[str, dict[date, int]]] = {}
        self.doc_lengths: dict[str, int] = {}
        self.total_snippets: dict[str, int] = {}
        self.snippet_counts: dict[str, dict[date, int]] = {}
        self.snippet_refs: dict[str, set[tuple[str, int, date]]] = {}
        self.bigrams: dict[str, dict[date, set[tuple[str, str]]]] = {}

    # -- building ----------------------------------------------------------

    def add_snippet(self, snippet: Snippet) -> None:
        tokens = content_tokens(snippet.text)
        terms = [t for t in tokens if t not in self.stopwords]
        eid = snippet.entity_id
        bucket = snippet.bucket
        for term in terms:
            self.postings.setdefault(term, {}).setdefault(eid, {})
            self.postings[term][eid][bucket] = self.postings[term][eid].get(bucket, 0) + 1
        self.doc_lengths[eid] = self.doc_lengths.get(eid, 0) + len(terms)
        self.total_snippets[eid] = self.total_snippets.get(eid, 0) + 1
        counts = self.snippet_counts.setdefault(eid, {})
        counts[bucket] = counts.get(bucket, 0) + 1
        self.snippet_refs.setdefault(eid, set()).add(
            (snippet.doc_id, snippet.sentence_index, bucket)
        )
        grams = self.bigrams.setdefault(eid, {}).setdefault(bucket, set())
        for a, b in zip(tokens, tokens[1:]):
            grams.add((a, b))

    def add_snippets(self, snippets: Iterable[Snippet]) -> None:
        for snippet in snippets:
            self.add_snippet(snippet)

    # -- querying ----------------------------------------------------------

    def query_terms(self, text: str) -> list[str]:
        return [t for t in content_tokens(text) if t not in self.stopwords]

    def _span_freq(
        self, term: str, entity_id: str, span: tuple[date | None, date | None] | None
    ) -> int:
        buckets = self.postings.get(term, {}).get(entity_id)
        if not buckets:
            return 0
        return sum(n for bucket, n in buckets.items() if _in_span(bucket, span))

    def search(self, q: QuerySpec) -> list[tuple[str, float]]:
        """BM25 ranking over entity documents, frequencies restricted to buckets
        inside the query span. Ties break by snippet count, then entity id."""
        terms = self.query_terms(q.text)
        if not terms:
            raise EmptyQuery(f"no indexable terms in query: {q.text!r}")
        n_entities = len(self.doc_lengths)
        if n_entities == 0:
            return []
        avgdl = sum(self.doc_lengths.values()) / n_entities
        candidates: set[str] = set()
        for term in set(terms):
            for eid in self.postings.get(term, {}):
                if self._span_freq(term, eid, q.span) > 0:
                    candidates.add(eid)
        query_bigrams: set[tuple[str, str]] = set()
        if self.adjacency_bonus:
            all_tokens = content_tokens(q.text)
            query_bigrams = set(zip(all_tokens, all_tokens[1:]))
        scored = []
        for eid in candidates:
            dl = self.doc_lengths[eid]
            score = 0.0
            for term in terms:
                f = self._span_freq(term, eid, q.span)
                if f == 0:
                    continue
                n_t = len(self.postings[term])
                idf = math.log(1.0 + (n_entities - n_t + 0.5) / (n_t + 0.5))
                score += idf * (f * (self.k1 + 1.0)) / (
                    f + self.k1 * (1.0 - self.b + self.b * dl / avgdl)
                )
            if self.adjacency_bonus and query_bigrams:
                present = set()
                for bucket, grams in self.bigrams.get(eid, {}).items():
                    if _in_span(bucket, q.span):
                        present |= query_bigrams & grams
                score += self.adjacency_bonus * len(present)
            scored.append((eid, score))
        scored.sort(key=lambda es: (-es[1], -self.total_snippets[es[0]], es[0]))
        return scored[: q.limit]

    def archive_span(self) -> tuple[date, date] | None:
        buckets = [b for counts in self.snippet_counts.values() for b in counts]
        if not buckets:
            return None
        return min(buckets), max(buckets)

    def timeline(
        self,
        entity_id: str,
        granularity: str = "month",
        span: tuple[date | None, date | None] | None = None,
    ) -> list[tuple[str, int]]:
        """Snippet counts per time bucket, zero-count buckets included."""
        if entity_id not in self.total_snippets:
            raise UnknownEntity(entity_id)
        if granularity not in ("day", "month", "year"):
            raise ValueError(f"bad granularity: {granularity}")
        archive = self.archive_span()
        lo, hi = span if span is not None else (None, None)
        if lo is None:
            lo = archive[0]
        if hi is None:
            hi = archive[1]
        counts = self.snippet_counts[entity_id]
        out: list[tuple[str, int]] = []
        if granularity == "day":
            day = lo
            while day <= hi:
                out.append((day.isoformat(), counts.get(day, 0)))
                day += timedelta(days=1)
        elif granularity == "month":
            y, m = lo.year, lo.month
            while (y, m) <= (hi.year, hi.month):
                total = sum(
                    n for b, n in counts.items()
                    if (b.year, b.month) == (y, m) and lo <= b <= hi
                )
                out.append((f"{y:04d}-{m:02d}", total))
                m += 1
                if m > 12:
                    y, m = y + 1, 1
        else:
            for y in range(lo.year, hi.year + 1):
                total = sum(n for b, n in counts.items() if b.year == y and lo <= b <= hi)
                out.append((f"{y:04d}", total))
        return out

    # -- persistence -------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "format": self.FORMAT,
            "config": {
                "k1": self.k1,
                "b": self.b,
                "adjacency_bonus": self.adjacency_bonus,
                "stopwords": sorted(self.stopwords),
            },
            "postings": {
                term: {
                    eid: {b.isoformat(): n for b, n in sorted(buckets.items())}
                    for eid, buckets in entities.items()
                }
                for term, entities in self.postings.items()
            },
            "doc_lengths": dict(self.doc_lengths),
            "total_snippets": dict(self.total_snippets),
            "snippet_counts": {
                eid: {b.isoformat(): n for b, n in sorted(counts.items())}
                for eid, counts in self.snippet_counts.items()
            },
            "snippet_refs": {
                eid: [[d, i, b.isoformat()] for d, i, b in sorted(refs)]
                for eid, refs in self.snippet_refs.items()
            },
            "bigrams": {
                eid: {
                    b.isoformat(): sorted([a, c] for a, c in grams)
                    for b, grams in sorted(buckets.items())
                }
                for eid, buckets in self.bigrams.items()
            },
        }

    @classmethod
    def from_json(cls, obj: dict) -> "EntityIndex":
        if obj.get("format") != cls.FORMAT:
            raise ValueError(f"unsupported index format: {obj.get('format')!r}")
        cfg = obj["config"]
        idx = cls(
            stopwords=frozenset(cfg["stopwords"]),
            k1=cfg["k1"],
            b=cfg["b"],
            adjacency_bonus=cfg["adjacency_bonus"],
        )
        idx.postings = {
            term: {
                eid: {date.fromisoformat(b): n for b, n in buckets.items()}
                for eid, buckets in entities.items()
            }
            for term, entities in obj["postings"].items()
        }
        idx.doc_lengths = dict(obj["doc_lengths"])
        idx.total_snippets = dict(obj["total_snippets"])
        idx.snippet_counts = {
            eid: {date.fromisoformat(b): n for b, n in counts.items()}
            for eid, counts in obj["snippet_counts"].items()
        }
        idx.snippet_refs = {
            eid: {(d, i, date.fromisoformat(b)) for d, i, b in refs}
            for eid, refs in obj["snippet_refs"].items()
        }
        idx.bigrams = {
            eid: {
                date.fromisoformat(b): {(a, c) for a, c in grams}
                for b, grams in buckets.items()
            }
            for eid, buckets in obj["bigrams"].items()
        }
        return idx

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, ensure_ascii=False)


def extract_snippets(article: NewsArticle, mentions: Sequence[Mention]) -> list[Snippet]:
    """One snippet per (entity, sentence) pair; unresolved mentions are skipped."""
    views = {v.index: v for v in sentence_views(article)}
    per_sentence: dict[int, set[str]] = {}
    for m in mentions:
        if m.resolved:
            per_sentence.setdefault(m.sentence_index, set()).add(m.entity_id)
    out = []
    for sidx in sorted(per_sentence):
        view = views[sidx]
        for eid in sorted(per_sentence[sidx]):
            out.append(
                Snippet(
                    entity_id=eid,
                    doc_id=article.doc_id,
                    sentence_index=sidx,
                    text=view.text,
                    published_at=article.published_at,
                )
            )
    return out


def index_snippets(index: EntityIndex, snippets: Iterable[Snippet]) -> EntityIndex:
    index.add_snippets(snippets)
    return index
