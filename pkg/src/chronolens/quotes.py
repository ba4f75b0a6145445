"""Quotation extraction with configurable linguistic patterns.

Two sentence-local patterns: a direct quote is a balanced delimiter span in
a sentence that also carries a resolved mention and an attribution verb; an
indirect quote is ``<PER> <verb> <complementizer> <clause>`` with the clause
bounded at the sentence end.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime
from importlib import resources
from typing import Sequence

from .ingest import NewsArticle, sentence_views, tokenize
from .ner import Mention


@dataclass
class Quotation:
    entity_id: str
    doc_id: str
    sentence_index: int
    kind: str  # "direct" | "indirect"
    text: str
    published_at: datetime


@dataclass
class QuotePatterns:
    """Attribution verbs, quote delimiter pairs and clause complementizers."""

    verbs: frozenset[str]
    delimiters: tuple[tuple[str, str], ...]
    complementizers: frozenset[str]


def parse_patterns(text: str) -> QuotePatterns:
    """Pattern config: ``[verbs]``, ``[delimiters]`` (``open close`` per line)
    and ``[complementizers]`` sections; ``#`` lines are comments."""
    verbs: set[str] = set()
    delimiters: list[tuple[str, str]] = []
    comps: set[str] = set()
    section = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip().lower()
            continue
        if section == "verbs":
            verbs.add(line.lower())
        elif section == "delimiters":
            parts = line.split()
            if len(parts) == 2:
                delimiters.append((parts[0], parts[1]))
            elif len(parts) == 1 and len(parts[0]) == 2:
                delimiters.append((parts[0][0], parts[0][1]))
        elif section == "complementizers":
            comps.add(line.lower())
    return QuotePatterns(
        verbs=frozenset(verbs),
        delimiters=tuple(delimiters),
        complementizers=frozenset(comps),
    )


def dump_patterns(patterns: QuotePatterns) -> str:
    """Inverse of parse_patterns, entries sorted for stable output."""
    lines = ["[verbs]"]
    lines.extend(sorted(patterns.verbs))
    lines.append("[delimiters]")
    lines.extend(f"{o} {c}" for o, c in patterns.delimiters)
    lines.append("[complementizers]")
    lines.extend(sorted(patterns.complementizers))
    return "\n".join(lines) + "\n"


def load_patterns(path) -> QuotePatterns:
    with open(path, encoding="utf-8") as fh:
        return parse_patterns(fh.read())


def default_patterns() -> QuotePatterns:
    return parse_patterns(
        resources.files("chronolens.data").joinpath("patterns.cfg").read_text("utf-8")
    )


def _is_apostrophe(tokens, i: int) -> bool:
    """A straight quote glued between two letters is word-internal ("d'or")."""
    if tokens[i].text not in ("'", "’"):
        return False
    if i == 0 or i + 1 >= len(tokens):
        return False
    prev, nxt = tokens[i - 1], tokens[i + 1]
    return (
        prev.end == tokens[i].start
        and tokens[i].end == nxt.start
        and prev.text[-1].isalnum()
        and nxt.text[0].isalnum()
    )


def _quoted_spans(sentence_text: str, opens: dict[str, str]) -> list[tuple[int, int, str]]:
    """Balanced (start_tok, end_tok, content) spans over one sentence;
    end_tok is the index of the closing mark."""
    tokens = tokenize(sentence_text)
    spans = []
    i = 0
    while i < len(tokens):
        mark = tokens[i].text
        if mark in opens and not _is_apostrophe(tokens, i):
            closer = opens[mark]
            j = i + 1
            found = None
            while j < len(tokens):
                if tokens[j].text == closer and not _is_apostrophe(tokens, j):
                    found = j
                    break
                j += 1
            if found is not None:
                content = sentence_text[tokens[i].end : tokens[found].start].strip()
                spans.append((i, found, content))
                i = found + 1
                continue
        i += 1
    return spans


def extract_quotations(
    article: NewsArticle,
    mentions: Sequence[Mention],
    patterns: QuotePatterns | None = None,
) -> list[Quotation]:
    """Direct and indirect quotations attributed to resolved mentions.

    Matching is deterministic and left-to-right within each sentence.
    """
    patterns = patterns or default_patterns()
    opens = {o: c for o, c in patterns.delimiters}
    by_sentence: dict[int, list[Mention]] = {}
    for m in mentions:
        if m.resolved:
            by_sentence.setdefault(m.sentence_index, []).append(m)
    out: list[Quotation] = []
    for view in sentence_views(article):
        sent_mentions = sorted(by_sentence.get(view.index, []), key=lambda m: m.start)
        if not sent_mentions:
            continue
        tokens = view.tokens
        lower = [t.lower() for t in tokens]
        has_verb = any(t in patterns.verbs for t in lower)

        # direct quotes: balanced span + mention + verb in the same sentence
        if has_verb:
            for start_tok, end_tok, content in _quoted_spans(view.text, opens):
                if not content:
                    continue
                best = None
                best_key = None
                for m in sent_mentions:
                    if m.start > start_tok and m.end <= end_tok:
                        continue  # speaker cannot sit inside the quote
                    if m.end <= start_tok:
                        key = (start_tok - m.end, 0)  # prefer preceding on ties
                    else:
                        key = (m.start - end_tok, 1)
                    if best_key is None or key < best_key:
                        best, best_key = m, key
                if best is not None:
                    out.append(
                        Quotation(
                            entity_id=best.entity_id,
                            doc_id=article.doc_id,
                            sentence_index=view.index,
                            kind="direct",
                            text=content,
                            published_at=article.published_at,
                        )
                    )

        # indirect quotes: <PER> <verb> <complementizer> <clause to sentence end>
        for m in sent_mentions:
            k = m.end
            if k + 1 >= len(tokens):
                continue
            if lower[k] not in patterns.verbs:
                continue
            if lower[k + 1] not in patterns.complementizers:
                continue
            offs = tokenize(view.text)
            if k + 2 >= len(offs):
                continue
            clause = view.text[offs[k + 2].start :].rstrip()
            if not clause:
                continue
            out.append(
                Quotation(
                    entity_id=m.entity_id,
                    doc_id=article.doc_id,
                    sentence_index=view.index,
                    kind="indirect",
                    text=clause,
                    published_at=article.published_at,
                )
            )
    return out
