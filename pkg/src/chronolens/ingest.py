"""Corpus loading, boilerplate removal and sentence segmentation.

Raw documents arrive as JSON-Lines (one object per line); bodies may carry
HTML/XML markup. Cleaning keeps the main textual content by scoring
block-level chunks on text length and link density, which is enough to shed
navigation bars, link lists and footers without an external dependency.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from html.parser import HTMLParser
from importlib import resources
from typing import Iterable, Iterator, NamedTuple

from .errors import MalformedInput, MalformedTimestamp

# Maximal runs of letters/digits, otherwise one token per non-space character.
_TOKEN_RE = re.compile(r"[^\W_]+|\S", re.UNICODE)

_MARKUP_RE = re.compile(r"<\s*[A-Za-z!/]")

_TS_MIN = datetime(1900, 1, 1, tzinfo=timezone.utc)

# Closing marks that may trail a sentence-final . ! ? before the break.
_TRAILING_CLOSERS = {'"', "»", "”", "’", "'", ")", "]"}
_LEADING_OPENERS = {'"', "«", "“", "‘", "'", "(", "[", "¿", "¡"}

_SENT_PUNCT = {".", "!", "?"}


class Token(NamedTuple):
    text: str
    start: int
    end: int


@dataclass
class Sentence:
    """One sentence span into an article's clean text."""

    start: int
    end: int
    tokens: list[Token]


@dataclass
class RawDocument:
    """A news document as read from the corpus, body possibly with markup."""

    doc_id: str
    source: str
    category: str
    published_at: datetime | str
    title: str
    body: str


@dataclass
class NewsArticle:
    """A cleaned, segmented article. ``sentences`` spans cover ``clean_text``."""

    doc_id: str
    source: str
    category: str
    published_at: datetime
    title: str
    clean_text: str
    sentences: list[Sentence]

    def sentence_text(self, i: int) -> str:
        s = self.sentences[i]
        return self.clean_text[s.start : s.end]


@dataclass(frozen=True)
class SentenceView:
    """A pipeline-facing sentence: index 0 is the article title when present,
    body sentences follow at 1..n."""

    index: int
    text: str
    tokens: tuple[str, ...]


@dataclass
class CleaningConfig:
    """Thresholds for block-level boilerplate filtering."""

    min_block_chars: int = 25
    max_link_density: float = 0.33


def tokenize(text: str) -> list[Token]:
    """Split text into tokens with character offsets.

    Every non-whitespace character belongs to exactly one token.
    """
    return [Token(m.group(), m.start(), m.end()) for m in _TOKEN_RE.finditer(text)]


def token_texts(text: str) -> list[str]:
    return [t.text for t in tokenize(text)]


def norm_name(name: str) -> str:
    """Canonical surface form of a name: its tokens joined by single spaces."""
    return " ".join(token_texts(name))


def parse_timestamp(value: datetime | str) -> datetime:
    """Parse an ISO-8601 timestamp into an aware UTC datetime.

    Raises MalformedTimestamp when unparseable or outside
    [1900-01-01, now + 1 day].
    """
    if isinstance(value, datetime):
        ts = value
    elif isinstance(value, str):
        text = value.strip()
        if text.endswith(("Z", "z")):
            text = text[:-1] + "+00:00"
        try:
            ts = datetime.fromisoformat(text)
        except ValueError as exc:
            raise MalformedTimestamp(f"unparseable timestamp: {value!r}") from exc
    else:
        raise MalformedTimestamp(f"timestamp has unsupported type: {type(value).__name__}")
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    else:
        ts = ts.astimezone(timezone.utc)
    ts = ts.replace(microsecond=0)
    upper = datetime.now(timezone.utc) + timedelta(days=1)
    if not (_TS_MIN <= ts <= upper):
        raise MalformedTimestamp(f"timestamp out of range: {value!r}")
    return ts


def default_abbreviations() -> frozenset[str]:
    return load_abbreviations_text(
        resources.files("chronolens.data").joinpath("abbreviations.txt").read_text("utf-8")
    )


def load_abbreviations(path) -> frozenset[str]:
    """Abbreviation list file: one token per line, UTF-8; '#' starts a comment."""
    with open(path, encoding="utf-8") as fh:
        return load_abbreviations_text(fh.read())


def load_abbreviations_text(text: str) -> frozenset[str]:
    out = set()
    for line in text.splitlines():
        word = line.split("#", 1)[0].strip()
        if word:
            out.add(word.rstrip("."))
    return frozenset(out)


def _normalize_ws(text: str) -> str:
    paragraphs = []
    for para in re.split(r"\n\s*\n", text):
        collapsed = " ".join(para.split())
        if collapsed:
            paragraphs.append(collapsed)
    return "\n\n".join(paragraphs)


class _Block:
    __slots__ = ("parts", "link_chars")

    def __init__(self) -> None:
        self.parts: list[str] = []
        self.link_chars = 0

    @property
    def text(self) -> str:
        return " ".join("".join(self.parts).split())


_DROP_TAGS = {
    "script", "style", "nav", "header", "footer", "aside", "form",
    "noscript", "select", "option", "button", "iframe", "svg", "head",
    "title", "menu",
}
_BLOCK_TAGS = {
    "p", "div", "article", "section", "main", "li", "ul", "ol", "dl",
    "h1", "h2", "h3", "h4", "h5", "h6", "blockquote", "pre", "table",
    "tr", "td", "th", "br", "hr", "figure", "figcaption", "body", "html",
}


class _BlockExtractor(HTMLParser):
    """Collects block-level text chunks, counting anchor-text characters."""

    def __init__(self) -> None:
        super().__init__(convert_charrefs=True)
        self.blocks: list[_Block] = []
        self._current = _Block()
        self._drop_depth = 0
        self._link_depth = 0

    def _flush(self) -> None:
        if self._current.text:
            self.blocks.append(self._current)
        self._current = _Block()

    def handle_starttag(self, tag, attrs):
        tag = tag.lower()
        if tag in _DROP_TAGS:
            self._drop_depth += 1
        elif tag == "a":
            self._link_depth += 1
        if tag in _BLOCK_TAGS:
            self._flush()

    def handle_startendtag(self, tag, attrs):
        if tag.lower() in _BLOCK_TAGS:
            self._flush()

    def handle_endtag(self, tag):
        tag = tag.lower()
        if tag in _DROP_TAGS:
            self._drop_depth = max(0, self._drop_depth - 1)
        elif tag == "a":
            self._link_depth = max(0, self._link_depth - 1)
        if tag in _BLOCK_TAGS:
            self._flush()

    def handle_data(self, data):
        if self._drop_depth:
            return
        self._current.parts.append(data)
        if self._link_depth:
            self._current.link_chars += sum(1 for c in data if not c.isspace())

    def close(self):
        super().close()
        self._flush()


def strip_boilerplate(body: str, config: CleaningConfig | None = None) -> str:
    """Markup-free main content of a document body.

    Plain-text bodies are only whitespace-normalized. Markup bodies are split
    into block-level chunks; chunks shorter than ``min_block_chars`` or with a
    link density above ``max_link_density`` are dropped.
    """
    config = config or CleaningConfig()
    if not _MARKUP_RE.search(body):
        return _normalize_ws(body)
    parser = _BlockExtractor()
    parser.feed(body)
    parser.close()
    kept = []
    for block in parser.blocks:
        text = block.text
        chars = sum(1 for c in text if not c.isspace())
        if len(text) < config.min_block_chars:
            continue
        if chars and block.link_chars / chars > config.max_link_density:
            continue
        kept.append(text)
    return "\n\n".join(kept)


def segment(
    text: str, abbreviations: frozenset[str] | None = None
) -> list[Sentence]:
    """Split markup-free text into sentences with per-sentence tokens.

    Boundaries fall after ``.``, ``!`` or ``?`` (plus directly attached
    closing quotes/brackets) when followed by whitespace and an uppercase
    letter, unless the preceding word is a known abbreviation. Opening
    quotes/brackets may sit between the whitespace and the letter. Paragraph
    breaks (blank lines) always end a sentence.
    """
    if abbreviations is None:
        abbreviations = default_abbreviations()
    tokens = tokenize(text)
    if not tokens:
        return []
    sentences: list[Sentence] = []
    sent_start = 0
    i = 0
    n = len(tokens)
    while i < n:
        boundary = False
        tok = tokens[i]
        j = i
        if tok.text in _SENT_PUNCT:
            is_abbrev = (
                tok.text == "."
                and i > 0
                and tokens[i - 1].text in abbreviations
                and tokens[i - 1].end == tok.start
            )
            if not is_abbrev:
                while (
                    j + 1 < n
                    and tokens[j + 1].text in _TRAILING_CLOSERS
                    and tokens[j + 1].start == tokens[j].end
                ):
                    j += 1
                if j + 1 >= n:
                    boundary = True
                else:
                    nxt = tokens[j + 1]
                    k = j + 1
                    while k < n and tokens[k].text in _LEADING_OPENERS:
                        k += 1
                    if (
                        nxt.start > tokens[j].end
                        and k < n
                        and tokens[k].text[0].isupper()
                    ):
                        boundary = True
        if not boundary and i + 1 < n and "\n\n" in text[tok.end : tokens[i + 1].start]:
            boundary = True
            j = i
        if boundary:
            chunk = tokens[sent_start : j + 1]
            sentences.append(Sentence(chunk[0].start, chunk[-1].end, chunk))
            sent_start = j + 1
            i = j + 1
        else:
            i += 1
    if sent_start < n:
        chunk = tokens[sent_start:]
        sentences.append(Sentence(chunk[0].start, chunk[-1].end, chunk))
    return sentences


def clean_article(
    raw: RawDocument,
    config: CleaningConfig | None = None,
    abbreviations: frozenset[str] | None = None,
) -> NewsArticle:
    """Normalize a raw document into a cleaned, segmented article.

    Empty bodies yield a zero-sentence article; only a bad timestamp raises.
    """
    published = parse_timestamp(raw.published_at)
    clean_text = strip_boilerplate(raw.body or "", config)
    sentences = segment(clean_text, abbreviations)
    return NewsArticle(
        doc_id=raw.doc_id,
        source=raw.source,
        category=raw.category,
        published_at=published,
        title=raw.title,
        clean_text=clean_text,
        sentences=sentences,
    )


def sentence_views(article: NewsArticle) -> list[SentenceView]:
    """Sentences as the pipeline sees them: title at index 0 when non-empty,
    body sentences at 1..n."""
    views = []
    title = article.title.strip()
    if title:
        views.append(SentenceView(0, title, tuple(token_texts(title))))
    for i, sent in enumerate(article.sentences):
        text = article.clean_text[sent.start : sent.end]
        views.append(SentenceView(i + 1, text, tuple(t.text for t in sent.tokens)))
    return views


_REQUIRED_FIELDS = ("doc_id", "source", "category", "published_at", "title", "body")


def raw_from_json(obj: dict) -> RawDocument:
    if not isinstance(obj, dict):
        raise MalformedInput("corpus line is not a JSON object")
    missing = [f for f in _REQUIRED_FIELDS if f not in obj]
    if missing:
        raise MalformedInput(f"missing fields: {', '.join(missing)}")
    doc_id = obj["doc_id"]
    if not isinstance(doc_id, str) or not doc_id:
        raise MalformedInput("doc_id must be a non-empty string")
    for name in ("source", "category", "published_at", "title", "body"):
        if not isinstance(obj[name], str):
            raise MalformedInput(f"field {name} must be a string")
    return RawDocument(
        doc_id=doc_id,
        source=obj["source"],
        category=obj["category"],
        published_at=obj["published_at"],
        title=obj["title"],
        body=obj["body"],
    )


def parse_corpus(
    lines: Iterable[str],
) -> Iterator[tuple[int, RawDocument | MalformedInput]]:
    """Parse JSONL corpus lines, yielding (line_no, document-or-error).

    Blank lines are skipped; malformed lines are reported, not fatal.
    """
    for line_no, line in enumerate(lines, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            yield line_no, MalformedInput(f"invalid JSON: {exc}", line_no)
            continue
        try:
            yield line_no, raw_from_json(obj)
        except MalformedInput as exc:
            exc.line_no = line_no
            yield line_no, exc


def read_corpus(path) -> Iterator[tuple[int, RawDocument | MalformedInput]]:
    with open(path, encoding="utf-8") as fh:
        yield from parse_corpus(fh)
