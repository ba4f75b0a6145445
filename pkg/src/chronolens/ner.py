"""Person-name recognition and disambiguation.

Mention detection starts from a gazetteer (dictionary annotation), which
seeds a linear-chain sequence tagger trained with the averaged structured
perceptron and decoded exactly with Viterbi. The bootstrap loop re-annotates
the seed corpus with the current model, merges model and dictionary spans
(dictionary wins on conflict) and retrains until two successive annotation
passes agree on almost every token.

Disambiguation maps each mention to a canonical entity via job-descriptor
capture, within-document coreference, and registry/gazetteer name lookup.
"""

from __future__ import annotations

import json
import random
import re
import unicodedata
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Iterable, Sequence

from .errors import EmptyTrainingSet, MalformedInput
from .ingest import NewsArticle, SentenceView, norm_name, sentence_views, token_texts

LABELS = ("O", "B-PER", "I-PER")

START = "<s>"

UNRESOLVED = None


# ---------------------------------------------------------------------------
# Gazetteer

@dataclass
class Gazetteer:
    """Known person names plus alias forms, all whitespace-normalized."""

    entries: set[str] = field(default_factory=set)
    aliases: dict[str, str] = field(default_factory=dict)

    def add(self, name: str) -> None:
        self.entries.add(norm_name(name))

    def add_alias(self, alias: str, canonical: str) -> None:
        canonical = norm_name(canonical)
        self.entries.add(canonical)
        self.aliases[norm_name(alias)] = canonical

    def canonical_for(self, surface: str) -> str | None:
        surface = norm_name(surface)
        if surface in self.entries:
            return surface
        return self.aliases.get(surface)

    def all_names(self) -> list[str]:
        return sorted(self.entries | set(self.aliases))

    def token_set(self) -> frozenset[str]:
        toks: set[str] = set()
        for name in self.all_names():
            toks.update(name.split(" "))
        return frozenset(toks)

    def matcher(self) -> dict[str, list[tuple[str, ...]]]:
        """first token -> candidate token sequences, longest first."""
        by_first: dict[str, list[tuple[str, ...]]] = defaultdict(list)
        for name in self.all_names():
            toks = tuple(name.split(" "))
            by_first[toks[0]].append(toks)
        for cands in by_first.values():
            cands.sort(key=lambda t: (-len(t), t))
        return dict(by_first)


def parse_gazetteer(text: str) -> Gazetteer:
    """Gazetteer file: one ``canonical`` or ``alias<TAB>canonical`` per line."""
    gaz = Gazetteer()
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "\t" in line:
            alias, canonical = line.split("\t", 1)
            gaz.add_alias(alias.strip(), canonical.strip())
        else:
            gaz.add(line)
    return gaz


def load_gazetteer(path) -> Gazetteer:
    with open(path, encoding="utf-8") as fh:
        return parse_gazetteer(fh.read())


def dump_gazetteer(gaz: Gazetteer) -> str:
    """Inverse of parse_gazetteer, entries sorted for stable output."""
    lines = sorted(gaz.entries)
    lines.extend(f"{alias}\t{canonical}" for alias, canonical in sorted(gaz.aliases.items()))
    return "\n".join(lines) + ("\n" if lines else "")


# ---------------------------------------------------------------------------
# Tag sequences

@dataclass
class TagSequence:
    """Per-token BIO-PER labels for one sentence."""

    tokens: tuple[str, ...]
    tags: list[str]

    def validate(self) -> None:
        if len(self.tokens) != len(self.tags):
            raise ValueError("tags and tokens differ in length")
        prev = "O"
        for tag in self.tags:
            if tag not in LABELS:
                raise ValueError(f"unknown tag {tag!r}")
            if tag == "I-PER" and prev == "O":
                raise ValueError("I-PER follows O or sequence start")
            prev = tag


def spans_from_tags(tags: Sequence[str]) -> list[tuple[int, int]]:
    """PER spans (start, end exclusive) in a BIO tag list."""
    spans = []
    start = None
    for i, tag in enumerate(tags):
        if tag == "B-PER":
            if start is not None:
                spans.append((start, i))
            start = i
        elif tag == "I-PER":
            if start is None:  # tolerate stray I-PER from merged inputs
                start = i
        else:
            if start is not None:
                spans.append((start, i))
                start = None
    if start is not None:
        spans.append((start, len(tags)))
    return spans


def tags_from_spans(length: int, spans: Iterable[tuple[int, int]]) -> list[str]:
    tags = ["O"] * length
    for start, end in spans:
        if start >= end:
            continue
        tags[start] = "B-PER"
        for i in range(start + 1, end):
            tags[i] = "I-PER"
    return tags


def repair_tags(tags: list[str]) -> list[str]:
    """Turn illegal I-PER transitions into B-PER."""
    out = list(tags)
    prev = "O"
    for i, tag in enumerate(out):
        if tag == "I-PER" and prev == "O":
            out[i] = "B-PER"
        prev = out[i]
    return out


def annotate_tokens(tokens: Sequence[str], matcher: dict[str, list[tuple[str, ...]]]) -> list[str]:
    """Leftmost-longest exact dictionary matching over one token list."""
    tags = ["O"] * len(tokens)
    i = 0
    while i < len(tokens):
        matched = 0
        for cand in matcher.get(tokens[i], ()):
            if tuple(tokens[i : i + len(cand)]) == cand:
                matched = len(cand)
                break
        if matched:
            tags[i] = "B-PER"
            for j in range(i + 1, i + matched):
                tags[j] = "I-PER"
            i += matched
        else:
            i += 1
    return tags


def dictionary_annotate(article: NewsArticle, gaz: Gazetteer) -> list[TagSequence]:
    """Tag every pipeline sentence of an article by gazetteer lookup."""
    matcher = gaz.matcher()
    out = []
    for view in sentence_views(article):
        out.append(TagSequence(view.tokens, annotate_tokens(view.tokens, matcher)))
    return out


# ---------------------------------------------------------------------------
# Linear-chain sequence model

@dataclass
class SequenceModel:
    """Feature weights of the linear-chain tagger.

    ``gaz_tokens`` is the token vocabulary of the gazetteer the model was
    trained with; it reproduces the in-gazetteer feature at decode time.
    """

    weights: dict[tuple[str, str], float] = field(default_factory=dict)
    version: int = 0
    gaz_tokens: frozenset[str] = frozenset()


MODEL_FORMAT = "chronolens-seqmodel 1"


def dump_model(model: SequenceModel) -> str:
    """Serialize a model to a line-oriented text block.

    Entries are sorted, so equal models always produce identical text.
    Weights are written with repr() and round-trip bit-exactly.
    """
    lines = [MODEL_FORMAT, f"version {model.version}", f"gaz {len(model.gaz_tokens)}"]
    lines.extend(sorted(model.gaz_tokens))
    lines.append(f"weights {len(model.weights)}")
    for (feat, label), weight in sorted(model.weights.items()):
        lines.append(f"{feat}\t{label}\t{weight!r}")
    return "\n".join(lines) + "\n"


def parse_model(text: str) -> SequenceModel:
    """Inverse of dump_model. Raises MalformedInput on anything else."""
    lines = text.splitlines()
    pos = 0

    def take(prefix: str) -> str:
        nonlocal pos
        if pos >= len(lines) or not lines[pos].startswith(prefix):
            raise MalformedInput(f"expected {prefix!r} at line {pos + 1}", line_no=pos + 1)
        value = lines[pos][len(prefix):]
        pos += 1
        return value

    if take("") != MODEL_FORMAT:
        raise MalformedInput("unrecognized model header", line_no=1)
    version = int(take("version "))
    gaz_count = int(take("gaz "))
    gaz_tokens = frozenset(lines[pos:pos + gaz_count])
    if len(gaz_tokens) != gaz_count:
        raise MalformedInput("truncated gazetteer token list", line_no=pos + 1)
    pos += gaz_count
    weight_count = int(take("weights "))
    weights: dict[tuple[str, str], float] = {}
    for _ in range(weight_count):
        if pos >= len(lines):
            raise MalformedInput("truncated weight list", line_no=pos + 1)
        parts = lines[pos].split("\t")
        if len(parts) != 3:
            raise MalformedInput("bad weight line", line_no=pos + 1)
        weights[(parts[0], parts[1])] = float(parts[2])
        pos += 1
    return SequenceModel(weights=weights, version=version, gaz_tokens=gaz_tokens)


def save_model(model: SequenceModel, path) -> None:
    Path(path).write_text(dump_model(model), encoding="utf-8")


def load_model(path) -> SequenceModel:
    return parse_model(Path(path).read_text(encoding="utf-8"))


def _shape(token: str) -> str:
    out = []
    for ch in token:
        if ch.isupper():
            cls = "X"
        elif ch.islower():
            cls = "x"
        elif ch.isdigit():
            cls = "d"
        else:
            cls = ch
        if not out or out[-1] != cls:
            out.append(cls)
    return "".join(out)


def sentence_features(
    tokens: Sequence[str], gaz_tokens: frozenset[str]
) -> list[tuple[str, ...]]:
    """Per-position emission features (label-independent)."""
    feats = []
    n = len(tokens)
    for i in range(n):
        tok = tokens[i]
        feats.append(
            (
                "w=" + tok.lower(),
                "wm1=" + (tokens[i - 1].lower() if i > 0 else START),
                "wp1=" + (tokens[i + 1].lower() if i + 1 < n else "</s>"),
                "shape=" + _shape(tok),
                "ingaz=" + ("1" if tok in gaz_tokens else "0"),
            )
        )
    return feats


def _viterbi(
    feats: list[tuple[str, ...]], weights: dict[tuple[str, str], float]
) -> list[str]:
    """Exact best label sequence; I-PER is never allowed after O or start.

    Ties break toward the earlier label in LABELS, so a zero model tags O.
    """
    n = len(feats)
    if n == 0:
        return []
    n_labels = len(LABELS)
    emit = [
        [sum(weights.get((f, lab), 0.0) for f in feats[i]) for lab in LABELS]
        for i in range(n)
    ]
    score = [[0.0] * n_labels for _ in range(n)]
    back = [[0] * n_labels for _ in range(n)]
    for y, lab in enumerate(LABELS):
        if lab == "I-PER":
            score[0][y] = float("-inf")
        else:
            score[0][y] = emit[0][y] + weights.get(("prev=" + START, lab), 0.0)
    for i in range(1, n):
        for y, lab in enumerate(LABELS):
            best = float("-inf")
            best_prev = 0
            for p, plab in enumerate(LABELS):
                if lab == "I-PER" and plab == "O":
                    continue
                if score[i - 1][p] == float("-inf"):
                    continue
                s = score[i - 1][p] + weights.get(("prev=" + plab, lab), 0.0)
                if s > best:
                    best = s
                    best_prev = p
            score[i][y] = best + emit[i][y] if best != float("-inf") else float("-inf")
            back[i][y] = best_prev
    last = max(range(n_labels), key=lambda y: (score[n - 1][y], -y))
    path = [last]
    for i in range(n - 1, 0, -1):
        last = back[i][last]
        path.append(last)
    path.reverse()
    return [LABELS[y] for y in path]


def sequence_score(model: SequenceModel, tokens: Sequence[str], tags: Sequence[str]) -> float:
    """Model score of a given label sequence (same objective Viterbi maximizes)."""
    feats = sentence_features(tokens, model.gaz_tokens)
    total = 0.0
    prev = START
    for i, tag in enumerate(tags):
        total += sum(model.weights.get((f, tag), 0.0) for f in feats[i])
        total += model.weights.get(("prev=" + prev, tag), 0.0)
        prev = tag
    return total


def tag(model: SequenceModel, tokens: Sequence[str]) -> list[str]:
    """Highest-scoring valid BIO sequence for one sentence."""
    feats = sentence_features(tokens, model.gaz_tokens)
    return repair_tags(_viterbi(feats, model.weights))


def train_tagger(
    training: list[TagSequence],
    epochs: int,
    gaz_tokens: frozenset[str] = frozenset(),
    seed: int = 0,
) -> SequenceModel:
    """Averaged structured perceptron over the training sequences.

    Deterministic for a fixed example order and seed.
    """
    if not training:
        raise EmptyTrainingSet("no training sequences")
    for seq in training:
        seq.validate()
    examples = [
        (sentence_features(seq.tokens, gaz_tokens), seq.tags) for seq in training
    ]
    weights: dict[tuple[str, str], float] = defaultdict(float)
    totals: dict[tuple[str, str], float] = defaultdict(float)
    stamps: dict[tuple[str, str], int] = defaultdict(int)
    rng = random.Random(seed)
    step = 0

    def bump(key: tuple[str, str], delta: float) -> None:
        totals[key] += (step - stamps[key]) * weights[key]
        stamps[key] = step
        weights[key] += delta

    order = list(range(len(examples)))
    for _ in range(epochs):
        rng.shuffle(order)
        for idx in order:
            feats, gold = examples[idx]
            step += 1
            pred = _viterbi(feats, weights)
            if pred == gold:
                continue
            prev_g = prev_p = START
            for i in range(len(gold)):
                if gold[i] != pred[i] or prev_g != prev_p:
                    for f in feats[i]:
                        bump((f, gold[i]), 1.0)
                        bump((f, pred[i]), -1.0)
                    bump(("prev=" + prev_g, gold[i]), 1.0)
                    bump(("prev=" + prev_p, pred[i]), -1.0)
                prev_g, prev_p = gold[i], pred[i]
    averaged: dict[tuple[str, str], float] = {}
    for key, w in weights.items():
        total = totals[key] + (step - stamps[key]) * w
        value = total / step if step else 0.0
        if value != 0.0:
            averaged[key] = value
    return SequenceModel(weights=averaged, version=0, gaz_tokens=gaz_tokens)


# ---------------------------------------------------------------------------
# Bootstrap

@dataclass
class BootstrapIteration:
    """One annotation pass of the bootstrap loop."""

    iteration: int
    token_agreement: float | None
    per_tokens: int
    tags: list[list[str]]


@dataclass
class BootstrapResult:
    model: SequenceModel
    trace: list[BootstrapIteration]
    converged: bool
    iterations: int


def merge_annotations(model_tags: Sequence[str], dict_tags: Sequence[str]) -> list[str]:
    """Union of PER spans; on overlap the dictionary span wins."""
    d_spans = spans_from_tags(dict_tags)
    m_spans = spans_from_tags(model_tags)
    kept = list(d_spans)
    for ms, me in m_spans:
        if all(me <= ds or ms >= de for ds, de in d_spans):
            kept.append((ms, me))
    kept.sort()
    return tags_from_spans(len(dict_tags), kept)


def _count_per(tag_lists: list[list[str]]) -> int:
    return sum(1 for tags in tag_lists for t in tags if t != "O")


def bootstrap(
    seed_corpus: list[NewsArticle],
    gaz: Gazetteer,
    max_iters: int,
    stabilization_threshold: float = 0.999,
    epochs: int = 5,
    seed: int = 0,
) -> BootstrapResult:
    """Self-training loop: dictionary seed, re-annotate, merge, retrain.

    Stops when two successive annotation passes agree on at least
    ``stabilization_threshold`` of tokens, or after ``max_iters`` trainings.
    """
    if max_iters < 1:
        raise ValueError("max_iters must be >= 1")
    matcher = gaz.matcher()
    gaz_tokens = gaz.token_set()
    sentences: list[tuple[str, ...]] = []
    for article in seed_corpus:
        for view in sentence_views(article):
            sentences.append(view.tokens)
    dict_tags = [annotate_tokens(toks, matcher) for toks in sentences]
    total_tokens = sum(len(t) for t in sentences)

    current = dict_tags
    trace = [BootstrapIteration(0, None, _count_per(current), [list(t) for t in current])]
    model = train_tagger(
        [TagSequence(toks, tags) for toks, tags in zip(sentences, current)],
        epochs,
        gaz_tokens,
        seed,
    )
    converged = False
    trainings = 1
    while trainings < max_iters and not converged:
        merged = [
            merge_annotations(tag(model, toks), dtags)
            for toks, dtags in zip(sentences, dict_tags)
        ]
        agree = sum(
            1 for a, b in zip(current, merged) for x, y in zip(a, b) if x == y
        )
        agreement = agree / total_tokens if total_tokens else 1.0
        trace.append(
            BootstrapIteration(len(trace), agreement, _count_per(merged), [list(t) for t in merged])
        )
        if agreement >= stabilization_threshold:
            converged = True
            break
        current = merged
        model = train_tagger(
            [TagSequence(toks, tags) for toks, tags in zip(sentences, current)],
            epochs,
            gaz_tokens,
            seed,
        )
        model.version = trainings
        trainings += 1
    if not converged and max_iters > 1:
        # final agreement check for the last trained model
        merged = [
            merge_annotations(tag(model, toks), dtags)
            for toks, dtags in zip(sentences, dict_tags)
        ]
        agree = sum(
            1 for a, b in zip(current, merged) for x, y in zip(a, b) if x == y
        )
        agreement = agree / total_tokens if total_tokens else 1.0
        trace.append(
            BootstrapIteration(len(trace), agreement, _count_per(merged), [list(t) for t in merged])
        )
        converged = agreement >= stabilization_threshold
    return BootstrapResult(model=model, trace=trace, converged=converged, iterations=trainings)


# ---------------------------------------------------------------------------
# Mentions, entity registry and disambiguation

@dataclass
class Mention:
    """One in-text person mention, resolved to an entity or UNRESOLVED (None)."""

    doc_id: str
    sentence_index: int
    start: int
    end: int
    surface: str
    entity_id: str | None = UNRESOLVED
    job_descriptor: str = ""

    @property
    def resolved(self) -> bool:
        return self.entity_id is not None


def mentions_from_tags(doc_id: str, view: SentenceView, tags: Sequence[str]) -> list[Mention]:
    out = []
    for start, end in spans_from_tags(tags):
        out.append(
            Mention(
                doc_id=doc_id,
                sentence_index=view.index,
                start=start,
                end=end,
                surface=" ".join(view.tokens[start:end]),
            )
        )
    return out


@dataclass
class EntityProfile:
    """Canonical entity record accumulated across the archive."""

    entity_id: str
    canonical_name: str
    known_aliases: set[str] = field(default_factory=set)
    professions: Counter = field(default_factory=Counter)
    first_seen: datetime | None = None
    last_seen: datetime | None = None

    def top_profession(self) -> str:
        if not self.professions:
            return ""
        return min(self.professions, key=lambda p: (-self.professions[p], p))


def slugify(name: str) -> str:
    ascii_name = (
        unicodedata.normalize("NFKD", name).encode("ascii", "ignore").decode("ascii")
    )
    slug = re.sub(r"[^a-z0-9]+", "-", ascii_name.lower()).strip("-")
    return slug or "entity"


class EntityRegistry:
    """Single-writer store of entity profiles with name/alias lookup."""

    def __init__(self) -> None:
        self.profiles: dict[str, EntityProfile] = {}
        self._by_name: dict[str, str] = {}
        self.seen_docs: set[str] = set()

    def __len__(self) -> int:
        return len(self.profiles)

    def get(self, entity_id: str) -> EntityProfile | None:
        return self.profiles.get(entity_id)

    def resolve_name(self, surface: str) -> str | None:
        return self._by_name.get(norm_name(surface))

    def create(self, canonical_name: str, seen_at: datetime | None = None) -> EntityProfile:
        canonical_name = norm_name(canonical_name)
        base = slugify(canonical_name)
        entity_id = base
        n = 2
        while entity_id in self.profiles:
            entity_id = f"{base}-{n}"
            n += 1
        profile = EntityProfile(
            entity_id=entity_id,
            canonical_name=canonical_name,
            first_seen=seen_at,
            last_seen=seen_at,
        )
        self.profiles[entity_id] = profile
        self._by_name[canonical_name] = entity_id
        return profile

    def note_alias(self, entity_id: str, alias: str) -> None:
        alias = norm_name(alias)
        profile = self.profiles[entity_id]
        if alias == profile.canonical_name:
            return
        profile.known_aliases.add(alias)
        self._by_name.setdefault(alias, entity_id)

    def note_seen(self, entity_id: str, when: datetime) -> None:
        profile = self.profiles[entity_id]
        if profile.first_seen is None or when < profile.first_seen:
            profile.first_seen = when
        if profile.last_seen is None or when > profile.last_seen:
            profile.last_seen = when

    # -- persistence -------------------------------------------------------

    FORMAT = "chronolens-registry/1"

    def to_json(self) -> dict:
        # Profiles keep creation order; the name map is stored verbatim so a
        # reload resolves names exactly as the live registry did.
        return {
            "format": self.FORMAT,
            "profiles": [
                {
                    "entity_id": p.entity_id,
                    "canonical_name": p.canonical_name,
                    "aliases": sorted(p.known_aliases),
                    "professions": {k: p.professions[k] for k in sorted(p.professions)},
                    "first_seen": p.first_seen.isoformat() if p.first_seen else None,
                    "last_seen": p.last_seen.isoformat() if p.last_seen else None,
                }
                for p in self.profiles.values()
            ],
            "names": dict(sorted(self._by_name.items())),
            "seen_docs": sorted(self.seen_docs),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "EntityRegistry":
        if obj.get("format") != cls.FORMAT:
            raise ValueError(f"unsupported registry format: {obj.get('format')!r}")
        registry = cls()
        for entry in obj["profiles"]:
            profile = EntityProfile(
                entity_id=entry["entity_id"],
                canonical_name=entry["canonical_name"],
                known_aliases=set(entry["aliases"]),
                professions=Counter(entry["professions"]),
                first_seen=(
                    datetime.fromisoformat(entry["first_seen"]) if entry["first_seen"] else None
                ),
                last_seen=(
                    datetime.fromisoformat(entry["last_seen"]) if entry["last_seen"] else None
                ),
            )
            registry.profiles[profile.entity_id] = profile
        registry._by_name = dict(obj["names"])
        registry.seen_docs = set(obj["seen_docs"])
        return registry

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, ensure_ascii=False)


_WORD_RE = re.compile(r"[^\W\d_]", re.UNICODE)


def _capture_job_descriptor(
    mention: Mention, view: SentenceView, spans: list[tuple[int, int]]
) -> str:
    """Match ``<PER> , <descriptor> ,`` after the mention; 1..6 tokens,
    none of them inside another mention span."""
    toks = view.tokens
    i = mention.end
    if i >= len(toks) or toks[i] != ",":
        return ""
    j = i + 1
    captured = []
    while j < len(toks) and toks[j] != ",":
        captured.append(toks[j])
        j += 1
        if len(captured) > 6:
            return ""
    if j >= len(toks) or not captured:
        return ""
    if not _WORD_RE.search(captured[0]):
        return ""
    for start, end in spans:
        if (start, end) == (mention.start, mention.end):
            continue
        if start < j and end > i + 1:
            return ""
    return " ".join(captured)


def disambiguate(
    mentions: list[Mention],
    views: list[SentenceView],
    registry: EntityRegistry,
    doc_id: str,
    published_at: datetime,
    gazetteer: Gazetteer | None = None,
) -> list[Mention]:
    """Resolve one article's mentions in document order, updating the registry.

    Per-entity statistics (professions, timestamps) are recorded once per
    doc_id, so replaying an article leaves the registry unchanged.
    """
    views_by_index = {v.index: v for v in views}
    spans_by_sentence: dict[int, list[tuple[int, int]]] = defaultdict(list)
    for m in mentions:
        spans_by_sentence[m.sentence_index].append((m.start, m.end))
    first_pass = doc_id not in registry.seen_docs
    ordered = sorted(mentions, key=lambda m: (m.sentence_index, m.start))
    resolved_before: list[tuple[Mention, tuple[str, ...]]] = []
    for mention in ordered:
        view = views_by_index[mention.sentence_index]
        tokens = tuple(view.tokens[mention.start : mention.end])
        descriptor = _capture_job_descriptor(mention, view, spans_by_sentence[mention.sentence_index])
        if descriptor:
            mention.job_descriptor = descriptor

        entity_id: str | None = None
        is_alias_use = False
        # (b) within-document coreference: latest preceding containing mention
        for prior, prior_tokens in reversed(resolved_before):
            if len(tokens) >= len(prior_tokens):
                continue
            is_suffix = prior_tokens[len(prior_tokens) - len(tokens):] == tokens
            is_subset = set(tokens) <= set(prior_tokens)
            if is_suffix or is_subset:
                entity_id = prior.entity_id
                is_alias_use = True
                break
        # (c) registry canonical/alias lookup
        if entity_id is None:
            entity_id = registry.resolve_name(mention.surface)
        # (c') gazetteer canonical/alias lookup
        if entity_id is None and gazetteer is not None:
            canonical = gazetteer.canonical_for(mention.surface)
            if canonical is not None:
                entity_id = registry.resolve_name(canonical)
                if entity_id is None:
                    entity_id = registry.create(canonical, published_at).entity_id
                is_alias_use = canonical != norm_name(mention.surface)
        # (d) new profile for multi-token surfaces, else UNRESOLVED
        if entity_id is None:
            if len(tokens) >= 2:
                entity_id = registry.create(mention.surface, published_at).entity_id
            else:
                mention.entity_id = UNRESOLVED
                continue
        mention.entity_id = entity_id
        if is_alias_use:
            registry.note_alias(entity_id, mention.surface)
        registry.note_seen(entity_id, published_at)
        if first_pass and mention.job_descriptor:
            registry.profiles[entity_id].professions[mention.job_descriptor] += 1
        resolved_before.append((mention, tokens))
    registry.seen_docs.add(doc_id)
    return ordered
