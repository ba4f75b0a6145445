"""Entity-centric news archive: ingestion, person NER, time-filtered entity
search, quotations, co-occurrence networks and their layout, behind an HTTP
API and a CLI."""

from .errors import (
    ChronolensError,
    EmptyQuery,
    EmptyTrainingSet,
    InvalidParameter,
    InvalidSpan,
    MalformedInput,
    MalformedTimestamp,
    UnknownEntity,
)
from .graph import CoocGraph, NetworkEdge, NetworkNode, NetworkView, update_graph
from .index import EntityIndex, QuerySpec, Snippet, extract_snippets, index_snippets
from .ingest import (
    CleaningConfig,
    NewsArticle,
    RawDocument,
    clean_article,
    parse_corpus,
    read_corpus,
    segment,
    sentence_views,
    strip_boilerplate,
)
from .layout import LayoutParams, LayoutState, init_layout, layout_step, run_layout
from .ner import (
    EntityProfile,
    EntityRegistry,
    Gazetteer,
    Mention,
    SequenceModel,
    TagSequence,
    bootstrap,
    dictionary_annotate,
    disambiguate,
    load_gazetteer,
    load_model,
    save_model,
    tag,
    train_tagger,
)
from .quotes import Quotation, QuotePatterns, extract_quotations, load_patterns
from .service import (
    Archive,
    ArchiveState,
    IngestReport,
    api_entity,
    api_network,
    api_quotes,
    api_search,
    api_stats,
    ingest_batch,
    load_state,
    save_state,
)

__version__ = "0.1.0"

__all__ = [
    "Archive",
    "ArchiveState",
    "ChronolensError",
    "CleaningConfig",
    "CoocGraph",
    "EmptyQuery",
    "EmptyTrainingSet",
    "EntityIndex",
    "EntityProfile",
    "EntityRegistry",
    "Gazetteer",
    "IngestReport",
    "InvalidParameter",
    "InvalidSpan",
    "LayoutParams",
    "LayoutState",
    "MalformedInput",
    "MalformedTimestamp",
    "Mention",
    "NetworkEdge",
    "NetworkNode",
    "NetworkView",
    "NewsArticle",
    "QuerySpec",
    "Quotation",
    "QuotePatterns",
    "RawDocument",
    "SequenceModel",
    "Snippet",
    "TagSequence",
    "UnknownEntity",
    "api_entity",
    "api_network",
    "api_quotes",
    "api_search",
    "api_stats",
    "bootstrap",
    "clean_article",
    "dictionary_annotate",
    "disambiguate",
    "extract_quotations",
    "extract_snippets",
    "index_snippets",
    "ingest_batch",
    "init_layout",
    "layout_step",
    "load_gazetteer",
    "load_model",
    "load_patterns",
    "load_state",
    "parse_corpus",
    "read_corpus",
    "run_layout",
    "save_model",
    "save_state",
    "segment",
    "sentence_views",
    "strip_boilerplate",
    "tag",
    "train_tagger",
    "update_graph",
]
