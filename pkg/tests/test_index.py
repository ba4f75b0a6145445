"""Entity document index: snippet bookkeeping, ranking and timelines."""

import random
from datetime import date, datetime, timezone

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import BruteIndex, brute_index_from_gold, word_tokens
from chronolens.errors import EmptyQuery, UnknownEntity
from chronolens.index import (
    EntityIndex,
    QuerySpec,
    Snippet,
    content_tokens,
    default_stopwords,
    extract_snippets,
    parse_stopwords,
)

JAN5 = datetime(2010, 1, 5, 12, 0, tzinfo=timezone.utc)
JAN9 = datetime(2010, 1, 9, 12, 0, tzinfo=timezone.utc)
FEB2 = datetime(2010, 2, 2, 12, 0, tzinfo=timezone.utc)


def snip(eid: str, text: str, when: datetime, doc_id: str = "d1", sidx: int = 1):
    return Snippet(eid, doc_id, sidx, text, when)


def small_index(stopwords=frozenset(), **kwargs) -> EntityIndex:
    idx = EntityIndex(stopwords=stopwords, **kwargs)
    idx.add_snippets(
        [
            snip("ana", "Ana faces a corruption inquiry over contracts", JAN5),
            snip("ana", "Ana denied the corruption accusations", FEB2, "d2"),
            snip("rui", "Rui praised the stadium contracts", JAN9, "d3"),
        ]
    )
    return idx


class TestContentTokens:
    def test_lowercased_words_only(self):
        assert content_tokens("Ana Silva, 42, said-so.") == [
            "ana", "silva", "42", "said", "so",
        ]

    def test_matches_reference_tokenizer(self):
        text = "O'Neil visitou o Porto às 9h30! «Sim»,ד123 said_x."
        assert content_tokens(text) == word_tokens(text)


class TestBookkeeping:
    def test_postings_and_lengths(self):
        idx = small_index()
        assert idx.postings["corruption"]["ana"] == {
            date(2010, 1, 5): 1, date(2010, 2, 2): 1,
        }
        assert idx.doc_lengths == {"ana": 12, "rui": 5}
        assert idx.total_snippets == {"ana": 2, "rui": 1}
        assert idx.snippet_counts["ana"] == {
            date(2010, 1, 5): 1, date(2010, 2, 2): 1,
        }
        assert idx.snippet_refs["ana"] == {
            ("d1", 1, date(2010, 1, 5)), ("d2", 1, date(2010, 2, 2)),
        }

    def test_stopwords_excluded_from_postings_and_lengths(self):
        stop = parse_stopwords("the\na\nover\n")
        idx = EntityIndex(stopwords=stop)
        idx.add_snippet(snip("ana", "Ana faces a corruption inquiry over the contracts", JAN5))
        assert "the" not in idx.postings
        assert idx.doc_lengths["ana"] == 5

    def test_archive_span(self):
        idx = small_index()
        assert idx.archive_span() == (date(2010, 1, 5), date(2010, 2, 2))
        assert EntityIndex().archive_span() is None


class TestSearch:
    def test_matches_oracle_on_hand_corpus(self):
        idx = small_index()
        brute = BruteIndex()
        brute.add("ana", "Ana faces a corruption inquiry over contracts", date(2010, 1, 5))
        brute.add("ana", "Ana denied the corruption accusations", date(2010, 2, 2))
        brute.add("rui", "Rui praised the stadium contracts", date(2010, 1, 9))
        for query in ["corruption", "contracts", "stadium contracts", "ana corruption"]:
            got = idx.search(QuerySpec(text=query, limit=10))
            want = brute.rank(query, limit=10)
            assert [e for e, _ in got] == [e for e, _ in want]
            for (_, a), (_, b) in zip(got, want):
                assert a == pytest.approx(b, rel=1e-12)

    def test_span_restricts_candidates(self):
        idx = small_index()
        feb = (date(2010, 2, 1), date(2010, 2, 28))
        got = idx.search(QuerySpec(text="corruption contracts", span=feb))
        assert [e for e, _ in got] == ["ana"]

    def test_span_narrowing_never_raises_score(self):
        idx = small_index()
        wide = dict(idx.search(QuerySpec(text="corruption contracts", limit=10)))
        narrow = dict(
            idx.search(
                QuerySpec(
                    text="corruption contracts",
                    span=(date(2010, 1, 1), date(2010, 1, 31)),
                    limit=10,
                )
            )
        )
        for eid, score in narrow.items():
            assert score <= wide[eid] + 1e-12

    def test_repeated_query_term_scores_double(self):
        idx = small_index()
        (single,) = [s for e, s in idx.search(QuerySpec(text="stadium")) if e == "rui"]
        (doubled,) = [
            s for e, s in idx.search(QuerySpec(text="stadium stadium")) if e == "rui"
        ]
        assert doubled == 2 * single

    def test_tie_breaks_snippets_then_id(self):
        idx = EntityIndex(stopwords=frozenset(), b=0.0)
        idx.add_snippet(snip("zeta", "alpha beta", JAN5))
        idx.add_snippet(snip("zeta", "gamma delta", JAN9, "d2"))
        idx.add_snippet(snip("mid", "alpha beta", JAN5, "d3"))
        idx.add_snippet(snip("abe", "alpha beta", JAN5, "d4"))
        got = idx.search(QuerySpec(text="alpha"))
        assert [e for e, _ in got] == ["zeta", "abe", "mid"]
        assert got[0][1] == got[1][1] == got[2][1]

    def test_empty_query_rejected(self):
        idx = small_index(stopwords=parse_stopwords("the\n"))
        with pytest.raises(EmptyQuery):
            idx.search(QuerySpec(text="  "))
        with pytest.raises(EmptyQuery):
            idx.search(QuerySpec(text="the"))

    def test_empty_index_returns_nothing(self):
        assert EntityIndex().search(QuerySpec(text="anything")) == []

    def test_limit_truncates(self):
        idx = small_index()
        got = idx.search(QuerySpec(text="contracts", limit=1))
        assert len(got) == 1

    def test_query_spec_validation(self):
        with pytest.raises(ValueError):
            QuerySpec(text="x", limit=0)
        with pytest.raises(ValueError):
            QuerySpec(text="x", span=(date(2010, 2, 1), date(2010, 1, 1)))


class TestAgainstGoldFixture:
    def test_rankings_match_oracle(self, archive, gold):
        brute = brute_index_from_gold(gold, stopwords=default_stopwords())
        for query in ["corruption", "stadium", "inflação", "museum", "final"]:
            for span in [
                None,
                (date(2010, 1, 1), date(2010, 2, 28)),
                (date(2010, 5, 1), date(2010, 6, 30)),
            ]:
                got = archive.index.search(QuerySpec(text=query, span=span, limit=20))
                want = brute.rank(query, span=span, limit=20)
                assert [e for e, _ in got] == [e for e, _ in want], (query, span)
                for (_, a), (_, b) in zip(got, want):
                    assert a == pytest.approx(b, rel=1e-12)


class TestTimeline:
    def test_day_granularity_zero_filled(self):
        idx = small_index()
        jan = (date(2010, 1, 4), date(2010, 1, 6))
        got = idx.timeline("ana", "day", jan)
        assert got == [("2010-01-04", 0), ("2010-01-05", 1), ("2010-01-06", 0)]

    def test_month_granularity_defaults_to_archive_span(self):
        idx = small_index()
        assert idx.timeline("ana", "month") == [("2010-01", 1), ("2010-02", 1)]
        assert idx.timeline("rui", "month") == [("2010-01", 1), ("2010-02", 0)]

    def test_year_granularity(self):
        idx = small_index()
        idx.add_snippet(snip("ana", "Ana resurfaced", datetime(2011, 3, 1, tzinfo=timezone.utc), "d9"))
        assert idx.timeline("ana", "year") == [("2010", 2), ("2011", 1)]

    def test_partial_month_span_respected(self):
        idx = small_index()
        got = idx.timeline("ana", "month", (date(2010, 1, 6), date(2010, 2, 28)))
        assert got == [("2010-01", 0), ("2010-02", 1)]

    def test_unknown_entity(self):
        with pytest.raises(UnknownEntity):
            small_index().timeline("nobody")

    def test_bad_granularity(self):
        with pytest.raises(ValueError):
            small_index().timeline("ana", "week")


class TestSerialization:
    def test_round_trip_preserves_search(self):
        idx = small_index()
        again = EntityIndex.from_json(idx.to_json())
        q = QuerySpec(text="corruption contracts")
        assert again.search(q) == idx.search(q)
        assert again.dumps() == idx.dumps()

    def test_format_checked(self):
        with pytest.raises(ValueError):
            EntityIndex.from_json({"format": "other/9"})


class TestExtractSnippets:
    def test_one_snippet_per_entity_sentence_pair(self):
        from chronolens.ingest import RawDocument, clean_article
        from chronolens.ner import Mention

        article = clean_article(
            RawDocument(
                doc_id="d1",
                source="s",
                category="c",
                published_at="2010-01-05T12:00:00Z",
                title="Ana Silva speaks",
                body="Ana Silva met Ana Silva impersonators. Rui waved.",
            )
        )
        mentions = [
            Mention("d1", 0, 0, 2, "Ana Silva", "ana"),
            Mention("d1", 1, 0, 2, "Ana Silva", "ana"),
            Mention("d1", 1, 3, 5, "Ana Silva", "ana"),
            Mention("d1", 2, 0, 1, "Rui", None),
        ]
        snippets = extract_snippets(article, mentions)
        assert [(s.entity_id, s.sentence_index) for s in snippets] == [
            ("ana", 0), ("ana", 1),
        ]
        assert snippets[0].text == "Ana Silva speaks"
        assert snippets[1].text == "Ana Silva met Ana Silva impersonators."


@st.composite
def snippet_corpus(draw):
    entities = draw(st.lists(st.sampled_from(["e1", "e2", "e3", "e4"]),
                             min_size=1, max_size=12))
    vocab = ["alpha", "beta", "gamma", "delta", "port", "vote"]
    rows = []
    for i, eid in enumerate(entities):
        words = draw(st.lists(st.sampled_from(vocab), min_size=1, max_size=6))
        day = draw(st.integers(min_value=1, max_value=28))
        rows.append((eid, " ".join(words), date(2010, 1, day), f"d{i}"))
    return rows


class TestOracleProperty:
    @given(
        snippet_corpus(),
        st.lists(st.sampled_from(["alpha", "beta", "gamma", "vote port"]),
                 min_size=1, max_size=3),
        st.integers(min_value=1, max_value=20),
        st.integers(min_value=1, max_value=28),
    )
    @settings(max_examples=60, deadline=None)
    def test_ranking_matches_oracle(self, rows, queries, lo_day, hi_day):
        if lo_day > hi_day:
            lo_day, hi_day = hi_day, lo_day
        span = (date(2010, 1, lo_day), date(2010, 1, hi_day))
        idx = EntityIndex(stopwords=frozenset())
        brute = BruteIndex()
        for eid, text, bucket, doc_id in rows:
            idx.add_snippet(Snippet(eid, doc_id, 1, text,
                                    datetime(bucket.year, bucket.month,
                                             bucket.day, tzinfo=timezone.utc)))
            brute.add(eid, text, bucket)
        for query in queries:
            got = idx.search(QuerySpec(text=query, span=span, limit=10))
            want = brute.rank(query, span=span, limit=10)
            assert [e for e, _ in got] == [e for e, _ in want]
            for (_, a), (_, b) in zip(got, want):
                assert a == pytest.approx(b, rel=1e-12)
