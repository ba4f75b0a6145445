"""Gazetteer matching, the sequence tagger, bootstrap and disambiguation."""

from datetime import datetime, timezone

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chronolens.errors import EmptyTrainingSet, MalformedInput
from chronolens.ingest import RawDocument, clean_article, sentence_views
from chronolens.ner import (
    EntityRegistry,
    Gazetteer,
    SequenceModel,
    TagSequence,
    annotate_tokens,
    bootstrap,
    dictionary_annotate,
    disambiguate,
    dump_gazetteer,
    dump_model,
    mentions_from_tags,
    merge_annotations,
    parse_gazetteer,
    parse_model,
    repair_tags,
    slugify,
    spans_from_tags,
    tag,
    tags_from_spans,
    train_tagger,
)

WHEN = datetime(2010, 1, 1, tzinfo=timezone.utc)


def doc(body: str, title: str = "", doc_id: str = "d1") -> RawDocument:
    return RawDocument(
        doc_id=doc_id,
        source="src",
        category="news",
        published_at="2010-01-01T00:00:00Z",
        title=title,
        body=body,
    )


def article_views(body: str, title: str = "", doc_id: str = "d1"):
    article = clean_article(doc(body, title, doc_id))
    return article, sentence_views(article)


def mentions_for(body: str, gaz: Gazetteer, title: str = "", doc_id: str = "d1"):
    article, views = article_views(body, title, doc_id)
    mentions = []
    for view, seq in zip(views, dictionary_annotate(article, gaz)):
        mentions.extend(mentions_from_tags(doc_id, view, seq.tags))
    return mentions, views


class TestGazetteer:
    def test_parse_entries_aliases_comments(self):
        gaz = parse_gazetteer(
            "# people\nAna Silva\n\nSilva\tAna Silva\nRui  Alves\n"
        )
        assert gaz.canonical_for("Ana Silva") == "Ana Silva"
        assert gaz.canonical_for("Silva") == "Ana Silva"
        assert gaz.canonical_for("Rui Alves") == "Rui Alves"
        assert gaz.canonical_for("Nobody") is None

    def test_alias_registers_canonical(self):
        gaz = Gazetteer()
        gaz.add_alias("CR7", "Cristiano Ronaldo")
        assert "Cristiano Ronaldo" in gaz.entries
        assert gaz.canonical_for("CR7") == "Cristiano Ronaldo"

    def test_surface_whitespace_normalized(self):
        gaz = Gazetteer()
        gaz.add("Ana  Silva")
        assert gaz.canonical_for(" Ana   Silva ") == "Ana Silva"

    def test_token_set(self):
        gaz = parse_gazetteer("Ana Silva\nSilva\tAna Silva\n")
        assert gaz.token_set() == frozenset({"Ana", "Silva"})

    def test_dump_round_trip(self):
        gaz = parse_gazetteer("Ana Silva\nRui Alves\nSilva\tAna Silva\n")
        text = dump_gazetteer(gaz)
        again = parse_gazetteer(text)
        assert again.entries == gaz.entries
        assert again.aliases == gaz.aliases
        assert dump_gazetteer(again) == text

    def test_dump_empty(self):
        assert dump_gazetteer(Gazetteer()) == ""


class TestTags:
    def test_spans_round_trip(self):
        tags = ["O", "B-PER", "I-PER", "O", "B-PER", "B-PER", "I-PER"]
        spans = spans_from_tags(tags)
        assert spans == [(1, 3), (4, 5), (5, 7)]
        assert tags_from_spans(len(tags), spans) == tags

    def test_validate_rejects_orphan_inside(self):
        seq = TagSequence(("a", "b"), ["O", "I-PER"])
        with pytest.raises(ValueError):
            seq.validate()

    def test_validate_rejects_length_mismatch(self):
        with pytest.raises(ValueError):
            TagSequence(("a",), ["O", "O"]).validate()

    def test_repair_promotes_orphan_inside(self):
        assert repair_tags(["O", "I-PER", "I-PER"]) == ["O", "B-PER", "I-PER"]

    @given(
        st.lists(st.sampled_from(["O", "B-PER", "I-PER"]), max_size=12)
    )
    def test_repaired_tags_always_valid(self, tags):
        fixed = repair_tags(tags)
        TagSequence(tuple("x" * len(fixed)), fixed).validate()


class TestDictionaryMatch:
    def test_leftmost_longest(self):
        gaz = parse_gazetteer("Ana Silva\nAna Silva Costa\n")
        tokens = ("Ana", "Silva", "Costa", "left", ".")
        assert annotate_tokens(tokens, gaz.matcher()) == [
            "B-PER", "I-PER", "I-PER", "O", "O",
        ]

    def test_adjacent_names_get_separate_spans(self):
        gaz = parse_gazetteer("Ana Silva\nRui Alves\n")
        tokens = ("Ana", "Silva", "Rui", "Alves")
        assert annotate_tokens(tokens, gaz.matcher()) == [
            "B-PER", "I-PER", "B-PER", "I-PER",
        ]

    def test_title_sentence_annotated(self):
        gaz = parse_gazetteer("Ana Silva\n")
        article, views = article_views("No names here.", title="Ana Silva speaks")
        seqs = dictionary_annotate(article, gaz)
        assert [s.tags for s in seqs] == [
            ["B-PER", "I-PER", "O"],
            ["O", "O", "O", "O"],
        ]
        assert [s.tokens for s in seqs] == [v.tokens for v in views]


class TestTagger:
    def test_zero_model_emits_all_outside(self):
        model = SequenceModel(weights={}, version=0, gaz_tokens=frozenset())
        assert tag(model, ("Some", "Body", "spoke", ".")) == ["O", "O", "O", "O"]

    def test_output_is_always_valid_bio(self):
        training = [
            TagSequence(("Ana", "Silva", "spoke", "."),
                        ["B-PER", "I-PER", "O", "O"]),
            TagSequence(("The", "rain", "fell", "."), ["O", "O", "O", "O"]),
        ]
        model = train_tagger(training, epochs=3)
        for tokens in [("Rui", "Alves", "spoke", "."), ("rain", ".")]:
            TagSequence(tokens, tag(model, tokens)).validate()

    def test_learns_context_for_unseen_names(self):
        # Names sit mid-sentence so the frame words, not the name identities,
        # carry the evidence.
        names = [("Ana", "Silva"), ("Rui", "Alves"), ("Vera", "Costa"),
                 ("Hugo", "Matos")]
        training = []
        for first, last in names:
            training.append(
                TagSequence(("The", "committee", "heard", first, last, "on",
                             "Monday", "."),
                            ["O", "O", "O", "B-PER", "I-PER", "O", "O", "O"])
            )
            training.append(
                TagSequence(("The", "committee", "heard", "testimony", "on",
                             "Monday", "."),
                            ["O", "O", "O", "O", "O", "O", "O"])
            )
        model = train_tagger(training, epochs=8)
        got = tag(model, ("The", "committee", "heard", "Marta", "Lopes", "on",
                          "Monday", "."))
        assert got == ["O", "O", "O", "B-PER", "I-PER", "O", "O", "O"]

    def test_training_deterministic_for_fixed_seed(self):
        training = [
            TagSequence(("Ana", "Silva", "spoke", "."),
                        ["B-PER", "I-PER", "O", "O"]),
            TagSequence(("Nothing", "happened", "."), ["O", "O", "O"]),
        ]
        m1 = train_tagger(training, epochs=4, seed=3)
        m2 = train_tagger(training, epochs=4, seed=3)
        assert m1.weights == m2.weights

    def test_empty_training_set_rejected(self):
        with pytest.raises(EmptyTrainingSet):
            train_tagger([], epochs=1)


class TestModelSerialization:
    def build(self):
        training = [
            TagSequence(("Ana", "Silva", "spoke", "."),
                        ["B-PER", "I-PER", "O", "O"]),
            TagSequence(("It", "rained", "."), ["O", "O", "O"]),
        ]
        return train_tagger(training, epochs=3, gaz_tokens=frozenset({"Ana", "Silva"}))

    def test_round_trip_preserves_weights_exactly(self):
        model = self.build()
        again = parse_model(dump_model(model))
        assert again.weights == model.weights
        assert again.gaz_tokens == model.gaz_tokens
        assert again.version == model.version

    def test_dump_is_stable(self):
        model = self.build()
        text = dump_model(model)
        assert dump_model(parse_model(text)) == text

    def test_round_trip_tags_identically(self):
        model = self.build()
        again = parse_model(dump_model(model))
        tokens = ("Ana", "Silva", "spoke", "to", "Rui", "Alves", ".")
        assert tag(again, tokens) == tag(model, tokens)

    @pytest.mark.parametrize(
        "text", ["", "wrong header\n", "chronolens-seqmodel 1\nversion 0\ngaz 1\n"]
    )
    def test_malformed_model_rejected(self, text):
        with pytest.raises(MalformedInput):
            parse_model(text)


class TestMerge:
    def test_union_of_disjoint_spans(self):
        model_tags = ["B-PER", "I-PER", "O", "O", "O"]
        dict_tags = ["O", "O", "O", "B-PER", "I-PER"]
        assert merge_annotations(model_tags, dict_tags) == [
            "B-PER", "I-PER", "O", "B-PER", "I-PER",
        ]

    def test_dictionary_wins_on_overlap(self):
        model_tags = ["B-PER", "I-PER", "I-PER", "O"]
        dict_tags = ["O", "B-PER", "I-PER", "O"]
        assert merge_annotations(model_tags, dict_tags) == [
            "O", "B-PER", "I-PER", "O",
        ]


class TestBootstrap:
    def corpus(self):
        bodies = [
            "Ana Silva said that the vote passed.",
            "Rui Alves said that the vote passed.",
            "Marta Lopes said that the vote passed.",
            "The council met again on Monday.",
            "Prices rose across the region.",
        ]
        return [
            clean_article(doc(body, doc_id=f"d{i}")) for i, body in enumerate(bodies)
        ]

    def test_trace_starts_with_dictionary_pass(self):
        gaz = parse_gazetteer("Ana Silva\n")
        result = bootstrap(self.corpus(), gaz, max_iters=3)
        assert result.trace[0].iteration == 0
        assert result.trace[0].token_agreement is None
        assert result.trace[0].per_tokens == 2
        assert 1 <= result.iterations <= 3
        assert len(result.trace) == result.iterations + 1

    def test_later_passes_extend_coverage(self):
        gaz = parse_gazetteer("Ana Silva\nRui Alves\n")
        result = bootstrap(self.corpus(), gaz, max_iters=4)
        assert result.trace[-1].per_tokens >= result.trace[0].per_tokens

    def test_convergence_reports_agreement(self):
        gaz = parse_gazetteer("Ana Silva\n")
        result = bootstrap(self.corpus(), gaz, max_iters=6)
        if result.converged:
            assert result.trace[-1].token_agreement >= 0.999

    def test_rejects_bad_max_iters(self):
        with pytest.raises(ValueError):
            bootstrap(self.corpus(), Gazetteer(), max_iters=0)


class TestSlug:
    def test_accents_stripped(self):
        assert slugify("José Mourinho") == "jose-mourinho"

    def test_punctuation_collapsed(self):
        assert slugify("  O'Neil, Jr. ") == "o-neil-jr"

    def test_empty_fallback(self):
        assert slugify("!!!") == "entity"


class TestRegistry:
    def test_create_assigns_unique_slugs(self):
        reg = EntityRegistry()
        first = reg.create("Ana Silva", WHEN)
        second = reg.create("Ana Silva", WHEN)
        assert first.entity_id == "ana-silva"
        assert second.entity_id == "ana-silva-2"

    def test_resolve_name_covers_aliases(self):
        reg = EntityRegistry()
        eid = reg.create("Cristiano Ronaldo", WHEN).entity_id
        reg.note_alias(eid, "Ronaldo")
        assert reg.resolve_name("Cristiano Ronaldo") == eid
        assert reg.resolve_name("Ronaldo") == eid
        assert reg.resolve_name("Messi") is None

    def test_note_seen_tracks_span(self):
        reg = EntityRegistry()
        eid = reg.create("Ana Silva").entity_id
        later = datetime(2011, 5, 1, tzinfo=timezone.utc)
        reg.note_seen(eid, later)
        reg.note_seen(eid, WHEN)
        profile = reg.get(eid)
        assert profile.first_seen == WHEN
        assert profile.last_seen == later

    def test_top_profession_breaks_ties_alphabetically(self):
        reg = EntityRegistry()
        profile = reg.create("Ana Silva", WHEN)
        profile.professions["minister"] += 1
        profile.professions["lawyer"] += 1
        assert profile.top_profession() == "lawyer"
        profile.professions["minister"] += 1
        assert profile.top_profession() == "minister"

    def test_json_round_trip_preserves_resolution(self):
        reg = EntityRegistry()
        eid = reg.create("José Mourinho", WHEN).entity_id
        reg.note_alias(eid, "Mourinho")
        reg.get(eid).professions["coach"] += 2
        reg.seen_docs.add("d1")
        again = EntityRegistry.from_json(reg.to_json())
        assert again.resolve_name("Mourinho") == eid
        assert again.get(eid).professions == reg.get(eid).professions
        assert again.get(eid).first_seen == WHEN
        assert again.seen_docs == reg.seen_docs
        assert again.dumps() == reg.dumps()


class TestDisambiguate:
    def run(self, body, gaz, registry=None, doc_id="d1", title=""):
        registry = registry if registry is not None else EntityRegistry()
        mentions, views = mentions_for(body, gaz, title=title, doc_id=doc_id)
        resolved = disambiguate(mentions, views, registry, doc_id, WHEN, gaz)
        return resolved, registry

    def test_surname_corefers_to_preceding_full_name(self):
        gaz = parse_gazetteer("Ana Silva\nSilva\tAna Silva\n")
        resolved, registry = self.run(
            "Ana Silva spoke first. Silva answered later.", gaz
        )
        assert [m.entity_id for m in resolved] == ["ana-silva", "ana-silva"]
        assert "Silva" in registry.get("ana-silva").known_aliases

    def test_gazetteer_alias_resolves_without_prior_mention(self):
        gaz = parse_gazetteer("Cristiano Ronaldo\nRonaldo\tCristiano Ronaldo\n")
        resolved, registry = self.run("Ronaldo scored twice.", gaz)
        assert [m.entity_id for m in resolved] == ["cristiano-ronaldo"]
        assert registry.get("cristiano-ronaldo").canonical_name == "Cristiano Ronaldo"

    def test_unknown_multi_token_name_creates_profile(self):
        gaz = parse_gazetteer("Ana Silva\nHelena Faria\n")
        resolved, registry = self.run("Helena Faria opened the show.", gaz)
        assert [m.entity_id for m in resolved] == ["helena-faria"]
        assert registry.get("helena-faria").canonical_name == "Helena Faria"

    def test_single_token_without_antecedent_unresolved(self):
        # Simulates a model-found surname with no dictionary entry and no
        # earlier full-name mention to attach to.
        from chronolens.ner import Mention

        _, views = article_views("Pereira spoke briefly.")
        mention = Mention(doc_id="d1", sentence_index=1, start=0, end=1,
                          surface="Pereira")
        registry = EntityRegistry()
        resolved = disambiguate([mention], views, registry, "d1", WHEN)
        assert resolved[0].entity_id is None
        assert not resolved[0].resolved
        assert len(registry) == 0

    def test_single_token_gazetteer_entry_resolves(self):
        gaz = parse_gazetteer("Pereira\n")
        resolved, registry = self.run("Pereira spoke briefly.", gaz)
        assert [m.entity_id for m in resolved] == ["pereira"]
        assert registry.get("pereira").canonical_name == "Pereira"

    def test_job_descriptor_captured(self):
        gaz = parse_gazetteer("Ana Silva\n")
        resolved, registry = self.run(
            "Ana Silva, opposition leader, faces an inquiry.", gaz
        )
        assert resolved[0].job_descriptor == "opposition leader"
        assert registry.get("ana-silva").professions == {"opposition leader": 1}

    def test_descriptor_with_overlapping_mention_skipped(self):
        gaz = parse_gazetteer("Ana Silva\nRui Alves\n")
        resolved, registry = self.run(
            "Ana Silva, Rui Alves and others met.", gaz
        )
        by_id = {m.entity_id: m for m in resolved}
        assert by_id["ana-silva"].job_descriptor == ""
        assert registry.get("ana-silva").professions == {}

    def test_descriptor_longer_than_six_tokens_skipped(self):
        gaz = parse_gazetteer("Ana Silva\n")
        resolved, registry = self.run(
            "Ana Silva, one two three four five six seven, spoke.", gaz
        )
        assert resolved[0].job_descriptor == ""

    def test_professions_counted_once_per_document(self):
        gaz = parse_gazetteer("Ana Silva\n")
        registry = EntityRegistry()
        body = "Ana Silva, opposition leader, spoke."
        self.run(body, gaz, registry=registry, doc_id="d1")
        self.run(body, gaz, registry=registry, doc_id="d1")
        assert registry.get("ana-silva").professions == {"opposition leader": 1}
        self.run(body, gaz, registry=registry, doc_id="d2")
        assert registry.get("ana-silva").professions == {"opposition leader": 2}

    def test_mentions_returned_in_document_order(self):
        gaz = parse_gazetteer("Ana Silva\nRui Alves\n")
        resolved, _ = self.run(
            "Rui Alves met Ana Silva. Ana Silva left first.", gaz,
            title="Ana Silva and Rui Alves",
        )
        order = [(m.sentence_index, m.start, m.entity_id) for m in resolved]
        assert order == sorted(order)
        assert order[0][0] == 0
