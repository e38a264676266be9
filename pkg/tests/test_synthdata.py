import re

import pytest

from healthinspect.ingest import Label, link_and_label, load_inspections, load_links, load_reviews
from healthinspect.synthdata import (
    DEFAULT_CUES,
    DEFAULT_FILLER,
    DEFAULT_TOPICS,
    SynthConfig,
    generate_corpus,
    write_dataset,
)
from healthinspect.textprep import preprocess, stem


def words_of(doc):
    return re.findall(r"[a-z]+", doc.text.lower())


def test_exact_label_split():
    docs = generate_corpus(SynthConfig(n_docs=1200, action_fraction=0.5))
    assert sum(d.label is Label.ACTION for d in docs) == 600
    docs = generate_corpus(SynthConfig(n_docs=101, action_fraction=0.3))
    assert sum(d.label is Label.ACTION for d in docs) == 30


def test_no_cues_at_zero_strength():
    docs = generate_corpus(SynthConfig(n_docs=300, cue_strength=0.0))
    assert not any(set(words_of(d)) & set(DEFAULT_CUES) for d in docs)


def test_cues_only_in_action_docs():
    docs = generate_corpus(SynthConfig(n_docs=300, cue_strength=0.3))
    for d in docs:
        has_cue = bool(set(words_of(d)) & set(DEFAULT_CUES))
        if d.label is Label.NO_ACTION:
            assert not has_cue


def test_vocabulary_within_lexicons():
    allowed = set(DEFAULT_CUES) | set(DEFAULT_FILLER) | {w for t in DEFAULT_TOPICS for w in t}
    for d in generate_corpus(SynthConfig(n_docs=200, cue_strength=0.5)):
        assert set(words_of(d)) <= allowed


def test_lexicons_survive_preprocessing(stopwords):
    # distinct lexicons must not collapse onto one stem or vanish as stopwords
    lexicons = [*DEFAULT_TOPICS, DEFAULT_CUES, DEFAULT_FILLER]
    owner = {}
    for i, lex in enumerate(lexicons):
        for w in lex:
            assert preprocess(w, stopwords) == [stem(w)]
            assert owner.setdefault(stem(w), i) == i


def test_same_seed_same_corpus(tmp_path):
    cfg = SynthConfig(n_docs=50)
    a = write_dataset(generate_corpus(cfg), tmp_path / "a")
    b = write_dataset(generate_corpus(cfg), tmp_path / "b")
    for key in a:
        assert a[key].read_bytes() == b[key].read_bytes()
    other = generate_corpus(SynthConfig(n_docs=50, seed=8))
    assert [d.text for d in other] != [d.text for d in generate_corpus(cfg)]


def test_files_relabel_exactly(tmp_path):
    docs = generate_corpus(SynthConfig(n_docs=120, n_businesses=10))
    paths = write_dataset(docs, tmp_path)
    linked = link_and_label(
        load_reviews(paths["reviews"]),
        load_inspections(paths["inspections"]),
        load_links(paths["links"]),
        365,
    )
    assert linked.dropped == 0
    got = {d.doc_id: d.label for d in linked.documents}
    assert got == {d.doc_id: d.label for d in docs}


@pytest.mark.parametrize("bad", [
    dict(n_docs=5),
    dict(action_fraction=1.0),
    dict(cue_strength=1.5),
    dict(doc_length=(5, 2)),
    dict(topic_vocabs=(("a", "b"), ("b", "c"))),
    dict(cue_words=("food",)),
])
def test_config_validation(bad):
    with pytest.raises(ValueError):
        SynthConfig(**bad)
