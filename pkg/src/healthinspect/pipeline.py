"""Cross-validated comparison of the seven classifier/feature-set rows.

Every training-side statistic (vocabulary, idf, top-term selection, topic
model, SMOTE points, classifier) is fitted on the training indices of a
fold only; held-out documents are transformed with those statistics.
"""

from __future__ import annotations

import dataclasses
import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from . import dtm as dtm_mod
from .dtm import DocTermMatrix, Scheme, Vocabulary, build_dtm, project
from .evaluation import ConfusionMatrix, Metrics, MetricsSummary, metrics, stratified_kfold, summarize
from .ingest import Label, LabeledDocument
from .lda import LdaConfig, TopicModel, fit_lda, infer_thetas, top_words
from .nb import predict_nb_batch, train_nb
from .smote import SmoteConfig, smote_oversample
from .svm import FeatureSpec, SvmConfig, assemble_features, predict_svm_batch, train_svm
from .textprep import preprocess

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Corpus:
    doc_ids: tuple[str, ...]
    tokens: tuple[tuple[str, ...], ...]
    labels: tuple[Label, ...]

    def __post_init__(self):
        if not len(self.doc_ids) == len(self.tokens) == len(self.labels):
            raise ValueError("corpus fields differ in length")
        if len(set(self.doc_ids)) != len(self.doc_ids):
            raise ValueError("doc ids must be unique")

    def __len__(self) -> int:
        return len(self.doc_ids)

    @classmethod
    def from_documents(cls, docs: Sequence[LabeledDocument], stopwords) -> "Corpus":
        return cls(
            tuple(d.doc_id for d in docs),
            tuple(tuple(preprocess(d.text, stopwords)) for d in docs),
            tuple(d.label for d in docs),
        )


@dataclass(frozen=True)
class Method:
    key: str
    title: str
    classifier: str  # "nb" or "svm"
    keywords: str | None  # "all", "top" or None
    topics: bool

    def feature_spec(self, settings: "PipelineSettings") -> FeatureSpec:
        n = None
        if self.keywords == "top":
            n = settings.n_top_nb if self.classifier == "nb" else settings.n_top_svm
        return FeatureSpec(self.keywords is not None, n, self.topics)


METHODS: dict[str, Method] = {
    m.key: m for m in (
        Method("nb_all", "NB, all keywords", "nb", "all", False),
        Method("nb_top", "NB, top keywords", "nb", "top", False),
        Method("svm_all", "SVM, all keywords", "svm", "all", False),
        Method("svm_top", "SVM, top keywords", "svm", "top", False),
        Method("svm_all_topics", "SVM, all keywords + topics", "svm", "all", True),
        Method("svm_topics", "SVM, topics", "svm", None, True),
        Method("svm_top_topics", "SVM, top keywords + topics", "svm", "top", True),
    )
}


@dataclass(frozen=True)
class PipelineSettings:
    n_top_nb: int = 300
    n_top_svm: int = 200
    nb_smoothing: float = 1.0
    lda: LdaConfig = LdaConfig()
    smote: SmoteConfig = SmoteConfig()
    svm: SvmConfig = SvmConfig()
    folds: int = 10
    seed: int = 0
    positive: Label = Label.ACTION


@dataclass
class LeakageAudit:
    """Record of which documents fed each training-side statistic."""

    records: list[tuple[int, str, str, frozenset[str]]] = field(default_factory=list)
    held_out: dict[int, frozenset[str]] = field(default_factory=dict)

    def hold_out(self, fold: int, doc_ids) -> None:
        self.held_out[fold] = frozenset(doc_ids)

    def record(self, fold: int, method: str, stage: str, doc_ids) -> None:
        self.records.append((fold, method, stage, frozenset(doc_ids)))

    def violations(self) -> list[tuple[int, str, str, frozenset[str]]]:
        out = []
        for fold, method, stage, ids in self.records:
            leaked = ids & self.held_out.get(fold, frozenset())
            if leaked:
                out.append((fold, method, stage, leaked))
        return out


@dataclass(frozen=True)
class FoldResult:
    fold: int
    method: str
    confusion: ConfusionMatrix
    metrics: Metrics


@dataclass(frozen=True)
class CrossValidation:
    summaries: dict[str, MetricsSummary]
    folds: list[FoldResult]


def stage_seed(seed: int, *parts: int) -> int:
    """Derive an independent 63-bit seed for one stage of one fold."""
    return int(np.random.SeedSequence([seed, *parts]).generate_state(2, np.uint64)[0] >> np.uint64(1))


_STAGE_LDA, _STAGE_FOLDIN, _STAGE_SMOTE, _STAGE_SVM, _STAGE_REPORT = range(5)


def _tf_onto(tokens: Sequence[Sequence[str]], vocabulary: Vocabulary) -> DocTermMatrix:
    """Tf rows over each document's full length, projected onto ``vocabulary``."""
    own = build_dtm(tokens, vocabulary=Vocabulary.from_tokens(tokens))
    return project(dtm_mod.weight_tf(own), vocabulary)


def _scale(m: DocTermMatrix, weights: np.ndarray, scheme: Scheme) -> DocTermMatrix:
    return DocTermMatrix(sp.csr_matrix(m.matrix @ sp.diags(weights)), m.vocabulary, scheme)


class _Fold:
    """Shared per-fold statistics, computed lazily from training rows only."""

    def __init__(self, corpus: Corpus, fold: int, train, test, settings, audit):
        self.corpus = corpus
        self.fold = fold
        self.train = train
        self.test = test
        self.settings = settings
        self.audit = audit
        self.train_ids = [corpus.doc_ids[i] for i in train]
        self.train_tokens = [corpus.tokens[i] for i in train]
        self.test_tokens = [corpus.tokens[i] for i in test]
        self.train_labels = [corpus.labels[i] for i in train]
        self.test_labels = [corpus.labels[i] for i in test]

        self.counts = build_dtm(self.train_tokens)
        self.idf = dtm_mod.compute_idf(self.counts)
        self.train_tf = dtm_mod.weight_tf(self.counts)
        self.train_tfidf = dtm_mod.weight_tfidf(self.counts, self.idf)
        self.test_tf = _tf_onto(self.test_tokens, self.counts.vocabulary)
        self.test_tfidf = _scale(self.test_tf, self.idf, Scheme.TFIDF)
        self._top: dict[int, Vocabulary] = {}
        self._topics = None
        if audit is not None:
            audit.hold_out(fold, [corpus.doc_ids[i] for i in test])

    def top_vocabulary(self, n: int, method: str) -> Vocabulary:
        if n not in self._top:
            self._top[n] = dtm_mod.select_top_terms(self.train_tfidf, n)
        self._record(method, "top_terms", self.train_ids)
        return self._top[n]

    def topics(self, method: str) -> tuple[np.ndarray, np.ndarray]:
        if self._topics is None:
            s = self.settings
            cfg = dataclasses.replace(s.lda, seed=stage_seed(s.seed, self.fold, _STAGE_LDA))
            model = fit_lda(self.counts, cfg)
            test_counts = project(
                build_dtm(self.test_tokens, vocabulary=self.counts.vocabulary),
                model.vocabulary,
            )
            test_theta = infer_thetas(model, test_counts, stage_seed(s.seed, self.fold, _STAGE_FOLDIN))
            self._topics = (model.theta(), test_theta)
        self._record(method, "lda", self.train_ids)
        return self._topics

    def _record(self, method: str, stage: str, ids) -> None:
        if self.audit is not None:
            self.audit.record(self.fold, method, stage, ids)

    def run(self, method: Method) -> list:
        s = self.settings
        self._record(method.key, "vocabulary", self.train_ids)
        self._record(method.key, "idf", self.train_ids)
        spec = method.feature_spec(s)

        if method.classifier == "nb":
            x_train, x_test = self.train_tfidf, self.test_tfidf
            if spec.keyword_n is not None:
                vocab = self.top_vocabulary(spec.keyword_n, method.key)
                x_train, x_test = project(x_train, vocab), project(x_test, vocab)
            model = train_nb(x_train, self.train_labels, s.nb_smoothing)
            self._record(method.key, "classifier", self.train_ids)
            return predict_nb_batch(model, x_test)

        kw_train = kw_test = th_train = th_test = None
        if spec.use_keywords:
            kw_train, kw_test = self.train_tf, self.test_tf
            if spec.keyword_n is not None:
                vocab = self.top_vocabulary(spec.keyword_n, method.key)
                kw_train, kw_test = project(kw_train, vocab), project(kw_test, vocab)
            kw_train, kw_test = kw_train.matrix, kw_test.matrix
        if spec.use_topics:
            th_train, th_test = self.topics(method.key)
        x_train = assemble_features(kw_train, th_train, spec)
        x_test = assemble_features(kw_test, th_test, spec)

        smote_cfg = dataclasses.replace(s.smote, seed=stage_seed(s.seed, self.fold, _STAGE_SMOTE))
        res = smote_oversample(x_train, self.train_labels, smote_cfg)
        parents = {self.train_ids[i] for i in res.pairs.ravel()}
        self._record(method.key, "smote", parents)
        ys = [lab.sign for lab in res.labels]
        svm_cfg = dataclasses.replace(s.svm, seed=stage_seed(s.seed, self.fold, _STAGE_SVM))
        model = train_svm(res.features, ys, svm_cfg)
        self._record(method.key, "classifier", set(self.train_ids) | parents)
        signs = predict_svm_batch(model, x_test)
        return [Label.ACTION if v > 0 else Label.NO_ACTION for v in signs]


def cross_validate_methods(methods: Sequence[str], corpus: Corpus,
                           settings: PipelineSettings = PipelineSettings(),
                           audit: LeakageAudit | None = None) -> CrossValidation:
    """Run several method rows over the same folds, sharing per-fold statistics."""
    if not methods:
        raise ValueError("no methods requested")
    unknown = [m for m in methods if m not in METHODS]
    if unknown:
        raise ValueError(f"unknown method(s): {', '.join(unknown)}")
    folds = stratified_kfold(corpus.labels, settings.folds, settings.seed)
    all_idx = np.arange(len(corpus))
    results: list[FoldResult] = []
    for f, test in enumerate(folds):
        train = np.setdiff1d(all_idx, test)
        state = _Fold(corpus, f, train, test, settings, audit)
        for key in methods:
            predicted = state.run(METHODS[key])
            cm = ConfusionMatrix.from_predictions(state.test_labels, predicted, settings.positive)
            results.append(FoldResult(f, key, cm, metrics(cm)))
            log.info("fold %d %s accuracy %.4f", f, key, results[-1].metrics.accuracy)
    summaries = {
        key: summarize([r.metrics for r in results if r.method == key]) for key in methods
    }
    return CrossValidation(summaries, results)


def cross_validate(method: str, corpus: Corpus, settings: PipelineSettings = PipelineSettings(),
                   audit: LeakageAudit | None = None) -> MetricsSummary:
    return cross_validate_methods([method], corpus, settings, audit).summaries[method]


def fit_report_topics(corpus: Corpus, settings: PipelineSettings,
                      n_words: int = 5) -> tuple[TopicModel, list[list[str]]]:
    """Fit one topic model on the whole corpus for the topic table."""
    counts = build_dtm(corpus.tokens)
    cfg = dataclasses.replace(settings.lda, seed=stage_seed(settings.seed, _STAGE_REPORT))
    model = fit_lda(counts, cfg)
    return model, top_words(model, min(n_words, len(counts.vocabulary)))
