"""Multinomial naive Bayes over (possibly fractional) document-term rows."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from .dtm import DocTermMatrix, Vocabulary

FORMAT_VERSION = 1


@dataclass(frozen=True)
class NbModel:
    """Class log priors and per-class word log likelihoods.

    ``labels`` is sorted, and row ``i`` of ``word_log_likelihood`` belongs
    to ``labels[i]``.
    """

    labels: tuple
    class_log_prior: np.ndarray
    word_log_likelihood: np.ndarray
    vocabulary: Vocabulary

    def scores(self, m) -> np.ndarray:
        """Unnormalised log posteriors, one column per label."""
        x = m.matrix if isinstance(m, DocTermMatrix) else m
        if sp.issparse(x):
            joint = x @ self.word_log_likelihood.T
        else:
            joint = np.atleast_2d(np.asarray(x, dtype=np.float64)) @ self.word_log_likelihood.T
        return np.asarray(joint) + self.class_log_prior


def train_nb(m: DocTermMatrix, labels: Sequence, smoothing: float = 1.0) -> NbModel:
    if m.n_docs != len(labels):
        raise ValueError("matrix rows and labels differ in length")
    if smoothing <= 0:
        raise ValueError("smoothing must be > 0")
    classes = tuple(sorted(set(labels), key=str))
    if len(classes) < 2:
        raise ValueError("both classes must be present to train")

    y = np.array([classes.index(lab) for lab in labels])
    counts = np.bincount(y, minlength=len(classes)).astype(np.float64)
    log_prior = np.log(counts / counts.sum())

    onehot = sp.csr_matrix(
        (np.ones(len(y)), (y, np.arange(len(y)))), shape=(len(classes), len(y))
    )
    mass = np.asarray((onehot @ m.matrix).todense()) + smoothing
    log_lik = np.log(mass) - np.log(mass.sum(axis=1, keepdims=True))
    return NbModel(classes, log_prior, log_lik, m.vocabulary)


def _argmax_first(scores: np.ndarray) -> np.ndarray:
    # np.argmax returns the first maximum, i.e. the lexicographically
    # smallest label because labels are sorted
    return np.argmax(scores, axis=1)


def predict_nb(model: NbModel, row):
    """Predict one row (sparse, dense or a 1-row DocTermMatrix)."""
    return model.labels[int(_argmax_first(model.scores(row))[0])]


def predict_nb_batch(model: NbModel, m) -> list:
    return [model.labels[i] for i in _argmax_first(model.scores(m))]


def dump_model(model: NbModel) -> str:
    lines = [
        f"format=nb/{FORMAT_VERSION}",
        "labels=" + ",".join(str(lab) for lab in model.labels),
        f"n_terms={len(model.vocabulary)}",
    ]
    for lab, p in zip(model.labels, model.class_log_prior):
        lines.append(f"prior.{lab}={float(p)!r}")
    for i, lab in enumerate(model.labels):
        for term, v in zip(model.vocabulary.terms, model.word_log_likelihood[i]):
            lines.append(f"loglik.{lab}.{term}={float(v)!r}")
    return "\n".join(lines) + "\n"


def load_model(text: str, label_type=str) -> NbModel:
    fields = {}
    order = []
    for line in text.splitlines():
        if not line.strip():
            continue
        key, _, value = line.partition("=")
        fields[key] = value
        order.append(key)
    if fields.get("format") != f"nb/{FORMAT_VERSION}":
        raise ValueError(f"unsupported model format {fields.get('format')!r}")
    names = fields["labels"].split(",")
    labels = tuple(label_type(n) for n in names)
    first = f"loglik.{names[0]}."
    terms = tuple(k[len(first):] for k in order if k.startswith(first))
    if len(terms) != int(fields["n_terms"]):
        raise ValueError("term count mismatch in model dump")
    prior = np.array([float(fields[f"prior.{n}"]) for n in names])
    loglik = np.array([[float(fields[f"loglik.{n}.{t}"]) for t in terms] for n in names])
    return NbModel(labels, prior, loglik, Vocabulary(terms))
