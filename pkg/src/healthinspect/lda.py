"""Latent Dirichlet allocation fitted by collapsed Gibbs sampling.

The sampler and the fold-in routine for held-out documents run in the
kernels selected by :mod:`healthinspect.kernels`. Random draws are made
here, one uniform per token per sweep, so results do not depend on the
backend.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import kernels
from .dtm import DocTermMatrix, Scheme, Vocabulary, build_dtm, project

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class LdaConfig:
    k: int = 20
    alpha: float = 3.5  # 1 + 50/k at k = 20
    beta: float = 0.1
    sweeps: int = 1000
    infer_sweeps: int = 100
    seed: int = 0

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.alpha <= 0 or self.beta <= 0:
            raise ValueError("alpha and beta must be > 0")
        if self.sweeps < 1 or self.infer_sweeps < 0:
            raise ValueError("sweeps must be >= 1 and infer_sweeps >= 0")


@dataclass(frozen=True)
class TopicModel:
    phi: np.ndarray  # k x |vocab|
    doc_topic_counts: np.ndarray  # training docs x k
    vocabulary: Vocabulary
    config: LdaConfig
    assignments: np.ndarray = field(repr=False)

    def theta(self) -> np.ndarray:
        """Posterior topic proportions of the training documents."""
        return _theta(self.doc_topic_counts, self.config.alpha)


class InvariantError(AssertionError):
    """Raised when sampler count tables disagree with the assignments."""


def _theta(counts: np.ndarray, alpha: float) -> np.ndarray:
    k = counts.shape[1]
    lengths = counts.sum(axis=1, keepdims=True)
    return (counts + alpha) / (lengths + k * alpha)


def tokens_from_counts(m: DocTermMatrix) -> tuple[np.ndarray, np.ndarray]:
    """Expand an integer count matrix into (doc, word) arrays, one per token."""
    if m.scheme is not Scheme.COUNT:
        raise ValueError("LDA samples integer occurrences; pass the count matrix")
    csr = m.matrix
    counts = csr.data
    rounded = np.rint(counts)
    if np.any(rounded != counts) or np.any(counts < 0):
        raise ValueError("count matrix has non-integer entries")
    reps = rounded.astype(np.int64)
    rows = np.repeat(np.arange(csr.shape[0], dtype=np.int64), np.diff(csr.indptr))
    docs = np.repeat(rows, reps)
    words = np.repeat(csr.indices.astype(np.int64), reps)
    return docs, words


def check_counts(docs, words, z, ndk, nkw, nk) -> None:
    """Recompute the count tables from ``z`` and compare."""
    k = nk.shape[0]
    exp_ndk = np.zeros_like(ndk)
    np.add.at(exp_ndk, (docs, z), 1)
    exp_nkw = np.zeros_like(nkw)
    np.add.at(exp_nkw, (z, words), 1)
    exp_nk = np.bincount(z, minlength=k)
    if int(nk.sum()) != len(z):
        raise InvariantError(f"topic totals sum to {int(nk.sum())}, expected {len(z)}")
    if not (np.array_equal(exp_ndk, ndk) and np.array_equal(exp_nkw, nkw)
            and np.array_equal(exp_nk, nk)):
        raise InvariantError("count tables inconsistent with topic assignments")


def fit_lda(m: DocTermMatrix, cfg: LdaConfig = LdaConfig(), *,
            check_invariants: bool = False, backend: str | None = None) -> TopicModel:
    """Fit LDA on a count matrix.

    With ``check_invariants`` the count tables are recomputed from the
    assignments after every sweep and an :class:`InvariantError` is raised
    on any mismatch.
    """
    docs, words = tokens_from_counts(m)
    if len(docs) == 0:
        raise ValueError("corpus has no tokens")
    kern = kernels.get_backend(backend)
    rng = np.random.default_rng(cfg.seed)
    n_docs, n_words, k = m.n_docs, len(m.vocabulary), cfg.k

    z = rng.integers(0, k, size=len(docs), dtype=np.int64)
    ndk = np.zeros((n_docs, k), dtype=np.int64)
    nkw = np.zeros((k, n_words), dtype=np.int64)
    np.add.at(ndk, (docs, z), 1)
    np.add.at(nkw, (z, words), 1)
    nk = nkw.sum(axis=1)
    scratch = np.zeros(k)

    for sweep in range(cfg.sweeps):
        uniforms = rng.random(len(z))
        kern.gibbs_sweep(docs, words, z, ndk, nkw, nk, cfg.alpha, cfg.beta, uniforms, scratch)
        if check_invariants:
            check_counts(docs, words, z, ndk, nkw, nk)

    phi = (nkw + cfg.beta) / (nk[:, None] + n_words * cfg.beta)
    log.debug("fitted LDA: %d docs, %d tokens, k=%d", n_docs, len(z), k)
    return TopicModel(phi, ndk, m.vocabulary, cfg, z)


def infer_thetas(model: TopicModel, m: DocTermMatrix, seed: int | None = None, *,
                 backend: str | None = None) -> np.ndarray:
    """Fold-in topic proportions for the rows of a count matrix.

    ``m`` is projected onto the model vocabulary first if needed; unseen
    terms are dropped. Empty rows get the uniform prior mean.
    """
    cfg = model.config
    if m.vocabulary != model.vocabulary:
        m = project(m, model.vocabulary)
    docs, words = tokens_from_counts(m)
    kern = kernels.get_backend(backend)
    rng = np.random.default_rng(cfg.seed if seed is None else seed)
    k = cfg.k

    z = rng.integers(0, k, size=len(docs), dtype=np.int64)
    ndk = np.zeros((m.n_docs, k), dtype=np.int64)
    np.add.at(ndk, (docs, z), 1)
    phi = np.ascontiguousarray(model.phi)
    scratch = np.zeros(k)
    if len(z):
        for _ in range(cfg.infer_sweeps):
            kern.foldin_sweep(docs, words, z, ndk, phi, cfg.alpha, rng.random(len(z)), scratch)
    return _theta(ndk, cfg.alpha)


def infer_theta(model: TopicModel, doc: Sequence[str], seed: int | None = None, *,
                backend: str | None = None) -> np.ndarray:
    """Topic proportions for one token list; out-of-vocabulary tokens are dropped."""
    m = build_dtm([list(doc)], vocabulary=model.vocabulary)
    return infer_thetas(model, m, seed, backend=backend)[0]


def top_words(model: TopicModel, n: int) -> list[list[str]]:
    """The ``n`` most probable terms of each topic, ties broken by term."""
    terms = model.vocabulary.terms
    if not 1 <= n <= len(terms):
        raise ValueError(f"n must be in 1..{len(terms)}")
    out = []
    for row in model.phi:
        order = sorted(range(len(terms)), key=lambda j: (-row[j], terms[j]))
        out.append([terms[j] for j in order[:n]])
    return out


def format_topics(words: list[list[str]]) -> str:
    return "".join(f"{i}: {','.join(ws)}\n" for i, ws in enumerate(words))
