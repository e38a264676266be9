"""Sparse document-term matrices with count, tf and tf-idf weighting."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp


class Scheme(str, enum.Enum):
    COUNT = "count"
    TF = "tf"
    TFIDF = "tfidf"


@dataclass(frozen=True)
class Vocabulary:
    """Ordered unique terms with a term -> column lookup."""

    terms: tuple[str, ...]
    index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        index = {t: i for i, t in enumerate(self.terms)}
        if len(index) != len(self.terms):
            raise ValueError("vocabulary terms must be unique")
        object.__setattr__(self, "index", index)

    @classmethod
    def from_tokens(cls, docs: Iterable[Iterable[str]]) -> "Vocabulary":
        terms = set()
        for doc in docs:
            terms.update(doc)
        return cls(tuple(sorted(terms)))

    def __len__(self) -> int:
        return len(self.terms)

    def __contains__(self, term) -> bool:
        return term in self.index

    def __iter__(self):
        return iter(self.terms)


@dataclass(frozen=True)
class DocTermMatrix:
    """A CSR documents x terms matrix tagged with its weighting scheme."""

    matrix: sp.csr_matrix
    vocabulary: Vocabulary
    scheme: Scheme = Scheme.COUNT

    def __post_init__(self):
        if self.matrix.shape[1] != len(self.vocabulary):
            raise ValueError("matrix width does not match vocabulary size")

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape

    @property
    def n_docs(self) -> int:
        return self.matrix.shape[0]

    def toarray(self) -> np.ndarray:
        return self.matrix.toarray()

    def rows(self, indices) -> "DocTermMatrix":
        return DocTermMatrix(self.matrix[np.asarray(indices)], self.vocabulary, self.scheme)

    def column_sums(self) -> np.ndarray:
        """Exactly rounded column sums, independent of row order."""
        csc = sp.csc_matrix(self.matrix)
        return np.array([
            math.fsum(csc.data[csc.indptr[j]:csc.indptr[j + 1]]) for j in range(csc.shape[1])
        ])


def build_dtm(docs: Sequence[Sequence[str]], vocabulary: Vocabulary | None = None) -> DocTermMatrix:
    """Count matrix over ``docs``.

    The vocabulary is the lexicographically sorted union of all tokens
    unless one is given, in which case tokens outside it are ignored.
    """
    if vocabulary is None:
        vocabulary = Vocabulary.from_tokens(docs)
        if len(vocabulary) == 0:
            raise ValueError("all documents are empty; no vocabulary")
    index = vocabulary.index
    indptr = [0]
    indices: list[int] = []
    for doc in docs:
        indices.extend(index[t] for t in doc if t in index)
        indptr.append(len(indices))
    data = np.ones(len(indices), dtype=np.float64)
    m = sp.csr_matrix(
        (data, np.asarray(indices, dtype=np.int64), np.asarray(indptr, dtype=np.int64)),
        shape=(len(docs), len(vocabulary)),
    )
    m.sum_duplicates()  # also sorts indices
    return DocTermMatrix(m, vocabulary, Scheme.COUNT)


def _require(m: DocTermMatrix, scheme: Scheme):
    if m.scheme is not scheme:
        raise ValueError(f"expected a {scheme.value} matrix, got {m.scheme.value}")


def weight_tf(m: DocTermMatrix) -> DocTermMatrix:
    """Divide each count by its document's total term count."""
    _require(m, Scheme.COUNT)
    totals = np.asarray(m.matrix.sum(axis=1)).ravel()
    inv = np.divide(1.0, totals, out=np.zeros_like(totals), where=totals > 0)
    tf = sp.diags(inv) @ m.matrix
    return DocTermMatrix(sp.csr_matrix(tf), m.vocabulary, Scheme.TF)


def document_frequency(m: DocTermMatrix) -> np.ndarray:
    _require(m, Scheme.COUNT)
    return np.diff(sp.csc_matrix(m.matrix > 0).indptr).astype(np.float64)


def compute_idf(m: DocTermMatrix) -> np.ndarray:
    """Natural-log idf, ``ln(n_docs / df)``; terms with df = 0 get 0."""
    _require(m, Scheme.COUNT)
    if m.n_docs < 1:
        raise ValueError("idf needs at least one document")
    df = document_frequency(m)
    ratio = np.divide(m.n_docs, df, out=np.ones_like(df), where=df > 0)
    return np.log(ratio)


def weight_tfidf(m: DocTermMatrix, idf: np.ndarray | None = None) -> DocTermMatrix:
    """tf times idf.

    ``idf`` defaults to the statistics of ``m`` itself; pass training idf
    to weight held-out documents.
    """
    if idf is None:
        idf = compute_idf(m)
    tf = weight_tf(m).matrix
    out = sp.csr_matrix(tf @ sp.diags(np.asarray(idf, dtype=np.float64)))
    out.eliminate_zeros()
    return DocTermMatrix(out, m.vocabulary, Scheme.TFIDF)


def select_top_terms(m: DocTermMatrix, n: int) -> Vocabulary:
    """The ``n`` terms with the largest column sums, ties broken by term.

    The result is ordered by descending column sum.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if m.scheme is Scheme.COUNT:
        raise ValueError("top-term selection expects a weighted matrix")
    sums = m.column_sums()
    order = sorted(range(len(sums)), key=lambda j: (-sums[j], m.vocabulary.terms[j]))
    return Vocabulary(tuple(m.vocabulary.terms[j] for j in order[:n]))


def project(m: DocTermMatrix, vocabulary: Vocabulary) -> DocTermMatrix:
    """Reorder/filter columns to ``vocabulary``; unseen terms become zero columns."""
    src = m.vocabulary.index
    cols = [src.get(t, -1) for t in vocabulary.terms]
    present = [j for j, c in enumerate(cols) if c >= 0]
    n_rows = m.n_docs
    if present:
        picked = m.matrix[:, [cols[j] for j in present]]
        selector = sp.csr_matrix(
            (np.ones(len(present)), (np.arange(len(present)), present)),
            shape=(len(present), len(vocabulary)),
        )
        out = sp.csr_matrix(picked @ selector)
    else:
        out = sp.csr_matrix((n_rows, len(vocabulary)))
    out.sort_indices()
    return DocTermMatrix(out, vocabulary, m.scheme)


def dump_triplets(m: DocTermMatrix, doc_ids: Sequence[str], fh) -> None:
    """Write ``doc_id term weight`` lines, one per stored entry."""
    if len(doc_ids) != m.n_docs:
        raise ValueError("doc_ids length does not match matrix rows")
    coo = m.matrix.tocoo()
    order = np.lexsort((coo.col, coo.row))
    for r, c, v in zip(coo.row[order], coo.col[order], coo.data[order]):
        fh.write(f"{doc_ids[r]} {m.vocabulary.terms[c]} {float(v)!r}\n")
