"""Term weighting and chi-squared feature selection.

TF-IDF uses base-10 logarithms: a term seen once in one of two documents
weighs log10(2) ~= 0.301.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DegenerateMarginError, EmptyCollectionError, UnknownClassError
from .textproc import ProcessedDocument


class Vocabulary:
    """Sorted term axis shared by all weight vectors of one model."""

    __slots__ = ("terms", "index")

    def __init__(self, terms: Iterable[str]):
        self.terms = tuple(sorted(set(terms)))
        self.index = {t: i for i, t in enumerate(self.terms)}

    @classmethod
    def from_documents(cls, docs: Iterable[ProcessedDocument]) -> "Vocabulary":
        return cls(t for d in docs for t in d.tokens)

    def __len__(self):
        return len(self.terms)

    def __contains__(self, term):
        return term in self.index

    def __iter__(self):
        return iter(self.terms)

    def __eq__(self, other):
        return isinstance(other, Vocabulary) and self.terms == other.terms

    def __repr__(self):
        return f"Vocabulary({len(self.terms)} terms)"


@dataclass(frozen=True, eq=False)
class TermWeights:
    doc_id: str
    weights: np.ndarray

    def __len__(self):
        return len(self.weights)


def term_counts(doc: ProcessedDocument, vocab: Vocabulary) -> np.ndarray:
    counts = np.zeros(len(vocab), dtype=np.float64)
    for tok in doc.tokens:
        j = vocab.index.get(tok)
        if j is not None:
            counts[j] += 1
    return counts


def term_frequency(doc: ProcessedDocument, vocab: Vocabulary) -> TermWeights:
    return TermWeights(doc.source_id, term_counts(doc, vocab))


def document_frequency(docs: Sequence[ProcessedDocument], vocab: Vocabulary) -> np.ndarray:
    df = np.zeros(len(vocab), dtype=np.int64)
    for doc in docs:
        for tok in set(doc.tokens):
            j = vocab.index.get(tok)
            if j is not None:
                df[j] += 1
    return df


def idf_table(doc_freq: np.ndarray, n_docs: int) -> np.ndarray:
    """log10(N / df) per term; zero where df is zero."""
    idf = np.zeros(len(doc_freq), dtype=np.float64)
    seen = doc_freq > 0
    idf[seen] = np.log10(n_docs / doc_freq[seen])
    return idf


def tf_idf(docs: Sequence[ProcessedDocument], vocab: Vocabulary) -> list[TermWeights]:
    if not docs:
        raise EmptyCollectionError("tf_idf needs at least one document")
    idf = idf_table(document_frequency(docs, vocab), len(docs))
    return [TermWeights(d.source_id, term_counts(d, vocab) * idf) for d in docs]


@dataclass(frozen=True)
class ContingencyTable:
    """Document counts for a term t against a class c.

    ``a``: in c, contains t. ``b``: outside c, contains t.
    ``c``: in c, lacks t.    ``d``: outside c, lacks t.
    """

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if min(self.a, self.b, self.c, self.d) < 0:
            raise ValueError(f"negative count in {self}")

    @property
    def n(self) -> int:
        return self.a + self.b + self.c + self.d


def chi_squared_exact(table: ContingencyTable) -> Fraction:
    a, b, c, d = table.a, table.b, table.c, table.d
    denom = (a + c) * (b + d) * (a + b) * (c + d)
    if denom == 0:
        raise DegenerateMarginError(f"chi-squared undefined for {table}: zero marginal")
    return Fraction(table.n * (a * d - c * b) ** 2, denom)


def chi_squared(table: ContingencyTable) -> float:
    return float(chi_squared_exact(table))


def contingency_tables(corpus: Mapping[str, Sequence[ProcessedDocument]], label: str) -> dict[str, ContingencyTable]:
    """Presence-based contingency table of every term against ``label``."""
    if label not in corpus:
        raise UnknownClassError(f"unknown class {label!r}")
    in_class: Counter = Counter()
    outside: Counter = Counter()
    n_in = n_out = 0
    for cls, docs in corpus.items():
        target = in_class if cls == label else outside
        for doc in docs:
            target.update(set(doc.tokens))
        if cls == label:
            n_in += len(docs)
        else:
            n_out += len(docs)
    terms = sorted(set(in_class) | set(outside))
    return {
        t: ContingencyTable(in_class[t], outside[t], n_in - in_class[t], n_out - outside[t])
        for t in terms
    }


def select_top_terms(
    corpus: Mapping[str, Sequence[ProcessedDocument]], label: str, n: int = 30
) -> list[tuple[str, float]]:
    """The ``n`` terms most dependent on ``label`` by chi-squared.

    Ordered by descending score, ties by term. Terms whose table has a zero
    marginal are left out.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    scored = []
    for term, table in contingency_tables(corpus, label).items():
        try:
            scored.append((chi_squared_exact(table), term))
        except DegenerateMarginError:
            continue
    scored.sort(key=lambda st: (-st[0], st[1]))
    return [(term, float(score)) for score, term in scored[:n]]
