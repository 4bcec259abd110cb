"""k-nearest-neighbour classification by cosine similarity with unit votes."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Optional, Sequence

import numpy as np

from .errors import ConfigError, DegenerateModelError, DimensionError, ModelFormatError
from .prediction import Prediction, argmax_prediction
from .textproc import ProcessedDocument, check_fingerprint, common_fingerprint
from .vectorize import TermWeights, Vocabulary, document_frequency, idf_table, term_counts

KNN_HEADER = "mushannif-knn v1"
WEIGHTINGS = ("tf", "tfidf")


def cosine_similarity(u, v) -> float:
    """Cosine of two weight vectors; 0 when either has zero norm."""
    u = np.asarray(getattr(u, "weights", u), dtype=np.float64)
    v = np.asarray(getattr(v, "weights", v), dtype=np.float64)
    if u.shape != v.shape:
        raise DimensionError(f"vector lengths differ: {u.shape[0]} vs {v.shape[0]}")
    nu = math.sqrt(float(np.dot(u, u)))
    nv = math.sqrt(float(np.dot(v, v)))
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return float(np.dot(u, v)) / (nu * nv)


@dataclass(frozen=True)
class Neighbor:
    doc_id: str
    label: str
    similarity: float


@dataclass
class KnnModel:
    doc_ids: list
    labels: list
    matrix: np.ndarray
    vocabulary: Vocabulary
    weighting: str = "tfidf"
    idf: Optional[np.ndarray] = None
    fingerprint: Optional[str] = None

    def __post_init__(self):
        if self.weighting not in WEIGHTINGS:
            raise ConfigError(f"weighting must be one of {WEIGHTINGS}, got {self.weighting!r}")
        if self.matrix.shape != (len(self.doc_ids), len(self.vocabulary)):
            raise DimensionError(f"matrix shape {self.matrix.shape} does not match documents x vocabulary")
        if self.weighting == "tfidf" and self.idf is None:
            raise ConfigError("tfidf weighting needs an idf table")
        norms = np.sqrt(np.einsum("ij,ij->i", self.matrix, self.matrix))
        self._norms = norms

    def __len__(self):
        return len(self.doc_ids)

    @property
    def classes(self) -> list[str]:
        return sorted(set(self.labels))

    @property
    def training_vectors(self) -> list[tuple[str, str, TermWeights]]:
        return [(i, lab, TermWeights(i, row)) for i, lab, row in zip(self.doc_ids, self.labels, self.matrix)]

    def vectorize(self, doc: ProcessedDocument) -> TermWeights:
        w = term_counts(doc, self.vocabulary)
        if self.weighting == "tfidf":
            w = w * self.idf
        return TermWeights(doc.source_id, w)


def train_knn(
    train: Mapping[str, Sequence[ProcessedDocument]], weighting: str = "tfidf", fingerprint: Optional[str] = None
) -> KnnModel:
    docs, labels = [], []
    for label in sorted(train):
        for doc in train[label]:
            docs.append(doc)
            labels.append(label)
    if not docs:
        raise DegenerateModelError("no training documents")
    order = sorted(range(len(docs)), key=lambda i: docs[i].source_id)
    docs = [docs[i] for i in order]
    labels = [labels[i] for i in order]
    vocab = Vocabulary.from_documents(docs)
    matrix = np.vstack([term_counts(d, vocab) for d in docs]) if len(vocab) else np.zeros((len(docs), 0))
    idf = None
    if weighting == "tfidf":
        idf = idf_table(document_frequency(docs, vocab), len(docs))
        matrix = matrix * idf
    if fingerprint is None:
        fingerprint = common_fingerprint(docs)
    return KnnModel([d.source_id for d in docs], labels, matrix, vocab, weighting, idf, fingerprint)


def _similarities(model: KnnModel, query: np.ndarray) -> list[float]:
    qn = math.sqrt(float(np.dot(query, query)))
    dots = model.matrix @ query
    sims = []
    for dot, norm in zip(dots, model._norms):
        sims.append(0.0 if qn == 0.0 or norm == 0.0 else float(dot) / (float(norm) * qn))
    return sims


# Similarities this close count as equal: the same cosine reached through
# differently ordered float sums must not depend on rounding.
SIMILARITY_TIE = 1e-12


def _rank(sims: Sequence[float], doc_ids: Sequence[str]) -> list[int]:
    """Indices by descending similarity; near-equal runs are ordered by doc id."""
    order = sorted(range(len(sims)), key=lambda i: -sims[i])
    ranked = []
    start = 0
    while start < len(order):
        anchor = sims[order[start]]
        end = start + 1
        while end < len(order) and anchor - sims[order[end]] <= SIMILARITY_TIE:
            end += 1
        ranked.extend(sorted(order[start:end], key=lambda i: doc_ids[i]))
        start = end
    return ranked


def nearest_neighbors(model: KnnModel, doc: ProcessedDocument, k: int) -> list[Neighbor]:
    """The ``k`` most similar training documents; equal similarity falls back to doc id order."""
    if not 1 <= k <= len(model):
        raise ConfigError(f"k must be between 1 and {len(model)}, got {k}")
    check_fingerprint(model.fingerprint, doc)
    sims = _similarities(model, model.vectorize(doc).weights)
    order = _rank(sims, model.doc_ids)
    return [Neighbor(model.doc_ids[i], model.labels[i], sims[i]) for i in order[:k]]


def classify_knn(model: KnnModel, doc: ProcessedDocument, k: int = 5) -> Prediction:
    neighbors = nearest_neighbors(model, doc, k)
    votes = {c: 0 for c in model.classes}
    for nb in neighbors:
        votes[nb.label] += 1
    return argmax_prediction(votes, neighbors=tuple(neighbors))


def _fmt(x: float) -> str:
    return repr(float(x))


def save_knn(model: KnnModel, path) -> None:
    lines = [
        KNN_HEADER,
        f"fingerprint {model.fingerprint or ''}",
        f"weighting {model.weighting}",
        f"vocabulary {len(model.vocabulary)}",
        *model.vocabulary.terms,
    ]
    if model.idf is not None:
        lines.append(f"idf {len(model.idf)}")
        lines.extend(_fmt(x) for x in model.idf)
    for doc_id, label, row in zip(model.doc_ids, model.labels, model.matrix):
        pairs = " ".join(f"{j}:{_fmt(row[j])}" for j in np.flatnonzero(row))
        lines.append(f"vector\t{doc_id}\t{label}\t{pairs}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_knn(path) -> KnnModel:
    path = Path(path)
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines or lines[0] != KNN_HEADER:
        raise ModelFormatError(f"{path}: not a {KNN_HEADER} model file")
    try:
        pos = 1

        def keyed(key):
            nonlocal pos
            name, _, value = lines[pos].partition(" ")
            if name != key:
                raise ValueError(f"line {pos + 1}: expected {key!r}")
            pos += 1
            return value

        fp = keyed("fingerprint")
        weighting = keyed("weighting")
        n_terms = int(keyed("vocabulary"))
        vocab = Vocabulary(lines[pos:pos + n_terms])
        if len(vocab) != n_terms:
            raise ValueError("vocabulary block has duplicate terms")
        pos += n_terms
        idf = None
        if lines[pos].startswith("idf "):
            n_idf = int(keyed("idf"))
            idf = np.array([float(x) for x in lines[pos:pos + n_idf]], dtype=np.float64)
            pos += n_idf
        doc_ids, labels, rows = [], [], []
        for line in lines[pos:]:
            if not line:
                continue
            tag, doc_id, label, pairs = line.split("\t")
            if tag != "vector":
                raise ValueError(f"unexpected line {line!r}")
            row = np.zeros(n_terms, dtype=np.float64)
            for pair in pairs.split():
                j, _, w = pair.partition(":")
                row[int(j)] = float(w)
            doc_ids.append(doc_id)
            labels.append(label)
            rows.append(row)
        matrix = np.vstack(rows) if rows else np.zeros((0, n_terms))
        return KnnModel(doc_ids, labels, matrix, vocab, weighting, idf, fp or None)
    except (ValueError, IndexError) as exc:
        raise ModelFormatError(f"{path}: {exc}") from exc
