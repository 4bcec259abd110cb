"""Naive Bayes over incrementally built class files.

Each training document contributes its distinct tokens to its class file. A
token is appended only the first time the class sees it. Alongside the file we
keep how many documents carried each token. Likelihoods are smoothed
document-frequency estimates::

    P(w | c) = (df_c(w) + alpha) / (sum_v df_c(v) + alpha * |V|)

Scores are summed in log space.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Mapping, Optional, Sequence

from .errors import (
    ConfigError,
    DegenerateModelError,
    EmptyCollectionError,
    ModelFormatError,
)
from .prediction import Prediction, argmax_prediction
from .textproc import ProcessedDocument, check_fingerprint, common_fingerprint

NB_HEADER = "mushannif-nb v1"


@dataclass
class ClassProfile:
    """The class file for one label plus per-token document counts.

    ``token_counts`` is insertion-ordered: iterating it lists tokens in the
    order they first entered the class file.
    """

    label: str
    token_counts: Counter = field(default_factory=Counter)
    doc_count: int = 0

    @property
    def token_set(self) -> set[str]:
        return set(self.token_counts)

    @property
    def total(self) -> int:
        return sum(self.token_counts.values())

    def add(self, doc: ProcessedDocument) -> None:
        for tok in dict.fromkeys(doc.tokens):
            self.token_counts[tok] += 1
        self.doc_count += 1

    def class_file(self) -> list[str]:
        return list(self.token_counts)


def build_class_profile(docs: Sequence[ProcessedDocument], label: str) -> ClassProfile:
    if not docs:
        raise EmptyCollectionError(f"class {label!r} has no training documents")
    profile = ClassProfile(label)
    for doc in docs:
        profile.add(doc)
    return profile


@dataclass
class NBModel:
    profiles: dict
    alpha: float = 1.0
    fingerprint: Optional[str] = None

    def __post_init__(self):
        if self.alpha <= 0:
            raise ConfigError(f"alpha must be positive, got {self.alpha}")
        self.profiles = dict(sorted(self.profiles.items()))
        vocab = set()
        for p in self.profiles.values():
            vocab |= p.token_set
        self.vocabulary = frozenset(vocab)
        if not self.vocabulary:
            raise DegenerateModelError("training documents contain no tokens")
        self._cache_logs()

    def _cache_logs(self):
        n = self.total_docs
        v = len(self.vocabulary)
        self._log_prior = {c: math.log(p.doc_count / n) for c, p in self.profiles.items()}
        self._log_denom = {c: math.log(p.total + self.alpha * v) for c, p in self.profiles.items()}

    @property
    def classes(self) -> list[str]:
        return list(self.profiles)

    @property
    def total_docs(self) -> int:
        return sum(p.doc_count for p in self.profiles.values())

    def prior(self, label: str) -> float:
        return self.profiles[label].doc_count / self.total_docs

    def likelihood(self, token: str, label: str) -> float:
        p = self.profiles[label]
        return (p.token_counts.get(token, 0) + self.alpha) / (p.total + self.alpha * len(self.vocabulary))

    def log_likelihood(self, token: str, label: str) -> float:
        count = self.profiles[label].token_counts.get(token, 0)
        return math.log(count + self.alpha) - self._log_denom[label]


def train_nb(
    train: Mapping[str, Sequence[ProcessedDocument]], alpha: float = 1.0, fingerprint: Optional[str] = None
) -> NBModel:
    """Fit from documents grouped by class.

    ``fingerprint`` defaults to the one shared by the training documents.
    """
    if alpha <= 0:
        raise ConfigError(f"alpha must be positive, got {alpha}")
    if len(train) < 2:
        raise DegenerateModelError(f"need at least 2 classes to train, got {len(train)}")
    profiles = {label: build_class_profile(docs, label) for label, docs in train.items()}
    if fingerprint is None:
        fingerprint = common_fingerprint(d for docs in train.values() for d in docs)
    return NBModel(profiles, alpha, fingerprint)


# Log scores closer than this are re-ranked with exact rational products, so
# rounding in the log sums can never decide a tie.
_NEAR_TIE = 1e-9


def _exact_score(model: NBModel, label: str, known: Sequence[str]) -> Fraction:
    p = model.profiles[label]
    alpha = Fraction(model.alpha)
    denom = p.total + alpha * len(model.vocabulary)
    score = Fraction(p.doc_count, model.total_docs)
    for tok in known:
        score *= (p.token_counts.get(tok, 0) + alpha) / denom
    return score


def classify_nb(model: NBModel, doc: ProcessedDocument) -> Prediction:
    check_fingerprint(model.fingerprint, doc)
    known = [t for t in doc.tokens if t in model.vocabulary]
    scores = {}
    for label in model.profiles:
        scores[label] = model._log_prior[label] + math.fsum(model.log_likelihood(t, label) for t in known)
    best = max(scores.values())
    close = [c for c, s in scores.items() if best - s <= _NEAR_TIE * max(1.0, abs(best))]
    if len(close) > 1:
        exact = {c: _exact_score(model, c, known) for c in close}
        top = max(exact.values())
        below = math.nextafter(best, -math.inf)
        for c in close:
            scores[c] = best if exact[c] == top else min(scores[c], below)
    return argmax_prediction(scores)


def save_nb(model: NBModel, path) -> None:
    lines = [NB_HEADER, f"fingerprint {model.fingerprint or ''}", f"alpha {model.alpha!r}"]
    for label, profile in model.profiles.items():
        lines.append(f"[class {label} docs={profile.doc_count}]")
        lines.extend(f"{tok}\t{count}" for tok, count in profile.token_counts.items())
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_nb(path) -> NBModel:
    path = Path(path)
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines or lines[0] != NB_HEADER:
        raise ModelFormatError(f"{path}: not a {NB_HEADER} model file")
    try:
        fp_key, _, fp = lines[1].partition(" ")
        alpha_key, _, alpha = lines[2].partition(" ")
        if fp_key != "fingerprint" or alpha_key != "alpha":
            raise ValueError("expected fingerprint and alpha lines")
        profiles = {}
        current = None
        for lineno, line in enumerate(lines[3:], start=4):
            if not line:
                continue
            if line.startswith("[class ") and line.endswith("]"):
                name, _, docs = line[len("[class "):-1].rpartition(" docs=")
                current = ClassProfile(name, Counter(), int(docs))
                profiles[name] = current
            elif current is None:
                raise ValueError(f"line {lineno}: token outside a class section")
            else:
                tok, _, count = line.partition("\t")
                current.token_counts[tok] = int(count)
        return NBModel(profiles, float(alpha), fp or None)
    except (ValueError, IndexError) as exc:
        raise ModelFormatError(f"{path}: {exc}") from exc


def dump_class_files(model_or_profiles, out_dir) -> list[Path]:
    """Write one ``<class>.txt`` per class, one token per line, in insertion order."""
    profiles = getattr(model_or_profiles, "profiles", model_or_profiles)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for label, profile in profiles.items():
        target = out / f"{label}.txt"
        target.write_text("".join(f"{t}\n" for t in profile.class_file()), encoding="utf-8")
        written.append(target)
    return written
