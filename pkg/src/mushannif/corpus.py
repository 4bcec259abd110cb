"""Labeled document collections on disk and deterministic stratified splits.

A corpus lives in a directory with one subdirectory per class::

    root/
      politics/a.txt
      sports/b.txt

Every regular file inside a class directory is one UTF-8 document.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Optional

from .errors import (
    ConfigError,
    CorpusDecodeError,
    CorpusNotFoundError,
    EmptyCorpusError,
    StratificationError,
)

BOM = "\ufeff"


@dataclass(frozen=True)
class LabeledDocument:
    id: str
    text: str
    label: Optional[str] = None

    def __post_init__(self):
        if not self.id:
            raise ValueError("document id must be non-empty")


@dataclass(frozen=True)
class Corpus:
    documents: tuple[LabeledDocument, ...]
    classes: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "documents", tuple(self.documents))
        object.__setattr__(self, "classes", tuple(sorted(set(self.classes))))
        seen = set()
        known = set(self.classes)
        for doc in self.documents:
            if doc.id in seen:
                raise ValueError(f"duplicate document id {doc.id!r}")
            seen.add(doc.id)
            if doc.label is not None and doc.label not in known:
                raise ValueError(f"document {doc.id!r} has unknown label {doc.label!r}")

    def __len__(self):
        return len(self.documents)

    def __iter__(self):
        return iter(self.documents)

    @property
    def ids(self) -> list[str]:
        return [d.id for d in self.documents]

    def by_class(self) -> dict[str, list[LabeledDocument]]:
        groups: dict[str, list[LabeledDocument]] = {c: [] for c in self.classes}
        for doc in self.documents:
            if doc.label is not None:
                groups[doc.label].append(doc)
        return groups

    @classmethod
    def from_documents(cls, documents: Iterable[LabeledDocument], classes=None) -> "Corpus":
        docs = sorted(documents, key=lambda d: d.id)
        if classes is None:
            classes = {d.label for d in docs if d.label is not None}
        return cls(tuple(docs), tuple(classes))


@dataclass(frozen=True)
class SplitSpec:
    train_fraction: float = 0.4
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.train_fraction < 1:
            raise ConfigError(f"train_fraction must be in (0, 1), got {self.train_fraction}")
        if not 0 <= self.seed < 2**64:
            raise ConfigError(f"seed must be a 64-bit unsigned integer, got {self.seed}")

    @property
    def fraction(self) -> Fraction:
        # 0.4 should mean exactly 2/5, not its binary approximation
        return Fraction(self.train_fraction).limit_denominator(10**6)


def read_text(path) -> str:
    """Strictly decode a UTF-8 file, dropping a leading byte-order mark."""
    path = Path(path)
    raw = path.read_bytes()
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise CorpusDecodeError(path, f"byte 0x{raw[exc.start]:02X} at offset {exc.start}") from exc
    if text.startswith(BOM):
        text = text[1:]
    return text


def _visible(path: Path) -> bool:
    return not path.name.startswith(".")


def load_corpus(root_path) -> Corpus:
    root = Path(root_path)
    if not root.is_dir():
        raise CorpusNotFoundError(f"corpus directory not found: {root}")
    class_dirs = sorted((p for p in root.iterdir() if p.is_dir() and _visible(p)), key=lambda p: p.name)
    if not class_dirs:
        raise EmptyCorpusError(f"{root}: no class subdirectories")
    documents = []
    for class_dir in class_dirs:
        for f in class_dir.iterdir():
            if f.is_file() and _visible(f):
                documents.append(
                    LabeledDocument(id=f"{class_dir.name}/{f.name}", text=read_text(f), label=class_dir.name)
                )
    if not documents:
        raise EmptyCorpusError(f"{root}: no documents in any class directory")
    return Corpus.from_documents(documents, classes=[p.name for p in class_dirs])


def _round_half_away(x: Fraction) -> int:
    return math.floor(x + Fraction(1, 2)) if x >= 0 else -math.floor(-x + Fraction(1, 2))


def train_count(m: int, fraction: Fraction) -> int:
    """Number of training documents drawn from a class of size ``m``."""
    return min(max(_round_half_away(fraction * m), 1), m - 1)


def split_corpus(corpus: Corpus, spec: SplitSpec) -> tuple[Corpus, Corpus]:
    """Stratified, seeded train/test partition.

    Each class is permuted independently (classes visited in sorted order,
    documents in id order) from a single generator seeded with ``spec.seed``.
    """
    unlabeled = [d.id for d in corpus if d.label is None]
    if unlabeled:
        raise ConfigError(f"cannot split: document {unlabeled[0]!r} has no label")
    rng = random.Random(spec.seed)
    fraction = spec.fraction
    train, test = [], []
    for label, docs in corpus.by_class().items():
        if len(docs) < 2:
            raise StratificationError(label, len(docs))
        docs = sorted(docs, key=lambda d: d.id)
        rng.shuffle(docs)
        cut = train_count(len(docs), fraction)
        train.extend(docs[:cut])
        test.extend(docs[cut:])
    return (
        Corpus.from_documents(train, classes=corpus.classes),
        Corpus.from_documents(test, classes=corpus.classes),
    )
