"""Precision/recall accounting and the train-classify-score experiment harness.

Per class ``c`` the report keeps

* ``CC``  documents of class c predicted as c,
* ``TCF`` documents predicted as c,
* ``TC``  documents whose gold label is c,

so precision is CC / TCF and recall is CC / TC. Precision with TCF = 0 and
recall with TC = 0 are undefined and reported as absent (``None``).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

from .bayes import NBModel, classify_nb, train_nb
from .corpus import Corpus, SplitSpec, split_corpus
from .errors import ConfigError, EmptyEvaluationError
from .knn import KnnModel, classify_knn, train_knn
from .ngram import DEFAULT_L, DEFAULT_N, MEASURES, NGramModel, classify_ngram, train_ngram
from .prediction import Prediction
from .textproc import Preprocessor, ProcessedDocument, preprocess_corpus

CLASSIFIERS = ("nb", "knn", "ngram")


@dataclass(frozen=True)
class ClassStats:
    cc: int
    tcf: int
    tc: int

    @property
    def precision(self) -> Optional[float]:
        return self.cc / self.tcf if self.tcf else None

    @property
    def recall(self) -> Optional[float]:
        return self.cc / self.tc if self.tc else None


def _mean(values):
    values = [v for v in values if v is not None]
    return sum(values) / len(values) if values else None


@dataclass
class EvalReport:
    classes: list
    per_class: dict
    confusion: dict  # gold -> predicted -> count
    metadata: dict = field(default_factory=dict)
    predictions: list = field(default_factory=list)  # (doc_id, gold, predicted)

    @property
    def n(self) -> int:
        return sum(s.tc for s in self.per_class.values())

    @property
    def accuracy(self) -> float:
        return sum(s.cc for s in self.per_class.values()) / self.n

    @property
    def micro_precision(self) -> float:
        return sum(s.cc for s in self.per_class.values()) / sum(s.tcf for s in self.per_class.values())

    @property
    def micro_recall(self) -> float:
        return sum(s.cc for s in self.per_class.values()) / sum(s.tc for s in self.per_class.values())

    @property
    def macro_precision(self) -> Optional[float]:
        return _mean(s.precision for s in self.per_class.values())

    @property
    def macro_recall(self) -> Optional[float]:
        return _mean(s.recall for s in self.per_class.values())

    def confusion_matrix(self) -> list[list[int]]:
        return [[self.confusion[g][p] for p in self.classes] for g in self.classes]

    def to_dict(self) -> dict:
        return {
            "metadata": dict(self.metadata),
            "n": self.n,
            "accuracy": self.accuracy,
            "micro_precision": self.micro_precision,
            "micro_recall": self.micro_recall,
            "macro_precision": self.macro_precision,
            "macro_recall": self.macro_recall,
            "classes": [
                {
                    "class": c,
                    "CC": s.cc,
                    "TCF": s.tcf,
                    "TC": s.tc,
                    "precision": s.precision,
                    "recall": s.recall,
                }
                for c, s in self.per_class.items()
            ],
            "confusion": {"labels": list(self.classes), "matrix": self.confusion_matrix()},
            "predictions": [list(p) for p in self.predictions],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, indent=2) + "\n"

    def to_tsv(self) -> str:
        lines = [f"#{k}={v}" for k, v in self.metadata.items()]
        lines.append("class\tCC\tTCF\tTC\tprecision\trecall")
        for c, s in self.per_class.items():
            lines.append(f"{c}\t{s.cc}\t{s.tcf}\t{s.tc}\t{fmt(s.precision)}\t{fmt(s.recall)}")
        total = [sum(getattr(s, a) for s in self.per_class.values()) for a in ("cc", "tcf", "tc")]
        lines.append("micro\t{}\t{}\t{}\t{}\t{}".format(*total, fmt(self.micro_precision), fmt(self.micro_recall)))
        lines.append(f"macro\t-\t-\t-\t{fmt(self.macro_precision)}\t{fmt(self.macro_recall)}")
        lines.append(f"accuracy\t{fmt(self.accuracy)}")
        lines.append("")
        lines.append("gold\\predicted\t" + "\t".join(self.classes))
        for g, row in zip(self.classes, self.confusion_matrix()):
            lines.append(g + "\t" + "\t".join(str(x) for x in row))
        return "\n".join(lines) + "\n"


def fmt(x: Optional[float]) -> str:
    return "-" if x is None else f"{x:.6f}"


def score_predictions(pairs: Sequence[tuple[str, str]], classes: Optional[Sequence[str]] = None) -> EvalReport:
    """Tally (gold, predicted) pairs into an :class:`EvalReport`."""
    if not pairs:
        raise EmptyEvaluationError("no predictions to score")
    labels = sorted(set(classes or ()) | {g for g, _ in pairs} | {p for _, p in pairs})
    confusion = {g: {p: 0 for p in labels} for g in labels}
    for gold, pred in pairs:
        confusion[gold][pred] += 1
    per_class = {}
    for c in labels:
        tc = sum(confusion[c].values())
        tcf = sum(confusion[g][c] for g in labels)
        per_class[c] = ClassStats(confusion[c][c], tcf, tc)
    return EvalReport(labels, per_class, confusion)


@dataclass(frozen=True)
class PreprocessOptions:
    """Preprocessing flags; ``None`` picks the classifier's default."""

    profile: Optional[str] = None
    stem: Optional[bool] = None
    dedupe: Optional[bool] = None
    stoplist: Optional[str] = None
    affixes: Optional[str] = None
    min_stem_len: int = 3


# Naive Bayes follows the class-file pipeline (stem + dedupe); k-NN needs raw
# counts; n-gram profiles follow the letter-form conventions of that method.
PREPROCESS_DEFAULTS = {
    "nb": dict(profile="system", stem=True, dedupe=True),
    "knn": dict(profile="system", stem=True, dedupe=False),
    "ngram": dict(profile="khreisat", stem=False, dedupe=False),
}


def resolve_preprocessor(kind: str, options: Optional[PreprocessOptions] = None) -> Preprocessor:
    options = options or PreprocessOptions()
    settings = dict(PREPROCESS_DEFAULTS[kind])
    for key in ("profile", "stem", "dedupe"):
        value = getattr(options, key)
        if value is not None:
            settings[key] = value
    return Preprocessor.default(
        stoplist_path=options.stoplist,
        affix_path=options.affixes,
        min_stem_len=options.min_stem_len,
        **settings,
    )


@dataclass(frozen=True)
class ClassifierSpec:
    kind: str = "nb"
    alpha: float = 1.0
    k: int = 5
    weighting: str = "tfidf"
    measure: str = "manhattan"
    n: int = DEFAULT_N
    L: Optional[int] = DEFAULT_L

    def __post_init__(self):
        if self.kind not in CLASSIFIERS:
            raise ConfigError(f"classifier must be one of {CLASSIFIERS}, got {self.kind!r}")
        if self.measure not in MEASURES:
            raise ConfigError(f"measure must be one of {MEASURES}, got {self.measure!r}")

    @property
    def name(self) -> str:
        return f"ngram-{self.measure}" if self.kind == "ngram" else self.kind

    def flags(self) -> dict:
        if self.kind == "nb":
            return {"alpha": self.alpha}
        if self.kind == "knn":
            return {"k": self.k, "weighting": self.weighting}
        return {"measure": self.measure, "n": self.n, "L": "none" if self.L is None else self.L}

    @classmethod
    def parse(cls, name: str, **overrides) -> "ClassifierSpec":
        """Build from ``nb``, ``knn``, ``ngram``, ``ngram-manhattan`` or ``ngram-dice``."""
        kind, _, measure = name.partition("-")
        if measure:
            if kind != "ngram":
                raise ConfigError(f"unknown classifier {name!r}")
            overrides["measure"] = measure
        return cls(kind=kind, **overrides)


def train_classifier(spec: ClassifierSpec, train: Mapping[str, Sequence[ProcessedDocument]]):
    if spec.kind == "nb":
        return train_nb(train, alpha=spec.alpha)
    if spec.kind == "knn":
        return train_knn(train, weighting=spec.weighting)
    return train_ngram(train, n=spec.n, L=spec.L)


def predict(model, doc: ProcessedDocument, spec: ClassifierSpec) -> Prediction:
    if isinstance(model, NBModel):
        return classify_nb(model, doc)
    if isinstance(model, KnnModel):
        return classify_knn(model, doc, spec.k)
    if isinstance(model, NGramModel):
        return classify_ngram(model, doc, spec.measure)
    raise TypeError(f"not a model: {type(model).__name__}")


def run_experiment(
    corpus: Corpus,
    spec: ClassifierSpec,
    split: SplitSpec,
    options: Optional[PreprocessOptions] = None,
) -> EvalReport:
    """Split, preprocess, train, classify every test document and score."""
    train, test = split_corpus(corpus, split)
    pre = resolve_preprocessor(spec.kind, options)
    model = train_classifier(spec, preprocess_corpus(train, pre))
    predictions = []
    for doc in test:
        predictions.append((doc.id, doc.label, predict(model, pre(doc), spec).label))
    report = score_predictions([(g, p) for _, g, p in predictions], classes=corpus.classes)
    report.predictions = predictions
    report.metadata = {
        "classifier": spec.name,
        **spec.flags(),
        "preprocessing": pre.fingerprint,
        "train_fraction": split.train_fraction,
        "seed": split.seed,
        "n_train": len(train),
        "n_test": len(test),
    }
    return report


@dataclass
class Comparison:
    rows: list  # (name, EvalReport), best accuracy first

    @property
    def best_accuracy(self) -> float:
        return self.rows[0][1].accuracy

    def winners(self) -> list[str]:
        return [name for name, r in self.rows if r.accuracy == self.best_accuracy]

    def to_tsv(self) -> str:
        lines = ["rank\tclassifier\taccuracy\tmacro_precision\tmacro_recall\twinner"]
        for i, (name, r) in enumerate(self.rows, start=1):
            win = "*" if r.accuracy == self.best_accuracy else ""
            lines.append(f"{i}\t{name}\t{fmt(r.accuracy)}\t{fmt(r.macro_precision)}\t{fmt(r.macro_recall)}\t{win}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        doc = {
            "winners": self.winners(),
            "rows": [{"rank": i, "classifier": name, **r.to_dict()} for i, (name, r) in enumerate(self.rows, start=1)],
        }
        return json.dumps(doc, ensure_ascii=False, indent=2) + "\n"


def compare_classifiers(
    corpus: Corpus,
    specs: Sequence[ClassifierSpec],
    split: SplitSpec,
    options: Optional[PreprocessOptions] = None,
) -> Comparison:
    if len(specs) < 2:
        raise ConfigError("compare needs at least two classifier specs")
    reports = [(s.name, run_experiment(corpus, s, split, options)) for s in specs]
    # stable sort: equal accuracy keeps the order the specs were given in
    return Comparison(sorted(reports, key=lambda nr: -nr[1].accuracy))
