"""Character n-gram profiles compared by rank distance or Dice overlap."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence

from .errors import ConfigError, DegenerateModelError, ModelFormatError
from .prediction import Prediction, argmax_prediction
from .textproc import Preprocessor, ProcessedDocument, check_fingerprint, common_fingerprint, tokenize

NGRAM_HEADER = "mushannif-ngram"
MEASURES = ("manhattan", "dice")
DEFAULT_N = 3
DEFAULT_L = 300


@dataclass(frozen=True)
class NGramProfile:
    n: int
    entries: tuple  # ((gram, freq), ...) by descending freq, then gram
    truncation: Optional[int] = None
    rank: Mapping[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        object.__setattr__(self, "rank", {g: i for i, (g, _) in enumerate(self.entries, start=1)})

    @property
    def grams(self) -> frozenset:
        return frozenset(self.rank)

    @property
    def penalty(self) -> int:
        """Distance charged for a document gram missing from this profile."""
        return self.truncation if self.truncation is not None else len(self.entries)

    def __len__(self):
        return len(self.entries)


def _grams(tokens: Iterable[str], n: int):
    for tok in tokens:
        for i in range(len(tok) - n + 1):
            yield tok[i:i + n]


def profile_from_counts(counts: Mapping[str, int], n: int, L: Optional[int] = DEFAULT_L) -> NGramProfile:
    entries = sorted(counts.items(), key=lambda gf: (-gf[1], gf[0]))
    if L is not None:
        entries = entries[:L]
    return NGramProfile(n, tuple(entries), L)


def profile_from_tokens(tokens: Iterable[str], n: int = DEFAULT_N, L: Optional[int] = DEFAULT_L) -> NGramProfile:
    if n < 1:
        raise ConfigError(f"n-gram size must be at least 1, got {n}")
    if L is not None and L < 1:
        raise ConfigError(f"profile length must be positive, got {L}")
    return profile_from_counts(Counter(_grams(tokens, n)), n, L)


def ngram_profile(text: str, n: int = DEFAULT_N, L: Optional[int] = DEFAULT_L) -> NGramProfile:
    """Rank-ordered n-grams taken inside letter-only tokens of ``text``."""
    return profile_from_tokens(tokenize(text), n, L)


def _same_n(p: NGramProfile, q: NGramProfile):
    if p.n != q.n:
        raise ConfigError(f"cannot compare {p.n}-gram and {q.n}-gram profiles")


def manhattan_distance(doc: NGramProfile, cls: NGramProfile) -> int:
    """Out-of-place rank distance from a document profile to a class profile.

    Not symmetric: a gram absent from ``cls`` costs ``cls.penalty``.
    """
    _same_n(doc, cls)
    total = 0
    for gram, r in doc.rank.items():
        other = cls.rank.get(gram)
        total += cls.penalty if other is None else abs(r - other)
    return total


def dice_similarity(p: NGramProfile, q: NGramProfile) -> float:
    _same_n(p, q)
    a, b = p.grams, q.grams
    if not a and not b:
        return 1.0
    return 2 * len(a & b) / (len(a) + len(b))


@dataclass
class NGramModel:
    profiles: dict
    n: int = DEFAULT_N
    L: Optional[int] = DEFAULT_L
    fingerprint: Optional[str] = None

    def __post_init__(self):
        self.profiles = dict(sorted(self.profiles.items()))
        for label, p in self.profiles.items():
            if p.n != self.n or p.truncation != self.L:
                raise ConfigError(f"profile for {label!r} has n={p.n} L={p.truncation}, model has n={self.n} L={self.L}")

    @property
    def classes(self) -> list[str]:
        return list(self.profiles)


def train_ngram(
    train: Mapping[str, Sequence[ProcessedDocument]],
    n: int = DEFAULT_N,
    L: Optional[int] = DEFAULT_L,
    fingerprint: Optional[str] = None,
) -> NGramModel:
    """One profile per class, built from all of the class's training tokens together."""
    if not train:
        raise DegenerateModelError("no classes to train on")
    profiles = {}
    for label, docs in train.items():
        profiles[label] = profile_from_tokens((t for d in docs for t in d.tokens), n, L)
    if fingerprint is None:
        fingerprint = common_fingerprint(d for docs in train.values() for d in docs)
    return NGramModel(profiles, n, L, fingerprint)


def _score(doc_profile: NGramProfile, cls: NGramProfile, measure: str) -> float:
    if measure == "manhattan":
        return -float(manhattan_distance(doc_profile, cls))
    return dice_similarity(doc_profile, cls)


def classify_ngram(
    class_profiles,
    doc,
    measure: str = "manhattan",
    preprocessor: Optional[Preprocessor] = None,
) -> Prediction:
    """Label a document by its nearest class profile.

    ``class_profiles`` is an :class:`NGramModel` or a plain mapping of class to
    profile. ``doc`` is raw text (tokenized with ``preprocessor`` when given)
    or an already processed document. Manhattan scores are reported negated
    so the winner is always the highest score.
    """
    if measure not in MEASURES:
        raise ConfigError(f"measure must be one of {MEASURES}, got {measure!r}")
    fp = None
    if isinstance(class_profiles, NGramModel):
        fp = class_profiles.fingerprint
        class_profiles = class_profiles.profiles
    if not class_profiles:
        raise DegenerateModelError("no class profiles to compare against")
    first = next(iter(class_profiles.values()))
    if any(p.n != first.n or p.truncation != first.truncation for p in class_profiles.values()):
        raise ConfigError("class profiles disagree on n or truncation")
    if isinstance(doc, ProcessedDocument):
        check_fingerprint(fp, doc)
        tokens = doc.tokens
    elif preprocessor is not None:
        processed = preprocessor(doc)
        check_fingerprint(fp, processed)
        tokens = processed.tokens
    else:
        tokens = tokenize(doc)
    doc_profile = profile_from_tokens(tokens, first.n, first.truncation)
    scores = {label: _score(doc_profile, p, measure) for label, p in class_profiles.items()}
    return argmax_prediction(scores)


def _header(n: int, L: Optional[int]) -> str:
    return f"{NGRAM_HEADER} v1 n={n} L={'none' if L is None else L}"


def _parse_header(line: str) -> tuple[int, Optional[int]]:
    parts = line.split()
    if len(parts) != 4 or parts[0] != NGRAM_HEADER or parts[1] != "v1":
        raise ModelFormatError(f"not a {NGRAM_HEADER} v1 header: {line!r}")
    try:
        n = int(parts[2].removeprefix("n="))
        L_text = parts[3].removeprefix("L=")
        return n, None if L_text == "none" else int(L_text)
    except ValueError as exc:
        raise ModelFormatError(f"bad header {line!r}") from exc


def _entry_lines(profile: NGramProfile) -> list[str]:
    return [f"{g}\t{f}" for g, f in profile.entries]


def _parse_entry(line: str) -> tuple[str, int]:
    gram, sep, freq = line.partition("\t")
    if not sep:
        raise ModelFormatError(f"expected gram<TAB>freq, got {line!r}")
    try:
        return gram, int(freq)
    except ValueError:
        raise ModelFormatError(f"bad frequency in {line!r}") from None


def save_profile(profile: NGramProfile, path) -> None:
    lines = [_header(profile.n, profile.truncation), *_entry_lines(profile)]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_profile(path) -> NGramProfile:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines:
        raise ModelFormatError(f"{path}: empty profile file")
    n, L = _parse_header(lines[0])
    return NGramProfile(n, tuple(_parse_entry(l) for l in lines[1:] if l), L)


def save_ngram(model: NGramModel, path) -> None:
    """Model file: the profile header, a fingerprint line, then one section per class."""
    lines = [_header(model.n, model.L), f"fingerprint {model.fingerprint or ''}"]
    for label, profile in model.profiles.items():
        lines.append(f"[class {label}]")
        lines.extend(_entry_lines(profile))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_ngram(path) -> NGramModel:
    path = Path(path)
    lines = path.read_text(encoding="utf-8").splitlines()
    if len(lines) < 2:
        raise ModelFormatError(f"{path}: truncated model file")
    n, L = _parse_header(lines[0])
    key, _, fp = lines[1].partition(" ")
    if key != "fingerprint":
        raise ModelFormatError(f"{path}: missing fingerprint line")
    sections: dict[str, list] = {}
    current = None
    for line in lines[2:]:
        if not line:
            continue
        if line.startswith("[class ") and line.endswith("]"):
            current = sections.setdefault(line[len("[class "):-1], [])
        elif current is None:
            raise ModelFormatError(f"{path}: gram outside a class section")
        else:
            current.append(_parse_entry(line))
    profiles = {label: NGramProfile(n, tuple(e), L) for label, e in sections.items()}
    return NGramModel(profiles, n, L, fp or None)
