"""Arabic preprocessing: tokenizing, letter-form normalization, stop words, light stemming.

Two normalization profiles are provided. ``system`` folds hamza/madda alef
variants to bare alef, hamza-on-waw to waw, hamza-on-ya to ya and ta marbuta
to ha. ``khreisat`` only folds madda/hamza alef and rewrites a word-final ya
as alef maqsura. Both strip the harakat U+064B..U+0652.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Mapping, Optional, Sequence, Union

from .corpus import LabeledDocument, read_text
from .errors import ConfigError, IncompatiblePreprocessingError

ALEF = "ا"
ALEF_MADDA = "آ"
ALEF_HAMZA_ABOVE = "أ"
ALEF_HAMZA_BELOW = "إ"
WAW = "و"
WAW_HAMZA = "ؤ"
YEH = "ي"
YEH_HAMZA = "ئ"
ALEF_MAKSURA = "ى"
TEH_MARBUTA = "ة"
HEH = "ه"
TATWEEL = "ـ"

DIACRITICS = frozenset(chr(c) for c in range(0x064B, 0x0653))

# Marks dropped inside a token by the tokenizer rather than splitting it.
_COMBINING_MARKS = frozenset(chr(c) for c in range(0x064B, 0x0660)) | {"\u0670"}

_LETTER_RANGES = ((0x0621, 0x063A), (0x0641, 0x064A), (0x0671, 0x06D3), (0x06D5, 0x06D5))


def is_arabic_letter(ch: str) -> bool:
    cp = ord(ch)
    return any(lo <= cp <= hi for lo, hi in _LETTER_RANGES)


def tokenize(text: str) -> list[str]:
    """Split ``text`` into maximal runs of Arabic letters.

    Everything else (digits of any script, Latin letters, punctuation,
    whitespace, tatweel) separates tokens. Harakat and other Arabic combining
    marks are dropped without breaking the word they sit on.
    """
    tokens = []
    current: list[str] = []
    for ch in text:
        if is_arabic_letter(ch):
            current.append(ch)
        elif ch in _COMBINING_MARKS:
            continue
        elif current:
            tokens.append("".join(current))
            current = []
    if current:
        tokens.append("".join(current))
    return tokens


@dataclass(frozen=True)
class NormalizationProfile:
    name: str
    char_map: Mapping[str, str]
    final_map: Mapping[str, str] = field(default_factory=dict)
    strip_diacritics: bool = True

    def __post_init__(self):
        object.__setattr__(self, "char_map", MappingProxyType(dict(self.char_map)))
        object.__setattr__(self, "final_map", MappingProxyType(dict(self.final_map)))
        for table in (self.char_map, self.final_map):
            clash = set(table.values()) & (set(self.char_map) | set(self.final_map))
            if clash:
                raise ConfigError(f"profile {self.name!r} is not idempotent: {sorted(clash)} are both targets and keys")


SYSTEM = NormalizationProfile(
    "system",
    {
        ALEF_MADDA: ALEF,
        ALEF_HAMZA_ABOVE: ALEF,
        ALEF_HAMZA_BELOW: ALEF,
        WAW_HAMZA: WAW,
        TEH_MARBUTA: HEH,
        YEH_HAMZA: YEH,
    },
)

KHREISAT = NormalizationProfile(
    "khreisat",
    {ALEF_MADDA: ALEF, ALEF_HAMZA_ABOVE: ALEF},
    final_map={YEH: ALEF_MAKSURA},
)

PROFILES = {p.name: p for p in (SYSTEM, KHREISAT)}


def get_profile(name: str) -> NormalizationProfile:
    try:
        return PROFILES[name]
    except KeyError:
        raise ConfigError(f"unknown normalization profile {name!r}; choose from {sorted(PROFILES)}") from None


def normalize(token: str, profile: NormalizationProfile) -> str:
    if profile.strip_diacritics:
        token = "".join(ch for ch in token if ch not in DIACRITICS)
    token = "".join(profile.char_map.get(ch, ch) for ch in token)
    if token and token[-1] in profile.final_map:
        token = token[:-1] + profile.final_map[token[-1]]
    return token


def _digest(lines: Iterable[str]) -> str:
    h = hashlib.sha256()
    for line in lines:
        h.update(line.encode("utf-8"))
        h.update(b"\n")
    return h.hexdigest()[:12]


def _data_text(name: str) -> str:
    return resources.files("mushannif").joinpath("data").joinpath(name).read_text(encoding="utf-8")


def _content_lines(text: str) -> list[str]:
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    return lines


@dataclass(frozen=True)
class StopList:
    words: frozenset

    @classmethod
    def from_words(cls, words: Iterable[str], profile: NormalizationProfile) -> "StopList":
        normalized = (normalize(w, profile) for w in words)
        return cls(frozenset(w for w in normalized if w))

    @property
    def digest(self) -> str:
        return _digest(sorted(self.words))

    def __contains__(self, token):
        return token in self.words

    def __len__(self):
        return len(self.words)


EMPTY_STOPLIST = StopList(frozenset())


def load_stoplist(profile: NormalizationProfile, path=None) -> StopList:
    """Read a stop-word file (``#`` comments allowed); defaults to the bundled list."""
    text = _data_text("stopwords.txt") if path is None else read_text(path)
    return StopList.from_words(_content_lines(text), profile)


def remove_stopwords(tokens: Sequence[str], stops: StopList) -> list[str]:
    return [t for t in tokens if t not in stops.words]


def _longest_first(affixes: Iterable[str]) -> tuple[str, ...]:
    return tuple(sorted(dict.fromkeys(affixes), key=len, reverse=True))


@dataclass(frozen=True)
class StemmerConfig:
    prefixes: tuple[str, ...]
    suffixes: tuple[str, ...]
    min_stem_len: int = 3

    def __post_init__(self):
        if self.min_stem_len < 2:
            raise ConfigError(f"min_stem_len must be at least 2, got {self.min_stem_len}")
        if any(not a for a in (*self.prefixes, *self.suffixes)):
            raise ConfigError("empty affix in stemmer configuration")
        object.__setattr__(self, "prefixes", _longest_first(self.prefixes))
        object.__setattr__(self, "suffixes", _longest_first(self.suffixes))

    @property
    def digest(self) -> str:
        return _digest(["[prefixes]", *self.prefixes, "[suffixes]", *self.suffixes, f"min={self.min_stem_len}"])


def parse_stemmer_config(text: str, min_stem_len: int = 3) -> StemmerConfig:
    sections: dict[str, list[str]] = {"prefixes": [], "suffixes": []}
    current = None
    for line in _content_lines(text):
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1].strip()
            if current not in sections:
                raise ConfigError(f"unknown stemmer section [{current}]")
        elif current is None:
            raise ConfigError(f"affix {line!r} appears before any [prefixes]/[suffixes] header")
        else:
            sections[current].append(line)
    return StemmerConfig(tuple(sections["prefixes"]), tuple(sections["suffixes"]), min_stem_len)


def load_stemmer_config(path=None, min_stem_len: int = 3) -> StemmerConfig:
    text = _data_text("affixes.txt") if path is None else read_text(path)
    return parse_stemmer_config(text, min_stem_len)


def light_stem(token: str, cfg: StemmerConfig) -> str:
    """Strip at most one prefix, then at most one suffix.

    The longest affix whose removal keeps at least ``cfg.min_stem_len`` code
    points wins.
    """
    for prefix in cfg.prefixes:
        if token.startswith(prefix) and len(token) - len(prefix) >= cfg.min_stem_len:
            token = token[len(prefix):]
            break
    for suffix in cfg.suffixes:
        if token.endswith(suffix) and len(token) - len(suffix) >= cfg.min_stem_len:
            token = token[: -len(suffix)]
            break
    return token


@dataclass(frozen=True)
class ProcessedDocument:
    tokens: tuple[str, ...]
    source_id: str = ""
    fingerprint: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))

    def __len__(self):
        return len(self.tokens)


def fingerprint(profile: NormalizationProfile, stops: StopList, cfg: Optional[StemmerConfig], dedupe: bool) -> str:
    """Identify a preprocessing chain; models refuse documents with a different one."""
    stem = cfg.digest if cfg is not None else "off"
    return f"profile={profile.name} stem={stem} stops={stops.digest} dedupe={'on' if dedupe else 'off'}"


def parse_fingerprint(text: str) -> dict[str, str]:
    fields = {}
    for part in text.split():
        key, sep, value = part.partition("=")
        if not sep:
            raise ConfigError(f"malformed fingerprint {text!r}")
        fields[key] = value
    return fields


def common_fingerprint(docs: Iterable[ProcessedDocument]) -> Optional[str]:
    """The fingerprint shared by ``docs``; mixing chains is an error."""
    prints = {d.fingerprint for d in docs}
    if len(prints) > 1:
        raise IncompatiblePreprocessingError(*sorted(p or "" for p in prints)[:2])
    return prints.pop() if prints else None


def check_fingerprint(expected: Optional[str], doc: ProcessedDocument) -> None:
    if expected is not None and doc.fingerprint is not None and doc.fingerprint != expected:
        raise IncompatiblePreprocessingError(expected, doc.fingerprint)


def preprocess(
    doc: Union[LabeledDocument, str],
    profile: NormalizationProfile,
    stops: StopList,
    cfg: Optional[StemmerConfig],
    dedupe: bool = True,
    stem: bool = True,
) -> ProcessedDocument:
    if isinstance(doc, LabeledDocument):
        text, source_id = doc.text, doc.id
    else:
        text, source_id = doc, ""
    tokens = [normalize(t, profile) for t in tokenize(text)]
    tokens = remove_stopwords([t for t in tokens if t], stops)
    if stem:
        if cfg is None:
            raise ConfigError("stemming requested without a stemmer configuration")
        tokens = [light_stem(t, cfg) for t in tokens]
    if dedupe:
        tokens = list(dict.fromkeys(tokens))
    return ProcessedDocument(tokens, source_id, fingerprint(profile, stops, cfg if stem else None, dedupe))


@dataclass(frozen=True)
class Preprocessor:
    """A configured preprocessing chain, callable on documents or raw text."""

    profile: NormalizationProfile = SYSTEM
    stops: StopList = EMPTY_STOPLIST
    stemmer: Optional[StemmerConfig] = None
    stem: bool = True
    dedupe: bool = True

    def __post_init__(self):
        if self.stem and self.stemmer is None:
            raise ConfigError("stem=True requires a stemmer configuration")

    @classmethod
    def default(cls, profile="system", stem=True, dedupe=True, stoplist_path=None, affix_path=None, min_stem_len=3):
        prof = get_profile(profile) if isinstance(profile, str) else profile
        return cls(
            profile=prof,
            stops=load_stoplist(prof, stoplist_path),
            stemmer=load_stemmer_config(affix_path, min_stem_len),
            stem=stem,
            dedupe=dedupe,
        )

    @property
    def fingerprint(self) -> str:
        return fingerprint(self.profile, self.stops, self.stemmer if self.stem else None, self.dedupe)

    def __call__(self, doc) -> ProcessedDocument:
        return preprocess(doc, self.profile, self.stops, self.stemmer, dedupe=self.dedupe, stem=self.stem)

    def tokens(self, text: str) -> list[str]:
        return list(self(text).tokens)


def preprocess_corpus(corpus, pre: Preprocessor) -> dict[str, list[ProcessedDocument]]:
    """Preprocess every labeled document, grouped by class (id order within a class)."""
    return {label: [pre(d) for d in docs] for label, docs in corpus.by_class().items()}


def read_document(path) -> LabeledDocument:
    path = Path(path)
    return LabeledDocument(id=path.name, text=read_text(path))
