"""Arabic document classification toolkit."""

from .corpus import Corpus, LabeledDocument, SplitSpec, load_corpus, split_corpus
from .textproc import (
    KHREISAT,
    SYSTEM,
    NormalizationProfile,
    Preprocessor,
    ProcessedDocument,
    StemmerConfig,
    StopList,
    light_stem,
    normalize,
    preprocess,
    tokenize,
)

__version__ = "0.1.0"
