"""Tokenization, stemming, hashtag segmentation and feature extraction."""

from elfilter.textproc.features import (
    NAMESPACES,
    FeatureBag,
    TextProcessor,
    bigrams,
    extract_features,
    load_stopwords,
    remove_stopwords,
    tokenize,
)
from elfilter.textproc.lancaster import LancasterStemmer, stem
from elfilter.textproc.segment import UnigramModel, segment_hashtag

__all__ = [
    "NAMESPACES",
    "FeatureBag",
    "LancasterStemmer",
    "TextProcessor",
    "UnigramModel",
    "bigrams",
    "extract_features",
    "load_stopwords",
    "remove_stopwords",
    "segment_hashtag",
    "stem",
    "tokenize",
]
