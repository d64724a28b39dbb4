from __future__ import annotations

import re
from collections import Counter
from functools import lru_cache
from importlib import resources
from typing import Iterable

from elfilter.corpus import URL_RE, Micropost
from elfilter.textproc.lancaster import LancasterStemmer
from elfilter.textproc.segment import UnigramModel, segment_hashtag

# feature string -> positive count
FeatureBag = Counter

NAMESPACES = ("word:", "stem:", "bigram:", "hashtag:", "ment:", "ent:", "sf:")

_TOKEN_RE = re.compile(r"#?[^\W_]+")


def tokenize(text: str) -> list[str]:
    """Lowercase letter/digit runs; hashtags keep their ``#``; URLs are dropped.

    A leading ``@`` is not part of any token, so user mentions come out bare.
    """
    text = URL_RE.sub(" ", text.lower())
    return _TOKEN_RE.findall(text)


def remove_stopwords(tokens: list[str], stopwords) -> list[str]:
    return [t for t in tokens if t not in stopwords]


def bigrams(tokens: list[str]) -> list[str]:
    return [f"bigram:{a}_{b}" for a, b in zip(tokens, tokens[1:])]


def load_stopwords(path=None) -> frozenset[str]:
    if path is None:
        return _default_stopwords()
    with open(path, encoding="utf-8") as f:
        return frozenset(line.strip().lower() for line in f if line.strip())


@lru_cache(maxsize=1)
def _default_stopwords() -> frozenset[str]:
    text = resources.files("elfilter.data").joinpath("stopwords.txt").read_text("utf-8")
    return frozenset(w.strip() for w in text.splitlines() if w.strip())


class TextProcessor:
    """Turns post text and URL titles into namespaced feature bags.

    Segmentations are memoized per instance; the stemmer memoizes stems.
    """

    def __init__(
        self,
        stopwords: Iterable[str] | None = None,
        model: UnigramModel | None = None,
        stemmer: LancasterStemmer | None = None,
    ):
        self.stopwords = frozenset(stopwords) if stopwords is not None else load_stopwords()
        self.model = model if model is not None else UnigramModel.default()
        self.stemmer = stemmer if stemmer is not None else LancasterStemmer.default()
        self.segment = lru_cache(maxsize=100_000)(self._segment)

    def _segment(self, tag: str) -> tuple[str, ...]:
        return tuple(segment_hashtag(tag, self.model))

    def source_features(self, text: str, bag: Counter) -> list[list[str]]:
        """Add the features of one text source to ``bag``.

        Returns the token sequences the linker should spot in: the plain tokens
        of the text, then one sequence per hashtag segmentation.
        """
        tokens = tokenize(text)
        stop = self.stopwords
        stem = self.stemmer.stem
        plain: list[str] = []
        spans: list[list[str]] = [plain]
        for tok in tokens:
            if tok[0] == "#":
                tag = tok[1:]
                bag["hashtag:" + tag] += 1
                words = self.segment(tag)
                spans.append(list(words))
                for w in words:
                    if w not in stop:
                        bag["word:" + w] += 1
                        bag["stem:" + stem(w)] += 1
            else:
                plain.append(tok)
                if tok not in stop:
                    bag["word:" + tok] += 1
                    bag["stem:" + stem(tok)] += 1
        # bigrams run over the unfiltered sequence, hashtags as their bare tag
        prev = None
        for tok in tokens:
            if tok[0] == "#":
                tok = tok[1:]
            if prev is not None:
                bag[f"bigram:{prev}_{tok}"] += 1
            prev = tok
        return spans

    def features_with_spans(self, texts: Iterable[str]) -> tuple[Counter, list[list[str]]]:
        bag: Counter = Counter()
        spans: list[list[str]] = []
        for text in texts:
            spans.extend(self.source_features(text, bag))
        return bag, spans

    def extract_features(self, post: Micropost) -> Counter:
        return self.features_with_spans((post.text, *post.url_titles))[0]


def extract_features(post: Micropost, stopwords=None, model: UnigramModel | None = None) -> Counter:
    return TextProcessor(stopwords, model).extract_features(post)
