"""Unigram-model hashtag segmentation by dynamic programming (Viterbi)."""

from __future__ import annotations

import math
from functools import lru_cache
from importlib import resources
from typing import Iterable, Mapping

MAX_TAG_LENGTH = 30
_LN10 = math.log(10.0)


class UnigramModel:
    """Word counts with log-probabilities for known and unknown words.

    A known word scores ``log(count / total)``; an unknown word of length ``n``
    scores ``log(1 / total) - n * log(10)``.
    """

    def __init__(self, counts: Mapping[str, int]):
        for word, count in counts.items():
            if count <= 0:
                raise ValueError(f"non-positive count {count} for {word!r}")
        self.counts = dict(counts)
        self.total = sum(self.counts.values())
        self._log_total = math.log(self.total) if self.total else 0.0
        self.max_word_length = max(map(len, self.counts), default=0)

    @classmethod
    def from_file(cls, path) -> "UnigramModel":
        with open(path, encoding="utf-8") as f:
            return cls(parse_unigrams(f))

    @classmethod
    def default(cls) -> "UnigramModel":
        return _default_model()

    def probability(self, word: str) -> float:
        count = self.counts.get(word)
        if count is not None:
            return count / self.total
        return 10.0 ** (-len(word)) / max(self.total, 1)

    def logprob(self, word: str) -> float:
        count = self.counts.get(word)
        if count is not None:
            return math.log(count) - self._log_total
        return -self._log_total - len(word) * _LN10


def parse_unigrams(lines: Iterable[str]) -> dict[str, int]:
    counts: dict[str, int] = {}
    for lineno, line in enumerate(lines, start=1):
        line = line.rstrip("\n")
        if not line.strip():
            continue
        word, _, count = line.partition("\t")
        try:
            counts[word] = counts.get(word, 0) + int(count)
        except ValueError as e:
            raise ValueError(f"unigram line {lineno}: bad count {count!r}") from e
    return counts


@lru_cache(maxsize=1)
def _default_model() -> UnigramModel:
    text = resources.files("elfilter.data").joinpath("unigrams.tsv").read_text("utf-8")
    return UnigramModel(parse_unigrams(text.splitlines()))


def segmentation_key(words, model: UnigramModel):
    """Ordering key: higher log-probability, then fewer words, then lexicographic."""
    score = 0.0
    for w in words:
        score += model.logprob(w)
    return (-score, len(words), tuple(words))


def segment_hashtag(tag: str, model: UnigramModel) -> list[str]:
    """Split ``tag`` into the most probable word sequence.

    Tags longer than ``MAX_TAG_LENGTH`` are returned as a single word.
    """
    n = len(tag)
    if n == 0:
        return []
    if n > MAX_TAG_LENGTH:
        return [tag]
    # best[j] = (neg_score, n_words, words) for tag[:j]
    best: list[tuple] = [(0.0, 0, ())] + [None] * n
    logprob = model.logprob
    for j in range(1, n + 1):
        cand = None
        for i in range(j):
            neg, count, words = best[i]
            word = tag[i:j]
            key = (neg - logprob(word), count + 1, words + (word,))
            if cand is None or key < cand:
                cand = key
        best[j] = cand
    return list(best[n][2])
