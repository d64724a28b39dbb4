"""Paice/Husk (Lancaster) stemmer driven by a rule table file.

Each rule reads ``<reversed ending>[*]<n><append>(>|.)``: when a word ends with
the ending, drop ``n`` characters and append ``<append>``; ``*`` restricts the
rule to words no rule has touched yet; ``>`` continues stemming with the new
last letter and ``.`` stops.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Iterable

_RULE_RE = re.compile(r"^([a-z]+)(\*?)(\d)([a-z]*)([>.])$")
_VOWELS = frozenset("aeiouy")


@dataclass(frozen=True)
class Rule:
    ending: str
    intact_only: bool
    remove: int
    append: str
    cont: bool

    @classmethod
    def parse(cls, text: str) -> "Rule":
        m = _RULE_RE.match(text)
        if m is None:
            raise ValueError(f"invalid Lancaster rule {text!r}")
        rev, star, n, append, flag = m.groups()
        return cls(rev[::-1], bool(star), int(n), append, flag == ">")


def parse_rules(lines: Iterable[str]) -> list[Rule]:
    rules = []
    for line in lines:
        line = line.split("#", 1)[0].strip()
        if line:
            rules.append(Rule.parse(line.split()[0]))
    return rules


def _acceptable(word: str, remove: int) -> bool:
    # vowel-initial words keep >= 2 letters; otherwise >= 3 letters with a vowel or y
    rest = len(word) - remove
    if word[0] in _VOWELS:
        return rest >= 2
    return rest >= 3 and any(c in _VOWELS for c in word[:rest])


class LancasterStemmer:
    def __init__(self, rules: Iterable[Rule]):
        self.rules: dict[str, list[Rule]] = {}
        for rule in rules:
            self.rules.setdefault(rule.ending[-1], []).append(rule)
        self.stem = lru_cache(maxsize=200_000)(self._stem)

    @classmethod
    def from_file(cls, path) -> "LancasterStemmer":
        with open(path, encoding="utf-8") as f:
            return cls(parse_rules(f))

    @classmethod
    def default(cls) -> "LancasterStemmer":
        return _default_stemmer()

    def _stem(self, word: str) -> str:
        if not word.isalpha() or not word.isascii():
            return word
        intact = True
        while True:
            for rule in self.rules.get(word[-1], ()):
                if rule.intact_only and not intact:
                    continue
                if word.endswith(rule.ending) and _acceptable(word, rule.remove):
                    word = word[: len(word) - rule.remove] + rule.append
                    intact = False
                    if rule.cont and word:
                        break
                    return word
            else:
                return word


@lru_cache(maxsize=1)
def _default_stemmer() -> LancasterStemmer:
    text = resources.files("elfilter.data").joinpath("lancaster_rules.txt").read_text("utf-8")
    return LancasterStemmer(parse_rules(text.splitlines()))


def stem(token: str) -> str:
    return _default_stemmer().stem(token)
