"""Mention spotting and entity-linking feature expansion.

Expansion methods:

- ``exp1``: one ``ment:<mention>`` feature per spotted mention;
- ``exp2``: ``ent:<id>`` for every candidate entity whose linking probability
  ``lp(m) * cm(m, e)`` exceeds ``rho``;
- ``exp2_1ent``: like ``exp2`` but only for the highest-commonness candidate;
- ``exp3``: ``sf:<m'>`` for every other surface form ``m'`` of every candidate
  entity ``e`` with ``lp(m) * cm(m, e) * lp(m') * cm(m', e) > rho``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache

from elfilter.kb import KnowledgeBase

METHODS = ("none", "exp1", "exp2", "exp2_1ent", "exp3")
MAX_NGRAM = 6
MAX_SURFACE_FORMS = 1000


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SpottedMention:
    surface: str
    token_span: tuple[int, int]
    lp: float


@dataclass(frozen=True)
class ExpansionConfig:
    method: str = "exp2"
    rho: float = 0.1
    min_lp: float = 0.2

    def __post_init__(self):
        if self.method not in METHODS:
            raise ConfigError(f"unknown expansion method {self.method!r}; expected one of {METHODS}")
        if not 0.0 <= self.rho <= 1.0:
            raise ConfigError(f"rho must lie in [0, 1], got {self.rho}")
        if not 0.0 <= self.min_lp <= 1.0:
            raise ConfigError(f"min_lp must lie in [0, 1], got {self.min_lp}")


def _feature_name(mention: str) -> str:
    return mention.replace(" ", "_")


def spot(kb: KnowledgeBase, tokens: list[str], min_lp: float) -> list[SpottedMention]:
    """Greedy left-to-right longest match of token n-grams against KB mentions."""
    spots = []
    n = len(tokens)
    span_of = kb.first_token_span
    lp = kb.link_probability
    i = 0
    while i < n:
        longest = span_of.get(tokens[i], 0)
        for k in range(min(MAX_NGRAM, longest, n - i), 0, -1):
            surface = " ".join(tokens[i : i + k])
            p = lp(surface)
            if p > 0.0 and p >= min_lp:
                spots.append(SpottedMention(surface, (i, i + k), p))
                i += k
                break
        else:
            i += 1
    return spots


def candidates(kb: KnowledgeBase, mention: str) -> list[tuple[str, float]]:
    """Entities of ``mention`` ranked by ``lp(m) * cm(m, e)``, ties by entity id."""
    lp = kb.link_probability(mention)
    ranked = [(e, lp * cm) for e, cm in kb.entities_of(mention).items() if cm > 0]
    ranked.sort(key=lambda t: (-t[1], t[0]))
    return ranked


def surface_form_probabilities(kb: KnowledgeBase, mention: str) -> list[tuple[str, str, float]]:
    """(entity, surface form, p_sf) for every other surface form reachable from ``mention``.

    At most ``MAX_SURFACE_FORMS`` forms per entity are considered, by
    descending commonness.
    """
    out = []
    lp_i = kb.link_probability(mention)
    for entity, cm_i in kb.entities_of(mention).items():
        forms = kb.surface_form_map(entity)
        if len(forms) > MAX_SURFACE_FORMS:
            top = sorted(forms.items(), key=lambda t: (-t[1], t[0]))[:MAX_SURFACE_FORMS]
        else:
            top = forms.items()
        p_en = lp_i * cm_i
        for form, cm_j in top:
            if form != mention:
                out.append((entity, form, p_en * kb.link_probability(form) * cm_j))
    return out


class Linker:
    """Expands feature bags for one KB and expansion config.

    Per-mention expansions are memoized; the KB must not change afterwards.
    """

    def __init__(self, kb: KnowledgeBase, config: ExpansionConfig):
        self.kb = kb
        self.config = config
        self.features_for = lru_cache(maxsize=200_000)(self._features_for)

    def _features_for(self, mention: str) -> tuple[str, ...]:
        method, rho, kb = self.config.method, self.config.rho, self.kb
        if method == "exp1":
            return ("ment:" + _feature_name(mention),)
        if method == "exp2":
            return tuple("ent:" + e for e, p in candidates(kb, mention) if p > rho)
        if method == "exp2_1ent":
            ents = kb.entities_of(mention)
            if not ents:
                return ()
            best = min(ents.items(), key=lambda t: (-t[1], t[0]))[0]
            if kb.link_probability(mention) * ents[best] > rho:
                return ("ent:" + best,)
            return ()
        if method == "exp3":
            return tuple(
                "sf:" + _feature_name(form)
                for _, form, p in surface_form_probabilities(kb, mention)
                if p > rho
            )
        return ()

    def spot(self, tokens: list[str]) -> list[SpottedMention]:
        return spot(self.kb, tokens, self.config.min_lp)

    def expand(self, bag: Counter, spots: list[SpottedMention]) -> Counter:
        out = Counter(bag)
        if self.config.method == "none":
            return out
        for s in spots:
            for f in self.features_for(s.surface):
                out[f] += 1
        return out


def expand(bag: Counter, spots: list[SpottedMention], kb: KnowledgeBase, config: ExpansionConfig) -> Counter:
    return Linker(kb, config).expand(bag, spots)
