"""Post -> expanded feature bag, shared by queries and stream posts."""

from __future__ import annotations

from collections import Counter

from elfilter.corpus import FilterQuery, Micropost
from elfilter.kb import KnowledgeBase
from elfilter.linker import ExpansionConfig, Linker
from elfilter.textproc import TextProcessor


class FeaturePipeline:
    """Text features plus optional entity-linking expansion.

    Each text source (post text, every URL title, every hashtag segmentation)
    is spotted on its own so no mention spans two sources.
    """

    def __init__(
        self,
        textproc: TextProcessor | None = None,
        kb: KnowledgeBase | None = None,
        expansion: ExpansionConfig | None = None,
    ):
        self.textproc = textproc if textproc is not None else TextProcessor()
        self.expansion = expansion if expansion is not None else ExpansionConfig(method="none")
        if kb is None and self.expansion.method != "none":
            raise ValueError(f"expansion method {self.expansion.method!r} needs a knowledge base")
        self.kb = kb
        self.linker = Linker(kb, self.expansion) if kb is not None else None

    def bag_for_texts(self, texts) -> Counter:
        bag, spans = self.textproc.features_with_spans(texts)
        if self.linker is None or self.expansion.method == "none":
            return bag
        spots = []
        for tokens in spans:
            spots.extend(self.linker.spot(tokens))
        return self.linker.expand(bag, spots)

    def bag(self, post: Micropost) -> Counter:
        return self.bag_for_texts((post.text, *post.url_titles))

    def query_bag(self, query: FilterQuery) -> Counter:
        return self.bag_for_texts((query.text,))
