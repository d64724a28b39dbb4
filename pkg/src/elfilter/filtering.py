"""Incremental Rocchio filtering over sparse tf-idf vectors.

The profile keeps running sums of the relevant and non-relevant vectors plus
their squared norms and cross dot product, so both a feedback update and a
classification cost O(nnz) of the incoming vector.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from elfilter.corpus import Micropost

RELEVANT = True
NONRELEVANT = False

# distance below eta means relevant; False reads the threshold the other way round
RELEVANT_BELOW_ETA = True


class SparseVector:
    """Immutable feature -> weight mapping without zero entries."""

    __slots__ = ("weights", "_norm")

    def __init__(self, weights: Mapping[str, float] | None = None):
        self.weights: dict[str, float] = {f: w for f, w in (weights or {}).items() if w != 0.0}
        self._norm: float | None = None

    @property
    def norm(self) -> float:
        if self._norm is None:
            self._norm = math.sqrt(sum(w * w for w in self.weights.values()))
        return self._norm

    def dot(self, other: "SparseVector | Mapping[str, float]") -> float:
        a = self.weights
        b = other.weights if isinstance(other, SparseVector) else other
        if len(a) > len(b):
            a, b = b, a
        return sum(w * b[f] for f, w in a.items() if f in b)

    def scaled(self, factor: float) -> "SparseVector":
        return SparseVector({f: w * factor for f, w in self.weights.items()})

    def __len__(self):
        return len(self.weights)

    def __getitem__(self, feature: str) -> float:
        return self.weights.get(feature, 0.0)

    def __eq__(self, other):
        return isinstance(other, SparseVector) and self.weights == other.weights

    def __repr__(self):
        return f"SparseVector({self.weights!r})"


@dataclass
class IdfStore:
    n_docs: int = 0
    df: Counter = field(default_factory=Counter)

    def idf(self, feature: str) -> float:
        return math.log(self.n_docs / max(self.df.get(feature, 0), 1))


def update_idf(store: IdfStore, bag: Mapping[str, int]) -> None:
    store.n_docs += 1
    store.df.update(bag.keys())


def vectorize(bag: Mapping[str, int], store: IdfStore) -> SparseVector:
    """Raw term frequency times ``ln(N / max(df, 1))``."""
    n = store.n_docs
    if n < 1:
        raise ValueError("idf store is empty; seed it before vectorizing")
    df = store.df
    log_n = math.log(n)
    weights = {}
    for f, tf in bag.items():
        d = df.get(f, 0)
        w = tf * (log_n - math.log(d)) if d > 1 else tf * log_n
        if w != 0.0:
            weights[f] = w
    v = SparseVector.__new__(SparseVector)
    v.weights = weights
    v._norm = None
    return v


def cosine_distance(a: SparseVector, b: SparseVector) -> float:
    """``1 - cos(a, b)``; 1 when either vector has zero norm."""
    na, nb = a.norm, b.norm
    if na == 0.0 or nb == 0.0:
        return 1.0
    return max(0.0, 1.0 - a.dot(b) / (na * nb))


class InitializationError(ValueError):
    pass


@dataclass(frozen=True)
class FilterParams:
    alpha: float = 1.0
    beta: float = 0.0
    eta: float = 0.5
    url_gate: bool = False


class QueryProfile:
    """Rocchio centroid ``alpha * mean(R) - beta * mean(N)`` with a threshold rule.

    A post is relevant when its cosine distance to the centroid is below
    ``eta`` (and, with ``url_gate``, it carries at least one URL).
    """

    def __init__(self, alpha: float = 1.0, beta: float = 0.0, eta: float = 0.5, url_gate: bool = False):
        self.alpha = alpha
        self.beta = beta
        self.eta = eta
        self.url_gate = url_gate
        self.idf: IdfStore | None = None
        self.relevant: list[SparseVector] = []
        self.nonrelevant: list[SparseVector] = []
        self._sum_rel: dict[str, float] = {}
        self._sum_non: dict[str, float] = {}
        self._sq_rel = 0.0
        self._sq_non = 0.0
        self._cross = 0.0

    @staticmethod
    def _accumulate(total: dict[str, float], other: dict[str, float], v: SparseVector):
        """Add ``v`` into ``total``; return (total . v, other . v) before the add."""
        d_self = d_other = 0.0
        for f, w in v.weights.items():
            old = total.get(f)
            if old is None:
                total[f] = w
            else:
                d_self += old * w
                total[f] = old + w
            o = other.get(f)
            if o is not None:
                d_other += o * w
        return d_self, d_other

    def add(self, v: SparseVector, is_relevant: bool) -> None:
        sq = v.norm ** 2
        if is_relevant:
            d_self, d_other = self._accumulate(self._sum_rel, self._sum_non, v)
            self.relevant.append(v)
            self._sq_rel += 2.0 * d_self + sq
        else:
            d_self, d_other = self._accumulate(self._sum_non, self._sum_rel, v)
            self.nonrelevant.append(v)
            self._sq_non += 2.0 * d_self + sq
        self._cross += d_other

    def _coefficients(self) -> tuple[float, float]:
        a = self.alpha / len(self.relevant) if self.relevant else 0.0
        b = self.beta / len(self.nonrelevant) if self.nonrelevant else 0.0
        return a, b

    @property
    def centroid(self) -> SparseVector:
        a, b = self._coefficients()
        weights = {f: a * w for f, w in self._sum_rel.items()} if a else {}
        if b:
            for f, w in self._sum_non.items():
                weights[f] = weights.get(f, 0.0) - b * w
        return SparseVector(weights)

    def centroid_norm(self) -> float:
        a, b = self._coefficients()
        sq = a * a * self._sq_rel + b * b * self._sq_non - 2.0 * a * b * self._cross
        return math.sqrt(sq) if sq > 0.0 else 0.0

    def distance(self, v: SparseVector) -> float:
        nv = v.norm
        nc = self.centroid_norm()
        if nv == 0.0 or nc == 0.0:
            return 1.0
        a, b = self._coefficients()
        dot = a * v.dot(self._sum_rel) if a else 0.0
        if b:
            dot -= b * v.dot(self._sum_non)
        return max(0.0, 1.0 - dot / (nc * nv))

    def classify(self, post: Micropost | None, v: SparseVector) -> bool:
        if self.url_gate and post is not None and not post.has_url:
            return NONRELEVANT
        d = self.distance(v)
        return d < self.eta if RELEVANT_BELOW_ETA else d > self.eta


def centroid_update(profile: QueryProfile, v: SparseVector, is_relevant: bool) -> None:
    profile.add(v, is_relevant)


def classify(profile: QueryProfile, post: Micropost, v: SparseVector) -> bool:
    return profile.classify(post, v)


def seed_idf(bags: Iterable[Mapping[str, int]]) -> IdfStore:
    store = IdfStore()
    for bag in bags:
        update_idf(store, bag)
    return store


IDF_SEED_POSTS = 1000


def init_profile(query, first_relevant: Micropost, preceding: list[Micropost], pipeline, params: FilterParams):
    """Seed idf from the last 1000 preceding posts; start R with the query and first relevant post."""
    if first_relevant is None:
        raise InitializationError(f"query {query.query_id}: first relevant post not in stream")
    preceding = preceding[-IDF_SEED_POSTS:]
    if not preceding:
        raise InitializationError(
            f"query {query.query_id}: no posts precede {first_relevant.id!r}, cannot seed idf"
        )
    if any(p.timestamp > first_relevant.timestamp for p in preceding):
        raise InitializationError(f"query {query.query_id}: idf seed posts must precede the first relevant post")
    store = seed_idf(pipeline.bag(p) for p in preceding)
    profile = QueryProfile(params.alpha, params.beta, params.eta, params.url_gate)
    profile.idf = store
    profile.add(vectorize(pipeline.query_bag(query), store), RELEVANT)
    profile.add(vectorize(pipeline.bag(first_relevant), store), RELEVANT)
    return profile
