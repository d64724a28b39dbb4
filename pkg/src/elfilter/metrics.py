"""Set-based filtering measures: precision, recall, F-beta and T11SU."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

MIN_NU = -0.5


@dataclass(frozen=True)
class Counts:
    tp: int = 0
    fp: int = 0
    fn: int = 0
    tn: int = 0


def precision(c: Counts) -> float:
    d = c.tp + c.fp
    return c.tp / d if d else 0.0


def recall(c: Counts) -> float:
    d = c.tp + c.fn
    return c.tp / d if d else 0.0


def f_beta(c: Counts, beta: float = 0.5) -> float:
    p, r = precision(c), recall(c)
    b2 = beta * beta
    d = b2 * p + r
    return (1 + b2) * p * r / d if d else 0.0


def t11su(c: Counts) -> float:
    """Scaled linear utility with +2 per relevant and -1 per non-relevant retrieval.

    Returns nan when the query has no relevant posts (MaxU = 0).
    """
    max_u = 2 * (c.tp + c.fn)
    if max_u == 0:
        return math.nan
    nu = (2 * c.tp - c.fp) / max_u
    return (max(nu, MIN_NU) - MIN_NU) / (1 - MIN_NU)


MEASURES = ("precision", "recall", "f05", "t11su")


@dataclass(frozen=True)
class QueryMetrics:
    precision: float
    recall: float
    f05: float
    t11su: float

    @classmethod
    def from_counts(cls, c: Counts) -> "QueryMetrics":
        return cls(precision(c), recall(c), f_beta(c, 0.5), t11su(c))

    def as_tuple(self):
        return (self.precision, self.recall, self.f05, self.t11su)


@dataclass
class MetricSummary:
    per_query: dict[str, QueryMetrics] = field(default_factory=dict)
    macro: QueryMetrics | None = None


def _mean(values):
    return sum(values) / len(values) if values else math.nan


def macro_average(counts_by_query: dict[str, Counts], exclude_no_relevant: bool = True) -> MetricSummary:
    """Per-query measures, then their arithmetic mean.

    T11SU is undefined for queries without relevant posts; with
    ``exclude_no_relevant`` such queries are left out of the T11SU mean only,
    otherwise they contribute 0.
    """
    if not counts_by_query:
        raise ValueError("macro_average needs at least one query")
    per_query = {}
    for qid, c in counts_by_query.items():
        m = QueryMetrics.from_counts(c)
        if math.isnan(m.t11su) and not exclude_no_relevant:
            m = QueryMetrics(m.precision, m.recall, m.f05, 0.0)
        per_query[qid] = m
    ms = list(per_query.values())
    macro = QueryMetrics(
        _mean([m.precision for m in ms]),
        _mean([m.recall for m in ms]),
        _mean([m.f05 for m in ms]),
        _mean([m.t11su for m in ms if not math.isnan(m.t11su)]),
    )
    return MetricSummary(per_query, macro)
