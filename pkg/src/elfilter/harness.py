"""Simulation of the real-time filtering protocol with oracle feedback.

For each query the stream is replayed in timestamp order. Posts before the
first relevant post only seed idf; after it, every post is vectorized with the
idf in force at that time, counted into idf, and classified. Feedback is
revealed only for posts classified relevant.

Vectors do not depend on the filter decisions, so a stream is prepared once
per feature pipeline and then simulated cheaply for any (alpha, beta, eta,
url_gate) combination.
"""

from __future__ import annotations

import itertools
import logging
import math
import multiprocessing
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable, Sequence

from elfilter.corpus import FilterQuery, Micropost, RelevanceJudgments
from elfilter.filtering import (
    FilterParams,
    InitializationError,
    QueryProfile,
    SparseVector,
    init_profile,
    update_idf,
    vectorize,
)
from elfilter.metrics import Counts, MetricSummary, macro_average

log = logging.getLogger(__name__)

UNJUDGED_POLICIES = ("fp", "skip")


@dataclass(frozen=True)
class Decision:
    post_id: str
    relevant: bool
    grade: int | None  # None when unjudged


@dataclass
class RunResult:
    query_id: str
    tp: int = 0
    fp: int = 0
    fn: int = 0
    tn: int = 0
    decision_log: list[Decision] = field(default_factory=list)

    @property
    def counts(self) -> Counts:
        return Counts(self.tp, self.fp, self.fn, self.tn)


@dataclass
class PreparedStream:
    query: FilterQuery
    query_vector: SparseVector
    first_vector: SparseVector
    posts: list[Micropost]
    vectors: list[SparseVector]


def prepare_stream(query: FilterQuery, stream: Sequence[Micropost], pipeline) -> PreparedStream:
    idx = next((i for i, p in enumerate(stream) if p.id == query.first_relevant_id), None)
    if idx is None:
        raise InitializationError(
            f"query {query.query_id}: first relevant post {query.first_relevant_id!r} not in stream"
        )
    profile = init_profile(query, stream[idx], list(stream[:idx]), pipeline, FilterParams())
    store = profile.idf
    posts = list(stream[idx + 1 :])
    vectors = []
    for post in posts:
        bag = pipeline.bag(post)
        vectors.append(vectorize(bag, store))
        update_idf(store, bag)
    return PreparedStream(query, profile.relevant[0], profile.relevant[1], posts, vectors)


def counts_from_log(decisions: Iterable[Decision], unjudged: str = "fp") -> Counts:
    tp = fp = fn = tn = 0
    for d in decisions:
        if d.grade is None:
            if d.relevant and unjudged == "fp":
                fp += 1
        elif d.grade >= 1:
            if d.relevant:
                tp += 1
            else:
                fn += 1
        elif d.relevant:
            fp += 1
        else:
            tn += 1
    return Counts(tp, fp, fn, tn)


def simulate(
    prepared: PreparedStream,
    judgments: RelevanceJudgments,
    params: FilterParams,
    unjudged: str = "fp",
) -> RunResult:
    if unjudged not in UNJUDGED_POLICIES:
        raise ValueError(f"unjudged policy must be one of {UNJUDGED_POLICIES}")
    qid = prepared.query.query_id
    profile = QueryProfile(params.alpha, params.beta, params.eta, params.url_gate)
    profile.add(prepared.query_vector, True)
    profile.add(prepared.first_vector, True)
    grades = judgments.grades
    result = RunResult(qid)
    out = result.decision_log
    for post, v in zip(prepared.posts, prepared.vectors):
        decision = profile.classify(post, v)
        grade = grades.get((qid, post.id))
        out.append(Decision(post.id, decision, grade))
        if grade is None:
            if decision and unjudged == "fp":
                result.fp += 1
            continue
        if decision:
            is_rel = grade >= 1
            if is_rel:
                result.tp += 1
            else:
                result.fp += 1
            profile.add(v, is_rel)
        elif grade >= 1:
            result.fn += 1
        else:
            result.tn += 1
    return result


def run_stream(
    query: FilterQuery,
    stream: Sequence[Micropost],
    judgments: RelevanceJudgments,
    pipeline,
    params: FilterParams,
    unjudged: str = "fp",
) -> RunResult:
    return simulate(prepare_stream(query, stream, pipeline), judgments, params, unjudged)


# worker-process state, inherited through fork
_WORKER: dict = {}


def _worker_run(query: FilterQuery) -> RunResult:
    w = _WORKER
    return run_stream(query, w["stream"], w["judgments"], w["pipeline"], w["params"], w["unjudged"])


def run_queries(
    queries: Sequence[FilterQuery],
    stream: Sequence[Micropost],
    judgments: RelevanceJudgments,
    pipeline,
    params: FilterParams,
    unjudged: str = "fp",
    workers: int = 1,
) -> list[RunResult]:
    """Run every query; results come back in query order whatever ``workers`` is."""
    if workers <= 1 or len(queries) <= 1:
        return [run_stream(q, stream, judgments, pipeline, params, unjudged) for q in queries]
    _WORKER.update(stream=stream, judgments=judgments, pipeline=pipeline, params=params, unjudged=unjudged)
    try:
        ctx = multiprocessing.get_context("fork")
        with ProcessPoolExecutor(max_workers=workers, mp_context=ctx) as pool:
            return list(pool.map(_worker_run, queries))
    finally:
        _WORKER.clear()


def summarize(results: Sequence[RunResult], exclude_no_relevant: bool = True) -> MetricSummary:
    return macro_average({r.query_id: r.counts for r in results}, exclude_no_relevant)


GRID_FIELDS = ("alpha", "beta", "eta", "rho", "min_lp", "method", "url_gate")


@dataclass(frozen=True)
class GridPoint:
    alpha: float
    beta: float
    eta: float
    rho: float
    min_lp: float
    method: str
    url_gate: bool

    def as_tuple(self):
        return tuple(getattr(self, f) for f in GRID_FIELDS)

    def params(self) -> FilterParams:
        return FilterParams(self.alpha, self.beta, self.eta, self.url_gate)

    def as_dict(self):
        return asdict(self)


@dataclass
class GridRow:
    point: GridPoint
    summary: MetricSummary
    best: bool = False


def expand_grid(grid: dict[str, Sequence]) -> list[GridPoint]:
    missing = [f for f in GRID_FIELDS if not grid.get(f)]
    if missing:
        raise ValueError(f"grid has no values for {', '.join(missing)}")
    values = [sorted(set(grid[f])) for f in GRID_FIELDS]
    return [GridPoint(*combo) for combo in itertools.product(*values)]


def _rank_key(row: GridRow):
    m = row.summary.macro
    t = m.t11su if not math.isnan(m.t11su) else -math.inf
    return (-m.f05, -t, row.point.as_tuple())


def grid_search(
    queries: Sequence[FilterQuery],
    stream: Sequence[Micropost],
    judgments: RelevanceJudgments,
    grid: dict[str, Sequence],
    make_pipeline: Callable[[str, float, float], object],
    unjudged: str = "fp",
    exclude_no_relevant: bool = True,
) -> tuple[GridPoint, list[GridRow]]:
    """Exhaustive search maximizing macro F0.5.

    Ties go to the higher macro T11SU, then to the lexicographically smallest
    point. ``make_pipeline(method, rho, min_lp)`` builds the feature pipeline
    for one expansion setting; streams are prepared once per setting.
    """
    points = expand_grid(grid)
    if not queries:
        raise ValueError("grid search needs at least one query")
    rows = []
    by_expansion = itertools.groupby(
        sorted(points, key=lambda p: (p.method, p.rho, p.min_lp, p.as_tuple())),
        key=lambda p: (p.method, p.rho, p.min_lp),
    )
    for (method, rho, min_lp), group in by_expansion:
        pipeline = make_pipeline(method, rho, min_lp)
        prepared = [prepare_stream(q, stream, pipeline) for q in queries]
        for point in group:
            results = [simulate(p, judgments, point.params(), unjudged) for p in prepared]
            rows.append(GridRow(point, summarize(results, exclude_no_relevant)))
    rows.sort(key=lambda r: r.point.as_tuple())
    best = min(rows, key=_rank_key)
    best.best = True
    return best.point, rows
