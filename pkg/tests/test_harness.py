import pytest

from elfilter.corpus import FilterQuery, Micropost, RelevanceJudgments
from elfilter.filtering import FilterParams, InitializationError
from elfilter.harness import (
    counts_from_log,
    expand_grid,
    grid_search,
    run_queries,
    run_stream,
    summarize,
)
from elfilter.kb import build_kb
from elfilter.linker import ExpansionConfig
from elfilter.metrics import precision, recall
from elfilter.pipeline import FeaturePipeline
from elfilter.synthetic import generate

SAME = "diego goal"
DISJOINT = "weather rain"

# (kind, grade) for the 20 posts after the first relevant one; None = unjudged
TRACE = [
    ("S", 1), ("D", 0), ("S", 0), ("S", None), ("D", 1),
    ("S", 1), ("D", None), ("D", 0), ("S", 1), ("S", 0),
    ("D", 1), ("S", None), ("D", 0), ("S", 1), ("S", 1),
    ("D", 0), ("D", None), ("S", 0), ("D", 1), ("S", 1),
]  # fmt: skip


def trace_fixture():
    posts = [Micropost(f"b{i}", i, t) for i, t in enumerate(["alpha bravo", "charlie delta", "echo foxtrot"])]
    posts.append(Micropost("first", 10, SAME))
    judgments = RelevanceJudgments({("q", "first"): 1})
    for i, (kind, grade) in enumerate(TRACE):
        pid = f"s{i:02d}"
        posts.append(Micropost(pid, 11 + i, SAME if kind == "S" else DISJOINT))
        if grade is not None:
            judgments.grades[("q", pid)] = grade
    return FilterQuery("q", SAME, "first", 10), posts, judgments


def test_hand_trace_unjudged_as_fp():
    query, posts, judgments = trace_fixture()
    r = run_stream(query, posts, judgments, FeaturePipeline(), FilterParams(eta=0.5))
    # 11 identical posts retrieved: 6 relevant, 3 non-relevant, 2 unjudged
    # 9 disjoint posts rejected: 3 relevant, 4 non-relevant, 2 unjudged
    assert (r.tp, r.fp, r.fn, r.tn) == (6, 5, 3, 4)
    assert len(r.decision_log) == 20
    assert sum(d.relevant for d in r.decision_log) == 11


def test_hand_trace_unjudged_skipped():
    query, posts, judgments = trace_fixture()
    r = run_stream(query, posts, judgments, FeaturePipeline(), FilterParams(eta=0.5), unjudged="skip")
    assert (r.tp, r.fp, r.fn, r.tn) == (6, 3, 3, 4)
    assert counts_from_log(r.decision_log, "skip") == r.counts
    assert counts_from_log(r.decision_log, "fp").fp == 5


def test_eta_zero_retrieves_nothing():
    query, posts, judgments = trace_fixture()
    r = run_stream(query, posts, judgments, FeaturePipeline(), FilterParams(eta=0.0))
    assert r.tp == r.fp == 0
    assert r.fn == 9


def identical_fixture(n=15):
    # with a single seed post every idf would be ln(1) = 0
    posts = [Micropost(f"b{i}", i, t) for i, t in enumerate(["alpha bravo", "charlie delta", "echo foxtrot"])]
    posts.append(Micropost("first", 10, SAME))
    posts += [Micropost(f"s{i}", 11 + i, SAME) for i in range(n)]
    judgments = RelevanceJudgments({("q", p.id): 1 for p in posts[3:]})
    return FilterQuery("q", SAME, "first", 10), posts, judgments


def test_identical_posts_perfect_run():
    query, posts, judgments = identical_fixture()
    r = run_stream(query, posts, judgments, FeaturePipeline(), FilterParams(eta=0.5))
    assert precision(r.counts) == 1.0 and recall(r.counts) == 1.0


def test_missing_first_relevant_post():
    query, posts, judgments = identical_fixture()
    with pytest.raises(InitializationError):
        run_stream(FilterQuery("q", SAME, "nope", 10), posts, judgments, FeaturePipeline(), FilterParams())


def _grid(**over):
    g = dict(alpha=[1.0], beta=[0.0], eta=[0.5], rho=[0.1], min_lp=[0.2], method=["none"], url_gate=[False])
    g.update(over)
    return g


def _none_pipeline(method, rho, min_lp):
    return FeaturePipeline()


def test_grid_single_point():
    query, posts, judgments = identical_fixture()
    best, rows = grid_search([query], posts, judgments, _grid(), _none_pipeline)
    assert len(rows) == 1 and rows[0].best and best.eta == 0.5


def test_grid_eta_zero_loses():
    query, posts, judgments = identical_fixture()
    best, rows = grid_search([query], posts, judgments, _grid(eta=[0.0, 0.9]), _none_pipeline)
    assert best.eta == 0.9
    assert [r.summary.macro.f05 for r in rows] == [0.0, 1.0]


def test_grid_ties_break_lexicographically():
    query, posts, judgments = identical_fixture()
    best, _ = grid_search([query], posts, judgments, _grid(eta=[0.9, 0.5, 0.7]), _none_pipeline)
    assert best.eta == 0.5


def test_empty_grid_field():
    with pytest.raises(ValueError):
        expand_grid(_grid(eta=[]))


@pytest.fixture(scope="module")
def small_synthetic():
    return generate(seed=5, n_test=0, n_validation=3, n_relevant=10, n_nonrelevant=60, n_background=200)


def test_prefix_invariance(small_synthetic, textproc):
    ds = small_synthetic
    kb = build_kb(ds.kb_records)
    pipeline = FeaturePipeline(textproc, kb, ExpansionConfig("exp2"))
    params = FilterParams(1.0, 0.5, 0.8, False)
    for q in ds.topics:
        full = run_stream(q, ds.posts, ds.judgments, pipeline, params).decision_log
        start = next(i for i, p in enumerate(ds.posts) if p.id == q.first_relevant_id)
        for cut in (start + 1, start + 40, len(ds.posts) // 2, len(ds.posts) - 3):
            if cut <= start:
                continue
            part = run_stream(q, ds.posts[:cut], ds.judgments, pipeline, params).decision_log
            assert part == full[: len(part)]


def test_deterministic_and_parallel_consistent(small_synthetic, textproc):
    ds = small_synthetic
    kb = build_kb(ds.kb_records)
    pipeline = FeaturePipeline(textproc, kb, ExpansionConfig("exp2"))
    params = FilterParams(eta=0.85)
    a = run_queries(ds.topics, ds.posts, ds.judgments, pipeline, params)
    b = run_queries(ds.topics, ds.posts, ds.judgments, FeaturePipeline(textproc, kb, ExpansionConfig("exp2")), params)
    c = run_queries(ds.topics, ds.posts, ds.judgments, pipeline, params, workers=2)
    assert a == b == c
    assert summarize(a) == summarize(c)


def test_beta_zero_wins_with_topically_noisy_negatives(textproc):
    # non-relevant posts often mention the target, so subtracting their centroid
    # removes the features that identify relevant posts
    ds = generate(seed=13, n_test=0, n_validation=3, hard_negative_rate=0.3, distractor_rate=0.0)
    kb = build_kb(ds.kb_records)
    grid = _grid(beta=[0.0, 0.25, 0.5, 1.0], eta=[0.8, 0.85, 0.9, 0.95], method=["exp2"])
    best, rows = grid_search(
        ds.topics, ds.posts, ds.judgments, grid, lambda m, r, l: FeaturePipeline(textproc, kb, ExpansionConfig(m, r, l))
    )
    assert (best.alpha, best.beta) == (1.0, 0.0)
    top = {b: max(r.summary.macro.f05 for r in rows if r.point.beta == b) for b in (0.0, 0.25, 0.5, 1.0)}
    assert all(top[0.0] > top[b] for b in (0.25, 0.5, 1.0))
