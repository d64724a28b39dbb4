"""Single-threaded throughput of the full per-post path.

Each post goes through feature extraction, expansion, vectorization, idf
update and classification; feedback is applied as in a real run.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from elfilter.filtering import FilterParams, init_profile, update_idf, vectorize
from elfilter.kb import build_kb
from elfilter.linker import ExpansionConfig
from elfilter.pipeline import FeaturePipeline
from elfilter.synthetic import generate_benchmark
from elfilter.textproc import TextProcessor


@dataclass
class BenchResult:
    posts: int
    seconds: float
    kb_mentions: int
    method: str
    retrieved: int

    @property
    def posts_per_second(self) -> float:
        return self.posts / self.seconds if self.seconds > 0 else float("inf")


def run_benchmark(
    n_posts: int = 100_000,
    n_mentions: int = 10_000,
    method: str = "exp2",
    eta: float = 0.9,
    seed: int = 7,
) -> BenchResult:
    posts, query, judgments, records = generate_benchmark(seed, n_posts, n_mentions)
    kb = build_kb(records)
    pipeline = FeaturePipeline(TextProcessor(), kb, ExpansionConfig(method=method))
    idx = next(i for i, p in enumerate(posts) if p.id == query.first_relevant_id)
    profile = init_profile(query, posts[idx], posts[:idx], pipeline, FilterParams(eta=eta))
    store = profile.idf
    grades = judgments.grades
    qid = query.query_id
    stream = posts[idx + 1 :]
    retrieved = 0
    start = time.perf_counter()
    for post in stream:
        bag = pipeline.bag(post)
        v = vectorize(bag, store)
        update_idf(store, bag)
        if profile.classify(post, v):
            retrieved += 1
            grade = grades.get((qid, post.id))
            if grade is not None:
                profile.add(v, grade >= 1)
    elapsed = time.perf_counter() - start
    return BenchResult(len(stream), elapsed, len(kb), method, retrieved)
