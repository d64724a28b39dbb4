"""Seeded synthetic corpora, topics, judgments and KBs.

Each query targets one entity mentioned through several surface forms, so a
bag-of-words profile seeded with one form misses posts that use the others.
Non-relevant posts share topical words with the query and mention distractor
entities. ``n_ambiguous`` adds surface forms linked to the target and to its
distractors at once; they never occur in posts but connect the two through
shared surface forms. ``hard_negative_rate`` makes some non-relevant posts
mention the target itself.
"""

from __future__ import annotations

import json
import os
import random
from dataclasses import dataclass, field

from elfilter.corpus import FilterQuery, Micropost, RelevanceJudgments, format_post, format_topic, write_qrels

_CONSONANTS = "bcdfgklmnprstvz"
_VOWELS = "aeiou"

# share of posts carrying a URL, relevant vs non-relevant
URL_RATE_RELEVANT = 0.84
URL_RATE_NONRELEVANT = 0.23


class WordFactory:
    """Unique pronounceable pseudo-words."""

    def __init__(self, rng: random.Random, reserved=()):
        self.rng = rng
        self.used = set(reserved)

    def word(self, syllables: tuple[int, int] = (2, 3)) -> str:
        rng = self.rng
        while True:
            n = rng.randint(*syllables)
            w = "".join(rng.choice(_CONSONANTS) + rng.choice(_VOWELS) for _ in range(n))
            if rng.random() < 0.5:
                w += rng.choice(_CONSONANTS)
            if w not in self.used:
                self.used.add(w)
                return w

    def words(self, n: int, syllables=(2, 3)) -> list[str]:
        return [self.word(syllables) for _ in range(n)]


@dataclass
class SyntheticDataset:
    posts: list[Micropost]
    topics: list[FilterQuery]
    judgments: RelevanceJudgments
    kb_records: list[tuple[str, str, int, int]]
    validation_ids: list[str]
    test_ids: list[str]
    meta: dict = field(default_factory=dict)

    def queries(self, ids) -> list[FilterQuery]:
        wanted = set(ids)
        return [t for t in self.topics if t.query_id in wanted]

    def write(self, out_dir) -> dict[str, str]:
        os.makedirs(out_dir, exist_ok=True)
        paths = {
            name: os.path.join(out_dir, fname)
            for name, fname in [
                ("corpus", "corpus.jsonl"),
                ("topics", "topics.jsonl"),
                ("qrels", "qrels.txt"),
                ("kb", "kb.tsv"),
                ("validation", "validation.txt"),
                ("test", "test.txt"),
                ("meta", "meta.json"),
            ]
        }
        with open(paths["corpus"], "w", encoding="utf-8") as f:
            for p in self.posts:
                f.write(format_post(p) + "\n")
        with open(paths["topics"], "w", encoding="utf-8") as f:
            for t in self.topics:
                f.write(format_topic(t) + "\n")
        with open(paths["qrels"], "w", encoding="utf-8") as f:
            write_qrels(self.judgments, f)
        with open(paths["kb"], "w", encoding="utf-8") as f:
            for m, e, c, o in self.kb_records:
                f.write(f"{m}\t{e}\t{c}\t{o}\n")
        for split, ids in (("validation", self.validation_ids), ("test", self.test_ids)):
            with open(paths[split], "w", encoding="utf-8") as f:
                f.writelines(i + "\n" for i in ids)
        with open(paths["meta"], "w", encoding="utf-8") as f:
            json.dump(self.meta, f, indent=2, sort_keys=True)
            f.write("\n")
        return paths


def _kb_record(rng, mention, targets: dict[str, float], lp: float):
    """Records for one mention given commonness shares and a link probability."""
    links = 1000
    occ = round(links / lp)
    counts = {e: max(1, round(share * links)) for e, share in targets.items()}
    # fix rounding so pair counts sum to the link total
    top = max(counts, key=lambda e: (counts[e], e))
    counts[top] += links - sum(counts.values())
    return [(mention, e, c, occ) for e, c in sorted(counts.items())]


def generate(
    seed: int = 13,
    n_test: int = 5,
    n_validation: int = 5,
    n_relevant: int = 40,
    n_nonrelevant: int = 400,
    n_forms: int = 5,
    n_background: int = 1000,
    n_ambiguous: int = 0,
    distractor_rate: float = 0.4,
    hard_negative_rate: float = 0.0,
) -> SyntheticDataset:
    rng = random.Random(seed)
    words = WordFactory(rng)
    filler = words.words(3000)
    # generic KB noise: frequent words that rarely link
    low_lp = rng.sample(filler, 60)
    records: list[tuple[str, str, int, int]] = []
    for i, w in enumerate(low_lp):
        records += _kb_record(rng, w, {f"E_noise{i}": 1.0}, rng.uniform(0.001, 0.1))

    def filler_words(lo, hi):
        return rng.choices(filler, k=rng.randint(lo, hi))

    query_specs = []
    n_queries = n_validation + n_test
    for q in range(n_queries):
        qid = f"SQ{q + 1:02d}"
        target = f"E_{qid}_target"
        forms = [" ".join(words.words(rng.randint(1, 2))) for _ in range(n_forms)]
        topic_words = words.words(6)
        distractors = []
        for d in range(3):
            dforms = [" ".join(words.words(rng.randint(1, 2))) for _ in range(3)]
            distractors.append((f"E_{qid}_distractor{d}", dforms))
        ambiguous_forms = [" ".join(words.words(2, (2, 2))) for _ in range(n_ambiguous)]
        for form in forms:
            other = rng.random() < 0.5
            cm = rng.uniform(0.75, 0.95) if other else 1.0
            targets = {target: cm}
            if other:
                targets[f"E_{qid}_other"] = 1.0 - cm
            records += _kb_record(rng, form, targets, rng.uniform(0.4, 0.9))
        for ent, dforms in distractors:
            for form in dforms:
                records += _kb_record(rng, form, {ent: 1.0}, rng.uniform(0.5, 0.9))
        for form in ambiguous_forms:
            share = {target: 0.3}
            for ent, _ in distractors:
                share[ent] = 0.7 / len(distractors)
            records += _kb_record(rng, form, share, rng.uniform(0.8, 0.95))
        query_specs.append((qid, target, forms, topic_words, distractors))

    background = [" ".join(filler_words(6, 12)) for _ in range(n_background)]
    items: list[tuple[float, str, str, bool, bool]] = []  # (time, qid, text, relevant, url)
    for qid, target, forms, topic_words, distractors in query_specs:
        for k in range(n_relevant):
            body = filler_words(4, 8)
            form = forms[0] if k == 0 else rng.choice(forms)
            body.insert(rng.randint(0, len(body)), form)
            if rng.random() < 0.5:
                body.insert(rng.randint(0, len(body)), rng.choice(topic_words))
            t = 0.0 if k == 0 else rng.uniform(0.001, 1.0)
            items.append((t, qid, " ".join(body), True, k == 0 or rng.random() < URL_RATE_RELEVANT))
        for _ in range(n_nonrelevant):
            body = filler_words(4, 9)
            if rng.random() < 0.5:
                body.insert(rng.randint(0, len(body)), rng.choice(topic_words))
            if rng.random() < hard_negative_rate:
                body.insert(rng.randint(0, len(body)), rng.choice(forms))
            elif rng.random() < distractor_rate:
                _, dforms = rng.choice(distractors)
                body.insert(rng.randint(0, len(body)), rng.choice(dforms))
            items.append((rng.uniform(0.001, 1.0), qid, " ".join(body), False, rng.random() < URL_RATE_NONRELEVANT))
    items.sort(key=lambda t: (t[0], t[1]))

    posts: list[Micropost] = []
    judgments = RelevanceJudgments()
    ts = 1_300_000_000_000
    for text in background:
        ts += rng.randint(100, 5000)
        posts.append(Micropost(f"s{len(posts):07d}", ts, text))
    first_ids = {}
    for _, qid, text, relevant, has_url in items:
        ts += rng.randint(100, 5000)
        pid = f"s{len(posts):07d}"
        urls: tuple[str, ...] = ()
        titles: tuple[str, ...] = ()
        if has_url:
            urls = (f"http://t.example/{pid}",)
            if rng.random() < 0.3:
                titles = (" ".join(filler_words(3, 5)),)
        posts.append(Micropost(pid, ts, text, urls, titles))
        judgments.grades[(qid, pid)] = 1 if relevant else 0
        if relevant and qid not in first_ids:
            first_ids[qid] = (pid, ts)

    topics = []
    for qid, target, forms, topic_words, _ in query_specs:
        pid, t0 = first_ids[qid]
        topics.append(FilterQuery(qid, f"{forms[0]} {topic_words[0]}", pid, t0))
    ids = [t.query_id for t in topics]
    meta = {
        "seed": seed,
        "ambiguous_forms_per_target": n_ambiguous,
        "distractor_rate": distractor_rate,
        "hard_negative_rate": hard_negative_rate,
        "relevant_per_query": n_relevant,
        "nonrelevant_per_query": n_nonrelevant,
        "surface_forms_per_target": n_forms,
        "targets": {qid: {"entity": target, "forms": forms} for qid, target, forms, _, _ in query_specs},
    }
    return SyntheticDataset(posts, topics, judgments, records, ids[:n_validation], ids[n_validation:], meta)


def generate_benchmark(seed: int = 7, n_posts: int = 100_000, n_mentions: int = 10_000, vocab: int = 20_000):
    """One-query stream of ``n_posts`` posts and a KB of ``n_mentions`` mentions.

    Returns (posts, query, judgments, kb_records); every post is judged.
    """
    rng = random.Random(seed)
    words = WordFactory(rng)
    vocabulary = words.words(vocab)
    mentions: list[str] = []
    seen: set[str] = set()
    records: list[tuple[str, str, int, int]] = []
    n_entities = max(1, n_mentions // 3)
    while len(mentions) < n_mentions:
        m = " ".join(rng.sample(vocabulary, rng.choice((1, 1, 2, 2, 3))))
        if m in seen:
            continue
        seen.add(m)
        mentions.append(m)
        k = rng.choice((1, 1, 2, 3))
        ents = {f"B{rng.randrange(n_entities)}": rng.random() + 0.05 for _ in range(k)}
        total = sum(ents.values())
        records += _kb_record(rng, m, {e: w / total for e, w in ents.items()}, rng.uniform(0.05, 0.95))
    posts = []
    judgments = RelevanceJudgments()
    ts = 1_300_000_000_000
    topic_mentions = mentions[:5]
    first = None
    for i in range(n_posts):
        body = rng.choices(vocabulary, k=rng.randint(8, 14))
        for _ in range(rng.randint(0, 2)):
            body.insert(rng.randint(0, len(body)), rng.choice(mentions))
        relevant = rng.random() < 0.02 or (first is None and i >= min(1000, n_posts - 1))
        if relevant:
            body.insert(0, rng.choice(topic_mentions))
            if first is None and i >= min(1000, n_posts - 1):
                first = i
        ts += rng.randint(1, 50)
        pid = f"b{i:07d}"
        urls = (f"http://t.example/{pid}",) if rng.random() < 0.3 else ()
        posts.append(Micropost(pid, ts, " ".join(body), urls))
        judgments.grades[("BQ", pid)] = int(relevant)
    query = FilterQuery("BQ", topic_mentions[0], posts[first].id, posts[first].timestamp)
    return posts, query, judgments, records
