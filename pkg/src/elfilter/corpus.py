"""Readers and writers for microposts, filtering topics and relevance judgments.

Formats:

- corpus: JSON Lines, ``{"id": str, "ts": int, "text": str, "urls": [...], "titles": [...]}``
  where ``urls`` and ``titles`` are optional;
- topics: JSON Lines, ``{"query_id", "text", "first_relevant_id", "start_ts"}``;
- qrels: TREC text format, ``topic 0 docid grade``.
"""

from __future__ import annotations

import io
import json
import logging
import re
from dataclasses import dataclass, field
from typing import IO, Iterable, Iterator, Union

log = logging.getLogger(__name__)

URL_RE = re.compile(r"https?://\S+", re.IGNORECASE)

Reader = Union[IO[str], IO[bytes], Iterable[str], Iterable[bytes]]


class CorpusError(ValueError):
    """Malformed corpus, topics or qrels input."""


class OrderingError(CorpusError):
    """Posts are not in non-decreasing timestamp order."""


@dataclass(frozen=True)
class Micropost:
    id: str
    timestamp: int
    text: str
    urls: tuple[str, ...] = ()
    url_titles: tuple[str, ...] = ()

    @property
    def has_url(self) -> bool:
        return bool(self.urls)


@dataclass(frozen=True)
class FilterQuery:
    query_id: str
    text: str
    first_relevant_id: str
    start_timestamp: int


class Unjudged:
    """Marker returned for (query, post) pairs without a judgment."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "UNJUDGED"

    def __bool__(self):
        return False


UNJUDGED = Unjudged()


@dataclass
class RelevanceJudgments:
    grades: dict[tuple[str, str], int] = field(default_factory=dict)

    def lookup(self, query_id: str, post_id: str) -> int | Unjudged:
        return self.grades.get((query_id, post_id), UNJUDGED)

    def is_relevant(self, query_id: str, post_id: str) -> bool:
        grade = self.grades.get((query_id, post_id))
        return grade is not None and grade >= 1

    def relevant_ids(self, query_id: str) -> set[str]:
        return {p for (q, p), g in self.grades.items() if q == query_id and g >= 1}

    def __len__(self):
        return len(self.grades)


def _lines(reader: Reader) -> Iterator[tuple[int, str]]:
    for lineno, raw in enumerate(reader, start=1):
        if isinstance(raw, bytes):
            raw = raw.decode("utf-8")
        line = raw.strip()
        if line:
            yield lineno, line


def _str_list(obj: dict, key: str, lineno: int) -> tuple[str, ...]:
    value = obj.get(key)
    if value is None:
        return ()
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise CorpusError(f"line {lineno}: {key!r} must be a list of strings")
    return tuple(value)


def scan_urls(text: str) -> list[str]:
    return URL_RE.findall(text)


def parse_corpus(reader: Reader) -> list[Micropost]:
    """Parse a JSON Lines corpus into posts, checking timestamp order.

    URLs found in the text by scheme prefix are appended to the record's
    ``urls`` when not already listed.
    """
    posts: list[Micropost] = []
    seen: set[str] = set()
    for lineno, line in _lines(reader):
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as e:
            raise CorpusError(f"line {lineno}: invalid JSON ({e.msg})") from e
        if not isinstance(obj, dict):
            raise CorpusError(f"line {lineno}: expected a JSON object")
        post_id = obj.get("id")
        ts = obj.get("ts")
        text = obj.get("text")
        if not isinstance(post_id, str) or not post_id:
            raise CorpusError(f"line {lineno}: 'id' must be a non-empty string")
        if not isinstance(ts, int) or isinstance(ts, bool):
            raise CorpusError(f"line {lineno}: 'ts' must be an integer (ms since epoch)")
        if not isinstance(text, str):
            raise CorpusError(f"line {lineno}: 'text' must be a string")
        if post_id in seen:
            raise CorpusError(f"line {lineno}: duplicate post id {post_id!r}")
        seen.add(post_id)
        urls = list(_str_list(obj, "urls", lineno))
        for url in scan_urls(text):
            if url not in urls:
                urls.append(url)
        post = Micropost(post_id, ts, text, tuple(urls), _str_list(obj, "titles", lineno))
        if posts and post.timestamp < posts[-1].timestamp:
            prev = posts[-1]
            raise OrderingError(
                f"line {lineno}: post {post.id!r} (ts {post.timestamp}) precedes "
                f"post {prev.id!r} (ts {prev.timestamp})"
            )
        posts.append(post)
    return posts


def format_post(post: Micropost) -> str:
    """Serialize one post as a corpus line (no trailing newline)."""
    obj: dict = {"id": post.id, "ts": post.timestamp, "text": post.text}
    if post.urls:
        obj["urls"] = list(post.urls)
    if post.url_titles:
        obj["titles"] = list(post.url_titles)
    return json.dumps(obj, ensure_ascii=False)


def write_corpus(posts: Iterable[Micropost], out: IO[str]) -> None:
    for post in posts:
        out.write(format_post(post) + "\n")


def parse_qrels(reader: Reader) -> RelevanceJudgments:
    judgments = RelevanceJudgments()
    for lineno, line in _lines(reader):
        parts = line.split()
        if len(parts) != 4:
            raise CorpusError(f"line {lineno}: expected 'topic 0 docid grade', got {line!r}")
        topic, _, docid, grade_str = parts
        try:
            grade = int(grade_str)
        except ValueError as e:
            raise CorpusError(f"line {lineno}: grade {grade_str!r} is not an integer") from e
        key = (topic, docid)
        if key in judgments.grades:
            log.warning("line %d: duplicate judgment for %s/%s, keeping the last", lineno, topic, docid)
        judgments.grades[key] = grade
    return judgments


def write_qrels(judgments: RelevanceJudgments, out: IO[str]) -> None:
    for (topic, docid), grade in judgments.grades.items():
        out.write(f"{topic} 0 {docid} {grade}\n")


def parse_topics(reader: Reader) -> list[FilterQuery]:
    topics: list[FilterQuery] = []
    for lineno, line in _lines(reader):
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as e:
            raise CorpusError(f"line {lineno}: invalid JSON ({e.msg})") from e
        qid = obj.get("query_id")
        text = obj.get("text")
        first = obj.get("first_relevant_id")
        start = obj.get("start_ts", 0)
        if not isinstance(qid, str) or not qid:
            raise CorpusError(f"line {lineno}: 'query_id' must be a non-empty string")
        if not isinstance(text, str):
            raise CorpusError(f"line {lineno}: 'text' must be a string")
        if not isinstance(first, str) or not first:
            raise CorpusError(f"line {lineno}: topic {qid!r} has no first_relevant_id")
        if not isinstance(start, int) or isinstance(start, bool):
            raise CorpusError(f"line {lineno}: 'start_ts' must be an integer")
        topics.append(FilterQuery(qid, text, first, start))
    return topics


def format_topic(query: FilterQuery) -> str:
    return json.dumps(
        {
            "query_id": query.query_id,
            "text": query.text,
            "first_relevant_id": query.first_relevant_id,
            "start_ts": query.start_timestamp,
        },
        ensure_ascii=False,
    )


def read_path(path, parser):
    with open(path, "r", encoding="utf-8") as f:
        return parser(f)


def parse_text(text: str, parser):
    return parser(io.StringIO(text))
