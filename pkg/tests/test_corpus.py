import io
import json
import logging

import pytest
from hypothesis import given
from hypothesis import strategies as st

from elfilter.corpus import (
    UNJUDGED,
    CorpusError,
    Micropost,
    OrderingError,
    parse_corpus,
    parse_qrels,
    parse_text,
    parse_topics,
    write_corpus,
)


def test_single_post():
    posts = parse_text('{"id": "42", "ts": 1000, "text": "hello"}\n', parse_corpus)
    assert posts == [Micropost("42", 1000, "hello")]


def test_empty_input():
    assert parse_text("", parse_corpus) == []


def test_out_of_order_names_both_ids():
    text = '{"id": "a", "ts": 2000, "text": "x"}\n{"id": "b", "ts": 1000, "text": "y"}\n'
    with pytest.raises(OrderingError) as err:
        parse_text(text, parse_corpus)
    assert "'a'" in str(err.value) and "'b'" in str(err.value)


def test_malformed_line_reports_line_number():
    text = '{"id": "a", "ts": 1, "text": "x"}\n{"id": "b", "ts": "late"}\n'
    with pytest.raises(CorpusError, match="line 2"):
        parse_text(text, parse_corpus)


def test_duplicate_id_rejected():
    text = '{"id": "a", "ts": 1, "text": "x"}\n{"id": "a", "ts": 2, "text": "y"}\n'
    with pytest.raises(CorpusError, match="duplicate"):
        parse_text(text, parse_corpus)


def test_urls_scanned_from_text():
    line = {"id": "1", "ts": 5, "text": "see #royalvisitusa http://t.co/x", "urls": ["http://a.b/c"]}
    (post,) = parse_text(json.dumps(line), parse_corpus)
    assert post.urls == ("http://a.b/c", "http://t.co/x")
    assert post.has_url


def test_bytes_input():
    posts = parse_corpus(io.BytesIO(b'{"id": "1", "ts": 1, "text": "caf\xc3\xa9"}\n'))
    assert posts[0].text == "café"


def test_qrels_single_and_unjudged():
    j = parse_text("MB01 0 42 1\n", parse_qrels)
    assert j.lookup("MB01", "42") == 1
    assert j.is_relevant("MB01", "42")
    assert j.lookup("MB01", "43") is UNJUDGED
    assert not j.is_relevant("MB01", "43")


def test_qrels_duplicate_last_wins(caplog):
    with caplog.at_level(logging.WARNING, logger="elfilter.corpus"):
        j = parse_text("MB01 0 42 0\nMB01 0 42 1\n", parse_qrels)
    assert j.lookup("MB01", "42") == 1
    assert any("duplicate" in r.message for r in caplog.records)


def test_qrels_bad_grade():
    with pytest.raises(CorpusError):
        parse_text("MB01 0 42 yes\n", parse_qrels)


def _topic(i, **extra):
    rec = {"query_id": f"MB{i:03d}", "text": f"topic {i}", "first_relevant_id": str(1000 + i), "start_ts": i}
    rec.update(extra)
    return json.dumps(rec)


def test_topics_keep_file_order():
    ids = list(range(49, 0, -1))
    topics = parse_text("\n".join(_topic(i) for i in ids), parse_topics)
    assert len(topics) == 49
    assert [t.query_id for t in topics] == [f"MB{i:03d}" for i in ids]
    assert topics[0].first_relevant_id == "1049"


def test_topic_without_first_relevant_id():
    rec = json.loads(_topic(1))
    del rec["first_relevant_id"]
    with pytest.raises(CorpusError, match="first_relevant_id"):
        parse_text(json.dumps(rec), parse_topics)


_text = st.text(st.characters(blacklist_categories=("Cs",)), max_size=40).filter(lambda s: "http" not in s)
_posts = st.lists(
    st.tuples(st.integers(0, 10**6), _text, st.lists(_text, max_size=2)),
    max_size=15,
)


@given(_posts)
def test_round_trip(raw):
    raw = sorted(raw, key=lambda t: t[0])
    posts = [Micropost(f"p{i}", ts, text, (), tuple(titles)) for i, (ts, text, titles) in enumerate(raw)]
    buf = io.StringIO()
    write_corpus(posts, buf)
    again = parse_text(buf.getvalue(), parse_corpus)
    assert again == posts
    assert all(a.timestamp <= b.timestamp for a, b in zip(again, again[1:]))
