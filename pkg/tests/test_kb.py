import io
import math

import pytest
from hypothesis import given

from elfilter.kb import KBError, build_kb, iter_tsv, load_kb, save_snapshot, write_tsv
from elfilter.linker import candidates, surface_form_probabilities

from helpers import kb_records


def test_counts_from_records():
    kb = build_kb([("maradona", "eDAM", 72, 100), ("maradona", "eFilm", 8, 100)])
    assert kb.occurrence_count("maradona") == 100
    assert kb.link_count("maradona") == 80


def test_link_probability_and_commonness(fixture_kb):
    assert fixture_kb.link_probability("maradona") == 0.8
    assert fixture_kb.commonness("maradona", "eDAM") == 0.9
    assert fixture_kb.commonness("maradona", "eFilm") == pytest.approx(0.1)
    assert fixture_kb.link_probability("unknown mention") == 0.0
    assert fixture_kb.commonness("maradona", "eNobody") == 0.0


def test_surface_forms(fixture_kb):
    forms = fixture_kb.surface_forms("eDAM")
    assert ("maradona", 0.9) in forms
    assert ("el diego", 1.0) in forms
    kb = build_kb([("maradona", "eDAM", 72, 100), ("el diego", "eDAM", 50, 100)])
    assert len(kb.surface_forms("eDAM")) == 2
    assert kb.surface_forms("eNobody") == set()


def test_empty_kb():
    kb = build_kb([])
    assert len(kb) == 0
    assert kb.summary() == {"mentions": 0, "entities": 0, "pairs": 0}


@pytest.mark.parametrize(
    "records, message",
    [
        ([("m", "a", 80, 100), ("m", "b", 30, 100)], "exceeds"),
        ([("m", "a", 10, 100), ("m", "b", 10, 90)], "inconsistent"),
        ([("m", "a", 10, 100), ("m", "a", 5, 100)], "duplicate"),
        ([("m", "a", 0, 100)], "non-positive"),
        ([("  ", "a", 1, 100)], "empty"),
    ],
)
def test_invalid_records(records, message):
    with pytest.raises(KBError, match=message):
        build_kb(records)


def test_mentions_normalized():
    kb = build_kb([("El  Diego", "eDAM", 5, 10)])
    assert "el diego" in kb


def test_tsv_errors():
    with pytest.raises(KBError, match="line 1"):
        list(iter_tsv(["m\te\t1\n"]))
    with pytest.raises(KBError, match="line 2"):
        list(iter_tsv(["m\te\t1\t2\n", "m\tf\tx\t2\n"]))


def test_snapshot_round_trip(tmp_path, fixture_kb):
    path = tmp_path / "kb.bin"
    save_snapshot(fixture_kb, path)
    again = load_kb(path)
    assert again.records == fixture_kb.records
    buf_a, buf_b = io.StringIO(), io.StringIO()
    write_tsv(fixture_kb, buf_a)
    write_tsv(again, buf_b)
    assert buf_a.getvalue() == buf_b.getvalue()


def test_snapshot_bad_magic(tmp_path):
    path = tmp_path / "bad.bin"
    path.write_bytes(b"ELFKB\x00\x00\x01" + b"\x00" * 40)
    with pytest.raises(KBError):
        load_kb(path)


def test_load_kb_accepts_tsv(tmp_path):
    path = tmp_path / "kb.tsv"
    path.write_text("maradona\teDAM\t72\t100\n", encoding="utf-8")
    assert load_kb(path).link_probability("maradona") == 0.72


@given(kb_records())
def test_probability_invariants(records):
    kb = build_kb(records)
    for m in kb.mentions:
        ents = kb.entities_of(m)
        assert math.isclose(sum(ents.values()), 1.0, abs_tol=1e-9)
        assert 0.0 <= kb.link_probability(m) <= 1.0
        for _, p in candidates(kb, m):
            assert 0.0 <= p <= 1.0
        for _, _, p in surface_form_probabilities(kb, m):
            assert 0.0 <= p <= 1.0
    for e in kb.entities:
        assert {m for m, _ in kb.surface_forms(e)} == {m for m in kb.mentions if kb.commonness(m, e) > 0}
